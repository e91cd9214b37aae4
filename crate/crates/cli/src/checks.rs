//! The acceptance suite: each check samples seeded data, compares the
//! library against an oracle or an identity, and reports one line.

use std::fmt;
use std::time::{Duration, Instant};

use velojet::formal::{delta_tangent, formal_tangent};
use velojet::table::faa_di_bruno;
use velojet::{
    d_formal, extract, extract_normalize, extract_recurrence, nonextendability_demo, orbit_equal,
    pq_matrices, prolong, transform_grassmann, transform_velocity, GrassmannPoint, GroupJet,
    JetError, JetTable, MultiIndex, PolyMap, Polynomial, Rational, Scalar, Tolerance, Velocity,
};

use crate::doc::JetDocument;
use crate::oracle;
use crate::random::Sampler;

const EXACT: Tolerance = Tolerance(0.0);

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
    /// First failure, or extra lines for reports that print a table.
    pub detail: Vec<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] {:>2} {} ({} cases, {:.2}s",
            self.id,
            self.name,
            self.cases,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(limit) = self.limit {
            write!(f, ", limit {}s", limit.as_secs())?;
        }
        write!(f, ")")?;
        for line in &self.detail {
            write!(f, "\n       {line}")?;
        }
        Ok(())
    }
}

type Outcome = Result<usize, String>;

fn run(
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce() -> Outcome,
) -> CheckReport {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (mut passed, cases, mut detail) = match outcome {
        Ok(cases) => (true, cases, Vec::new()),
        Err(msg) => (false, 0, vec![msg]),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail.push(format!(
                "runtime {:.2}s exceeds {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            ));
        }
    }
    CheckReport {
        id,
        name,
        passed,
        cases,
        elapsed,
        limit,
        detail,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T, JetError>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn check_dim(p: &GrassmannPoint<Rational>) -> Result<(), String> {
    let expected = oracle::grassmann_dim(p.n(), p.m(), p.order());
    let doc = JetDocument::from_grassmann(p);
    ensure(
        p.coordinate_count() as u128 == expected
            && p.coordinates().len() as u128 == expected
            && doc.coords.len() as u128 == expected,
        || {
            format!(
                "(n={}, m={}, r={}) point has {} coordinates, expected {expected}",
                p.n(),
                p.m(),
                p.order(),
                p.coordinates().len()
            )
        },
    )
}

pub fn multiplication(seed: u64) -> CheckReport {
    run(
        1,
        "order-2 multiplication matches the closed form",
        Some(Duration::from_secs(5)),
        || {
            let mut s = Sampler::new(seed);
            for case in 0..200 {
                let n = s.range(1, 3);
                let a = s.group::<Rational>(n, 2);
                let b = s.group::<Rational>(n, 2);
                let c = lib(a.compose(&b), "compose")?;
                ensure(c.table() == &oracle::compose2(&a, &b), || {
                    format!("case {case}: n={n} product differs")
                })?;
                let inv = lib(a.inverse(), "inverse")?;
                ensure(inv.table() == &lib(oracle::inverse2(&a), "oracle")?, || {
                    format!("case {case}: n={n} inverse differs")
                })?;
            }
            Ok(200)
        },
    )
}

pub fn action(seed: u64) -> CheckReport {
    run(2, "order-2 action matches the closed form", None, || {
        let mut s = Sampler::new(seed);
        for case in 0..200 {
            let (n, m) = (s.range(1, 3), s.range(1, 2));
            let v = s.velocity::<Rational>(n, m, 2);
            let g = s.group::<Rational>(n, 2);
            let moved = lib(v.act(&g), "act")?;
            ensure(moved.table() == &oracle::act2(&v, &g), || {
                format!("case {case}: n={n} m={m} differs")
            })?;
        }
        Ok(200)
    })
}

pub fn invariants(seed: u64) -> CheckReport {
    run(
        3,
        "order-2 invariants match the closed form, both algorithms",
        None,
        || {
            let mut s = Sampler::new(seed);
            for case in 0..200 {
                let (n, m) = (s.range(1, 3), s.range(1, 2));
                let nu: Vec<usize> = (0..n).collect();
                let v = s.velocity_in::<Rational>(n, m, 2, &nu);
                let expected = lib(oracle::invariants2(&v), "oracle")?;
                let by_recurrence = lib(extract_recurrence(&v, &nu), "recurrence")?;
                let by_normalizing = lib(extract_normalize(&v, &nu, EXACT), "normalization")?;
                ensure(by_recurrence == expected, || {
                    format!("case {case}: recurrence differs")
                })?;
                ensure(by_normalizing == expected, || {
                    format!("case {case}: normalization differs")
                })?;
                check_dim(&expected)?;
            }
            Ok(200)
        },
    )
}

pub fn group_axioms(seed: u64) -> CheckReport {
    run(
        4,
        "group axioms for n <= 3, r <= 4",
        Some(Duration::from_secs(30)),
        || {
            let mut s = Sampler::new(seed);
            for case in 0..100 {
                let (n, r) = (s.range(1, 3), s.range(1, 4));
                let [a, b, c] = [s.group::<Rational>(n, r), s.group(n, r), s.group(n, r)];
                let id = GroupJet::identity(n, r);
                let left = lib(lib(a.compose(&b), "compose")?.compose(&c), "compose")?;
                let right = lib(a.compose(&lib(b.compose(&c), "compose")?), "compose")?;
                ensure(left == right, || {
                    format!("case {case}: associativity fails (n={n}, r={r})")
                })?;
                ensure(
                    lib(a.compose(&id), "compose")? == a && lib(id.compose(&a), "compose")? == a,
                    || format!("case {case}: identity fails (n={n}, r={r})"),
                )?;
                let inv = lib(a.inverse(), "inverse")?;
                ensure(
                    lib(a.compose(&inv), "compose")? == id
                        && lib(inv.compose(&a), "compose")? == id,
                    || format!("case {case}: inverse fails (n={n}, r={r})"),
                )?;
            }
            Ok(100)
        },
    )
}

fn curve(power: u32) -> Result<Velocity<Rational>, String> {
    let t = Polynomial::var(1, 0);
    let gamma = lib(PolyMap::new(1, vec![t.clone(), t.pow(power)]), "curve")?;
    lib(prolong(&gamma, &[Rational::zero()], 2), "prolong")
}

pub fn invariance(seed: u64) -> CheckReport {
    run(
        5,
        "invariance, orbit test and transporter recovery",
        None,
        || {
            let mut s = Sampler::new(seed);
            for case in 0..100 {
                let (n, m, r) = (s.range(1, 2), s.range(1, 2), s.range(1, 3));
                let v = s.velocity::<Rational>(n, m, r);
                let g = s.group::<Rational>(n, r);
                let moved = lib(v.act(&g), "act")?;
                let p = lib(extract(&v, EXACT), "extract")?;
                ensure(lib(extract(&moved, EXACT), "extract")? == p, || {
                    format!("case {case}: invariants moved")
                })?;
                check_dim(&p)?;
                let verdict = lib(orbit_equal(&v, &moved, EXACT), "orbit test")?;
                ensure(verdict.equal, || {
                    format!("case {case}: orbit test says different")
                })?;
                ensure(verdict.transporter.as_ref() == Some(&g), || {
                    format!("case {case}: transporter differs")
                })?;
            }
            let (square, cube) = (curve(2)?, curve(3)?);
            let verdict = lib(orbit_equal(&square, &cube, EXACT), "orbit test")?;
            ensure(!verdict.equal, || "(t,t²) and (t,t³) reported equal".into())?;
            let w = |v: &Velocity<Rational>| -> Result<Rational, String> {
                Ok(lib(extract_recurrence(v, &[0]), "extract")?
                    .w()
                    .get(0, &MultiIndex::pair(0, 0))
                    .clone())
            };
            ensure(
                w(&square)? == Rational::from_i64(2) && w(&cube)?.is_zero(),
                || "second-order invariants of the curves are not 2 and 0".into(),
            )?;
            Ok(101)
        },
    )
}

pub fn dimension(seed: u64) -> CheckReport {
    run(6, "Grassmann coordinate count m·C(n+r,n)+n", None, || {
        let mut s = Sampler::new(seed);
        let mut cases = 0;
        for n in 1..=3 {
            for m in 1..=3 {
                for r in 1..=4 {
                    let v = s.velocity::<Rational>(n, m, r);
                    let p = lib(extract(&v, EXACT), "extract")?;
                    check_dim(&p)?;
                    check_dim(&lib(extract_normalize(&v, p.nu(), EXACT), "normalization")?)?;
                    ensure(
                        velojet::grassmann_dim(n, m, r) as u128 == oracle::grassmann_dim(n, m, r),
                        || format!("library count differs at (n={n}, m={m}, r={r})"),
                    )?;
                    if r <= 3 {
                        let chart = s.chart(v.base(), r);
                        match transform_grassmann(&chart, &p, None, EXACT) {
                            Ok(image) => check_dim(&image)?,
                            Err(JetError::ChartOverlap(_)) => {}
                            Err(e) => return Err(format!("transform: {e}")),
                        }
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    })
}

pub fn formal_derivative(seed: u64) -> CheckReport {
    run(
        7,
        "formal derivative is the total derivative along prolongations",
        None,
        || {
            let mut s = Sampler::new(seed);
            let mut cases = 0;
            for map_case in 0..20 {
                let (n, m) = (s.range(1, 2), s.range(1, 2));
                let gamma = s.polymap::<Rational>(n, n + m, 3);
                for _ in 0..20 {
                    let r = s.range(1, 3);
                    let f = s.jet_polynomial::<Rational>(n, n + m, r - 1);
                    let along = oracle::along_prolongation(&f, &gamma);
                    for _ in 0..5 {
                        let t = s.point::<Rational>(n);
                        let low = lib(prolong(&gamma, &t, r - 1), "prolong")?;
                        let high = lib(prolong(&gamma, &t, r), "prolong")?;
                        ensure(lib(f.evaluate(&low), "evaluate")? == along.eval(&t), || {
                            format!("map {map_case}: substitution disagrees with evaluation")
                        })?;
                        for i in 0..n {
                            let df = lib(d_formal(&f, i, r), "d")?;
                            let lhs = lib(df.evaluate(&high), "evaluate")?;
                            ensure(lhs == along.derivative(i).eval(&t), || {
                                format!("map {map_case}: d_{} differs at r={r}", i + 1)
                            })?;
                            cases += 1;
                        }
                    }
                }
            }
            Ok(cases)
        },
    )
}

pub fn chain_rule(seed: u64) -> CheckReport {
    run(
        8,
        "partition sum matches polynomial composition through order 4",
        None,
        || {
            let mut s = Sampler::new(seed);
            for case in 0..50 {
                let (k, p, q) = (s.range(1, 2), s.range(1, 3), s.range(1, 2));
                let inner = s.polymap::<Rational>(k, p, 3);
                let outer = s.polymap::<Rational>(p, q, 3);
                let t = s.point::<Rational>(k);
                let kernel = lib(
                    faa_di_bruno(
                        &lib(outer.jet_at(&inner.eval(&t), 4), "jet")?,
                        &lib(inner.jet_at(&t, 4), "jet")?,
                    ),
                    "kernel",
                )?;
                let direct = lib(lib(outer.compose(&inner), "compose")?.jet_at(&t, 4), "jet")?;
                ensure(kernel == direct, || {
                    format!("case {case}: R^{k} → R^{p} → R^{q} differs")
                })?;
            }
            Ok(50)
        },
    )
}

pub fn chart_coherence(seed: u64) -> CheckReport {
    run(
        9,
        "order-2 chart changes match the closed forms",
        None,
        || {
            let mut s = Sampler::new(seed);
            let mut cases = 0;
            let mut attempts = 0;
            while cases < 50 {
                attempts += 1;
                if attempts > 500 {
                    return Err(format!("only {cases} usable samples in 500 attempts"));
                }
                let (n, m) = (s.range(1, 2), s.range(1, 2));
                let base = s.point::<Rational>(n + m);
                let chart = s.chart(base.clone(), 2);
                let v = s.velocity_at::<Rational>(n, m, 2, &base);
                let nu: Vec<usize> = (0..n).collect();
                let image = lib(transform_velocity(&chart, &v, EXACT), "transform")?;
                ensure(image.table() == &oracle::transform2(&chart, &v), || {
                    format!("sample {attempts}: velocity transform differs")
                })?;
                let p = lib(extract_recurrence(&v, &nu), "extract")?;
                let Ok(expected) = oracle::transform_grassmann2(&chart, &p) else {
                    continue;
                };
                let moved = lib(
                    transform_grassmann(&chart, &p, None, EXACT),
                    "transform_grassmann",
                )?;
                ensure(moved == expected, || {
                    format!("sample {attempts}: Grassmann transform differs")
                })?;
                let direct = lib(extract_recurrence(&image, &nu), "extract")?;
                ensure(direct == moved, || {
                    format!("sample {attempts}: extract∘transform ≠ transform∘extract")
                })?;
                let pq = lib(pq_matrices(&chart, &p), "pq")?;
                ensure(pq.p == oracle::p_matrix2(&chart, &p), || {
                    format!("sample {attempts}: P differs")
                })?;
                check_dim(&moved)?;
                cases += 1;
            }
            Ok(cases)
        },
    )
}

/// The fixed velocity of the dilation report: n=2, m=1, r=3.
pub fn dilation_fixture() -> Velocity<Rational> {
    Velocity::from_fn(2, 1, 3, |a, index| {
        let i = index.entries();
        match i.len() {
            0 => Rational::from_i64(a as i64 - 1),
            1 => Rational::from_i64([[2, 1], [1, 3], [4, -1]][a][i[0]]),
            _ => Rational::from_ratio(
                (a + 1) as i64 * (i[0] as i64 - 2 * i[i.len() - 1] as i64 + 1),
                i.len() as i64,
            ),
        }
    })
}

pub fn nonextendability() -> CheckReport {
    run(
        10,
        "dilations: constant invariants, τ^s scaling, degenerate limit",
        None,
        || {
            let v = dilation_fixture();
            let taus: Vec<Rational> = [(1, 1), (1, 2), (1, 4), (1, 8), (0, 1)]
                .iter()
                .map(|&(a, b)| Rational::from_ratio(a, b))
                .collect();
            let samples = lib(nonextendability_demo(&v, &taus, EXACT), "demo")?;
            let reference = samples[0].point.clone().ok_or("τ=1 is not regular")?;
            let det = v.block(&[0, 1]).det();
            for sample in &samples {
                let tau = &sample.tau;
                let scaled = v.scale(tau);
                for (c, index, value) in scaled.table().entries() {
                    let expected =
                        oracle::scaled_coordinate(v.coord(c, &index), tau, index.order());
                    ensure(value == &expected, || {
                        format!(
                            "τ={tau}: y{}_{index} not scaled by τ^{}",
                            c + 1,
                            index.order()
                        )
                    })?;
                }
                ensure(
                    sample.det_margin == tau.clone() * tau.clone() * det.clone(),
                    || format!("τ={tau}: det margin"),
                )?;
                if tau.is_zero() {
                    ensure(!sample.regular && sample.point.is_none(), || {
                        "τ=0 reported regular".into()
                    })?;
                    ensure(extract(&scaled, EXACT) == Err(JetError::NotRegular), || {
                        "τ=0 extracted".into()
                    })?;
                } else {
                    ensure(sample.point.as_ref() == Some(&reference), || {
                        format!("τ={tau}: invariants changed")
                    })?;
                    check_dim(&reference)?;
                }
            }
            Ok(samples.len())
        },
    )
}

/// Text table of the dilation demonstration.
pub fn nonextendability_table() -> Result<Vec<String>, JetError> {
    let v = dilation_fixture();
    let taus: Vec<Rational> = [(1, 1), (1, 2), (1, 4), (1, 8), (0, 1)]
        .iter()
        .map(|&(a, b)| Rational::from_ratio(a, b))
        .collect();
    let samples = nonextendability_demo(&v, &taus, EXACT)?;
    Ok(samples
        .iter()
        .map(|s| {
            let top: Vec<String> = v
                .scale(&s.tau)
                .table()
                .entries()
                .filter(|(_, i, _)| i.order() == 3)
                .take(3)
                .map(|(_, _, x)| x.to_string())
                .collect();
            let w = match &s.point {
                Some(p) => p
                    .coordinates()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                None => "not regular".into(),
            };
            format!(
                "τ={:<4} det={:<8} order-3 head=[{}] invariants=[{}]",
                s.tau,
                s.det_margin,
                top.join(" "),
                w
            )
        })
        .collect())
}

pub fn delta_covariance(seed: u64) -> CheckReport {
    run(
        11,
        "Δ fields transform with z̄·y under chart changes",
        None,
        || {
            let mut s = Sampler::new(seed);
            let mut cases = 0;
            for point in 0..20 {
                let (n, m, r) = (s.range(1, 2), s.range(1, 2), s.range(1, 3));
                let base = s.point::<Rational>(n + m);
                let v = s.velocity_at::<Rational>(n, m, r, &base);
                let rows: Vec<usize> = (0..n).collect();
                let y = v.block(&rows);
                let u = lib(v.truncate(r - 1), "truncate")?;
                let mut charts = 0;
                let mut attempts = 0;
                while charts < 20 {
                    attempts += 1;
                    if attempts > 200 {
                        return Err(format!(
                            "point {point}: too few charts keep the leading block regular"
                        ));
                    }
                    let chart = s.chart(base.clone(), r);
                    let vbar = lib(transform_velocity(&chart, &v, EXACT), "transform")?;
                    let Some(zbar) = vbar.block(&rows).inverse() else {
                        continue;
                    };
                    let mut pushed = Vec::with_capacity(n);
                    for q in 0..n {
                        let x = lib(delta_tangent(&v, q), "Δ")?;
                        pushed.push(lib(oracle::pushforward(&chart, &u, &x), "pushforward")?);
                        let d = lib(formal_tangent(&v, q), "d")?;
                        ensure(
                            lib(oracle::pushforward(&chart, &u, &d), "pushforward")?
                                == lib(formal_tangent(&vbar, q), "d")?,
                            || format!("point {point}: d_{} is not chart independent", q + 1),
                        )?;
                    }
                    for i in 0..n {
                        let expected = lib(delta_tangent(&vbar, i), "Δ")?;
                        let combined = JetTable::from_fn(n, n + m, r - 1, |a, index| {
                            let mut acc = Rational::zero();
                            for (q, push) in pushed.iter().enumerate() {
                                for sidx in 0..n {
                                    acc += zbar.get(sidx, i).clone()
                                        * y.get(q, sidx).clone()
                                        * push.get(a, index).clone();
                                }
                            }
                            acc
                        });
                        ensure(combined == expected, || {
                            format!("point {point}: Δ̄_{} differs (n={n}, r={r})", i + 1)
                        })?;
                    }
                    charts += 1;
                    cases += 1;
                }
            }
            Ok(cases)
        },
    )
}

/// All criteria in order.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        multiplication(seed),
        action(seed.wrapping_add(1)),
        invariants(seed.wrapping_add(2)),
        group_axioms(seed.wrapping_add(3)),
        invariance(seed.wrapping_add(4)),
        dimension(seed.wrapping_add(5)),
        formal_derivative(seed.wrapping_add(6)),
        chain_rule(seed.wrapping_add(7)),
        chart_coherence(seed.wrapping_add(8)),
        nonextendability(),
        delta_covariance(seed.wrapping_add(10)),
    ]
}
