//! The complete invariant system `(y^i, w^σ_I)` of regular velocities,
//! transporters between velocities of one orbit, and the orbit test.
//!
//! A general chart selection `ν` is reduced to `ν = (1..n)` by permuting the
//! target components so that `ν` comes first.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::float::FloatCore;

use crate::error::{JetError, Result};
use crate::index::{grassmann_dim, MultiIndex};
use crate::jet::{
    block_is_regular, chart_permutation, check_selection, is_regular, GroupJet, Velocity,
};
use crate::scalar::{Scalar, Tolerance};
use crate::table::{solve_inner, solve_outer, JetTable};

/// Coordinates of an orbit in the Grassmann chart `W^ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannPoint<S> {
    n: usize,
    m: usize,
    r: usize,
    nu: Vec<usize>,
    base: Vec<S>,
    w: JetTable<S>,
}

impl<S: Scalar> GrassmannPoint<S> {
    /// `base[k] = y^{ν_k}`; `w` has `n` variables and `m` components, with
    /// order-0 entries equal to the remaining target coordinates.
    pub fn new(nu: Vec<usize>, base: Vec<S>, w: JetTable<S>) -> Result<Self> {
        let n = w.vars();
        let m = w.comps();
        check_selection(&nu, n, n + m)?;
        if base.len() != n {
            return Err(JetError::DimensionMismatch(format!(
                "base has {} entries, expected {n}",
                base.len()
            )));
        }
        Ok(GrassmannPoint {
            n,
            m,
            r: w.order(),
            nu,
            base,
            w,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn nu(&self) -> &[usize] {
        &self.nu
    }

    pub fn base(&self) -> &[S] {
        &self.base
    }

    pub fn w(&self) -> &JetTable<S> {
        &self.w
    }

    /// `m·C(n+r, n) + n`.
    pub fn coordinate_count(&self) -> usize {
        grassmann_dim(self.n, self.m, self.r)
    }

    /// Base coordinates followed by the `w` table, component-major.
    pub fn coordinates(&self) -> Vec<S> {
        self.base.iter().chain(self.w.values()).cloned().collect()
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.nu == other.nu
            && self.base.len() == other.base.len()
            && self
                .base
                .iter()
                .zip(&other.base)
                .all(|(a, b)| a.approx_eq(b, tol))
            && self.w.approx_eq(&other.w, tol)
    }

    /// The normalized representative: `y^{ν_k}_j = δ^k_j`, `y^{ν_k}_P = 0`
    /// for `|P| >= 2`, and the other components equal to `w`.
    pub fn lift(&self) -> Velocity<S> {
        let perm = chart_permutation(&self.nu, self.n + self.m);
        let mut slot = alloc::vec![0usize; self.n + self.m];
        for (pos, &a) in perm.iter().enumerate() {
            slot[a] = pos;
        }
        Velocity::from_fn(self.n, self.m, self.r, |a, index| {
            let pos = slot[a];
            if pos >= self.n {
                return self.w.get(pos - self.n, index).clone();
            }
            match index.entries() {
                [] => self.base[pos].clone(),
                [j] if *j == pos => S::one(),
                _ => S::zero(),
            }
        })
    }
}

fn split_chart<S: Scalar>(v: &Velocity<S>, nu: &[usize]) -> Result<(JetTable<S>, JetTable<S>)> {
    let total = v.target_dim();
    check_selection(nu, v.n(), total)?;
    let perm = chart_permutation(nu, total);
    let table = v.table();
    Ok((
        table.select_components(&perm[..v.n()]),
        table.select_components(&perm[v.n()..]),
    ))
}

/// Invariants in the chart `ν` by the triangular recurrence: at each order
/// the top-order `w` is isolated and inverted with `z`.
pub fn extract_recurrence<S: Scalar>(v: &Velocity<S>, nu: &[usize]) -> Result<GrassmannPoint<S>> {
    let (inner, target) = split_chart(v, nu)?;
    let w = solve_outer(&inner, &target).map_err(|e| match e {
        JetError::Singular(_) => JetError::Singular(format!("ν-block {nu:?} of the velocity")),
        other => other,
    })?;
    let base = (0..v.n())
        .map(|k| inner.get(k, &MultiIndex::empty()).clone())
        .collect();
    GrassmannPoint::new(nu.to_vec(), base, w)
}

/// Invariants in the chart `ν` by normalization: with `α` read off the
/// `ν` rows, `v ∘ α^{-1}` has the normalized `ν` rows and its other
/// components are the `w`.
pub fn extract_normalize<S: Scalar>(
    v: &Velocity<S>,
    nu: &[usize],
    tol: Tolerance,
) -> Result<GrassmannPoint<S>> {
    let (inner, _) = split_chart(v, nu)?;
    let alpha = GroupJet::from_fn(v.n(), v.order(), |k, index| inner.get(k, index).clone())
        .map_err(|_| JetError::Singular(format!("ν-block {nu:?} of the velocity")))?;
    let inv = alpha.inverse()?;
    let u = v.act(&inv)?;
    let (head, tail) = split_chart(&u, nu)?;

    let magnitude = |t: &JetTable<S>| t.values().iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let scale = (1.0 + magnitude(v.table()))
        * FloatCore::powi(1.0 + magnitude(inv.table()), v.order() as i32);
    for (k, index, value) in head.entries() {
        let expected = match index.entries() {
            [] => inner.get(k, &index).clone(),
            [j] if *j == k => S::one(),
            _ => S::zero(),
        };
        if !(value.clone() - expected).is_negligible(scale, tol) {
            return Err(JetError::Internal(format!(
                "normalized ν-row {} at {} is {value}",
                k + 1,
                index
            )));
        }
    }
    let base = (0..v.n())
        .map(|k| inner.get(k, &MultiIndex::empty()).clone())
        .collect();
    GrassmannPoint::new(nu.to_vec(), base, tail)
}

/// Invariants in the chart chosen by [`is_regular`].
pub fn extract<S: Scalar>(v: &Velocity<S>, tol: Tolerance) -> Result<GrassmannPoint<S>> {
    let cert = is_regular(v, tol).ok_or(JetError::NotRegular)?;
    extract_recurrence(v, &cert.nu)
}

/// The group element `g` with `v2 = v1 ∘ g`, solved from the `ν` rows and
/// then checked on every component. `None` if no such `g` exists.
pub fn solve_transporter<S: Scalar>(
    v1: &Velocity<S>,
    v2: &Velocity<S>,
    nu: &[usize],
    tol: Tolerance,
) -> Result<Option<GroupJet<S>>> {
    if v1.n() != v2.n() || v1.m() != v2.m() || v1.order() != v2.order() {
        return Err(JetError::DimensionMismatch(format!(
            "velocities of shape (n={}, m={}, r={}) and (n={}, m={}, r={})",
            v1.n(),
            v1.m(),
            v1.order(),
            v2.n(),
            v2.m(),
            v2.order()
        )));
    }
    let (outer, _) = split_chart(v1, nu)?;
    let (target, _) = split_chart(v2, nu)?;
    let x = solve_inner(&outer, &target).map_err(|e| match e {
        JetError::Singular(_) => {
            JetError::Singular(format!("ν-block {nu:?} of the first velocity"))
        }
        other => other,
    })?;
    let Ok(g) = GroupJet::new(x) else {
        return Ok(None);
    };
    let image = v1.act(&g)?;
    Ok(image.approx_eq(v2, tol).then_some(g))
}

/// Outcome of [`orbit_equal`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitVerdict<S> {
    pub equal: bool,
    /// Chart in which both velocities were compared.
    pub nu: Option<Vec<usize>>,
    /// `g` with `v2 = v1 ∘ g` when `equal`.
    pub transporter: Option<GroupJet<S>>,
    pub note: Option<String>,
}

/// Decides whether `v1` and `v2` lie in one orbit, both by solving for a
/// transporter and by comparing invariants in a common chart. The two
/// criteria are required to agree.
///
/// The chart is the one certified for `v1`. Regularity in a fixed `ν` is
/// preserved by the action, so if `v2` is singular there the answer is
/// `false`.
pub fn orbit_equal<S: Scalar>(
    v1: &Velocity<S>,
    v2: &Velocity<S>,
    tol: Tolerance,
) -> Result<OrbitVerdict<S>> {
    if v1.n() != v2.n() || v1.m() != v2.m() || v1.order() != v2.order() {
        return Err(JetError::DimensionMismatch(format!(
            "velocities of shape (n={}, m={}, r={}) and (n={}, m={}, r={})",
            v1.n(),
            v1.m(),
            v1.order(),
            v2.n(),
            v2.m(),
            v2.order()
        )));
    }
    let cert = is_regular(v1, tol).ok_or(JetError::NotRegular)?;
    if is_regular(v2, tol).is_none() {
        return Err(JetError::NotRegular);
    }
    let nu = cert.nu;
    let det2 = v2.block(&nu).det();
    if !block_is_regular(v2, &det2, tol) {
        return Ok(OrbitVerdict {
            equal: false,
            nu: None,
            transporter: None,
            note: Some(format!(
                "second velocity is not regular in the chart {nu:?} of the first"
            )),
        });
    }
    let transporter = solve_transporter(v1, v2, &nu, tol)?;
    let p1 = extract_recurrence(v1, &nu)?;
    let p2 = extract_recurrence(v2, &nu)?;
    let same_point = p1.approx_eq(&p2, tol);
    let found = transporter.is_some();
    if found != same_point {
        if S::EXACT {
            return Err(JetError::Internal(format!(
                "transporter search ({found}) and invariant comparison ({same_point}) disagree"
            )));
        }
        return Ok(OrbitVerdict {
            equal: false,
            nu: Some(nu),
            transporter,
            note: Some(format!(
                "transporter search ({found}) and invariant comparison ({same_point}) disagree \
                 at this tolerance"
            )),
        });
    }
    Ok(OrbitVerdict {
        equal: found,
        nu: Some(nu),
        transporter,
        note: None,
    })
}

/// One sample of [`nonextendability_demo`].
#[derive(Debug, Clone, PartialEq)]
pub struct DemoSample<S> {
    pub tau: S,
    /// `det` of the `ν`-block of the scaled jet, `τ^n det(y^{ν_k}_j)`.
    pub det_margin: S,
    pub regular: bool,
    /// Invariants of the scaled jet; `None` once it leaves the chart.
    pub point: Option<GrassmannPoint<S>>,
}

/// Follows `v` along the dilations `τ ↦ v ∘ β_τ` in the chart of `v`. The
/// invariants stay fixed for `τ ≠ 0` while the jets tend to the degenerate
/// jet `(y^A, 0, …, 0)`.
pub fn nonextendability_demo<S: Scalar>(
    v: &Velocity<S>,
    taus: &[S],
    tol: Tolerance,
) -> Result<Vec<DemoSample<S>>> {
    let cert = is_regular(v, tol).ok_or(JetError::NotRegular)?;
    taus.iter()
        .map(|tau| {
            let scaled = v.scale(tau);
            let det_margin = scaled.block(&cert.nu).det();
            let regular = !tau.is_zero() && block_is_regular(&scaled, &det_margin, tol);
            let point = if regular {
                Some(extract_recurrence(&scaled, &cert.nu)?)
            } else {
                None
            };
            Ok(DemoSample {
                tau: tau.clone(),
                det_margin,
                regular,
                point,
            })
        })
        .collect()
}
