//! Reference implementations used by the self-test: the explicit order-2
//! formulas written out with index loops, polynomial substitution, and a
//! dual-number pushforward of tangent vectors.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use velojet::formal::JetPolynomial;
use velojet::linalg::Matrix;
use velojet::table::faa_di_bruno;
use velojet::{
    ChartJet, GrassmannPoint, GroupJet, JetError, JetTable, MultiIndex, PolyMap, Polynomial,
    Scalar, Tolerance, Velocity,
};

fn single(i: usize) -> MultiIndex {
    MultiIndex::single(i)
}

fn pair(i: usize, j: usize) -> MultiIndex {
    MultiIndex::pair(i, j)
}

fn sum<S: Scalar>(range: std::ops::Range<usize>, f: impl FnMut(usize) -> S) -> S {
    range.map(f).fold(S::zero(), |a, b| a + b)
}

fn inverse<S: Scalar>(m: &Matrix<S>, what: &str) -> Result<Matrix<S>, JetError> {
    m.inverse()
        .ok_or_else(|| JetError::Singular(what.to_string()))
}

/// `c^k_i = b^p_i a^k_p`, `c^k_ij = b^p_ij a^k_p + b^p_i b^q_j a^k_pq`.
pub fn compose2<S: Scalar>(a: &GroupJet<S>, b: &GroupJet<S>) -> JetTable<S> {
    let n = a.n();
    JetTable::from_fn(n, n, 2, |k, index| match index.entries() {
        [] => S::zero(),
        [i] => sum(0..n, |p| {
            b.coord(p, &single(*i)).clone() * a.coord(k, &single(p)).clone()
        }),
        [i, j] => {
            let first = sum(0..n, |p| {
                b.coord(p, &pair(*i, *j)).clone() * a.coord(k, &single(p)).clone()
            });
            let second = sum(0..n, |p| {
                sum(0..n, |q| {
                    b.coord(p, &single(*i)).clone()
                        * b.coord(q, &single(*j)).clone()
                        * a.coord(k, &pair(p, q)).clone()
                })
            });
            first + second
        }
        _ => unreachable!("order 2"),
    })
}

/// `ȳ^A_i = y^A_s a^s_i`, `ȳ^A_ij = y^A_pq a^p_i a^q_j + y^A_p a^p_ij`.
pub fn act2<S: Scalar>(v: &Velocity<S>, a: &GroupJet<S>) -> JetTable<S> {
    let n = v.n();
    JetTable::from_fn(n, v.target_dim(), 2, |c, index| match index.entries() {
        [] => v.coord(c, index).clone(),
        [i] => sum(0..n, |s| {
            v.coord(c, &single(s)).clone() * a.coord(s, &single(*i)).clone()
        }),
        [i, j] => {
            let quadratic = sum(0..n, |p| {
                sum(0..n, |q| {
                    v.coord(c, &pair(p, q)).clone()
                        * a.coord(p, &single(*i)).clone()
                        * a.coord(q, &single(*j)).clone()
                })
            });
            quadratic
                + sum(0..n, |p| {
                    v.coord(c, &single(p)).clone() * a.coord(p, &pair(*i, *j)).clone()
                })
        }
        _ => unreachable!("order 2"),
    })
}

/// `x = a^{-1}` at order 2: `x^m_i = z^m_i`,
/// `x^m_ij = -z^m_k a^k_pq z^p_i z^q_j` with `z = (a^k_p)^{-1}`.
pub fn inverse2<S: Scalar>(a: &GroupJet<S>) -> Result<JetTable<S>, JetError> {
    let n = a.n();
    let z = inverse(&a.linear_part(), "linear part")?;
    Ok(JetTable::from_fn(n, n, 2, |m, index| {
        match index.entries() {
            [] => S::zero(),
            [i] => z.get(m, *i).clone(),
            [i, j] => -sum(0..n, |k| {
                sum(0..n, |p| {
                    sum(0..n, |q| {
                        z.get(m, k).clone()
                            * a.coord(k, &pair(p, q)).clone()
                            * z.get(p, *i).clone()
                            * z.get(q, *j).clone()
                    })
                })
            }),
            _ => unreachable!("order 2"),
        }
    }))
}

/// Order-2 invariants in the leading chart:
/// `w^σ_i = z^s_i y^σ_s`,
/// `w^σ_ij = z^p_i z^q_j (y^σ_pq - z^k_s y^σ_k y^s_pq)`.
pub fn invariants2<S: Scalar>(v: &Velocity<S>) -> Result<GrassmannPoint<S>, JetError> {
    let n = v.n();
    let rows: Vec<usize> = (0..n).collect();
    let z = inverse(&v.block(&rows), "leading block")?;
    let y = |c: usize, idx: &MultiIndex| v.coord(c, idx).clone();
    let w = JetTable::from_fn(n, v.m(), 2, |sigma, index| {
        let c = n + sigma;
        match index.entries() {
            [] => y(c, index),
            [i] => sum(0..n, |s| z.get(s, *i).clone() * y(c, &single(s))),
            [i, j] => sum(0..n, |p| {
                sum(0..n, |q| {
                    let correction = sum(0..n, |k| {
                        sum(0..n, |s| {
                            z.get(k, s).clone() * y(c, &single(k)) * y(s, &pair(p, q))
                        })
                    });
                    z.get(p, *i).clone() * z.get(q, *j).clone() * (y(c, &pair(p, q)) - correction)
                })
            }),
            _ => unreachable!("order 2"),
        }
    });
    let base = (0..n).map(|k| y(k, &MultiIndex::empty())).collect();
    GrassmannPoint::new(rows, base, w)
}

/// `ȳ^A = F^A`, `ȳ^A_i = F^A_B y^B_i`,
/// `ȳ^A_ij = F^A_BC y^B_i y^C_j + F^A_B y^B_ij`.
pub fn transform2<S: Scalar>(chart: &ChartJet<S>, v: &Velocity<S>) -> JetTable<S> {
    let dim = chart.dim();
    let f = |a: usize, idx: MultiIndex| chart.coeff(a, &idx).clone();
    JetTable::from_fn(v.n(), dim, 2, |a, index| match index.entries() {
        [] => f(a, MultiIndex::empty()),
        [i] => sum(0..dim, |b| {
            f(a, single(b)) * v.coord(b, &single(*i)).clone()
        }),
        [i, j] => {
            let quadratic = sum(0..dim, |b| {
                sum(0..dim, |c| {
                    f(a, pair(b, c))
                        * v.coord(b, &single(*i)).clone()
                        * v.coord(c, &single(*j)).clone()
                })
            });
            quadratic
                + sum(0..dim, |b| {
                    f(a, single(b)) * v.coord(b, &pair(*i, *j)).clone()
                })
        }
        _ => unreachable!("order 2"),
    })
}

/// `P^q_s = ∂F^q/∂y^s + ∂F^q/∂w^ν w^ν_s` in the leading chart.
pub fn p_matrix2<S: Scalar>(chart: &ChartJet<S>, p: &GrassmannPoint<S>) -> Matrix<S> {
    let (n, m) = (p.n(), p.m());
    Matrix::from_fn(n, |q, s| {
        chart.coeff(q, &single(s)).clone()
            + sum(0..m, |nu| {
                chart.coeff(q, &single(n + nu)).clone() * p.w().get(nu, &single(s)).clone()
            })
    })
}

/// The order-2 transition formula between induced Grassmann charts, for the
/// leading chart on both sides:
///
/// `w̄^σ_i = Q^p_i G^σ_p`,
/// `w̄^σ_ij = Q^p_i Q^q_j H^σ_pq - Q^a_i Q^b_j Q^p_k G^σ_p H^k_ab`,
///
/// where `G^A_p = ∂F^A/∂y^p + ∂F^A/∂w^ν w^ν_p` and `H^A_ab` collects the
/// second derivatives of `F^A` along `(y^a, w^ν)` with the `w^λ_ab` term.
/// The index `k` of `Q^p_k` is contracted with the upper index of `H^k_ab`.
pub fn transform_grassmann2<S: Scalar>(
    chart: &ChartJet<S>,
    p: &GrassmannPoint<S>,
) -> Result<GrassmannPoint<S>, JetError> {
    let (n, m) = (p.n(), p.m());
    let f1 = |a: usize, b: usize| chart.coeff(a, &single(b)).clone();
    let f2 = |a: usize, b: usize, c: usize| chart.coeff(a, &pair(b, c)).clone();
    let w1 = |nu: usize, s: usize| p.w().get(nu, &single(s)).clone();
    let w2 = |nu: usize, a: usize, b: usize| p.w().get(nu, &pair(a, b)).clone();
    let g = |a: usize, s: usize| f1(a, s) + sum(0..m, |nu| f1(a, n + nu) * w1(nu, s));
    let h = |c: usize, a: usize, b: usize| {
        f2(c, a, b)
            + sum(0..m, |nu| f2(c, a, n + nu) * w1(nu, b))
            + sum(0..m, |nu| f2(c, n + nu, b) * w1(nu, a))
            + sum(0..m, |mu| {
                sum(0..m, |nu| f2(c, n + mu, n + nu) * w1(mu, a) * w1(nu, b))
            })
            + sum(0..m, |lambda| f1(c, n + lambda) * w2(lambda, a, b))
    };
    let q = p_matrix2(chart, p)
        .inverse()
        .ok_or_else(|| JetError::ChartOverlap("P is singular".into()))?;
    let qm = |i: usize, j: usize| q.get(i, j).clone();
    let w = JetTable::from_fn(n, m, 2, |sigma, index| {
        let c = n + sigma;
        match index.entries() {
            [] => chart.coeff(c, &MultiIndex::empty()).clone(),
            [i] => sum(0..n, |pp| qm(pp, *i) * g(c, pp)),
            [i, j] => {
                let first = sum(0..n, |pp| {
                    sum(0..n, |qq| qm(pp, *i) * qm(qq, *j) * h(c, pp, qq))
                });
                let second = sum(0..n, |a| {
                    sum(0..n, |b| {
                        sum(0..n, |pp| {
                            sum(0..n, |k| {
                                qm(a, *i) * qm(b, *j) * qm(pp, k) * g(c, pp) * h(k, a, b)
                            })
                        })
                    })
                });
                first - second
            }
            _ => unreachable!("order 2"),
        }
    });
    let base = (0..n)
        .map(|k| chart.coeff(k, &MultiIndex::empty()).clone())
        .collect();
    GrassmannPoint::new((0..n).collect(), base, w)
}

/// `m·C(n+r, n) + n`, computed in `u128`.
pub fn grassmann_dim(n: usize, m: usize, r: usize) -> u128 {
    let mut binom: u128 = 1;
    for k in 1..=n as u128 {
        binom = binom * (r as u128 + k) / k;
    }
    m as u128 * binom + n as u128
}

/// `D_J γ^A` as a polynomial in `t`.
pub fn derivative_poly<S: Scalar>(p: &Polynomial<S>, index: &MultiIndex) -> Polynomial<S> {
    index
        .entries()
        .iter()
        .fold(p.clone(), |acc, &i| acc.derivative(i))
}

/// `t ↦ f(j^r γ(t))` as a polynomial, substituting `D_J γ^A` for `y^A_J`.
pub fn along_prolongation<S: Scalar>(f: &JetPolynomial<S>, gamma: &PolyMap<S>) -> Polynomial<S> {
    let vars = gamma.vars();
    let mut out = Polynomial::zero(vars);
    for (monomial, coeff) in f.terms() {
        let mut term = Polynomial::constant(vars, coeff.clone());
        for (var, exp) in monomial.factors() {
            let d = derivative_poly(&gamma.components()[var.component], &var.index);
            term = term.mul(&d.pow(*exp));
        }
        out = out.add(&term);
    }
    out
}

/// `τ^s y^A_I` for `|I| = s`, by repeated multiplication.
pub fn scaled_coordinate<S: Scalar>(value: &S, tau: &S, order: usize) -> S {
    (0..order).fold(value.clone(), |acc, _| acc * tau.clone())
}

/// `a + b ε` with `ε² = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(re: S, eps: S) -> Self {
        Dual { re, eps }
    }
}

impl<S: Scalar> fmt::Display for Dual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.re, self.eps)
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let eps = self.re.clone() * o.eps + self.eps * o.re.clone();
        Dual::new(self.re * o.re, eps)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let denom = o.re.clone() * o.re.clone();
        let eps = (self.eps * o.re.clone() - self.re.clone() * o.eps) / denom;
        Dual::new(self.re / o.re, eps)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    const EXACT: bool = S::EXACT;

    fn zero() -> Self {
        Dual::new(S::zero(), S::zero())
    }

    fn one() -> Self {
        Dual::new(S::one(), S::zero())
    }

    fn from_i64(value: i64) -> Self {
        Dual::new(S::from_i64(value), S::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Dual::new(S::from_ratio(num, den), S::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.re.magnitude()
    }

    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.re.approx_eq(&other.re, tol) && self.eps.approx_eq(&other.eps, tol)
    }

    fn is_negligible(&self, scale: f64, tol: Tolerance) -> bool {
        self.re.is_negligible(scale, tol) && self.eps.is_negligible(scale, tol)
    }
}

/// Image of the tangent vector `x` at `u` under `u ↦ F∘u` on jets of order
/// `u.order()`. `F` must have order at least `u.order() + 1` because the
/// base point moves along `x`.
pub fn pushforward<S: Scalar>(
    chart: &ChartJet<S>,
    u: &Velocity<S>,
    x: &JetTable<S>,
) -> Result<JetTable<S>, JetError> {
    let order = u.order();
    if chart.order() < order + 1 {
        return Err(JetError::OrderMismatch(
            "chart jet too short for the pushforward".into(),
        ));
    }
    let dim = chart.dim();
    let shift: Vec<S> = (0..dim)
        .map(|c| x.get(c, &MultiIndex::empty()).clone())
        .collect();
    let outer = JetTable::from_fn(dim, dim, order, |a, index| {
        let moved = sum(0..dim, |c| {
            chart.coeff(a, &index.with(c)).clone() * shift[c].clone()
        });
        Dual::new(chart.coeff(a, index).clone(), moved)
    });
    let inner = JetTable::from_fn(u.n(), dim, order, |a, index| {
        Dual::new(u.coord(a, index).clone(), x.get(a, index).clone())
    });
    let image = faa_di_bruno(&outer, &inner)?;
    Ok(JetTable::from_fn(
        image.vars(),
        image.comps(),
        order,
        |c, index| image.get(c, index).eps.clone(),
    ))
}
