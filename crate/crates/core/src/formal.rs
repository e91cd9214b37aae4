//! Polynomials in jet coordinates, the formal derivatives `d_i`, and the
//! normalized operators `Δ_i = z^s_i d_s`.
//!
//! `d_i` acts symbolically on [`JetPolynomial`]s. The `z` factors of `Δ_i`
//! are rational functions of the coordinates, so `Δ_i` is evaluated at a
//! point.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{JetError, Result};
use crate::index::MultiIndex;
use crate::invariants::extract_recurrence;
use crate::jet::Velocity;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::table::JetTable;

/// The coordinate function `y^A_I` (0-based component).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVariable {
    pub component: usize,
    pub index: MultiIndex,
}

impl JetVariable {
    pub fn new(component: usize, index: MultiIndex) -> Self {
        JetVariable { component, index }
    }

    pub fn base(component: usize) -> Self {
        Self::new(component, MultiIndex::empty())
    }
}

impl fmt::Display for JetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}", self.component + 1)?;
        if !self.index.is_empty() {
            write!(f, "_{}", self.index)?;
        }
        Ok(())
    }
}

/// Product of jet variables with positive exponents, sorted by variable.
/// Ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(JetVariable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[(JetVariable, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: Vec<(JetVariable, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        out.push((va.clone(), *ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb.clone(), *eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.extend(a.by_ref().cloned()),
                (None, Some(_)) => out.extend(b.by_ref().cloned()),
                (None, None) => return Monomial(out),
            }
        }
    }

    /// Drops one power of the factor at position `k`.
    fn lower(&self, k: usize) -> Self {
        let mut out = self.0.clone();
        if out[k].1 == 1 {
            out.remove(k);
        } else {
            out[k].1 -= 1;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial function of the jet coordinates of velocities with `n`
/// source variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPolynomial<S> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> JetPolynomial<S> {
    pub fn zero(n: usize) -> Self {
        JetPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn variable(n: usize, var: JetVariable) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial(alloc::vec![(var, 1)]), S::one());
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `|I|` among the variables present (0 for constants).
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.index.order()))
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, monomial: Monomial, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&monomial) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&monomial);
                }
            }
            None => {
                self.terms.insert(monomial, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to one jet coordinate.
    pub fn partial(&self, var: &JetVariable) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some(k) = m.0.iter().position(|(v, _)| v == var) {
                out.add_term(m.lower(k), c.clone() * S::from_i64(m.0[k].1 as i64));
            }
        }
        out
    }

    /// Value at the coordinates of `v`.
    pub fn evaluate(&self, v: &Velocity<S>) -> Result<S> {
        let mut total = S::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (var, e) in &m.0 {
                let value = v
                    .table()
                    .get_checked(var.component, &var.index)
                    .ok_or_else(|| JetError::MissingVariable(format!("{var}")))?;
                term = term * value.pow(*e);
            }
            total = total + term;
        }
        Ok(total)
    }
}

/// `d_i f = Σ y^A_{J i} ∂f/∂y^A_J` as a function on `T^r`.
pub fn d_formal<S: Scalar>(f: &JetPolynomial<S>, i: usize, r: usize) -> Result<JetPolynomial<S>> {
    if i >= f.n {
        return Err(JetError::IndexOutOfRange {
            value: i + 1,
            bound: f.n,
        });
    }
    let order = f.order();
    if !f.is_zero() && order + 1 > r {
        return Err(JetError::OrderOverflow { order, bound: r });
    }
    let mut out = JetPolynomial::zero(f.n);
    for (m, c) in &f.terms {
        for (k, (var, e)) in m.0.iter().enumerate() {
            let raised = JetVariable::new(var.component, var.index.with(i));
            let monomial = m.lower(k).mul(&Monomial(alloc::vec![(raised, 1)]));
            out.add_term(monomial, c.clone() * S::from_i64(*e as i64));
        }
    }
    Ok(out)
}

/// `Z = (y^k_j)^{-1}` of the leading `n×n` block, `Z[s][i] = z^s_i`.
fn leading_inverse<S: Scalar>(v: &Velocity<S>) -> Result<Matrix<S>> {
    let rows: Vec<usize> = (0..v.n()).collect();
    v.block(&rows)
        .inverse()
        .ok_or_else(|| JetError::Singular("leading n×n block y^k_j".into()))
}

/// `(Δ_i f)(v) = Σ_s z^s_i(v) (d_s f)(v)`.
pub fn delta_apply<S: Scalar>(f: &JetPolynomial<S>, i: usize, v: &Velocity<S>) -> Result<S> {
    if f.n != v.n() {
        return Err(JetError::DimensionMismatch(format!(
            "polynomial over n={} evaluated on a velocity with n={}",
            f.n,
            v.n()
        )));
    }
    if i >= v.n() {
        return Err(JetError::IndexOutOfRange {
            value: i + 1,
            bound: v.n(),
        });
    }
    let z = leading_inverse(v)?;
    let mut total = S::zero();
    for s in 0..v.n() {
        let coef = z.get(s, i).clone();
        if coef.is_zero() {
            continue;
        }
        total = total + coef * d_formal(f, s, v.order())?.evaluate(v)?;
    }
    Ok(total)
}

/// Components `y^A_{J s}` of `d_s` at `v` on `∂/∂y^A_J`, `|J| <= r-1`.
pub fn formal_tangent<S: Scalar>(v: &Velocity<S>, s: usize) -> Result<JetTable<S>> {
    let r = v.order();
    if r == 0 {
        return Err(JetError::OrderMismatch(
            "formal derivatives need order at least 1".into(),
        ));
    }
    if s >= v.n() {
        return Err(JetError::IndexOutOfRange {
            value: s + 1,
            bound: v.n(),
        });
    }
    Ok(JetTable::from_fn(
        v.n(),
        v.target_dim(),
        r - 1,
        |a, index| v.coord(a, &index.with(s)).clone(),
    ))
}

/// Components of `Δ_i = z^s_i d_s` at `v` on `∂/∂y^A_J`, `|J| <= r-1`.
pub fn delta_tangent<S: Scalar>(v: &Velocity<S>, i: usize) -> Result<JetTable<S>> {
    let z = leading_inverse(v)?;
    let tangents: Vec<JetTable<S>> = (0..v.n())
        .map(|s| formal_tangent(v, s))
        .collect::<Result<_>>()?;
    let first = &tangents[0];
    Ok(JetTable::from_fn(
        first.vars(),
        first.comps(),
        first.order(),
        |a, index| {
            (0..v.n()).fold(S::zero(), |acc, s| {
                acc + z.get(s, i).clone() * tangents[s].get(a, index).clone()
            })
        },
    ))
}

/// `Δ_i` written in the adapted chart `(y^k_P, w^σ_P)`, `|P| <= r-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaComponents<S> {
    /// Coefficients on `∂/∂y^k_P`; the order-0 entries are `δ^k_i`.
    pub y: JetTable<S>,
    /// Coefficients `w^σ_{P i}` on `∂/∂w^σ_P`.
    pub w: JetTable<S>,
}

/// Expression of `Δ_i` at `v` in the invariant-adapted chart. The leading
/// `n×n` block of `v` must be invertible.
pub fn delta_components<S: Scalar>(v: &Velocity<S>, i: usize) -> Result<DeltaComponents<S>> {
    let r = v.order();
    if r == 0 {
        return Err(JetError::OrderMismatch("Δ needs order at least 1".into()));
    }
    let n = v.n();
    if i >= n {
        return Err(JetError::IndexOutOfRange {
            value: i + 1,
            bound: n,
        });
    }
    let z = leading_inverse(v)?;
    let nu: Vec<usize> = (0..n).collect();
    let point = extract_recurrence(v, &nu)?;
    let y = JetTable::from_fn(n, n, r - 1, |k, index| {
        if index.is_empty() {
            return if k == i { S::one() } else { S::zero() };
        }
        (0..n).fold(S::zero(), |acc, s| {
            acc + z.get(s, i).clone() * v.coord(k, &index.with(s)).clone()
        })
    });
    let w = JetTable::from_fn(n, v.m(), r - 1, |sigma, index| {
        point.w().get(sigma, &index.with(i)).clone()
    });
    Ok(DeltaComponents { y, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn var(c: usize, idx: &[usize]) -> JetVariable {
        JetVariable::new(c, MultiIndex::new(idx.to_vec()))
    }

    fn y(n: usize, c: usize, idx: &[usize]) -> JetPolynomial<Rational> {
        JetPolynomial::variable(n, var(c, idx))
    }

    #[test]
    fn coordinate_functions() {
        assert_eq!(d_formal(&y(1, 1, &[]), 0, 2).unwrap(), y(1, 1, &[0]));
        let c = JetPolynomial::constant(1, q(3, 1));
        assert!(d_formal(&c, 0, 1).unwrap().is_zero());
    }

    #[test]
    fn product_rule_example() {
        let f = y(1, 0, &[0]).mul(&y(1, 1, &[0]));
        let expected = y(1, 0, &[0, 0])
            .mul(&y(1, 1, &[0]))
            .add(&y(1, 0, &[0]).mul(&y(1, 1, &[0, 0])));
        assert_eq!(d_formal(&f, 0, 2).unwrap(), expected);
    }

    #[test]
    fn squares_pick_up_their_exponent() {
        let f = y(2, 0, &[1]).mul(&y(2, 0, &[1]));
        let expected = y(2, 0, &[1]).mul(&y(2, 0, &[0, 1])).scale(&q(2, 1));
        assert_eq!(d_formal(&f, 0, 2).unwrap(), expected);
    }

    #[test]
    fn overflow_and_range_errors() {
        let f = y(2, 0, &[1]);
        assert_eq!(
            d_formal(&f, 0, 1),
            Err(JetError::OrderOverflow { order: 1, bound: 1 })
        );
        assert!(matches!(
            d_formal(&f, 2, 3),
            Err(JetError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn partial_derivative() {
        let f = y(1, 0, &[0]).mul(&y(1, 0, &[0])).mul(&y(1, 1, &[]));
        let expected = y(1, 0, &[0]).mul(&y(1, 1, &[])).scale(&q(2, 1));
        assert_eq!(f.partial(&var(0, &[0])), expected);
        assert!(f.partial(&var(1, &[0])).is_zero());
    }

    #[test]
    fn evaluate_reads_coordinates() {
        let v = Velocity::from_fn(1, 1, 1, |a, i| q((a * 10 + i.order() + 1) as i64, 1));
        assert_eq!(y(1, 1, &[0]).evaluate(&v).unwrap(), q(12, 1));
        assert_eq!(
            JetPolynomial::constant(1, q(1, 1)).evaluate(&v).unwrap(),
            q(1, 1)
        );
        assert!(matches!(
            y(1, 1, &[0, 0]).evaluate(&v),
            Err(JetError::MissingVariable(_))
        ));
    }

    #[test]
    fn delta_of_base_coordinates_is_kronecker() {
        let v = Velocity::from_fn(2, 1, 2, |a, i| match i.entries() {
            [] => q(a as i64, 1),
            [j] => q([[2, 1], [1, 3], [5, -1]][a][*j], 1),
            e => q((a + e[0]) as i64, 2),
        });
        for k in 0..2 {
            for j in 0..2 {
                let expected = if k == j { q(1, 1) } else { q(0, 1) };
                assert_eq!(delta_apply(&y(2, k, &[]), j, &v).unwrap(), expected);
            }
        }
        let c = JetPolynomial::constant(2, q(7, 1));
        assert_eq!(delta_apply(&c, 1, &v).unwrap(), q(0, 1));
    }

    #[test]
    fn delta_of_w_gives_first_invariants() {
        let v = Velocity::from_fn(2, 2, 2, |a, i| match i.entries() {
            [] => q(a as i64 - 1, 1),
            [j] => q([[2, 1], [1, 3], [5, -1], [0, 4]][a][*j], 1),
            e => q((2 * a + e[1]) as i64, 3),
        });
        let point = extract_recurrence(&v, &[0, 1]).unwrap();
        for sigma in 0..2 {
            for i in 0..2 {
                assert_eq!(
                    &delta_apply(&y(2, 2 + sigma, &[]), i, &v).unwrap(),
                    point.w().get(sigma, &MultiIndex::single(i))
                );
            }
        }
    }

    #[test]
    fn delta_tangent_matches_delta_apply_on_coordinates() {
        let v = Velocity::from_fn(2, 1, 2, |a, i| match i.entries() {
            [] => q(0, 1),
            [j] => q([[1, 2], [3, 1], [4, 4]][a][*j], 1),
            e => q((a + 2 * e[0] + e[1]) as i64, 1),
        });
        for i in 0..2 {
            let t = delta_tangent(&v, i).unwrap();
            for (a, index, value) in t.entries() {
                let f = JetPolynomial::variable(2, JetVariable::new(a, index.clone()));
                assert_eq!(value, &delta_apply(&f, i, &v).unwrap());
            }
        }
    }

    #[test]
    fn delta_components_first_order() {
        let v = Velocity::from_fn(1, 1, 1, |a, i| {
            if i.is_empty() {
                q(0, 1)
            } else {
                q([2, 6][a], 1)
            }
        });
        let comps = delta_components(&v, 0).unwrap();
        assert_eq!(comps.y.values(), &[q(1, 1)]);
        assert_eq!(comps.w.values(), &[q(3, 1)]);
    }

    #[test]
    fn delta_components_on_normalized_jets() {
        let v = Velocity::from_fn(2, 1, 3, |a, i| match i.entries() {
            [] => q(a as i64, 1),
            [j] if a < 2 => q((a == *j) as i64, 1),
            _ if a < 2 => q(0, 1),
            _ => q(i.order() as i64 + 1, 1),
        });
        let comps = delta_components(&v, 1).unwrap();
        for (k, index, value) in comps.y.entries() {
            let expected = if index.is_empty() && k == 1 {
                q(1, 1)
            } else {
                q(0, 1)
            };
            assert_eq!(value, &expected);
        }
        for (sigma, index, value) in comps.w.entries() {
            assert_eq!(value, v.coord(2 + sigma, &index.with(1)));
        }
    }
}
