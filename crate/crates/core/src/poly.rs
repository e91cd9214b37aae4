//! Sparse multivariate polynomials and polynomial maps, used as explicit
//! representatives of jets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{JetError, Result};
use crate::index::MultiIndex;
use crate::jet::Velocity;
use crate::scalar::Scalar;
use crate::table::JetTable;

/// Polynomial in `vars` variables keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: S) -> Self {
        Self::monomial(vec![0; vars], c)
    }

    /// The coordinate function `t^i`.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut exps = vec![0; vars];
        exps[i] = 1;
        Self::monomial(exps, S::one())
    }

    pub fn monomial(exponents: Vec<u32>, coeff: S) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, coeff);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &S)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Adds `coeff · t^exponents`, dropping cancelled terms.
    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: S) {
        debug_assert_eq!(exponents.len(), self.vars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&exponents);
                }
            }
            None => {
                self.terms.insert(exponents, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::constant(self.vars, S::one()), |acc, _| acc.mul(self))
    }

    /// `∂/∂t^i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.clone() * S::from_i64(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let term = e
                .iter()
                .zip(point)
                .fold(c.clone(), |t, (&k, x)| t * x.pow(k));
            acc + term
        })
    }

    /// Substitutes `t^i ↦ inner[i]`.
    pub fn compose(&self, inner: &[Polynomial<S>]) -> Polynomial<S> {
        let vars = inner.first().map_or(0, |p| p.vars);
        let mut out = Polynomial::zero(vars);
        for (e, c) in &self.terms {
            let term = e
                .iter()
                .zip(inner)
                .fold(Polynomial::constant(vars, c.clone()), |t, (&k, p)| {
                    t.mul(&p.pow(k))
                });
            out = out.add(&term);
        }
        out
    }
}

/// Polynomial map `R^vars → R^comps`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap<S> {
    vars: usize,
    components: Vec<Polynomial<S>>,
}

impl<S: Scalar> PolyMap<S> {
    pub fn new(vars: usize, components: Vec<Polynomial<S>>) -> Result<Self> {
        if let Some(p) = components.iter().find(|p| p.vars != vars) {
            return Err(JetError::DimensionMismatch(format!(
                "component in {} variables inside a map from R^{vars}",
                p.vars
            )));
        }
        Ok(PolyMap { vars, components })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn comps(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<S>] {
        &self.components
    }

    pub fn eval(&self, point: &[S]) -> Vec<S> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap<S>) -> Result<PolyMap<S>> {
        if inner.comps() != self.vars {
            return Err(JetError::DimensionMismatch(format!(
                "cannot compose a map from R^{} after a map into R^{}",
                self.vars,
                inner.comps()
            )));
        }
        Ok(PolyMap {
            vars: inner.vars,
            components: self
                .components
                .iter()
                .map(|p| p.compose(&inner.components))
                .collect(),
        })
    }

    /// All partial derivatives `D_I f^c(point)` with `|I| <= order`.
    pub fn jet_at(&self, point: &[S], order: usize) -> Result<JetTable<S>> {
        if point.len() != self.vars {
            return Err(JetError::DimensionMismatch(format!(
                "point of dimension {} for a map from R^{}",
                point.len(),
                self.vars
            )));
        }
        let mut table = JetTable::zeros(self.vars, self.comps(), order);
        let indices = table.layout().indices();
        for (c, p) in self.components.iter().enumerate() {
            // derivatives[k] = D_{indices[k]} p, built from the parent index
            let mut derivatives: Vec<Polynomial<S>> = Vec::with_capacity(indices.len());
            for index in &indices {
                let d = match index.entries().split_last() {
                    None => p.clone(),
                    Some((&last, rest)) => {
                        let parent = MultiIndex::new(rest.to_vec());
                        derivatives[table.layout().offset(&parent)].derivative(last)
                    }
                };
                table.set(c, index, d.eval(point));
                derivatives.push(d);
            }
        }
        Ok(table)
    }
}

/// `r`-prolongation of `γ : R^n → R^{n+m}` at `t`: the velocity with
/// coordinates `D_I γ^A(t)`.
pub fn prolong<S: Scalar>(gamma: &PolyMap<S>, t: &[S], r: usize) -> Result<Velocity<S>> {
    let n = gamma.vars();
    if gamma.comps() < n {
        return Err(JetError::DimensionMismatch(format!(
            "map into R^{} cannot carry an n={n} velocity",
            gamma.comps()
        )));
    }
    Velocity::new(n, gamma.comps() - n, gamma.jet_at(t, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn curve(power: u32) -> PolyMap<Rational> {
        PolyMap::new(
            1,
            vec![
                Polynomial::var(1, 0),
                Polynomial::monomial(vec![power], q(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn prolong_parabola_at_origin() {
        let v = prolong(&curve(2), &[q(0)], 2).unwrap();
        assert_eq!(v.table().values(), &[q(0), q(1), q(0), q(0), q(0), q(2)]);
    }

    #[test]
    fn prolong_parabola_at_one() {
        let v = prolong(&curve(2), &[q(1)], 2).unwrap();
        assert_eq!(v.component_values(1), vec![q(1), q(2), q(2)]);
    }

    #[test]
    fn constant_map_is_not_regular() {
        let gamma = PolyMap::new(
            1,
            vec![
                Polynomial::constant(1, q(3)),
                Polynomial::constant(1, q(-1)),
            ],
        )
        .unwrap();
        let v = prolong(&gamma, &[q(5)], 3).unwrap();
        assert!(crate::jet::is_regular(&v, Default::default()).is_none());
        assert_eq!(v.base(), vec![q(3), q(-1)]);
    }

    #[test]
    fn polynomial_arithmetic() {
        // (t + t²)² = t² + 2t³ + t⁴
        let p = Polynomial::var(1, 0).add(&Polynomial::monomial(vec![2], q(1)));
        let sq = p.mul(&p);
        let expected = Polynomial::monomial(vec![2], q(1))
            .add(&Polynomial::monomial(vec![3], q(2)))
            .add(&Polynomial::monomial(vec![4], q(1)));
        assert_eq!(sq, expected);
        assert_eq!(sq.derivative(0).derivative(0).eval(&[q(0)]), q(2));
        let u2 = Polynomial::monomial(vec![2], q(1));
        assert_eq!(u2.compose(&[p]), expected);
    }

    impl Velocity<Rational> {
        fn component_values(&self, c: usize) -> Vec<Rational> {
            self.table().component(c).to_vec()
        }
    }
}
