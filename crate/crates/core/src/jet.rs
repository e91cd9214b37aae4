//! Velocities (`r`-jets from the origin of `R^n` into an `(n+m)`-dimensional
//! chart) and elements of the differential group `L^r_n`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::float::FloatCore;

use crate::error::{JetError, Result};
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Tolerance};
use crate::table::{faa_di_bruno, solve_inner, JetTable};

/// Coordinates `y^A_I` of an `(r,n)`-velocity, `A < n+m`, `|I| <= r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Velocity<S> {
    n: usize,
    m: usize,
    table: JetTable<S>,
}

impl<S: Scalar> Velocity<S> {
    /// Wraps a table with `n` variables and `n + m` components.
    pub fn new(n: usize, m: usize, table: JetTable<S>) -> Result<Self> {
        if n == 0 || table.vars() != n || table.comps() != n + m {
            return Err(JetError::DimensionMismatch(format!(
                "velocity with n={n}, m={m} needs {n} variables and {} components, got {} and {}",
                n + m,
                table.vars(),
                table.comps()
            )));
        }
        Ok(Velocity { n, m, table })
    }

    pub fn zeros(n: usize, m: usize, r: usize) -> Self {
        Velocity {
            n,
            m,
            table: JetTable::zeros(n, n + m, r),
        }
    }

    pub fn from_fn(n: usize, m: usize, r: usize, f: impl FnMut(usize, &MultiIndex) -> S) -> Self {
        Velocity {
            n,
            m,
            table: JetTable::from_fn(n, n + m, r, f),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    /// Dimension `n + m` of the target chart.
    pub fn target_dim(&self) -> usize {
        self.n + self.m
    }

    pub fn table(&self) -> &JetTable<S> {
        &self.table
    }

    pub fn into_table(self) -> JetTable<S> {
        self.table
    }

    pub fn coord(&self, component: usize, index: &MultiIndex) -> &S {
        self.table.get(component, index)
    }

    pub fn set_coord(&mut self, component: usize, index: &MultiIndex, value: S) {
        self.table.set(component, index, value);
    }

    /// Target point `y^A`.
    pub fn base(&self) -> Vec<S> {
        (0..self.target_dim())
            .map(|a| self.coord(a, &MultiIndex::empty()).clone())
            .collect()
    }

    /// `n×n` matrix `y^{ν_k}_j`.
    pub fn block(&self, nu: &[usize]) -> Matrix<S> {
        self.table.first_order_block(nu)
    }

    /// Right action `J(ζ) ∘ J(α)` of a group element.
    pub fn act(&self, a: &GroupJet<S>) -> Result<Self> {
        if a.n() != self.n || a.order() != self.order() {
            return Err(JetError::DimensionMismatch(format!(
                "velocity (n={}, r={}) and group element (n={}, r={})",
                self.n,
                self.order(),
                a.n(),
                a.order()
            )));
        }
        Ok(Velocity {
            n: self.n,
            m: self.m,
            table: faa_di_bruno(&self.table, &a.table)?,
        })
    }

    /// Projection to order `s`.
    pub fn truncate(&self, s: usize) -> Result<Self> {
        Ok(Velocity {
            n: self.n,
            m: self.m,
            table: self.table.truncate(s)?,
        })
    }

    /// Action of the dilation `t ↦ τ t`: order-`s` coordinates scale by `τ^s`.
    /// `τ = 0` is allowed and yields the degenerate jet `(y^A, 0, …, 0)`.
    pub fn scale(&self, tau: &S) -> Self {
        let table = self
            .table
            .map(|_, index, v| v.clone() * tau.pow(index.order() as u32));
        Velocity {
            n: self.n,
            m: self.m,
            table,
        }
    }

    /// Reorders target components: component `c` of the result is component
    /// `perm[c]` of `self`.
    pub fn permute_components(&self, perm: &[usize]) -> Self {
        Velocity {
            n: self.n,
            m: self.m,
            table: self.table.select_components(perm),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.n == other.n && self.m == other.m && self.table.approx_eq(&other.table, tol)
    }
}

/// Canonical coordinates `a^j_I`, `1 <= |I| <= r`, of an invertible `r`-jet
/// with source and target at the origin. Order-0 slots are kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupJet<S> {
    table: JetTable<S>,
}

impl<S: Scalar> GroupJet<S> {
    /// Checks the square shape, the zero target and invertibility of the
    /// first-order block.
    pub fn new(table: JetTable<S>) -> Result<Self> {
        let n = table.vars();
        if table.comps() != n || n == 0 {
            return Err(JetError::DimensionMismatch(format!(
                "group jet needs as many components as variables, got {} over {n}",
                table.comps()
            )));
        }
        if (0..n).any(|j| !table.get(j, &MultiIndex::empty()).is_zero()) {
            return Err(JetError::DimensionMismatch(
                "group jet target must be the origin".into(),
            ));
        }
        let rows: Vec<usize> = (0..n).collect();
        if table.first_order_block(&rows).det().is_zero() {
            return Err(JetError::Singular("first-order block of group jet".into()));
        }
        Ok(GroupJet { table })
    }

    /// Builds from a table whose order-0 entries are ignored.
    pub fn from_fn(n: usize, r: usize, mut f: impl FnMut(usize, &MultiIndex) -> S) -> Result<Self> {
        Self::new(JetTable::from_fn(n, n, r, |j, index| {
            if index.is_empty() {
                S::zero()
            } else {
                f(j, index)
            }
        }))
    }

    pub fn identity(n: usize, r: usize) -> Self {
        let table = JetTable::from_fn(n, n, r, |j, index| match index.entries() {
            [i] if *i == j => S::one(),
            _ => S::zero(),
        });
        GroupJet { table }
    }

    /// Jet of the dilation `t ↦ τ t`; `τ` must be nonzero.
    pub fn dilation(n: usize, r: usize, tau: &S) -> Result<Self> {
        Self::from_fn(n, r, |j, index| match index.entries() {
            [i] if *i == j => tau.clone(),
            _ => S::zero(),
        })
    }

    pub fn n(&self) -> usize {
        self.table.vars()
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn table(&self) -> &JetTable<S> {
        &self.table
    }

    pub fn coord(&self, j: usize, index: &MultiIndex) -> &S {
        self.table.get(j, index)
    }

    /// First-order block `a^j_i` as a matrix with rows `j`.
    pub fn linear_part(&self) -> Matrix<S> {
        let rows: Vec<usize> = (0..self.n()).collect();
        self.table.first_order_block(&rows)
    }

    /// `J(α) ∘ J(β)` where `self = J(α)` and `other = J(β)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() || self.order() != other.order() {
            return Err(JetError::DimensionMismatch(format!(
                "group jets (n={}, r={}) and (n={}, r={})",
                self.n(),
                self.order(),
                other.n(),
                other.order()
            )));
        }
        Ok(GroupJet {
            table: faa_di_bruno(&self.table, &other.table)?,
        })
    }

    /// Two-sided inverse, solved order by order from `self ∘ x = id`.
    pub fn inverse(&self) -> Result<Self> {
        let id = Self::identity(self.n(), self.order());
        let table = solve_inner(&self.table, &id.table).map_err(|e| match e {
            JetError::Singular(_) => JetError::Singular("group jet is not invertible".into()),
            other => other,
        })?;
        Ok(GroupJet { table })
    }

    pub fn truncate(&self, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(JetError::OrderMismatch(
                "group jets have order at least 1".into(),
            ));
        }
        Ok(GroupJet {
            table: self.table.truncate(s)?,
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.table.approx_eq(&other.table, tol)
    }
}

/// Proof of regularity: an index selection `ν` with `det(y^{ν_k}_j) ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityCertificate<S> {
    pub nu: Vec<usize>,
    pub det: S,
}

/// Strictly increasing length-`k` subsequences of `0..total`, lexicographic.
pub fn subsequences(total: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > total {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let Some(pos) = (0..k).rev().find(|&p| current[p] < total - k + p) else {
            return out;
        };
        current[pos] += 1;
        for p in pos + 1..k {
            current[p] = current[p - 1] + 1;
        }
    }
}

/// `ν` followed by the remaining components in increasing order.
pub fn chart_permutation(nu: &[usize], total: usize) -> Vec<usize> {
    let mut perm = nu.to_vec();
    perm.extend((0..total).filter(|c| !nu.contains(c)));
    perm
}

pub(crate) fn check_selection(nu: &[usize], n: usize, total: usize) -> Result<()> {
    if nu.len() != n || nu.windows(2).any(|w| w[0] >= w[1]) || nu.iter().any(|&c| c >= total) {
        return Err(JetError::DimensionMismatch(format!(
            "chart selection {nu:?} is not an increasing subsequence of length {n} in 0..{total}"
        )));
    }
    Ok(())
}

/// Whether the leading `n×n` minor selected by `ν` is nonzero, with the
/// floating point threshold `|det| > tol · (max |y^A_i|)^n`.
pub fn block_is_regular<S: Scalar>(v: &Velocity<S>, det: &S, tol: Tolerance) -> bool {
    if S::EXACT {
        return !det.is_zero();
    }
    let all: Vec<usize> = (0..v.target_dim()).collect();
    let norm = all
        .iter()
        .flat_map(|&a| (0..v.n()).map(move |i| (a, i)))
        .map(|(a, i)| v.table().first(a, i).magnitude())
        .fold(0.0, f64::max);
    det.magnitude() > tol.0 * FloatCore::powi(norm, v.n() as i32)
}

/// Searches the charts `W^ν` containing `v`. Exact scalars return the
/// lexicographically first `ν` with a nonzero minor; floats return the `ν`
/// maximizing `|det|`.
pub fn is_regular<S: Scalar>(v: &Velocity<S>, tol: Tolerance) -> Option<RegularityCertificate<S>> {
    let mut best: Option<RegularityCertificate<S>> = None;
    for nu in subsequences(v.target_dim(), v.n()) {
        let det = v.block(&nu).det();
        if !block_is_regular(v, &det, tol) {
            continue;
        }
        if S::EXACT {
            return Some(RegularityCertificate { nu, det });
        }
        if best
            .as_ref()
            .is_none_or(|b| det.magnitude() > b.det.magnitude())
        {
            best = Some(RegularityCertificate { nu, det });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn group_1d(coeffs: &[(i64, i64)]) -> GroupJet<Rational> {
        GroupJet::from_fn(1, coeffs.len(), |_, i| {
            q(coeffs[i.order() - 1].0, coeffs[i.order() - 1].1)
        })
        .unwrap()
    }

    #[test]
    fn compose_second_order_scalar() {
        // a = (1, α₂), b = (1, β₂) → (1, α₂ + β₂)
        let a = group_1d(&[(1, 1), (3, 1)]);
        let b = group_1d(&[(1, 1), (5, 2)]);
        assert_eq!(a.compose(&b).unwrap(), group_1d(&[(1, 1), (11, 2)]));
    }

    #[test]
    fn identity_laws() {
        let a = GroupJet::from_fn(2, 3, |j, i| {
            q((j + 2 * i.order()) as i64 + i.entries()[0] as i64, 3)
        })
        .unwrap();
        let id = GroupJet::identity(2, 3);
        assert_eq!(a.compose(&id).unwrap(), a);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn inverse_second_order_scalar() {
        let a = group_1d(&[(2, 1), (4, 1)]);
        assert_eq!(a.inverse().unwrap(), group_1d(&[(1, 2), (-1, 2)]));
    }

    #[test]
    fn singular_group_jet_is_rejected() {
        let err = GroupJet::<Rational>::from_fn(2, 1, |_, _| q(1, 1)).unwrap_err();
        assert!(matches!(err, JetError::Singular(_)));
    }

    #[test]
    fn first_order_action_is_linear() {
        let v = Velocity::from_fn(1, 1, 1, |a, i| {
            if i.is_empty() {
                q(0, 1)
            } else {
                q([1, 5][a], 1)
            }
        });
        let a = group_1d(&[(2, 1)]);
        let out = v.act(&a).unwrap();
        let coords: Vec<_> = out.table().values().to_vec();
        assert_eq!(coords, vec![q(0, 1), q(2, 1), q(0, 1), q(10, 1)]);
        assert_eq!(v.act(&GroupJet::identity(1, 1)).unwrap(), v);
    }

    #[test]
    fn truncate_examples() {
        let v = Velocity::from_fn(2, 1, 2, |a, i| q((a + 3 * i.order()) as i64, 2));
        assert_eq!(v.truncate(2).unwrap(), v);
        let base = v.truncate(0).unwrap();
        assert_eq!(base.table().values().len(), 3);
        assert_eq!(base.base(), v.base());
        assert!(v.truncate(3).is_err());
    }

    #[test]
    fn regularity_examples() {
        let tol = Tolerance::default();
        let v = Velocity::from_fn(1, 1, 1, |a, i| {
            if i.is_empty() {
                q(0, 1)
            } else {
                q([0, 7][a], 1)
            }
        });
        let cert = is_regular(&v, tol).unwrap();
        assert_eq!((cert.nu, cert.det), (vec![1], q(7, 1)));
        assert!(is_regular(&Velocity::<Rational>::zeros(2, 1, 2), tol).is_none());
        let rows = [[1, 0], [0, 1], [3, 4]];
        let v = Velocity::from_fn(2, 1, 1, |a, i| match i.entries() {
            [j] => q(rows[a][*j], 1),
            _ => q(0, 1),
        });
        let cert = is_regular(&v, tol).unwrap();
        assert_eq!((cert.nu, cert.det), (vec![0, 1], q(1, 1)));
        // floats pick the best-conditioned chart
        let vf = Velocity::from_fn(2, 1, 1, |a, i| match i.entries() {
            [j] => rows[a][*j] as f64,
            _ => 0.0,
        });
        assert_eq!(is_regular(&vf, tol).unwrap().nu, vec![0, 2]);
    }

    #[test]
    fn scaling_examples() {
        let v = Velocity::from_fn(1, 1, 2, |a, i| q((a + 1 + i.order()) as i64, 1));
        assert_eq!(v.scale(&q(1, 1)), v);
        let zero = v.scale(&q(0, 1));
        for (_, index, value) in zero.table().entries() {
            if !index.is_empty() {
                assert!(value.is_zero());
            }
        }
        let half = v.scale(&q(1, 2));
        let ii = MultiIndex::pair(0, 0);
        assert_eq!(half.coord(1, &ii), &(v.coord(1, &ii).clone() * q(1, 4)));
        let dil = GroupJet::dilation(1, 2, &q(1, 2)).unwrap();
        assert_eq!(v.act(&dil).unwrap(), half);
    }

    #[test]
    fn subsequence_enumeration() {
        assert_eq!(subsequences(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsequences(2, 2), vec![vec![0, 1]]);
        assert!(subsequences(1, 2).is_empty());
        assert_eq!(chart_permutation(&[1, 3], 4), vec![1, 3, 0, 2]);
    }
}
