//! Changes of chart on the target manifold, lifted to velocities and to
//! Grassmann coordinates.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{JetError, Result};
use crate::index::MultiIndex;
use crate::invariants::{extract_recurrence, GrassmannPoint};
use crate::jet::{block_is_regular, chart_permutation, check_selection, Velocity};
use crate::linalg::Matrix;
use crate::poly::PolyMap;
use crate::scalar::{Scalar, Tolerance};
use crate::table::{faa_di_bruno, JetTable};

/// Taylor coefficients `∂^p F^A / ∂y^{B_1}…∂y^{B_p}`, `p <= r`, of a chart
/// change `ȳ = F(y)` at `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartJet<S> {
    base: Vec<S>,
    table: JetTable<S>,
}

impl<S: Scalar> ChartJet<S> {
    pub fn new(base: Vec<S>, table: JetTable<S>) -> Result<Self> {
        let dim = base.len();
        if table.vars() != dim || table.comps() != dim {
            return Err(JetError::DimensionMismatch(format!(
                "chart jet needs {dim} components over {dim} variables, got {} over {}",
                table.comps(),
                table.vars()
            )));
        }
        if table.order() == 0 {
            return Err(JetError::OrderMismatch(
                "chart jets have order at least 1".into(),
            ));
        }
        let rows: Vec<usize> = (0..dim).collect();
        if table.first_order_block(&rows).det().is_zero() {
            return Err(JetError::Singular("Jacobian of the chart change".into()));
        }
        Ok(ChartJet { base, table })
    }

    pub fn identity(base: Vec<S>, r: usize) -> Result<Self> {
        let dim = base.len();
        let table = JetTable::from_fn(dim, dim, r, |a, index| match index.entries() {
            [] => base[a].clone(),
            [b] if *b == a => S::one(),
            _ => S::zero(),
        });
        Self::new(base, table)
    }

    /// Jet at `base` of a polynomial map `R^N → R^N`.
    pub fn from_polymap(map: &PolyMap<S>, base: Vec<S>, r: usize) -> Result<Self> {
        let table = map.jet_at(&base, r)?;
        Self::new(base, table)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn base(&self) -> &[S] {
        &self.base
    }

    /// `F(base)`.
    pub fn image(&self) -> Vec<S> {
        (0..self.dim())
            .map(|a| self.table.get(a, &MultiIndex::empty()).clone())
            .collect()
    }

    pub fn table(&self) -> &JetTable<S> {
        &self.table
    }

    pub fn coeff(&self, component: usize, index: &MultiIndex) -> &S {
        self.table.get(component, index)
    }

    /// Jet of `self ∘ inner`; `self` must be based at the image of `inner`.
    pub fn compose(&self, inner: &Self, tol: Tolerance) -> Result<Self> {
        if self.dim() != inner.dim() {
            return Err(JetError::DimensionMismatch(format!(
                "chart jets of dimensions {} and {}",
                self.dim(),
                inner.dim()
            )));
        }
        if !same_point(&self.base, &inner.image(), tol) {
            return Err(JetError::BasePointMismatch);
        }
        let order = self.order().min(inner.order());
        let table = faa_di_bruno(&self.table, &inner.table.truncate(order)?)?;
        Self::new(inner.base.clone(), table)
    }
}

fn same_point<S: Scalar>(a: &[S], b: &[S], tol: Tolerance) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

/// `ȳ^A_I` from the target-side chain rule applied to `v`.
pub fn transform_velocity<S: Scalar>(
    chart: &ChartJet<S>,
    v: &Velocity<S>,
    tol: Tolerance,
) -> Result<Velocity<S>> {
    if chart.dim() != v.target_dim() {
        return Err(JetError::DimensionMismatch(format!(
            "chart change on R^{} applied to a velocity in R^{}",
            chart.dim(),
            v.target_dim()
        )));
    }
    if chart.order() < v.order() {
        return Err(JetError::OrderMismatch(format!(
            "chart jet of order {} cannot transform a velocity of order {}",
            chart.order(),
            v.order()
        )));
    }
    if !same_point(chart.base(), &v.base(), tol) {
        return Err(JetError::BasePointMismatch);
    }
    Velocity::new(v.n(), v.m(), faa_di_bruno(&chart.table, v.table())?)
}

/// Image of a Grassmann point: lift to the normalized representative,
/// transform, and extract again in the chart `target_nu` (default: the chart
/// of `point`).
pub fn transform_grassmann<S: Scalar>(
    chart: &ChartJet<S>,
    point: &GrassmannPoint<S>,
    target_nu: Option<&[usize]>,
    tol: Tolerance,
) -> Result<GrassmannPoint<S>> {
    let nu = target_nu.unwrap_or(point.nu());
    let lifted = transform_velocity(chart, &point.lift(), tol)?;
    check_selection(nu, lifted.n(), lifted.target_dim())?;
    let det = lifted.block(nu).det();
    if !block_is_regular(&lifted, &det, tol) {
        return Err(JetError::ChartOverlap(format!(
            "the transformed point is not regular in the chart {nu:?}"
        )));
    }
    extract_recurrence(&lifted, nu)
}

/// `P` and its inverse `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PqPair<S> {
    pub p: Matrix<S>,
    pub q: Matrix<S>,
}

/// `P^q_s = ∂F^q/∂y^s + ∂F^q/∂w^ν · w^ν_s` at `point`, in the chart of
/// `point`, with `Q = P^{-1}`.
pub fn pq_matrices<S: Scalar>(chart: &ChartJet<S>, point: &GrassmannPoint<S>) -> Result<PqPair<S>> {
    let n = point.n();
    let total = n + point.m();
    if chart.dim() != total {
        return Err(JetError::DimensionMismatch(format!(
            "chart change on R^{} applied to a point over R^{total}",
            chart.dim()
        )));
    }
    let perm = chart_permutation(point.nu(), total);
    let nu = &perm[..n];
    let others = &perm[n..];
    let p = Matrix::from_fn(n, |row, s| {
        let direct = chart.table.first(nu[row], nu[s]).clone();
        others.iter().enumerate().fold(direct, |acc, (sigma, &b)| {
            acc + chart.table.first(nu[row], b).clone() * point.w().first(sigma, s).clone()
        })
    });
    let q = p
        .inverse()
        .ok_or_else(|| JetError::ChartOverlap("P is singular at this point".into()))?;
    Ok(PqPair { p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::extract;
    use crate::jet::GroupJet;
    use crate::poly::Polynomial;
    use crate::scalar::Rational;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn exact() -> Tolerance {
        Tolerance::default()
    }

    fn swap(base: Vec<Rational>, r: usize) -> ChartJet<Rational> {
        let map = PolyMap::new(2, vec![Polynomial::var(2, 1), Polynomial::var(2, 0)]).unwrap();
        ChartJet::from_polymap(&map, base, r).unwrap()
    }

    /// (y1 + y2², y2 + y1 y2 + y1³), invertible near the origin.
    fn bend() -> PolyMap<Rational> {
        let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        PolyMap::new(2, vec![x.add(&y.pow(2)), y.add(&x.mul(&y)).add(&x.pow(3))]).unwrap()
    }

    fn velocity() -> Velocity<Rational> {
        Velocity::from_fn(1, 1, 3, |a, i| match i.order() {
            0 => q(a as i64, 2),
            1 => q([2, 1][a], 1),
            2 => q([1, -3][a], 2),
            _ => q([5, 2][a], 1),
        })
    }

    #[test]
    fn swap_first_order() {
        let v = Velocity::from_fn(1, 1, 1, |a, i| {
            if i.is_empty() {
                q(0, 1)
            } else {
                q([2, 6][a], 1)
            }
        });
        let out = transform_velocity(&swap(vec![q(0, 1); 2], 1), &v, exact()).unwrap();
        assert_eq!(out.table().first(0, 0), &q(6, 1));
        assert_eq!(out.table().first(1, 0), &q(2, 1));
    }

    #[test]
    fn swap_grassmann_and_pq() {
        let v = Velocity::from_fn(1, 1, 1, |a, i| {
            if i.is_empty() {
                q(0, 1)
            } else {
                q([1, 3][a], 1)
            }
        });
        let point = extract_recurrence(&v, &[0]).unwrap();
        assert_eq!(point.w().first(0, 0), &q(3, 1));
        let chart = swap(vec![q(0, 1); 2], 1);
        let image = transform_grassmann(&chart, &point, None, exact()).unwrap();
        assert_eq!(image.w().first(0, 0), &q(1, 3));
        let pq = pq_matrices(&chart, &point).unwrap();
        assert_eq!(pq.p.get(0, 0), &q(3, 1));
        assert_eq!(pq.q.get(0, 0), &q(1, 3));
    }

    #[test]
    fn identity_chart_changes_nothing() {
        let v = velocity();
        let id = ChartJet::identity(v.base(), 3).unwrap();
        assert_eq!(transform_velocity(&id, &v, exact()).unwrap(), v);
        let point = extract(&v, exact()).unwrap();
        assert_eq!(
            transform_grassmann(&id, &point, None, exact()).unwrap(),
            point
        );
        let pq = pq_matrices(&id, &point).unwrap();
        assert_eq!(pq.p, Matrix::identity(1));
        assert_eq!(pq.q, Matrix::identity(1));
    }

    #[test]
    fn base_point_and_singularity_checks() {
        let v = velocity();
        let off = ChartJet::identity(vec![q(1, 1), q(1, 1)], 3).unwrap();
        assert_eq!(
            transform_velocity(&off, &v, exact()),
            Err(JetError::BasePointMismatch)
        );
        let flat = JetTable::zeros(2, 2, 1);
        assert!(matches!(
            ChartJet::new(vec![q(0, 1); 2], flat),
            Err(JetError::Singular(_))
        ));
    }

    #[test]
    fn functoriality() {
        let v = velocity();
        let g = ChartJet::from_polymap(&bend(), v.base(), 3).unwrap();
        let f = ChartJet::from_polymap(&bend(), g.image(), 3).unwrap();
        let composed = f.compose(&g, exact()).unwrap();
        let direct =
            ChartJet::from_polymap(&bend().compose(&bend()).unwrap(), v.base(), 3).unwrap();
        assert_eq!(composed, direct);
        let step = transform_velocity(&g, &v, exact()).unwrap();
        assert_eq!(
            transform_velocity(&composed, &v, exact()).unwrap(),
            transform_velocity(&f, &step, exact()).unwrap()
        );
    }

    #[test]
    fn equivariance_and_quotient_compatibility() {
        let v = velocity();
        let chart = ChartJet::from_polymap(&bend(), v.base(), 3).unwrap();
        let g = GroupJet::from_fn(1, 3, |_, i| q([3, -1, 2][i.order() - 1], 1)).unwrap();
        let lhs = transform_velocity(&chart, &v.act(&g).unwrap(), exact()).unwrap();
        let rhs = transform_velocity(&chart, &v, exact())
            .unwrap()
            .act(&g)
            .unwrap();
        assert_eq!(lhs, rhs);

        let point = extract_recurrence(&v, &[0]).unwrap();
        let image = transform_grassmann(&chart, &point, None, exact()).unwrap();
        let direct =
            extract_recurrence(&transform_velocity(&chart, &v, exact()).unwrap(), &[0]).unwrap();
        assert_eq!(image, direct);
    }

    #[test]
    fn q_is_inverse_of_transformed_block() {
        let v = velocity();
        let chart = ChartJet::from_polymap(&bend(), v.base(), 3).unwrap();
        let point = extract_recurrence(&v, &[0]).unwrap();
        let pq = pq_matrices(&chart, &point).unwrap();
        let lifted = transform_velocity(&chart, &point.lift(), exact()).unwrap();
        let zbar = lifted.block(&[0]).inverse().unwrap();
        assert_eq!(pq.q, zbar);
        assert_eq!(pq.p.mul(&pq.q), Matrix::identity(1));
    }

    #[test]
    fn leaving_the_chart_is_reported() {
        let v = Velocity::from_fn(1, 1, 1, |a, i| {
            if i.is_empty() {
                q(0, 1)
            } else {
                q([1, 0][a], 1)
            }
        });
        let point = extract_recurrence(&v, &[0]).unwrap();
        let chart = swap(vec![q(0, 1); 2], 1);
        assert!(matches!(
            transform_grassmann(&chart, &point, None, exact()),
            Err(JetError::ChartOverlap(_))
        ));
        assert!(matches!(
            pq_matrices(&chart, &point),
            Err(JetError::ChartOverlap(_))
        ));
        assert_eq!(
            transform_grassmann(&chart, &point, Some(&[1]), exact())
                .unwrap()
                .w()
                .first(0, 0),
            &q(0, 1)
        );
    }
}
