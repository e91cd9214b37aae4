//! Seeded generators of small rational test data. Velocities are regular
//! and group jets invertible by construction.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use velojet::formal::{JetPolynomial, JetVariable};
use velojet::linalg::Matrix;
use velojet::{
    enumerate_multiindices, ChartJet, GroupJet, JetTable, MultiIndex, PolyMap, Polynomial, Scalar,
    Velocity,
};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// `p/q` with `|p| <= 5`, `1 <= q <= 4`.
    pub fn scalar<S: Scalar>(&mut self) -> S {
        S::from_ratio(self.rng.gen_range(-5..=5), self.rng.gen_range(1..=4))
    }

    pub fn nonzero<S: Scalar>(&mut self) -> S {
        let num = self.rng.gen_range(1..=5) * if self.rng.gen_bool(0.5) { 1 } else { -1 };
        S::from_ratio(num, self.rng.gen_range(1..=4))
    }

    /// Small integer entry, used where rational growth would dominate.
    pub fn small_int<S: Scalar>(&mut self) -> S {
        S::from_i64(self.rng.gen_range(-3..=3))
    }

    /// `L·U` with unit lower `L` and nonzero diagonal in `U`.
    pub fn invertible_matrix<S: Scalar>(&mut self, dim: usize) -> Matrix<S> {
        let lower = Matrix::from_fn(dim, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => S::one(),
            std::cmp::Ordering::Greater => self.small_int(),
            std::cmp::Ordering::Less => S::zero(),
        });
        let upper = Matrix::from_fn(dim, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => self.nonzero(),
            std::cmp::Ordering::Less => self.small_int(),
            std::cmp::Ordering::Greater => S::zero(),
        });
        lower.mul(&upper)
    }

    /// Random increasing selection of `k` components out of `total`.
    pub fn selection(&mut self, total: usize, k: usize) -> Vec<usize> {
        let mut nu = sample(&mut self.rng, total, k).into_vec();
        nu.sort_unstable();
        nu
    }

    /// Velocity whose `ν`-block is invertible.
    pub fn velocity_in<S: Scalar>(
        &mut self,
        n: usize,
        m: usize,
        r: usize,
        nu: &[usize],
    ) -> Velocity<S> {
        let block = self.invertible_matrix::<S>(n);
        let mut v = Velocity::from_fn(n, m, r, |_, _| self.scalar());
        for (k, &c) in nu.iter().enumerate() {
            for j in 0..n {
                v.set_coord(c, &MultiIndex::single(j), block.get(k, j).clone());
            }
        }
        v
    }

    /// Velocity at `base`, regular in the leading chart.
    pub fn velocity_at<S: Scalar>(
        &mut self,
        n: usize,
        m: usize,
        r: usize,
        base: &[S],
    ) -> Velocity<S> {
        let nu: Vec<usize> = (0..n).collect();
        let mut v = self.velocity_in(n, m, r, &nu);
        for (a, value) in base.iter().enumerate() {
            v.set_coord(a, &MultiIndex::empty(), value.clone());
        }
        v
    }

    /// Velocity regular in a random chart.
    pub fn velocity<S: Scalar>(&mut self, n: usize, m: usize, r: usize) -> Velocity<S> {
        let nu = self.selection(n + m, n);
        self.velocity_in(n, m, r, &nu)
    }

    pub fn group<S: Scalar>(&mut self, n: usize, r: usize) -> GroupJet<S> {
        let block = self.invertible_matrix::<S>(n);
        GroupJet::from_fn(n, r, |j, index| match index.entries() {
            [i] => block.get(j, *i).clone(),
            _ => self.scalar(),
        })
        .expect("invertible by construction")
    }

    /// Group jet with small integer entries.
    pub fn integer_group<S: Scalar>(&mut self, n: usize, r: usize) -> GroupJet<S> {
        let block = self.invertible_matrix::<S>(n);
        GroupJet::from_fn(n, r, |j, index| match index.entries() {
            [i] => block.get(j, *i).clone(),
            _ => self.small_int(),
        })
        .expect("invertible by construction")
    }

    /// Chart jet at `base` with random coefficients and invertible Jacobian.
    pub fn chart<S: Scalar>(&mut self, base: Vec<S>, r: usize) -> ChartJet<S> {
        let dim = base.len();
        let block = self.invertible_matrix::<S>(dim);
        let table = JetTable::from_fn(dim, dim, r, |a, index| match index.entries() {
            [b] => block.get(a, *b).clone(),
            _ => self.scalar(),
        });
        ChartJet::new(base, table).expect("invertible by construction")
    }

    pub fn point<S: Scalar>(&mut self, dim: usize) -> Vec<S> {
        (0..dim).map(|_| self.scalar()).collect()
    }

    /// Dense polynomial of total degree `<= degree`, about half the terms
    /// nonzero.
    pub fn polynomial<S: Scalar>(&mut self, vars: usize, degree: usize) -> Polynomial<S> {
        let mut p = Polynomial::zero(vars);
        for k in 0..=degree {
            for index in enumerate_multiindices(vars, k) {
                if self.rng.gen_bool(0.5) {
                    let mut exps = vec![0u32; vars];
                    for &i in index.entries() {
                        exps[i] += 1;
                    }
                    p.add_term(exps, self.scalar());
                }
            }
        }
        p
    }

    pub fn polymap<S: Scalar>(&mut self, vars: usize, comps: usize, degree: usize) -> PolyMap<S> {
        let components = (0..comps).map(|_| self.polynomial(vars, degree)).collect();
        PolyMap::new(vars, components).expect("consistent arity")
    }

    /// Polynomial in the jet coordinates `y^A_J`, `|J| <= max_order`, with up
    /// to three terms of degree up to two.
    pub fn jet_polynomial<S: Scalar>(
        &mut self,
        n: usize,
        comps: usize,
        max_order: usize,
    ) -> JetPolynomial<S> {
        let mut f = JetPolynomial::constant(n, self.scalar());
        for _ in 0..self.range(1, 3) {
            let mut term = JetPolynomial::constant(n, self.nonzero());
            for _ in 0..self.range(1, 2) {
                let order = self.range(0, max_order);
                let index = MultiIndex::new((0..order).map(|_| self.range(0, n - 1)).collect());
                let var = JetVariable::new(self.range(0, comps - 1), index);
                term = term.mul(&JetPolynomial::variable(n, var));
            }
            f = f.add(&term);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use velojet::{is_regular, Rational, Tolerance};

    #[test]
    fn generated_data_is_valid_and_reproducible() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for n in 1..=3 {
            let v: Velocity<Rational> = a.velocity(n, 2, 2);
            assert!(is_regular(&v, Tolerance::default()).is_some());
            assert_eq!(v, b.velocity(n, 2, 2));
            let g: GroupJet<Rational> = a.group(n, 3);
            assert_eq!(g, b.group(n, 3));
        }
    }
}
