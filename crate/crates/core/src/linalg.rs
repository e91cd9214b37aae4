//! Small dense square matrices over a [`Scalar`].

use alloc::vec::Vec;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: alloc::vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        self.data[row * self.dim + col] = value;
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(S::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        })
    }

    fn pivot_row(work: &[S], dim: usize, col: usize) -> Option<usize> {
        let candidates = (col..dim).filter(|&r| !work[r * dim + col].is_zero());
        if S::EXACT {
            candidates.min()
        } else {
            candidates.max_by(|&a, &b| {
                work[a * dim + col]
                    .magnitude()
                    .total_cmp(&work[b * dim + col].magnitude())
            })
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> S {
        let n = self.dim;
        let mut work = self.data.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = Self::pivot_row(&work, n, col) else {
                return S::zero();
            };
            if p != col {
                for k in 0..n {
                    work.swap(p * n + k, col * n + k);
                }
                det = -det;
            }
            let pivot = work[col * n + col].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                let factor = work[r * n + col].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let v = work[r * n + k].clone() - factor.clone() * work[col * n + k].clone();
                    work[r * n + k] = v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when a pivot vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut work = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let p = Self::pivot_row(&work, n, col)?;
            if p != col {
                for k in 0..n {
                    work.swap(p * n + k, col * n + k);
                    inv.swap(p * n + k, col * n + k);
                }
            }
            let pivot = work[col * n + col].clone();
            for k in 0..n {
                work[col * n + k] = work[col * n + k].clone() / pivot.clone();
                inv[col * n + k] = inv[col * n + k].clone() / pivot.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = work[r * n + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let w = work[r * n + k].clone() - factor.clone() * work[col * n + k].clone();
                    work[r * n + k] = w;
                    let v = inv[r * n + k].clone() - factor.clone() * inv[col * n + k].clone();
                    inv[r * n + k] = v;
                }
            }
        }
        Some(Matrix { dim: n, data: inv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn det_and_inverse_exact() {
        let m = Matrix::from_fn(3, |i, j| q([[2, 1, 0], [0, 0, 3], [1, 4, 1]][i][j], 1));
        assert_eq!(m.det(), q(-21, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert_eq!(inv.mul(&m), Matrix::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Matrix::from_fn(2, |i, j| q([[1, 2], [2, 4]][i][j], 1));
        assert!(m.det().is_zero());
        assert!(m.inverse().is_none());
    }

    #[test]
    fn float_pivoting() {
        let m = Matrix::from_fn(2, |i, j| [[1e-20, 1.0], [1.0, 1.0]][i][j]);
        let inv = m.inverse().unwrap();
        let p = m.mul(&inv);
        assert!((p.get(0, 0) - 1.0).abs() < 1e-12 && p.get(0, 1).abs() < 1e-12);
    }
}
