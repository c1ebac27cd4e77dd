//! LU factorization with partial pivoting for dense complex matrices.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Packed LU factors of a square matrix with row pivoting.
pub struct Lu {
    lu: CMatrix,
    pivots: Vec<usize>,
    swaps: usize,
    min_pivot: f64,
    max_pivot: f64,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Lu {
        assert!(a.is_square(), "LU requires a square matrix");
        let n = a.nrows();
        let mut lu = a.clone();
        let mut pivots = Vec::with_capacity(n);
        let mut swaps = 0;
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot: f64 = 0.0;

        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let m = lu[(i, k)].norm();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            pivots.push(p);
            if p != k {
                swaps += 1;
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            min_pivot = min_pivot.min(pivot.norm());
            max_pivot = max_pivot.max(pivot.norm());
            if pivot.norm() == 0.0 {
                continue; // exactly singular; solve() will refuse
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        if n == 0 {
            min_pivot = 0.0;
        }
        Lu {
            lu,
            pivots,
            swaps,
            min_pivot,
            max_pivot,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.min_pivot == 0.0 && self.lu.nrows() > 0
    }

    /// Ratio of largest to smallest pivot magnitude; a cheap conditioning hint.
    pub fn pivot_ratio(&self) -> f64 {
        if self.min_pivot == 0.0 {
            f64::INFINITY
        } else {
            self.max_pivot / self.min_pivot
        }
    }

    pub fn det(&self) -> Complex64 {
        let n = self.lu.nrows();
        let mut d = Complex64::new(if self.swaps % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.lu.nrows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        if self.is_singular() {
            return Err(Error::SingularSystem("zero pivot in LU".into()));
        }
        let mut x = b.to_vec();
        // row interchanges first (the stored L rows moved with every swap),
        // then clean forward substitution against the unit-lower factor
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for k in 0..n {
            let xk = x[k];
            if xk.norm() == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let sub = self.lu[(i, k)] * xk;
                x[i] -= sub;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..n {
                s -= self.lu[(k, j)] * x[j];
            }
            x[k] = s / self.lu[(k, k)];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_small_complex_system() {
        let a = CMatrix::from_fn(3, 3, |i, j| {
            c(1.0 / (1.0 + i as f64 + j as f64), (i as f64 - j as f64) * 0.3)
        });
        let x_true = vec![c(1.0, -1.0), c(2.0, 0.5), c(-0.25, 3.0)];
        let b = a.matvec(&x_true);
        let lu = Lu::factor(&a);
        let x = lu.solve(&b).unwrap();
        let diff: Vec<Complex64> = x.iter().zip(&x_true).map(|(u, v)| u - v).collect();
        assert!(norm2(&diff) < 1e-12 * norm2(&x_true));
    }

    #[test]
    fn detects_exact_singularity() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(1.0, 0.0);
        a[(0, 1)] = c(2.0, 0.0);
        a[(1, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(4.0, 0.0);
        let lu = Lu::factor(&a);
        assert!(lu.is_singular());
        assert!(lu.solve(&[c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(lu.det().norm() < 1e-15);
    }

    #[test]
    fn determinant_of_permuted_identity() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 0)] = c(1.0, 0.0);
        let lu = Lu::factor(&a);
        assert_eq!(lu.det(), c(-1.0, 0.0));
    }
}
