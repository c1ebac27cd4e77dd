//! Dense complex linear algebra kernels: matrices, LU, Jacobi SVD and a
//! Hessenberg/QR eigensolver.
//!
//! Everything here is self-contained and targets moderate dimensions
//! (the dense oracle is capped at 512); no external BLAS/LAPACK.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

pub mod eig;
pub mod lu;
pub mod svd;

pub use eig::{eigenvalues, EigOptions, SchurEig};
pub use lu::Lu;
pub use svd::{singular_values, svd, Svd};

/// Inner product `⟨x, y⟩ = Σ xₖ conj(yₖ)`, linear in the first argument.
///
/// This convention is used consistently across the crate.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(xi, yi)| xi * yi.conj()).sum()
}

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMatrix {
            nrows,
            ncols,
            data: vec![Complex64::new(0.0, 0.0); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(
        nrows: usize,
        ncols: usize,
        mut f: F,
    ) -> Self {
        let mut m = CMatrix::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        (0..self.nrows)
            .map(|i| self.row(i).iter().zip(x).map(|(m, v)| m * v).sum())
            .collect()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.ncols, other.nrows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let base = i * out.ncols;
                for j in 0..other.ncols {
                    out.data[base + j] += aik * orow[j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols, other.ncols);
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o -= v;
        }
        out
    }

    /// `self − z·Id` (square matrices).
    pub fn shifted(&self, z: Complex64) -> CMatrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.nrows {
            out[(i, i)] -= z;
        }
        out
    }

    pub fn scale(&mut self, z: Complex64) {
        for v in &mut self.data {
            *v *= z;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Operator 2-norm via the largest singular value.
    pub fn norm2(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[i * self.ncols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[i * self.ncols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_is_linear_in_first_argument() {
        let x = vec![c(1.0, 2.0), c(0.0, -1.0)];
        let y = vec![c(3.0, 0.0), c(1.0, 1.0)];
        // ⟨x,y⟩ = (1+2i)·3 + (−i)(1−i) = 3+6i + (−1−i) = 2+5i
        assert_eq!(inner(&x, &y), c(2.0, 5.0));
    }

    #[test]
    fn matmul_and_matvec_agree() {
        let a = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i * j) as f64));
        let x = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 2.0)];
        let mut xmat = CMatrix::zeros(3, 1);
        for i in 0..3 {
            xmat[(i, 0)] = x[i];
        }
        let y = a.matvec(&x);
        let ymat = a.matmul(&xmat);
        for i in 0..3 {
            assert!((y[i] - ymat[(i, 0)]).norm() < 1e-14);
        }
    }
}
