//! Singular values (and optional singular vectors) via one-sided Jacobi.
//!
//! One-sided Jacobi computes small singular values with high relative
//! accuracy, which matters for numerical-rank decisions; the usual
//! Gram-matrix shortcut would square the condition number.

use num_complex::Complex64;

use super::CMatrix;

pub struct Svd {
    /// Left singular vectors as matrix columns (zero columns where σ = 0).
    pub u: Option<CMatrix>,
    /// Singular values, descending.
    pub s: Vec<f64>,
    /// Right singular vectors as matrix columns.
    pub v: Option<CMatrix>,
}

const MAX_SWEEPS: usize = 64;

/// One-sided Jacobi on the columns of `a` (any shape; internally works on
/// the tall orientation). `want_uv` additionally accumulates U and V; with
/// `want_uv = false` only singular values are produced.
pub fn svd(a: &CMatrix, want_uv: bool) -> Svd {
    // Work on the tall orientation so the rotated columns stay well shaped.
    let transposed = a.nrows() < a.ncols();
    let work = if transposed { a.adjoint() } else { a.clone() };
    let m = work.nrows();
    let n = work.ncols();

    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)]).collect())
        .collect();
    let mut vmat = if want_uv {
        Some(CMatrix::identity(n))
    } else {
        None
    };

    let eps = f64::EPSILON;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|v| v.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|v| v.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Unitary 2x2 diagonalizing the column Gram [[α, γ], [γ̄, β]].
                let u = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let su = s * u;
                let suc = s * u.conj();
                for i in 0..m {
                    let xp = cols[p][i];
                    let xq = cols[q][i];
                    cols[p][i] = c * xp - suc * xq;
                    cols[q][i] = su * xp + c * xq;
                }
                if let Some(vm) = vmat.as_mut() {
                    for i in 0..n {
                        let vp = vm[(i, p)];
                        let vq = vm[(i, q)];
                        vm[(i, p)] = c * vp - suc * vq;
                        vm[(i, q)] = su * vp + c * vq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols
        .iter()
        .map(|cv| cv.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    if !want_uv {
        return Svd { u: None, s, v: None };
    }

    let mut umat = CMatrix::zeros(m, n);
    for (k, &j) in order.iter().enumerate() {
        if norms[j] > 0.0 {
            for i in 0..m {
                umat[(i, k)] = cols[j][i] / norms[j];
            }
        }
    }
    let vsrc = vmat.unwrap();
    let mut vout = CMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            vout[(i, k)] = vsrc[(i, j)];
        }
    }
    if transposed {
        // a = (work)^H = V Σ U^H: swap the roles back.
        Svd {
            u: Some(vout),
            s,
            v: Some(umat),
        }
    } else {
        Svd {
            u: Some(umat),
            s,
            v: Some(vout),
        }
    }
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    svd(a, false).s
}

/// Minimal-norm least-squares solve through the SVD, dropping singular
/// values `σ ≤ rel_tol·σ_max`.
pub fn pinv_solve(a: &CMatrix, b: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
    assert_eq!(a.nrows(), b.len());
    let dec = svd(a, true);
    let u = dec.u.unwrap();
    let v = dec.v.unwrap();
    let smax = dec.s.first().copied().unwrap_or(0.0);
    let n = a.ncols();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (k, &sk) in dec.s.iter().enumerate() {
        if sk <= rel_tol * smax || sk == 0.0 {
            continue;
        }
        // coefficient ⟨b, u_k⟩ / σ_k
        let mut coef = Complex64::new(0.0, 0.0);
        for i in 0..b.len() {
            coef += u[(i, k)].conj() * b[i];
        }
        coef /= sk;
        for i in 0..n {
            x[i] += coef * v[(i, k)];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_singular_values() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(0.0, -3.0);
        a[(1, 1)] = c(1.0, 0.0);
        a[(2, 2)] = c(0.0, 2.0);
        let s = singular_values(&a);
        assert!((s[0] - 3.0).abs() < 1e-14);
        assert!((s[1] - 2.0).abs() < 1e-14);
        assert!((s[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn factorization_reconstructs_matrix() {
        let a = CMatrix::from_fn(4, 3, |i, j| {
            c(((i * 3 + j) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64)
        });
        let dec = svd(&a, true);
        let u = dec.u.unwrap();
        let v = dec.v.unwrap();
        let mut sigma = CMatrix::zeros(3, 3);
        for (k, &sk) in dec.s.iter().enumerate() {
            sigma[(k, k)] = c(sk, 0.0);
        }
        let recon = u.matmul(&sigma).matmul(&v.adjoint());
        assert!(recon.sub(&a).frobenius_norm() < 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn rank_one_matrix_has_one_singular_value() {
        let x = [c(1.0, 1.0), c(2.0, -1.0), c(0.0, 3.0)];
        let y = [c(0.5, 0.0), c(0.0, 1.0)];
        let a = CMatrix::from_fn(3, 2, |i, j| x[i] * y[j]);
        let s = singular_values(&a);
        assert!(s[0] > 1.0);
        assert!(s[1] <= 1e-14 * s[0]);
    }

    #[test]
    fn pinv_solve_consistent_system() {
        let a = CMatrix::from_fn(3, 3, |i, j| c((i + j) as f64 + 1.0, i as f64 - j as f64));
        let x_true = vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
        let b = a.matvec(&x_true);
        let x = pinv_solve(&a, &b, 1e-13);
        let r: Vec<Complex64> = a
            .matvec(&x)
            .iter()
            .zip(&b)
            .map(|(u, v)| u - v)
            .collect();
        assert!(norm2(&r) < 1e-10 * norm2(&b));
    }
}
