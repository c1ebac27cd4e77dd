//! Dense nonsymmetric complex eigensolver: balancing, Householder
//! Hessenberg reduction and implicit single-shift QR with Wilkinson
//! shifts.
//!
//! Active 2x2 blocks are closed by the exact quadratic formula; this keeps
//! e.g. an exactly nilpotent 2x2 at eigenvalues 0 instead of ±√ε.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct EigOptions {
    /// Diagonal (power-of-two) balancing before reduction. Improves root
    /// finding on companion matrices; leave off when a backward-error
    /// certificate in the original coordinates is wanted.
    pub balance: bool,
    /// Accumulate the unitary factor and report the Schur residual
    /// `‖Q T Qᴴ − A‖_F / ‖A‖_F`.
    pub certify: bool,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions {
            balance: false,
            certify: true,
        }
    }
}

pub struct SchurEig {
    pub values: Vec<Complex64>,
    /// Relative Schur residual; `None` when not accumulated or when
    /// balancing changed coordinates.
    pub backward_error: Option<f64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// All eigenvalues of a square complex matrix.
pub fn eigenvalues(a: &CMatrix, opts: EigOptions) -> Result<SchurEig> {
    assert!(a.is_square(), "eigenvalues: matrix must be square");
    let n = a.nrows();
    if n == 0 {
        return Ok(SchurEig {
            values: vec![],
            backward_error: Some(0.0),
        });
    }
    let mut h = a.clone();
    if opts.balance {
        balance(&mut h);
    }
    let certify = opts.certify && !opts.balance;
    let mut q = if certify {
        Some(CMatrix::identity(n))
    } else {
        None
    };

    hessenberg(&mut h, q.as_mut());
    qr_iterate(&mut h, q.as_mut())?;

    let values: Vec<Complex64> = (0..n).map(|i| h[(i, i)]).collect();
    let backward_error = q.map(|qm| {
        let recon = qm.matmul(&h).matmul(&qm.adjoint());
        let denom = a.frobenius_norm().max(f64::MIN_POSITIVE);
        recon.sub(a).frobenius_norm() / denom
    });
    Ok(SchurEig {
        values,
        backward_error,
    })
}

/// Parlett–Reinsch balancing (scaling only, radix 2).
fn balance(h: &mut CMatrix) {
    let n = h.nrows();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    r += h[(i, j)].norm();
                    c += h[(j, i)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = c + r;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / radix {
                f *= radix;
                cc *= sqrdx;
            }
            while cc > rr * radix {
                f /= radix;
                cc /= sqrdx;
            }
            let _ = rr;
            rr = r / f;
            cc = c * f;
            if cc + rr < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    h[(i, j)] = h[(i, j)] * g;
                }
                for j in 0..n {
                    h[(j, i)] = h[(j, i)] * f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form; `q` (when present)
/// accumulates the similarity so that `A = Q H Qᴴ`.
fn hessenberg(h: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let mut sigma2 = 0.0;
        for i in k + 1..n {
            sigma2 += h[(i, k)].norm_sqr();
        }
        let sigma = sigma2.sqrt();
        if sigma == 0.0 {
            continue;
        }
        let alpha = h[(k + 1, k)];
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            ONE
        };
        // v = x + phase·σ·e₁, reflector P = I − β v vᴴ maps x to −phase·σ·e₁
        let m = n - k - 1;
        for i in 0..m {
            v[i] = h[(k + 1 + i, k)];
        }
        v[0] += phase * sigma;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // left: rows k+1..n over columns k..n
        for col in k..n {
            let mut w = ZERO;
            for i in 0..m {
                w += v[i].conj() * h[(k + 1 + i, col)];
            }
            w *= beta;
            for i in 0..m {
                let upd = v[i] * w;
                h[(k + 1 + i, col)] -= upd;
            }
        }
        // restore the exact Householder image in column k
        h[(k + 1, k)] = -phase * sigma;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
        // right: all rows over columns k+1..n
        for row in 0..n {
            let mut w = ZERO;
            for i in 0..m {
                w += h[(row, k + 1 + i)] * v[i];
            }
            w *= beta;
            for i in 0..m {
                let upd = w * v[i].conj();
                h[(row, k + 1 + i)] -= upd;
            }
        }
        if let Some(qm) = q.as_deref_mut() {
            for row in 0..n {
                let mut w = ZERO;
                for i in 0..m {
                    w += qm[(row, k + 1 + i)] * v[i];
                }
                w *= beta;
                for i in 0..m {
                    let upd = w * v[i].conj();
                    qm[(row, k + 1 + i)] -= upd;
                }
            }
        }
    }
}

/// Complex Givens rotation `[[c, s], [−s̄, c]]` with real `c` sending
/// `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO);
    }
    if f == ZERO {
        // (0, g) → (|g|, 0)
        return (0.0, g.conj() / g.norm());
    }
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = f.norm() / d;
    let s = (f / f.norm()) * g.conj() / d;
    (c, s)
}

fn apply_left(h: &mut CMatrix, i: usize, c: f64, s: Complex64, col_start: usize) {
    let n = h.ncols();
    for col in col_start..n {
        let a = h[(i, col)];
        let b = h[(i + 1, col)];
        h[(i, col)] = c * a + s * b;
        h[(i + 1, col)] = -s.conj() * a + c * b;
    }
}

fn apply_right(h: &mut CMatrix, i: usize, c: f64, s: Complex64, row_end: usize) {
    for row in 0..=row_end {
        let a = h[(row, i)];
        let b = h[(row, i + 1)];
        h[(row, i)] = c * a + s.conj() * b;
        h[(row, i + 1)] = -s * a + c * b;
    }
}

/// Eigenvalues of `[[a, b], [c, d]]` by the stable quadratic formula.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    // pick the sign avoiding cancellation in half_tr ± disc
    let root = if (half_tr.re * disc.re + half_tr.im * disc.im) >= 0.0 {
        half_tr + disc
    } else {
        half_tr - disc
    };
    if root == ZERO {
        (ZERO, ZERO)
    } else {
        (root, det / root)
    }
}

fn qr_iterate(h: &mut CMatrix, mut q: Option<&mut CMatrix>) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let floor = 1e-2 * eps * hnorm;
    let total_cap = 60 * n;
    let mut total_iters = 0usize;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;

    loop {
        // scan for a negligible subdiagonal entry inside the active window
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let thr = if local > 0.0 { eps * local } else { eps * hnorm };
            if sub <= thr.max(floor) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            // 1x1 converged
            since_deflation = 0;
            if hi == 0 {
                return Ok(());
            }
            hi -= 1;
            continue;
        }

        if lo + 1 == hi {
            close_2x2(h, q.as_deref_mut(), lo);
            since_deflation = 0;
            if lo == 0 {
                return Ok(());
            }
            hi = lo - 1;
            continue;
        }

        if total_iters >= total_cap {
            return Err(Error::NonConvergence(format!(
                "QR iteration cap {total_cap} reached with active block {}..{}",
                lo, hi
            )));
        }
        total_iters += 1;
        since_deflation += 1;

        // shift
        let mu = if since_deflation % 12 == 0 {
            // exceptional shift: deterministic non-real kick off cycles
            let mag = h[(hi, hi - 1)].norm() + h[(hi - 1, hi - 2)].norm();
            h[(hi, hi)] + Complex64::new(0.75, 0.433) * mag
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let (e1, e2) = eig2(a, b, c, d);
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };

        // implicit single-shift bulge chase over [lo, hi]
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for i in lo..hi {
            let (c, s) = givens(x, y);
            let col_start = if i == lo { lo } else { i - 1 };
            apply_left(h, i, c, s, col_start);
            apply_right(h, i, c, s, (i + 2).min(hi));
            if let Some(qm) = q.as_deref_mut() {
                let rows = qm.nrows() - 1;
                apply_right(qm, i, c, s, rows);
            }
            if i + 1 < hi {
                x = h[(i + 1, i)];
                y = h[(i + 2, i)];
            }
        }
    }
}

/// Resolve an active 2x2 block exactly and rotate it to triangular form.
fn close_2x2(h: &mut CMatrix, mut q: Option<&mut CMatrix>, p: usize) {
    let a = h[(p, p)];
    let b = h[(p, p + 1)];
    let c = h[(p + 1, p)];
    let d = h[(p + 1, p + 1)];
    if c == ZERO {
        return;
    }
    let (e1, e2) = eig2(a, b, c, d);
    // eigenvector for e1: rows of (M − e1) are dependent
    let v1 = (b, e1 - a);
    let v2 = (e1 - d, c);
    let (f, g) = if v1.0.norm_sqr() + v1.1.norm_sqr() >= v2.0.norm_sqr() + v2.1.norm_sqr() {
        v1
    } else {
        v2
    };
    if f == ZERO && g == ZERO {
        // diagonal block already
        return;
    }
    let (cr, sr) = givens(f, g);
    apply_left(h, p, cr, sr, 0);
    apply_right(h, p, cr, sr, h.nrows() - 1);
    if let Some(qm) = q.as_deref_mut() {
        let rows = qm.nrows() - 1;
        apply_right(qm, p, cr, sr, rows);
    }
    // exact cleanup: G v ∝ e₁ makes e₁ an eigenvector of the rotated block
    h[(p + 1, p)] = ZERO;
    h[(p, p)] = e1;
    h[(p + 1, p + 1)] = e2;
}
