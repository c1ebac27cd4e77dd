//! The diagonal base operator `A`, the perturbation pair `(φ, ψ)` and
//! finite dense realizations of `B = A + ⟨·, φ⟩ψ`.
//!
//! Index windows stand in for the infinite index sets ℕ/ℤ: positions
//! `0..len` carry integer labels `index_offset + position`. Truncation is
//! exact whenever the pair coefficients vanish outside the window, because
//! the spanned coordinate subspace is then invariant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{norm2, CMatrix, Lu};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Unperturbed operator: strictly increasing simple real eigenvalues on an
/// integer index window.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseOperator {
    lambdas: Vec<f64>,
    index_offset: i64,
    gap_d: Option<f64>,
}

impl BaseOperator {
    pub fn new(lambdas: Vec<f64>, index_offset: i64, gap_d: Option<f64>) -> Result<Self> {
        if lambdas.is_empty() || lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::EigenvaluesNotIncreasing);
        }
        for w in lambdas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::EigenvaluesNotIncreasing);
            }
        }
        if let Some(d) = gap_d {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::GapViolation {
                    declared: d,
                    actual: min_consecutive_gap(&lambdas),
                });
            }
            let actual = min_consecutive_gap(&lambdas);
            if lambdas.len() > 1 && actual < d {
                return Err(Error::GapViolation {
                    declared: d,
                    actual,
                });
            }
        }
        Ok(BaseOperator {
            lambdas,
            index_offset,
            gap_d,
        })
    }

    /// Convenience: `λₙ = n` on the window `lo..=hi`.
    pub fn integer_window(lo: i64, hi: i64) -> Self {
        assert!(hi >= lo);
        BaseOperator {
            lambdas: (lo..=hi).map(|n| n as f64).collect(),
            index_offset: lo,
            gap_d: Some(1.0),
        }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn lambda(&self, position: usize) -> f64 {
        self.lambdas[position]
    }

    pub fn index_offset(&self) -> i64 {
        self.index_offset
    }

    pub fn gap_d(&self) -> Option<f64> {
        self.gap_d
    }

    /// Integer index labels of the window positions.
    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.lambdas.len() as i64).map(move |p| self.index_offset + p)
    }

    pub fn index_of_position(&self, position: usize) -> i64 {
        self.index_offset + position as i64
    }

    pub fn position_of_index(&self, index: i64) -> Option<usize> {
        let p = index - self.index_offset;
        if p >= 0 && (p as usize) < self.lambdas.len() {
            Some(p as usize)
        } else {
            None
        }
    }

    /// Smallest consecutive eigenvalue gap in the window.
    pub fn min_gap(&self) -> f64 {
        min_consecutive_gap(&self.lambdas)
    }

    /// Spread of the window eigenvalues, floored at 1 for tolerance scaling.
    pub fn span(&self) -> f64 {
        let s = self.lambdas.last().unwrap() - self.lambdas.first().unwrap();
        s.max(1.0)
    }

    /// Position of the eigenvalue nearest to `x` and its distance.
    pub fn nearest(&self, x: Complex64) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for (p, &l) in self.lambdas.iter().enumerate() {
            let d = (x - Complex64::new(l, 0.0)).norm();
            if d < best.1 {
                best = (p, d);
            }
        }
        best
    }
}

fn min_consecutive_gap(lambdas: &[f64]) -> f64 {
    lambdas
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Coefficient sequences of `φ` and `ψ` in the eigenbasis of the base
/// operator; both must be nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationPair {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl PerturbationPair {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        if a.iter().all(|v| *v == ZERO) {
            return Err(Error::ZeroVector("phi"));
        }
        if b.iter().all(|v| *v == ZERO) {
            return Err(Error::ZeroVector("psi"));
        }
        Ok(PerturbationPair { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    /// Products `cₙ = conj(aₙ)·bₙ` over the whole window.
    pub fn products(&self) -> Vec<Complex64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| a.conj() * b)
            .collect()
    }

    /// `‖φ‖·‖ψ‖`.
    pub fn norm_product(&self) -> f64 {
        norm2(&self.a) * norm2(&self.b)
    }
}

/// Partition of the window into `I₀ = {n : aₙbₙ = 0}` and its complement
/// `I₁` (positions, ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSplit {
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
}

/// Dense realization: `B[i][k] = λᵢ δᵢₖ + bᵢ conj(aₖ)`.
pub fn assemble_dense(base: &BaseOperator, pair: &PerturbationPair) -> Result<CMatrix> {
    check_dims(base, pair)?;
    let n = base.len();
    let mut m = CMatrix::from_fn(n, n, |i, k| pair.b[i] * pair.a[k].conj());
    for i in 0..n {
        m[(i, i)] += Complex64::new(base.lambda(i), 0.0);
    }
    Ok(m)
}

/// Classify positions by the product `|aₙ·bₙ|` against the relative
/// threshold `tol·‖a‖‖b‖/len`. `tol = 0` demands exact zeros.
pub fn split_indices(pair: &PerturbationPair, tol: f64) -> IndexSplit {
    assert!(tol >= 0.0, "split tolerance must be nonnegative");
    let scale = pair.norm_product() / pair.len() as f64;
    let thr = tol * scale;
    let mut i0 = Vec::new();
    let mut i1 = Vec::new();
    for (n, (a, b)) in pair.a.iter().zip(&pair.b).enumerate() {
        if (a * b).norm() <= thr {
            i0.push(n);
        } else {
            i1.push(n);
        }
    }
    IndexSplit { i0, i1 }
}

/// One eigenvalue inherited verbatim from the base operator under the H⁰
/// reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovedEigenvalue {
    pub position: usize,
    pub index: i64,
    pub lambda: f64,
}

/// Drop every position with `aₖ = bₖ = 0`; on the complement `A` and `B`
/// act identically to the original operators, and each removed `λₖ` is an
/// eigenvalue of `B` as it stands.
///
/// Coefficients count as zero below `1e-14` of the largest magnitude in
/// their sequence. The reduced window keeps the original `index_offset`
/// purely as a label.
pub fn reduce_h0(
    base: &BaseOperator,
    pair: &PerturbationPair,
) -> Result<(BaseOperator, PerturbationPair, Vec<RemovedEigenvalue>)> {
    check_dims(base, pair)?;
    let amax = pair.a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bmax = pair.b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut removed = Vec::new();
    let mut lambdas = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for p in 0..base.len() {
        let azero = pair.a[p].norm() <= 1e-14 * amax;
        let bzero = pair.b[p].norm() <= 1e-14 * bmax;
        if azero && bzero {
            removed.push(RemovedEigenvalue {
                position: p,
                index: base.index_of_position(p),
                lambda: base.lambda(p),
            });
        } else {
            lambdas.push(base.lambda(p));
            a.push(pair.a[p]);
            b.push(pair.b[p]);
        }
    }
    let reduced_base = BaseOperator::new(lambdas, base.index_offset(), base.gap_d())?;
    let reduced_pair = PerturbationPair::new(a, b)?;
    Ok((reduced_base, reduced_pair, removed))
}

/// Truncated periodic-derivative model: `λₙ = n` on `−window..=window`,
/// `φ` the Dirichlet kernel of order `m` and `ψ` an odd sine polynomial
/// chosen so that `0` becomes an eigenvalue of algebraic multiplicity
/// `2m+1` while every `λₙ` with `|n| > m` stays simple and unmoved.
///
/// The coefficients solve `Σₖ dₖ/k^(2l+1) = f_l` for `l = 0..=m` with
/// `f₀ = −i/(2π)`, `f₁ = … = f_{m−1} = 0` and `f_m = −i·d₀/√(2π)`.
/// Truncation is exact since all coefficients vanish for `|n| > m`.
pub fn periodic_derivative(m: usize, window: i64) -> Result<(BaseOperator, PerturbationPair)> {
    if m == 0 {
        return Err(Error::InconsistentInput(
            "periodic-derivative model needs m >= 1".into(),
        ));
    }
    if window < m as i64 {
        return Err(Error::InconsistentInput(format!(
            "window {window} smaller than support radius {m}"
        )));
    }
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    let msize = m + 1;
    // unknowns (d₀, d₁, …, d_m); the last row moves the d₀ term left
    let mut sys = CMatrix::zeros(msize, msize);
    let mut rhs = vec![ZERO; msize];
    for l in 0..=m {
        for k in 1..=m {
            sys[(l, k)] = Complex64::new(1.0 / (k as f64).powi(2 * l as i32 + 1), 0.0);
        }
    }
    sys[(m, 0)] = Complex64::new(0.0, 1.0 / sqrt_2pi);
    rhs[0] = Complex64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI));

    let lu = Lu::factor(&sys);
    if lu.is_singular() {
        return Err(Error::SingularSystem(
            "periodic-derivative coefficient system".into(),
        ));
    }
    let d = lu.solve(&rhs)?;

    let base = BaseOperator::integer_window(-window, window);
    let len = base.len();
    let mut a = vec![ZERO; len];
    let mut b = vec![ZERO; len];
    for n in -(m as i64)..=(m as i64) {
        let p = base.position_of_index(n).unwrap();
        a[p] = Complex64::new(sqrt_2pi, 0.0);
        if n > 0 {
            // bₙ = √(2π)·dₙ/(2i)
            b[p] = Complex64::new(sqrt_2pi, 0.0) * d[n as usize] / Complex64::new(0.0, 2.0);
        }
    }
    for n in 1..=m as i64 {
        let pos_neg = base.position_of_index(-n).unwrap();
        let pos = base.position_of_index(n).unwrap();
        b[pos_neg] = -b[pos];
    }
    let pair = PerturbationPair::new(a, b)?;
    Ok((base, pair))
}

fn check_dims(base: &BaseOperator, pair: &PerturbationPair) -> Result<()> {
    if base.len() != pair.len() {
        return Err(Error::DimensionMismatch {
            expected: base.len(),
            got: pair.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn assemble_matches_entry_formula() {
        let base = BaseOperator::new(vec![1.0, 2.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(1.0), re(-4.0)]).unwrap();
        let m = assemble_dense(&base, &pair).unwrap();
        assert_eq!(m[(0, 0)], re(2.0));
        assert_eq!(m[(0, 1)], re(1.0));
        assert_eq!(m[(1, 0)], re(-4.0));
        assert_eq!(m[(1, 1)], re(-2.0));
    }

    #[test]
    fn zero_phi_is_rejected() {
        assert!(matches!(
            PerturbationPair::new(vec![ZERO, ZERO], vec![re(1.0), re(1.0)]),
            Err(Error::ZeroVector("phi"))
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let base = BaseOperator::new(vec![5.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(0.0), re(1.0)]).unwrap();
        assert!(matches!(
            assemble_dense(&base, &pair),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn split_with_exact_zeros() {
        let pair = PerturbationPair::new(
            vec![re(1.0), re(0.0), re(1.0)],
            vec![re(1.0), re(1.0), re(0.0)],
        )
        .unwrap();
        let split = split_indices(&pair, 0.0);
        assert_eq!(split.i0, vec![1, 2]);
        assert_eq!(split.i1, vec![0]);

        let all_on = PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(1.0), re(1.0)]).unwrap();
        assert!(split_indices(&all_on, 0.0).i0.is_empty());
    }

    #[test]
    fn split_with_relative_threshold() {
        let pair =
            PerturbationPair::new(vec![re(1.0), re(1e-300)], vec![re(1.0), re(1.0)]).unwrap();
        let split = split_indices(&pair, 1e-14);
        assert_eq!(split.i0, vec![1]);
        assert_eq!(split.i1, vec![0]);
    }

    #[test]
    fn reduce_h0_removes_common_zeros() {
        let base = BaseOperator::new(vec![3.0, 4.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![ZERO, re(1.0)], vec![ZERO, re(1.0)]).unwrap();
        let (rbase, rpair, removed) = reduce_h0(&base, &pair).unwrap();
        assert_eq!(rbase.lambdas(), &[4.0]);
        assert_eq!(rpair.len(), 1);
        assert_eq!(removed.len(), 1);
        assert_eq!(removed[0].lambda, 3.0);
    }

    #[test]
    fn reduce_h0_without_common_zeros_is_identity() {
        let base = BaseOperator::new(vec![1.0, 2.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), ZERO], vec![ZERO, re(1.0)]).unwrap();
        let (rbase, rpair, removed) = reduce_h0(&base, &pair).unwrap();
        assert_eq!(rbase, base);
        assert_eq!(rpair, pair);
        assert!(removed.is_empty());
    }

    #[test]
    fn perturbation_has_rank_at_most_one() {
        let base = BaseOperator::new(vec![-1.0, 0.5, 2.0, 7.0], 3, None).unwrap();
        let pair = PerturbationPair::new(
            vec![c(1.0, 0.5), c(0.0, -2.0), re(3.0), c(-1.0, 1.0)],
            vec![re(2.0), c(1.0, 1.0), ZERO, c(0.0, -1.0)],
        )
        .unwrap();
        let b = assemble_dense(&base, &pair).unwrap();
        let mut diff = b.clone();
        for i in 0..4 {
            diff[(i, i)] -= re(base.lambda(i));
        }
        let s = singular_values(&diff);
        assert!(s[1] <= 1e-12 * s[0].max(1.0));
    }

    #[test]
    fn periodic_derivative_m1_coefficients() {
        let (base, pair) = periodic_derivative(1, 2).unwrap();
        assert_eq!(base.len(), 5);
        assert_eq!(base.index_offset(), -2);
        let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
        let p1 = base.position_of_index(1).unwrap();
        let pm1 = base.position_of_index(-1).unwrap();
        let p0 = base.position_of_index(0).unwrap();
        // hand solution: d₁ = −i/(2π), d₀ = 1/√(2π)
        // ⇒ b₁ = −√(2π)/(4π), b₋₁ = +√(2π)/(4π), b₀ = 0
        let want_b1 = -sqrt_2pi / (4.0 * std::f64::consts::PI);
        assert!((pair.b()[p1] - re(want_b1)).norm() < 1e-14);
        assert!((pair.b()[pm1] - re(-want_b1)).norm() < 1e-14);
        assert_eq!(pair.b()[p0], ZERO);
        assert!((pair.a()[p0] - re(sqrt_2pi)).norm() < 1e-14);
        // products c±1 = ∓1/2, c₀ = 0
        let c = pair.products();
        assert!((c[p1] - re(-0.5)).norm() < 1e-14);
        assert!((c[pm1] - re(0.5)).norm() < 1e-14);
        assert_eq!(c[p0], ZERO);
        // outside the support everything vanishes: truncation is exact
        let p2 = base.position_of_index(2).unwrap();
        assert_eq!(pair.a()[p2], ZERO);
        assert_eq!(pair.b()[p2], ZERO);
    }

    #[test]
    fn periodic_derivative_rejects_degenerate_order() {
        assert!(periodic_derivative(0, 3).is_err());
        assert!(periodic_derivative(3, 2).is_err());
    }
}
