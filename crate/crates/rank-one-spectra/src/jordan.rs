//! Jordan chains and multiplicity certificates for eigenvalues of the
//! perturbed operator.
//!
//! A chain `y₀, …, y_m` at `λ` satisfies `(B−λ)y₀ = 0` and
//! `(B−λ)yₖ = y_{k−1}`. Three constructions cover all eigenvalues:
//!
//! * off the base spectrum: `yₖ = (A−λ)^{−(1+k)}ψ`, one vector per zero
//!   order of the characteristic function;
//! * kept eigenvalue `λₙ` with `aₙ = 0`: the chain starts at the basis
//!   vector `vₙ` and continues with `−(1/bₙ)(Aₙ−λₙ)^{−k}Pₙψ`;
//! * kept eigenvalue `λₙ` with `bₙ = 0`: resolvent powers of the
//!   restriction, with a `vₙ` component entering only at the top vector.
//!
//! `Pₙ` and `Aₙ` act by deleting coordinate `n`, exact for a diagonal `A`.

use num_complex::Complex64;

use crate::charfn::{CharFn, ORDER_TOL, SPLIT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{inner, norm2, CMatrix};
use crate::operator::{assemble_dense, split_indices, BaseOperator, PerturbationPair};
use crate::oracle;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which of the three chain constructions produced a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainCase {
    /// Eigenvalue off the base spectrum.
    ResolventPoint,
    /// Kept eigenvalue with `aₙ = 0` (basis vector heads the chain).
    Sigma0CaseA,
    /// Kept eigenvalue with `bₙ = 0` (basis vector tops the chain).
    Sigma0CaseB,
}

#[derive(Debug, Clone)]
pub struct JordanChain {
    pub eigenvalue: Complex64,
    /// `y₀, …, y_m`, normalized so that `‖y₀‖ = 1`.
    pub vectors: Vec<Vec<Complex64>>,
    pub case: ChainCase,
    /// Link residuals against the dense realization: entry 0 is
    /// `‖(B−λ)y₀‖`, entry `k` is `‖(B−λ)yₖ − y_{k−1}‖/max(‖yₖ‖,‖y_{k−1}‖)`.
    pub residuals: Vec<f64>,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Multiplicity bookkeeping for one eigenvalue, cross-checked against the
/// dense oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityCertificate {
    pub eigenvalue: Complex64,
    pub geometric: usize,
    pub algebraic: usize,
    pub f_zero_order: usize,
    pub sigma0_member: bool,
}

/// Eigenvector(s) with residual certificates.
#[derive(Debug, Clone)]
pub struct GeometricCertificate {
    pub multiplicity: usize,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

fn charfn_of(base: &BaseOperator, pair: &PerturbationPair) -> CharFn {
    let split = split_indices(pair, SPLIT_TOL);
    CharFn::from_pair(base, pair, &split)
}

fn normalize_chain(vectors: &mut [Vec<Complex64>]) {
    let scale = norm2(&vectors[0]);
    if scale > 0.0 {
        for v in vectors.iter_mut() {
            for x in v.iter_mut() {
                *x /= scale;
            }
        }
    }
}

fn link_residuals(b: &CMatrix, z: Complex64, vectors: &[Vec<Complex64>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(vectors.len());
    for (k, y) in vectors.iter().enumerate() {
        let mut r = b.matvec(y);
        for (ri, yi) in r.iter_mut().zip(y) {
            *ri -= z * yi;
        }
        if k == 0 {
            out.push(norm2(&r) / norm2(y).max(f64::MIN_POSITIVE));
        } else {
            let prev = &vectors[k - 1];
            for (ri, pi) in r.iter_mut().zip(prev) {
                *ri -= pi;
            }
            let scale = norm2(y).max(norm2(prev)).max(f64::MIN_POSITIVE);
            out.push(norm2(&r) / scale);
        }
    }
    out
}

/// Geometric multiplicity of the eigenvalue `z`, with eigenvector
/// certificates. Returns 2 exactly when `z = λₙ` with `aₙ = bₙ = 0` and
/// `F(λₙ) = 0`; every other eigenvalue is geometrically simple.
pub fn geometric_multiplicity(
    base: &BaseOperator,
    pair: &PerturbationPair,
    z: Complex64,
    tol: f64,
) -> Result<GeometricCertificate> {
    let n = base.len();
    if pair.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pair.len(),
        });
    }
    let f = charfn_of(base, pair);
    let b = assemble_dense(base, pair)?;
    let span = base.span();
    let (pos, dist) = base.nearest(z);
    let on_spectrum = dist <= 1e-9 * span;

    let finish = |vectors: Vec<Vec<Complex64>>| -> Result<GeometricCertificate> {
        let mut residuals = Vec::new();
        for v in &vectors {
            let mut r = b.matvec(v);
            for (ri, vi) in r.iter_mut().zip(v) {
                *ri -= z * vi;
            }
            residuals.push(norm2(&r) / norm2(v).max(f64::MIN_POSITIVE));
        }
        Ok(GeometricCertificate {
            multiplicity: vectors.len(),
            eigenvectors: vectors,
            residuals,
        })
    };

    if on_spectrum {
        let lam = base.lambda(pos);
        let a_n = pair.a()[pos];
        let b_n = pair.b()[pos];
        let amax = pair.a().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let bmax = pair.b().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let azero = a_n.norm() <= tol * amax;
        let bzero = b_n.norm() <= tol * bmax;
        if !azero && !bzero {
            return Err(Error::NotAnEigenvalue { z });
        }
        let f_at = f.eval(Complex64::new(lam, 0.0))?;
        let f_scale = f.coefficients().iter().map(|c| c.norm()).sum::<f64>()
            / f.min_pole_distance(Complex64::new(lam, 0.0)).max(1e-300)
            + 1.0;
        let f_zero = f_at.norm() <= tol.max(ORDER_TOL) * f_scale;

        // w = (Aₙ − λₙ)⁻¹ ψ restricted to the complement of coordinate n
        let resolvent_restricted = || -> Vec<Complex64> {
            (0..n)
                .map(|p| {
                    if p == pos {
                        ZERO
                    } else {
                        pair.b()[p] / Complex64::new(base.lambda(p) - lam, 0.0)
                    }
                })
                .collect()
        };
        let mut basis_vec = vec![ZERO; n];
        basis_vec[pos] = Complex64::new(1.0, 0.0);

        if azero && bzero && f_zero {
            return finish(vec![basis_vec, resolvent_restricted()]);
        }
        if azero {
            return finish(vec![basis_vec]);
        }
        // bₙ = 0, aₙ ≠ 0: eigenvector (Aₙ−λₙ)⁻¹ψ − (F(λₙ)/conj(aₙ))·vₙ
        let mut v = resolvent_restricted();
        v[pos] = -f_at / a_n.conj();
        return finish(vec![v]);
    }

    // off the base spectrum: eigenvalue iff F(z) ≈ 0
    let f_at = f.eval(z)?;
    let local_scale = f.coefficients().iter().map(|c| c.norm()).sum::<f64>()
        / f.min_pole_distance(z).max(1e-300)
        + 1.0;
    if f_at.norm() > tol.max(ORDER_TOL) * local_scale {
        return Err(Error::NotAnEigenvalue { z });
    }
    let v: Vec<Complex64> = (0..n)
        .map(|p| pair.b()[p] / (Complex64::new(base.lambda(p), 0.0) - z))
        .collect();
    finish(vec![v])
}

/// Chain `yₖ = (A−z)^{−(1+k)}ψ` at an eigenvalue `z` off the base
/// spectrum; `num_vectors` may not exceed the certified zero order.
pub fn chain_resolvent_case(
    base: &BaseOperator,
    pair: &PerturbationPair,
    z: Complex64,
    num_vectors: usize,
) -> Result<JordanChain> {
    if num_vectors == 0 {
        return Err(Error::InconsistentInput("chain needs at least one vector".into()));
    }
    let f = charfn_of(base, pair);
    let order = f.zero_order(z, ORDER_TOL)?;
    if order == 0 {
        return Err(Error::NotAnEigenvalue { z });
    }
    if num_vectors > order {
        return Err(Error::ChainTooLong {
            requested: num_vectors,
            certified: order,
        });
    }
    let n = base.len();
    let mut vectors = Vec::with_capacity(num_vectors);
    for k in 0..num_vectors {
        vectors.push(
            (0..n)
                .map(|p| {
                    pair.b()[p] / (Complex64::new(base.lambda(p), 0.0) - z).powi(k as i32 + 1)
                })
                .collect::<Vec<_>>(),
        );
    }
    normalize_chain(&mut vectors);
    let b = assemble_dense(base, pair)?;
    let residuals = link_residuals(&b, z, &vectors);
    Ok(JordanChain {
        eigenvalue: z,
        vectors,
        case: ChainCase::ResolventPoint,
        residuals,
    })
}

/// Chain at a kept eigenvalue `λₙ` (position `n`, with exactly one of
/// `aₙ, bₙ` zero), truncated to at most `max_len` vectors.
pub fn chain_sigma0(
    base: &BaseOperator,
    pair: &PerturbationPair,
    position: usize,
    max_len: usize,
) -> Result<JordanChain> {
    let n = base.len();
    if position >= n {
        return Err(Error::InconsistentInput(format!(
            "position {position} outside window of length {n}"
        )));
    }
    if max_len == 0 {
        return Err(Error::InconsistentInput("chain needs at least one vector".into()));
    }
    let a_n = pair.a()[position];
    let b_n = pair.b()[position];
    let amax = pair.a().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bmax = pair.b().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let azero = a_n.norm() <= 1e-14 * amax;
    let bzero = b_n.norm() <= 1e-14 * bmax;
    if azero && bzero {
        return Err(Error::InconsistentInput(
            "both coefficients vanish; reduce the common kernel first".into(),
        ));
    }
    if !azero && !bzero {
        return Err(Error::NotAnEigenvalue {
            z: Complex64::new(base.lambda(position), 0.0),
        });
    }
    let lam = base.lambda(position);
    let lamc = Complex64::new(lam, 0.0);
    let f = charfn_of(base, pair);
    let order = f.zero_order(lamc, ORDER_TOL)?;

    // component p of (Aₙ − λₙ)^{−k} ψ restricted away from coordinate n
    let restricted_power = |k: i32| -> Vec<Complex64> {
        (0..n)
            .map(|p| {
                if p == position {
                    ZERO
                } else {
                    pair.b()[p] / Complex64::new(base.lambda(p) - lam, 0.0).powi(k)
                }
            })
            .collect()
    };

    let (case, mut vectors) = if azero {
        // y₀ = vₙ, yₖ = −(1/bₙ)(Aₙ−λₙ)^{−k}Pₙψ for k = 1..=order
        let mut vs = Vec::with_capacity(order + 1);
        let mut e = vec![ZERO; n];
        e[position] = Complex64::new(1.0, 0.0);
        vs.push(e);
        for k in 1..=order {
            let mut y = restricted_power(k as i32);
            let scale = -Complex64::new(1.0, 0.0) / b_n;
            for x in y.iter_mut() {
                *x *= scale;
            }
            vs.push(y);
        }
        (ChainCase::Sigma0CaseA, vs)
    } else {
        // y₀..y_{l−1} are plain restricted resolvent powers; the top vector
        // receives the vₙ component α_l = −F^{(l)}(λₙ)/(conj(aₙ)·l!)
        let mut vs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut y = restricted_power(k as i32 + 1);
            if k == order {
                let fl = f.scaled_derivative(lamc, order)?;
                y[position] = -fl / a_n.conj();
            }
            vs.push(y);
        }
        (ChainCase::Sigma0CaseB, vs)
    };

    vectors.truncate(max_len);
    normalize_chain(&mut vectors);
    let b = assemble_dense(base, pair)?;
    let residuals = link_residuals(&b, lamc, &vectors);
    Ok(JordanChain {
        eigenvalue: lamc,
        vectors,
        case,
        residuals,
    })
}

/// Replace `yₖ` by `ỹₖ = yₖ + c₁y_{k−1} + … + cₖy₀` (with `ỹ₀ = y₀`);
/// the result is again a chain for the same eigenvalue. Constants beyond
/// the chain length are ignored, missing ones count as zero.
pub fn shift_chain(
    base: &BaseOperator,
    pair: &PerturbationPair,
    chain: &JordanChain,
    constants: &[Complex64],
) -> Result<JordanChain> {
    let n = chain.vectors.first().map(|v| v.len()).unwrap_or(0);
    if n != base.len() {
        return Err(Error::DimensionMismatch {
            expected: base.len(),
            got: n,
        });
    }
    let mut vectors = chain.vectors.clone();
    for k in 1..vectors.len() {
        for i in 1..=k {
            let coef = constants.get(i - 1).copied().unwrap_or(ZERO);
            if coef == ZERO {
                continue;
            }
            for p in 0..n {
                let upd = coef * chain.vectors[k - i][p];
                vectors[k][p] += upd;
            }
        }
    }
    let b = assemble_dense(base, pair)?;
    let residuals = link_residuals(&b, chain.eigenvalue, &vectors);
    Ok(JordanChain {
        eigenvalue: chain.eigenvalue,
        vectors,
        case: chain.case,
        residuals,
    })
}

/// Recover the shift constants relating two chains with proportional
/// heads: returns `(constants, residual)` where the residual measures how
/// far `other` is from `shift_chain(reference, constants)` after matching
/// the head vectors.
pub fn recover_shift(
    reference: &JordanChain,
    other: &JordanChain,
) -> Result<(Vec<Complex64>, f64)> {
    if reference.len() != other.len() || reference.is_empty() {
        return Err(Error::InconsistentInput(
            "shift recovery needs two chains of equal positive length".into(),
        ));
    }
    let y0 = &reference.vectors[0];
    let y0_other = &other.vectors[0];
    let denom = inner(y0_other, y0_other);
    if denom == ZERO {
        return Err(Error::InconsistentInput("zero head vector".into()));
    }
    // align the head: chains scale linearly
    let scale = inner(y0, y0_other) / denom;
    let scaled: Vec<Vec<Complex64>> = other
        .vectors
        .iter()
        .map(|v| v.iter().map(|x| x * scale).collect())
        .collect();
    let head_err = {
        let diff: Vec<Complex64> = scaled[0].iter().zip(y0).map(|(u, v)| u - v).collect();
        norm2(&diff)
    };
    let y0_norm2 = inner(y0, y0);
    let mut constants = Vec::with_capacity(reference.len() - 1);
    let mut residual = head_err;
    for k in 1..reference.len() {
        let mut d: Vec<Complex64> = scaled[k]
            .iter()
            .zip(&reference.vectors[k])
            .map(|(u, v)| u - v)
            .collect();
        for (i, &ci) in constants.iter().enumerate() {
            // subtract already-known c_i · y_{k−1−i}
            for p in 0..d.len() {
                let upd = ci * reference.vectors[k - 1 - i][p];
                d[p] -= upd;
            }
        }
        let ck = inner(&d, y0) / y0_norm2;
        constants.push(ck);
        for p in 0..d.len() {
            let upd = ck * y0[p];
            d[p] -= upd;
        }
        residual = residual.max(norm2(&d));
    }
    Ok((constants, residual))
}

/// Assemble the full certificate at `z`: geometric test, zero order of
/// the characteristic function, the resulting algebraic multiplicity, and
/// an oracle cross-check by rank stabilization.
pub fn certify_multiplicity(
    base: &BaseOperator,
    pair: &PerturbationPair,
    z: Complex64,
) -> Result<MultiplicityCertificate> {
    let geom = geometric_multiplicity(base, pair, z, 1e-8)?;
    let f = charfn_of(base, pair);
    let span = base.span();
    let (pos, dist) = base.nearest(z);
    let sigma0_member = dist <= 1e-9 * span && {
        let prod = (pair.a()[pos] * pair.b()[pos]).norm();
        prod <= SPLIT_TOL.max(1e-12) * (pair.norm_product() / base.len() as f64)
    };
    let eval_point = if sigma0_member {
        Complex64::new(base.lambda(pos), 0.0)
    } else {
        z
    };
    let f_zero_order = f.zero_order(eval_point, ORDER_TOL)?;
    let algebraic = f_zero_order + usize::from(sigma0_member);

    let b = assemble_dense(base, pair)?;
    let oracle_dim = oracle::rank_multiplicity(&b, eval_point, algebraic + 2, 1e-8)?;
    if oracle_dim != algebraic {
        return Err(Error::Diagnostic(format!(
            "algebraic multiplicity {algebraic} from the characteristic function, {oracle_dim} \
             from rank stabilization at {z}"
        )));
    }
    Ok(MultiplicityCertificate {
        eigenvalue: eval_point,
        geometric: geom.multiplicity,
        algebraic,
        f_zero_order,
        sigma0_member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{design_psi_given_phi, BudgetMode, TargetSpectrum};
    use crate::operator::periodic_derivative;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn c(re_: f64, im: f64) -> Complex64 {
        Complex64::new(re_, im)
    }

    fn nilpotent() -> (BaseOperator, PerturbationPair) {
        let base = BaseOperator::new(vec![1.0, 2.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(1.0), re(-4.0)]).unwrap();
        (base, pair)
    }

    #[test]
    fn resolvent_chain_matches_hand_values() {
        let (base, pair) = nilpotent();
        let chain = chain_resolvent_case(&base, &pair, ZERO, 2).unwrap();
        // unnormalized: y₀ = (1, −2), y₁ = (1, −1); same up to the 1/‖y₀‖
        let s = 1.0 / 5.0f64.sqrt();
        assert!((chain.vectors[0][0] - re(s)).norm() < 1e-14);
        assert!((chain.vectors[0][1] - re(-2.0 * s)).norm() < 1e-14);
        assert!((chain.vectors[1][0] - re(s)).norm() < 1e-14);
        assert!((chain.vectors[1][1] - re(-s)).norm() < 1e-14);
        assert!(chain.max_residual() < 1e-12);
    }

    #[test]
    fn resolvent_chain_guards() {
        let (base, pair) = nilpotent();
        assert!(matches!(
            chain_resolvent_case(&base, &pair, re(1.0), 1),
            Err(Error::PoleCollision { .. })
        ));
        assert!(matches!(
            chain_resolvent_case(&base, &pair, ZERO, 3),
            Err(Error::ChainTooLong { .. })
        ));
    }

    #[test]
    fn resolvent_chain_at_i() {
        let base = BaseOperator::new(vec![0.0, 1.0], 0, None).unwrap();
        let pair =
            PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(-1.0), c(0.0, 2.0)]).unwrap();
        let chain = chain_resolvent_case(&base, &pair, c(0.0, 1.0), 2).unwrap();
        assert!(chain.max_residual() < 1e-12);
    }

    #[test]
    fn sigma0_case_b_periodic_derivative() {
        let (base, pair) = periodic_derivative(1, 2).unwrap();
        let pos = base.position_of_index(0).unwrap();
        let chain = chain_sigma0(&base, &pair, pos, 10).unwrap();
        assert_eq!(chain.case, ChainCase::Sigma0CaseB);
        assert_eq!(chain.len(), 3); // algebraic multiplicity 2m+1 = 3
        assert!(chain.max_residual() < 1e-10, "residual {}", chain.max_residual());
    }

    #[test]
    fn sigma0_case_a_with_forced_zero() {
        // a₁ = 0 keeps λ₁ = 1; c₂ = −2, c₃ = 2 forces F(1) = 0, so the
        // kept eigenvalue acquires an associated vector (length 2 chain)
        let base = BaseOperator::new(vec![1.0, 2.0, 3.0], 0, None).unwrap();
        let pair = PerturbationPair::new(
            vec![ZERO, re(1.0), re(1.0)],
            vec![re(1.0), re(-2.0), re(2.0)],
        )
        .unwrap();
        let chain = chain_sigma0(&base, &pair, 0, 10).unwrap();
        assert_eq!(chain.case, ChainCase::Sigma0CaseA);
        assert_eq!(chain.len(), 2);
        assert!(chain.max_residual() < 1e-12);

        // same but with F(1) ≠ 0: chain stays length 1
        let pair_simple = PerturbationPair::new(
            vec![ZERO, re(1.0), re(1.0)],
            vec![re(1.0), re(1.0), re(1.0)],
        )
        .unwrap();
        let chain = chain_sigma0(&base, &pair_simple, 0, 10).unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn shift_chain_preserves_links() {
        let (base, pair) = nilpotent();
        let chain = chain_resolvent_case(&base, &pair, ZERO, 2).unwrap();
        let shifted = shift_chain(&base, &pair, &chain, &[re(5.0)]).unwrap();
        assert!(shifted.max_residual() < 1e-12);
        // ỹ₁ = y₁ + 5y₀
        for p in 0..2 {
            let want = chain.vectors[1][p] + re(5.0) * chain.vectors[0][p];
            assert!((shifted.vectors[1][p] - want).norm() < 1e-14);
        }
        // zero constants: identity
        let same = shift_chain(&base, &pair, &chain, &[ZERO]).unwrap();
        assert_eq!(same.vectors, chain.vectors);
        // single-vector chain: nothing to shift
        let single = chain_resolvent_case(&base, &pair, ZERO, 1).unwrap();
        let still = shift_chain(&base, &pair, &single, &[re(9.0)]).unwrap();
        assert_eq!(still.vectors, single.vectors);
    }

    #[test]
    fn recover_shift_between_independent_chains() {
        let (base, pair) = nilpotent();
        let chain = chain_resolvent_case(&base, &pair, ZERO, 2).unwrap();
        let shifted = shift_chain(&base, &pair, &chain, &[c(2.0, -1.0)]).unwrap();
        let (constants, residual) = recover_shift(&chain, &shifted).unwrap();
        assert!((constants[0] - c(2.0, -1.0)).norm() < 1e-12);
        assert!(residual < 1e-12);
    }

    #[test]
    fn geometric_multiplicity_two_needs_all_three_conditions() {
        // λ₁ kept with a₁ = b₁ = 0 and F(1) = 0: geometric 2
        let base = BaseOperator::new(vec![1.0, 2.0, 3.0], 0, None).unwrap();
        let pair = PerturbationPair::new(
            vec![ZERO, re(1.0), re(1.0)],
            vec![ZERO, re(-2.0), re(2.0)],
        )
        .unwrap();
        let cert = geometric_multiplicity(&base, &pair, re(1.0), 1e-10).unwrap();
        assert_eq!(cert.multiplicity, 2);
        assert!(cert.residuals.iter().all(|&r| r < 1e-12));

        // nilpotent design: geometric 1 at 0
        let (base, pair) = nilpotent();
        let cert = geometric_multiplicity(&base, &pair, ZERO, 1e-10).unwrap();
        assert_eq!(cert.multiplicity, 1);

        // not an eigenvalue at all
        assert!(matches!(
            geometric_multiplicity(&base, &pair, re(7.0), 1e-10),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn certificates_for_reference_designs() {
        let (base, pair) = nilpotent();
        let cert = certify_multiplicity(&base, &pair, ZERO).unwrap();
        assert_eq!(cert.geometric, 1);
        assert_eq!(cert.f_zero_order, 2);
        assert_eq!(cert.algebraic, 2);
        assert!(!cert.sigma0_member);

        let (base, pair) = periodic_derivative(1, 2).unwrap();
        let cert = certify_multiplicity(&base, &pair, ZERO).unwrap();
        assert_eq!(cert.geometric, 1);
        assert_eq!(cert.f_zero_order, 2);
        assert_eq!(cert.algebraic, 3);
        assert!(cert.sigma0_member);
    }

    #[test]
    fn simple_eigenvalue_certificate_on_designed_instance() {
        let base = BaseOperator::new(vec![0.0, 1.0, 2.0], 0, None).unwrap();
        let target =
            TargetSpectrum::new(vec![re(5.0), c(0.5, 0.5)], vec![1, 2]).unwrap();
        let design =
            design_psi_given_phi(&base, &[re(1.0), re(1.0), re(1.0)], &target, BudgetMode::Exact)
                .unwrap();
        let cert = certify_multiplicity(&base, &design.pair, re(5.0)).unwrap();
        assert_eq!(cert.algebraic, 1);
        assert_eq!(cert.geometric, 1);
        let cert2 = certify_multiplicity(&base, &design.pair, c(0.5, 0.5)).unwrap();
        assert_eq!(cert2.algebraic, 2);
    }
}
