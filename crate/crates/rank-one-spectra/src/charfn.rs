//! The characteristic function `F(z) = Σ cₙ/(λₙ − z) + 1` with
//! `cₙ = conj(aₙ)·bₙ`, its derivatives, rational form, zeros with
//! multiplicities, and the resolvent of the perturbed operator.
//!
//! Off the base spectrum, `z` is an eigenvalue of `B` exactly when
//! `F(z) = 0`, and the zero order equals the algebraic multiplicity. At a
//! kept eigenvalue `λₙ` (product `aₙbₙ = 0`) the algebraic multiplicity is
//! the zero order plus one. `predicted_spectrum` assembles the full
//! multiset from these rules.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{split_indices, BaseOperator, IndexSplit, PerturbationPair};
use crate::oracle;
use crate::poly::CPoly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative guard around the poles; evaluation closer than
/// `POLE_GUARD_REL·span` to a pole is refused.
pub const POLE_GUARD_REL: f64 = 1e-13;

/// `krein_apply` refuses to divide by `|F(z)|` at or below this.
pub const F_ZERO_GUARD: f64 = 1e-12;

/// Default threshold for the scaled-derivative zero-order test.
pub const ORDER_TOL: f64 = 1e-4;

/// Coefficient-product threshold (relative) deciding membership in `I₀`.
pub const SPLIT_TOL: f64 = 1e-14;

/// Characteristic function in pole/residue form. Stored terms all have
/// `cⱼ ≠ 0`; the residue of `F` at `λⱼ` is `−cⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFn {
    poles: Vec<f64>,
    c: Vec<Complex64>,
}

/// `F` as a ratio of monic polynomials `P/Q`.
#[derive(Debug, Clone)]
pub struct RationalForm {
    pub numerator: CPoly,
    pub denominator: CPoly,
    /// Leading coefficient of the numerator before monic normalization
    /// (identically 1 for functions built from the pole form).
    pub numerator_scale: Complex64,
}

impl RationalForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator_scale * self.numerator.eval(z) / self.denominator.eval(z)
    }
}

impl CharFn {
    /// Build `F` from a perturbation pair, keeping only the `I₁` terms.
    pub fn from_pair(base: &BaseOperator, pair: &PerturbationPair, split: &IndexSplit) -> CharFn {
        let products = pair.products();
        let poles = split.i1.iter().map(|&p| base.lambda(p)).collect();
        let c = split.i1.iter().map(|&p| products[p]).collect();
        CharFn { poles, c }
    }

    /// Build from explicit poles and coefficients.
    pub fn from_parts(poles: Vec<f64>, c: Vec<Complex64>) -> Result<CharFn> {
        if poles.len() != c.len() {
            return Err(Error::DimensionMismatch {
                expected: poles.len(),
                got: c.len(),
            });
        }
        for i in 0..poles.len() {
            if !poles[i].is_finite() {
                return Err(Error::InconsistentInput("non-finite pole".into()));
            }
            if c[i] == ZERO {
                return Err(Error::InconsistentInput(
                    "characteristic-function term with zero coefficient".into(),
                ));
            }
            for j in i + 1..poles.len() {
                if poles[i] == poles[j] {
                    return Err(Error::InconsistentInput("duplicate pole".into()));
                }
            }
        }
        Ok(CharFn { poles, c })
    }

    pub fn num_terms(&self) -> usize {
        self.poles.len()
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    /// Spread of the poles, floored at 1; all pole-relative tolerances
    /// scale with this.
    pub fn pole_span(&self) -> f64 {
        if self.poles.is_empty() {
            return 1.0;
        }
        let min = self.poles.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = self.poles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (max - min).max(1.0)
    }

    pub fn min_pole_distance(&self, z: Complex64) -> f64 {
        self.poles
            .iter()
            .map(|&l| (z - Complex64::new(l, 0.0)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn guard_pole(&self, z: Complex64) -> Result<()> {
        let dist = self.min_pole_distance(z);
        if dist <= POLE_GUARD_REL * self.pole_span() {
            return Err(Error::PoleCollision { z, dist });
        }
        Ok(())
    }

    /// `F^{(k)}(z)/k!`; the constant term 1 enters only at `k = 0`.
    pub fn scaled_derivative(&self, z: Complex64, order: usize) -> Result<Complex64> {
        self.guard_pole(z)?;
        let mut acc = if order == 0 { ONE } else { ZERO };
        for (&l, &c) in self.poles.iter().zip(&self.c) {
            let d = Complex64::new(l, 0.0) - z;
            acc += c / d.powi(order as i32 + 1);
        }
        Ok(acc)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.scaled_derivative(z, 0)
    }

    /// Recombine the pole form over the common denominator
    /// `Q(z) = Π (z − λⱼ)`:  `P = Q − Σⱼ cⱼ Π_{i≠j}(z − λᵢ)`.
    ///
    /// `P` comes out exactly monic of the same degree as `Q`, and `P/Q`
    /// agrees with the pole form (checked at three fixed off-axis points).
    pub fn to_rational(&self) -> RationalForm {
        let mut q = CPoly::one();
        for &l in &self.poles {
            q.mul_linear(Complex64::new(l, 0.0));
        }
        let mut p = q.clone();
        for (j, &cj) in self.c.iter().enumerate() {
            let mut partial = CPoly::one();
            for (i, &l) in self.poles.iter().enumerate() {
                if i != j {
                    partial.mul_linear(Complex64::new(l, 0.0));
                }
            }
            p.add_scaled(&partial, -cj);
        }
        let form = RationalForm {
            numerator: p,
            denominator: q,
            numerator_scale: ONE,
        };
        #[cfg(debug_assertions)]
        self.check_rational(&form);
        form
    }

    /// The poles are real, so fixed off-axis probe points can never
    /// collide with them.
    #[cfg(debug_assertions)]
    fn check_rational(&self, form: &RationalForm) {
        let span = self.pole_span();
        let center = Complex64::new(
            self.poles.iter().sum::<f64>() / self.poles.len().max(1) as f64,
            0.0,
        );
        for probe in [
            Complex64::new(0.37, 0.61),
            Complex64::new(-0.73, 0.29),
            Complex64::new(1.13, -0.53),
        ] {
            let z = center + probe * span;
            let via_poles = self.eval(z).expect("probe off the poles");
            let via_rational = form.eval(z);
            let err = (via_poles - via_rational).norm();
            debug_assert!(
                err <= 1e-10 * (1.0 + via_poles.norm()),
                "rational recombination drifted: {err:.3e} at {z}"
            );
        }
    }

    /// Zeros with multiplicities: numerator roots clustered at
    /// `cluster_tol`, cluster centers polished by multiplicity-aware
    /// Newton, each certified by `zero_order` (the derivative test is
    /// authoritative, clustering only seeds it).
    pub fn zeros(&self, cluster_tol: f64) -> Result<Vec<(Complex64, usize)>> {
        if self.num_terms() == 0 {
            return Ok(vec![]);
        }
        let form = self.to_rational();
        let roots = form.numerator.roots()?;
        let clusters = oracle::cluster(&roots, cluster_tol);
        let mut out = Vec::with_capacity(clusters.len());
        for cl in clusters {
            let center = self.refine_zero(cl.center, cl.size, 4);
            let mult = match self.zero_order(center, ORDER_TOL) {
                Ok(order) if order > 0 => order,
                _ => cl.size,
            };
            out.push((center, mult));
        }
        Ok(out)
    }

    /// Newton polish of an approximate zero of multiplicity `m`:
    /// `z ← z − m·F(z)/F'(z)`. Steps that blow up or run into a pole stop
    /// the iteration; the best iterate by `|F|` wins.
    pub fn refine_zero(&self, z0: Complex64, multiplicity: usize, steps: usize) -> Complex64 {
        let m = multiplicity.max(1) as f64;
        let guard = POLE_GUARD_REL * self.pole_span();
        let mut z = z0;
        let mut best = z0;
        let mut best_abs = match self.eval(z0) {
            Ok(v) => v.norm(),
            Err(_) => return z0,
        };
        for _ in 0..steps {
            let (f, fp) = match (self.scaled_derivative(z, 0), self.scaled_derivative(z, 1)) {
                (Ok(f), Ok(fp)) => (f, fp),
                _ => break,
            };
            if fp.norm() == 0.0 {
                break;
            }
            let step = f / fp * m;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            let next = z - step;
            if self.min_pole_distance(next) <= guard {
                break;
            }
            z = next;
            if let Ok(v) = self.eval(z) {
                if v.norm() < best_abs {
                    best_abs = v.norm();
                    best = z;
                }
            }
        }
        best
    }

    /// Order of `z` as a zero of `F`: the smallest `k` with
    /// `|F^{(k)}(z)/k!| > tol·local_scale`, where
    /// `local_scale = Σ|cⱼ|/dist(z, poles)^{k+1} + 1`. Capped at the term
    /// count, past which the order is undetermined.
    pub fn zero_order(&self, z: Complex64, tol: f64) -> Result<usize> {
        self.guard_pole(z)?;
        let dist = self.min_pole_distance(z);
        let cabs: f64 = self.c.iter().map(|c| c.norm()).sum();
        for k in 0..=self.num_terms() {
            let deriv = self.scaled_derivative(z, k)?;
            let local_scale = cabs / dist.powi(k as i32 + 1) + 1.0;
            if deriv.norm() > tol * local_scale {
                return Ok(k);
            }
        }
        Err(Error::OrderUndetermined {
            z,
            cap: self.num_terms(),
        })
    }
}

/// Solve `(B − z) f = g` through the resolvent formula
/// `f = (A−z)⁻¹g − [⟨(A−z)⁻¹g, φ⟩ / F(z)]·(A−z)⁻¹ψ`, componentwise in the
/// eigenbasis of `A`.
pub fn krein_apply(
    base: &BaseOperator,
    pair: &PerturbationPair,
    z: Complex64,
    g: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = base.len();
    if pair.len() != n || g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if pair.len() != n { pair.len() } else { g.len() },
        });
    }
    let span = base.span();
    let dist = base
        .lambdas()
        .iter()
        .map(|&l| (z - Complex64::new(l, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    if dist <= POLE_GUARD_REL * span {
        return Err(Error::PoleCollision { z, dist });
    }
    // full sum: I₀ terms vanish on their own
    let mut f_val = ONE;
    for (p, &l) in base.lambdas().iter().enumerate() {
        f_val += pair.a()[p].conj() * pair.b()[p] / (Complex64::new(l, 0.0) - z);
    }
    if f_val.norm() <= F_ZERO_GUARD {
        return Err(Error::NearEigenvalue {
            z,
            f_abs: f_val.norm(),
        });
    }
    let resolvent_g: Vec<Complex64> = (0..n)
        .map(|p| g[p] / (Complex64::new(base.lambda(p), 0.0) - z))
        .collect();
    let ip = crate::linalg::inner(&resolvent_g, pair.a());
    let coef = ip / f_val;
    Ok((0..n)
        .map(|p| resolvent_g[p] - coef * pair.b()[p] / (Complex64::new(base.lambda(p), 0.0) - z))
        .collect())
}

/// One predicted eigenvalue of the perturbed operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedEigenvalue {
    pub z: Complex64,
    pub algebraic: usize,
    /// Inherited from the base spectrum (`aₙbₙ = 0`).
    pub sigma0: bool,
    /// Both coefficients vanish (`A` and `B` agree on this direction).
    pub h0: bool,
}

/// Full predicted spectrum of `B`: zeros of `F` with their orders off the
/// base spectrum, and order-plus-one at every kept `λₙ`.
pub fn predicted_spectrum(
    base: &BaseOperator,
    pair: &PerturbationPair,
) -> Result<Vec<PredictedEigenvalue>> {
    if base.len() != pair.len() {
        return Err(Error::DimensionMismatch {
            expected: base.len(),
            got: pair.len(),
        });
    }
    let split = split_indices(pair, SPLIT_TOL);
    let f = CharFn::from_pair(base, pair, &split);
    let span = base.span();
    let match_tol = 1e-4 * span;
    let mut remaining = f.zeros(match_tol)?;
    let mut out = Vec::new();

    let amax = pair.a().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bmax = pair.b().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for &p in &split.i0 {
        let lam = Complex64::new(base.lambda(p), 0.0);
        let order = f.zero_order(lam, ORDER_TOL)?;
        if order > 0 {
            // this zero belongs to the kept eigenvalue; it must be in the list
            let hit = remaining
                .iter()
                .position(|(center, _)| (*center - lam).norm() <= match_tol);
            match hit {
                Some(k) => {
                    let (_, mult) = remaining.remove(k);
                    if mult != order {
                        return Err(Error::Diagnostic(format!(
                            "zero cluster at kept eigenvalue {lam} has size {mult}, derivative order {order}"
                        )));
                    }
                }
                None => {
                    return Err(Error::Diagnostic(format!(
                        "no numerator root cluster found at kept eigenvalue {lam} of order {order}"
                    )));
                }
            }
        }
        let h0 = pair.a()[p].norm() <= 1e-14 * amax && pair.b()[p].norm() <= 1e-14 * bmax;
        out.push(PredictedEigenvalue {
            z: lam,
            algebraic: order + 1,
            sigma0: true,
            h0,
        });
    }
    for (z, mult) in remaining {
        out.push(PredictedEigenvalue {
            z,
            algebraic: mult,
            sigma0: false,
            h0: false,
        });
    }
    out.sort_by(|x, y| (x.z.re, x.z.im).partial_cmp(&(y.z.re, y.z.im)).unwrap());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;
    use crate::operator::assemble_dense;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn nilpotent_design() -> (BaseOperator, PerturbationPair) {
        let base = BaseOperator::new(vec![1.0, 2.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(1.0), re(-4.0)]).unwrap();
        (base, pair)
    }

    #[test]
    fn from_pair_takes_products_over_i1() {
        let (base, pair) = nilpotent_design();
        let split = split_indices(&pair, 0.0);
        let f = CharFn::from_pair(&base, &pair, &split);
        assert_eq!(f.poles(), &[1.0, 2.0]);
        assert_eq!(f.coefficients(), &[re(1.0), re(-4.0)]);

        let empty = PerturbationPair::new(vec![re(1.0), ZERO], vec![ZERO, re(1.0)]).unwrap();
        let split = split_indices(&empty, 0.0);
        let f =
            CharFn::from_pair(&BaseOperator::new(vec![0.0, 1.0], 0, None).unwrap(), &empty, &split);
        assert_eq!(f.num_terms(), 0);
        assert_eq!(f.eval(c(0.3, 0.2)).unwrap(), ONE);

        let mixed =
            PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(-1.0), c(0.0, 2.0)]).unwrap();
        let split = split_indices(&mixed, 0.0);
        let f = CharFn::from_pair(&BaseOperator::new(vec![0.0, 1.0], 0, None).unwrap(), &mixed, &split);
        assert_eq!(f.coefficients(), &[re(-1.0), c(0.0, 2.0)]);
    }

    #[test]
    fn scaled_derivatives_match_hand_values() {
        let f = CharFn::from_parts(vec![1.0, 2.0], vec![re(1.0), re(-4.0)]).unwrap();
        let z = ZERO;
        assert!((f.scaled_derivative(z, 0).unwrap()).norm() < 1e-15);
        assert!((f.scaled_derivative(z, 1).unwrap()).norm() < 1e-15);
        assert!((f.scaled_derivative(z, 2).unwrap() - re(0.5)).norm() < 1e-15);
        assert!(matches!(
            f.eval(re(1.0)),
            Err(Error::PoleCollision { .. })
        ));
    }

    #[test]
    fn rational_form_of_nilpotent_design_is_z_squared() {
        let f = CharFn::from_parts(vec![1.0, 2.0], vec![re(1.0), re(-4.0)]).unwrap();
        let form = f.to_rational();
        // P = z², Q = (z−1)(z−2)
        assert_eq!(form.numerator.degree(), 2);
        assert!(form.numerator.coeffs[0].norm() < 1e-14);
        assert!(form.numerator.coeffs[1].norm() < 1e-14);
        assert!((form.numerator.coeffs[2] - ONE).norm() < 1e-14);
        assert!((form.denominator.eval(re(1.0))).norm() < 1e-14);
        assert!((form.denominator.eval(re(2.0))).norm() < 1e-14);
    }

    #[test]
    fn rational_form_trivial_and_complex_cases() {
        let f = CharFn::from_parts(vec![], vec![]).unwrap();
        let form = f.to_rational();
        assert_eq!(form.numerator.degree(), 0);
        assert_eq!(form.denominator.degree(), 0);

        // c = (−1, 2i) on poles (0, 1): P = (z−i)²
        let f = CharFn::from_parts(vec![0.0, 1.0], vec![re(-1.0), c(0.0, 2.0)]).unwrap();
        let form = f.to_rational();
        let at_i = form.numerator.eval(c(0.0, 1.0));
        let deriv_at_i = form.numerator.derivative().eval(c(0.0, 1.0));
        assert!(at_i.norm() < 1e-14);
        assert!(deriv_at_i.norm() < 1e-14);
    }

    #[test]
    fn zeros_with_multiplicities() {
        let f = CharFn::from_parts(vec![1.0, 2.0], vec![re(1.0), re(-4.0)]).unwrap();
        let zs = f.zeros(1e-6).unwrap();
        assert_eq!(zs.len(), 1);
        assert!(zs[0].0.norm() < 1e-7);
        assert_eq!(zs[0].1, 2);

        let f = CharFn::from_parts(vec![0.0, 1.0], vec![re(-1.0), c(0.0, 2.0)]).unwrap();
        let zs = f.zeros(1e-6).unwrap();
        assert_eq!(zs.len(), 1);
        assert!((zs[0].0 - c(0.0, 1.0)).norm() < 1e-7);
        assert_eq!(zs[0].1, 2);

        let f = CharFn::from_parts(vec![], vec![]).unwrap();
        assert!(f.zeros(1e-6).unwrap().is_empty());
    }

    #[test]
    fn zero_order_cases() {
        let f = CharFn::from_parts(vec![1.0, 2.0], vec![re(1.0), re(-4.0)]).unwrap();
        assert_eq!(f.zero_order(ZERO, 1e-10).unwrap(), 2);
        assert_eq!(f.zero_order(re(0.5), 1e-10).unwrap(), 0);
        let trivial = CharFn::from_parts(vec![], vec![]).unwrap();
        assert_eq!(trivial.zero_order(c(3.0, 4.0), 1e-10).unwrap(), 0);
    }

    #[test]
    fn krein_apply_solves_the_shifted_system() {
        let (base, pair) = nilpotent_design();
        let g = vec![re(1.0), ZERO];
        let z = re(3.0);
        let f = krein_apply(&base, &pair, z, &g).unwrap();
        let bmat = assemble_dense(&base, &pair).unwrap();
        let residual: Vec<Complex64> = bmat
            .matvec(&f)
            .iter()
            .zip(&f)
            .zip(&g)
            .map(|((bf, fi), gi)| bf - z * fi - gi)
            .collect();
        assert!(norm2(&residual) <= 1e-12 * norm2(&g));

        // g = 0 → f = 0
        let zero_g = vec![ZERO, ZERO];
        let f0 = krein_apply(&base, &pair, z, &zero_g).unwrap();
        assert!(norm2(&f0) == 0.0);
    }

    #[test]
    fn krein_apply_rejects_eigenvalues_of_b() {
        // design with double zero at i: F(i) = 0
        let base = BaseOperator::new(vec![0.0, 1.0], 0, None).unwrap();
        let pair =
            PerturbationPair::new(vec![re(1.0), re(1.0)], vec![re(-1.0), c(0.0, 2.0)]).unwrap();
        let g = vec![re(1.0), re(1.0)];
        assert!(matches!(
            krein_apply(&base, &pair, c(0.0, 1.0), &g),
            Err(Error::NearEigenvalue { .. })
        ));
        assert!(matches!(
            krein_apply(&base, &pair, re(1.0), &g),
            Err(Error::PoleCollision { .. })
        ));
    }

    #[test]
    fn predicted_spectrum_nilpotent() {
        let (base, pair) = nilpotent_design();
        let preds = predicted_spectrum(&base, &pair).unwrap();
        assert_eq!(preds.len(), 1);
        assert!(preds[0].z.norm() < 1e-7);
        assert_eq!(preds[0].algebraic, 2);
        assert!(!preds[0].sigma0);
    }

    #[test]
    fn predicted_spectrum_with_kept_eigenvalue() {
        // a₂ = 0 keeps λ = 4; F = (5−z)/(3−z) relocates the other
        // eigenvalue to 5
        let base = BaseOperator::new(vec![3.0, 4.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), ZERO], vec![re(2.0), re(1.0)]).unwrap();
        let preds = predicted_spectrum(&base, &pair).unwrap();
        assert_eq!(preds.len(), 2);
        let kept: Vec<_> = preds.iter().filter(|p| p.sigma0).collect();
        assert_eq!(kept.len(), 1);
        assert!((kept[0].z - re(4.0)).norm() < 1e-12);
        assert_eq!(kept[0].algebraic, 1);
        let moved: Vec<_> = preds.iter().filter(|p| !p.sigma0).collect();
        assert!((moved[0].z - re(5.0)).norm() < 1e-9);
        let total: usize = preds.iter().map(|p| p.algebraic).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn predicted_spectrum_zero_landing_on_kept_eigenvalue() {
        // a₂ = 0 keeps λ = 4 and F = (4−z)/(3−z) puts its zero right
        // there: one eigenvalue of algebraic multiplicity 2
        let base = BaseOperator::new(vec![3.0, 4.0], 0, None).unwrap();
        let pair = PerturbationPair::new(vec![re(1.0), ZERO], vec![re(1.0), re(1.0)]).unwrap();
        let preds = predicted_spectrum(&base, &pair).unwrap();
        assert_eq!(preds.len(), 1);
        assert!(preds[0].sigma0);
        assert!((preds[0].z - re(4.0)).norm() < 1e-12);
        assert_eq!(preds[0].algebraic, 2);
    }
}
