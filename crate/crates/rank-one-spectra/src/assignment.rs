//! Constructive eigenvalue assignment: from a prescribed target spectrum
//! build the perturbation pair, either through the residues of the
//! prescribed characteristic function or through the confluent Cauchy
//! linear system.
//!
//! With the window size `n` and target multiplicities `mⱼ`, the prescribed
//! function is
//!
//! ```text
//!     F(z) = Π_j (z − z_j)^{m'_j} / Π_{i∈I₁} (z − λᵢ),
//! ```
//!
//! where `m'_j = m_j − 1` when `z_j` hits a base eigenvalue and `m_j`
//! otherwise, and `I₁` excludes both hit positions and surplus positions.
//! The coefficients are its negated residues
//! `cⱼ = −Π_k (λⱼ−z_k)^{m'_k} / Π_{i∈I₁, i≠j} (λⱼ−λᵢ)`.

use num_complex::Complex64;

use crate::charfn::{CharFn, ORDER_TOL};
use crate::error::{Error, Result};
use crate::linalg::{singular_values, CMatrix, Lu};
use crate::operator::{BaseOperator, PerturbationPair};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Matching radius (relative to the window span) deciding whether a target
/// point sits on the base spectrum.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-12;

/// Conditioning above which the designed coefficients are not
/// cross-checked against the characteristic function (the check itself
/// loses meaning there).
const VERIFY_COND_CAP: f64 = 1e10;

/// Pairwise distinct target points with algebraic multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpectrum {
    points: Vec<Complex64>,
    multiplicities: Vec<usize>,
}

impl TargetSpectrum {
    pub fn new(points: Vec<Complex64>, multiplicities: Vec<usize>) -> Result<Self> {
        if points.is_empty() || points.len() != multiplicities.len() {
            return Err(Error::InconsistentInput(
                "target spectrum needs matching nonempty point/multiplicity lists".into(),
            ));
        }
        if multiplicities.iter().any(|&m| m == 0) {
            return Err(Error::InconsistentInput(
                "target multiplicities must be positive".into(),
            ));
        }
        for i in 0..points.len() {
            if !points[i].re.is_finite() || !points[i].im.is_finite() {
                return Err(Error::InconsistentInput("non-finite target point".into()));
            }
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InconsistentInput(format!(
                        "target points must be pairwise distinct, got {} twice",
                        points[i]
                    )));
                }
            }
        }
        Ok(TargetSpectrum {
            points,
            multiplicities,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Entry-wise complex conjugate of the target set.
    pub fn conjugate(&self) -> TargetSpectrum {
        TargetSpectrum {
            points: self.points.iter().map(|z| z.conj()).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }
}

/// Budget handling when the multiplicities do not fill the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BudgetMode {
    /// `Σ mⱼ` must equal the window size.
    #[default]
    Exact,
    /// `Σ mⱼ ≤ n`: surplus window positions get `aₖ = bₖ = 0` and their
    /// `λₖ` stay (simple) eigenvalues of the perturbed operator.
    AllowSurplus,
}

/// Outcome of a design: the pair, the products `cⱼ` it realizes, a
/// condition estimate of the underlying confluent system, and the
/// positions whose `ψ` (resp. `φ`) component stayed free.
#[derive(Debug, Clone)]
pub struct AssignmentResult {
    pub pair: PerturbationPair,
    /// `conj(aⱼ)·bⱼ` per window position (zero on `I₀`).
    pub residues: Vec<Complex64>,
    pub condition_estimate: f64,
    pub free_positions: Vec<usize>,
}

/// Reduced multiplicities `m'ⱼ` and, per target, the matched base position
/// when the point lies on the base spectrum.
pub fn reduce_multiplicities(
    base: &BaseOperator,
    target: &TargetSpectrum,
) -> (Vec<usize>, Vec<Option<usize>>) {
    let tol = SPECTRUM_MATCH_TOL * base.span();
    let mut reduced = Vec::with_capacity(target.len());
    let mut matched = Vec::with_capacity(target.len());
    for (z, &m) in target.points().iter().zip(target.multiplicities()) {
        let (pos, dist) = base.nearest(*z);
        if dist <= tol {
            reduced.push(m - 1);
            matched.push(Some(pos));
        } else {
            reduced.push(m);
            matched.push(None);
        }
    }
    (reduced, matched)
}

/// Bookkeeping shared by the design routes.
#[derive(Debug, Clone)]
pub struct DesignPlan {
    pub m_reduced: Vec<usize>,
    /// Per target: matched base position, if on the base spectrum.
    pub matched: Vec<Option<usize>>,
    /// Positions excluded from the pole set (hits and surplus).
    pub i0: Vec<usize>,
    /// Pole positions of the prescribed function.
    pub i1: Vec<usize>,
    /// Non-hit positions parked with `aₖ = bₖ = 0`.
    pub surplus: Vec<usize>,
}

/// Resolve hits, surplus and the pole set. `forced_zero` are positions
/// where the fixed vector has a vanishing coefficient; each must be
/// explained by a target hit or absorbed into the surplus.
pub fn plan_design(
    base: &BaseOperator,
    target: &TargetSpectrum,
    mode: BudgetMode,
    forced_zero: &[usize],
) -> Result<DesignPlan> {
    let n = base.len();
    let total = target.total();
    match mode {
        BudgetMode::Exact => {
            if total != n {
                return Err(Error::MultiplicityBudget {
                    requested: total,
                    available: n,
                });
            }
        }
        BudgetMode::AllowSurplus => {
            if total > n {
                return Err(Error::MultiplicityBudget {
                    requested: total,
                    available: n,
                });
            }
        }
    }
    let (m_reduced, matched) = reduce_multiplicities(base, target);
    let mut hit = vec![false; n];
    for (t, m) in matched.iter().enumerate() {
        if let Some(p) = m {
            if hit[*p] {
                return Err(Error::InconsistentInput(format!(
                    "two target points match base eigenvalue at position {p}"
                )));
            }
            hit[*p] = true;
            let _ = t;
        }
    }

    let surplus_budget = n - total;
    let mut surplus: Vec<usize> = Vec::new();
    for &p in forced_zero {
        if p >= n {
            return Err(Error::InconsistentInput(format!(
                "zero-coefficient position {p} outside the window"
            )));
        }
        if !hit[p] {
            surplus.push(p);
        }
    }
    surplus.sort_unstable();
    surplus.dedup();
    if surplus.len() > surplus_budget {
        return Err(Error::Genericity(format!(
            "{} zero coefficients do not correspond to target points on the base spectrum \
             (surplus budget {})",
            surplus.len(),
            surplus_budget
        )));
    }
    // fill the remaining surplus from the top of the window
    let mut p = n;
    while surplus.len() < surplus_budget {
        p -= 1;
        if !hit[p] && !surplus.contains(&p) {
            surplus.push(p);
        }
    }
    surplus.sort_unstable();

    let mut i0 = Vec::new();
    let mut i1 = Vec::new();
    for q in 0..n {
        if hit[q] || surplus.binary_search(&q).is_ok() {
            i0.push(q);
        } else {
            i1.push(q);
        }
    }
    debug_assert_eq!(
        i1.len(),
        m_reduced.iter().sum::<usize>(),
        "pole count must equal the reduced multiplicity total"
    );
    Ok(DesignPlan {
        m_reduced,
        matched,
        i0,
        i1,
        surplus,
    })
}

/// Complex product accumulated with exact power-of-two rescaling, so that
/// windows of a few hundred factors neither overflow nor underflow.
#[derive(Debug, Clone, Copy)]
struct ScaledProduct {
    value: Complex64,
    exp2: i64,
}

impl ScaledProduct {
    fn one() -> Self {
        ScaledProduct {
            value: ONE,
            exp2: 0,
        }
    }

    fn mul(&mut self, f: Complex64) {
        self.value *= f;
        let m = self.value.norm();
        if m > 1e150 {
            self.value *= 2f64.powi(-512);
            self.exp2 += 512;
        } else if m > 0.0 && m < 1e-150 {
            self.value *= 2f64.powi(512);
            self.exp2 -= 512;
        }
    }

    fn div(self, other: ScaledProduct) -> Complex64 {
        let shift = self.exp2 - other.exp2;
        if shift.abs() > 2000 {
            // magnitudes irrecoverably apart; saturate
            return if shift > 0 {
                Complex64::new(f64::INFINITY, 0.0)
            } else {
                ZERO
            };
        }
        (self.value / other.value) * (shift as f64).exp2()
    }
}

/// Negated residues of the prescribed characteristic function, as a
/// full-window sequence (zero on `I₀`), together with the plan.
pub fn prescribed_residues(
    base: &BaseOperator,
    target: &TargetSpectrum,
    mode: BudgetMode,
) -> Result<(Vec<Complex64>, DesignPlan)> {
    let plan = plan_design(base, target, mode, &[])?;
    let c = residues_for_plan(base, target, &plan);
    Ok((c, plan))
}

fn residues_for_plan(
    base: &BaseOperator,
    target: &TargetSpectrum,
    plan: &DesignPlan,
) -> Vec<Complex64> {
    let mut c = vec![ZERO; base.len()];
    for &j in &plan.i1 {
        let lam = Complex64::new(base.lambda(j), 0.0);
        let mut num = ScaledProduct::one();
        for (k, z) in target.points().iter().enumerate() {
            let f = lam - z;
            for _ in 0..plan.m_reduced[k] {
                num.mul(f);
            }
        }
        let mut den = ScaledProduct::one();
        for &i in &plan.i1 {
            if i != j {
                den.mul(Complex64::new(base.lambda(j) - base.lambda(i), 0.0));
            }
        }
        c[j] = -num.div(den);
    }
    c
}

/// Coefficient matrix of the confluent system: row `(j, m)` demands
/// `Σₖ cₖ/(λₖ − zⱼ)^m = −δ_{m,1}`; rows are grouped by target point in
/// the given order with the power `m` ascending, columns follow `lambdas`.
pub fn confluent_system_matrix(lambdas: &[f64], target: &TargetSpectrum) -> CMatrix {
    let n = lambdas.len();
    let rows: usize = target.total();
    let mut m = CMatrix::zeros(rows, n);
    let mut r = 0;
    for (j, z) in target.points().iter().enumerate() {
        for power in 1..=target.multiplicities()[j] {
            for (k, &l) in lambdas.iter().enumerate() {
                m[(r, k)] = (Complex64::new(l, 0.0) - z).powi(-(power as i32));
            }
            r += 1;
        }
    }
    m
}

/// Closed form of the confluent Cauchy determinant under the row ordering
/// of [`confluent_system_matrix`]:
///
/// ```text
///   (−1)^(N(N−1)/2) · Π_{k<l}(λ_l−λ_k) · Π_{j<j'}(z_{j'}−z_j)^(mⱼ·mⱼ')
///   ───────────────────────────────────────────────────────────────────
///                    Π_k Π_j (λ_k − z_j)^(mⱼ)
/// ```
///
/// The plain-power rows used here absorb the factorials that would appear
/// with derivative-scaled rows, so no factorial factor remains.
pub fn confluent_cauchy_determinant(lambdas: &[f64], target: &TargetSpectrum) -> Result<Complex64> {
    let n = lambdas.len();
    if target.total() != n {
        return Err(Error::MultiplicityBudget {
            requested: target.total(),
            available: n,
        });
    }
    let mut num = ScaledProduct::one();
    for l in 1..n {
        for k in 0..l {
            num.mul(Complex64::new(lambdas[l] - lambdas[k], 0.0));
        }
    }
    let ms = target.multiplicities();
    for jp in 1..target.len() {
        for j in 0..jp {
            let f = target.points()[jp] - target.points()[j];
            for _ in 0..ms[j] * ms[jp] {
                num.mul(f);
            }
        }
    }
    let mut den = ScaledProduct::one();
    for &l in lambdas {
        for (j, z) in target.points().iter().enumerate() {
            let f = Complex64::new(l, 0.0) - z;
            for _ in 0..ms[j] {
                den.mul(f);
            }
        }
    }
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(num.div(den) * sign)
}

/// Condition estimate `σ_max/σ_min` of the confluent system over the pole
/// positions of the plan.
fn plan_condition(base: &BaseOperator, target: &TargetSpectrum, plan: &DesignPlan) -> f64 {
    if plan.i1.is_empty() {
        return 1.0;
    }
    let lambdas: Vec<f64> = plan.i1.iter().map(|&p| base.lambda(p)).collect();
    let reduced_target = match TargetSpectrum::new(
        target
            .points()
            .iter()
            .zip(&plan.m_reduced)
            .filter(|(_, &m)| m > 0)
            .map(|(z, _)| *z)
            .collect(),
        plan.m_reduced.iter().copied().filter(|&m| m > 0).collect(),
    ) {
        Ok(t) => t,
        Err(_) => return 1.0, // all multiplicities reduced away
    };
    let m = confluent_system_matrix(&lambdas, &reduced_target);
    let s = singular_values(&m);
    match (s.first(), s.last()) {
        (Some(&smax), Some(&smin)) if smin > 0.0 => smax / smin,
        _ => f64::INFINITY,
    }
}

fn verify_orders(
    base: &BaseOperator,
    pair: &PerturbationPair,
    target: &TargetSpectrum,
    plan: &DesignPlan,
) -> Result<()> {
    let split = crate::operator::split_indices(pair, crate::charfn::SPLIT_TOL);
    let f = CharFn::from_pair(base, pair, &split);
    for (k, z) in target.points().iter().enumerate() {
        let want = plan.m_reduced[k];
        if want == 0 {
            continue;
        }
        let got = f.zero_order(*z, ORDER_TOL)?;
        if got != want {
            return Err(Error::Diagnostic(format!(
                "constructed characteristic function has zero order {got} at {z}, wanted {want}"
            )));
        }
    }
    Ok(())
}

/// Given `φ`, produce the unique `ψ` with `conj(aⱼ)·bⱼ = cⱼ` on the pole
/// set. Zero coefficients of `φ` must be matched by target points on the
/// base spectrum (or fall into the surplus); the corresponding `ψ`
/// components stay free and default to zero.
pub fn design_psi_given_phi(
    base: &BaseOperator,
    phi: &[Complex64],
    target: &TargetSpectrum,
    mode: BudgetMode,
) -> Result<AssignmentResult> {
    let n = base.len();
    if phi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: phi.len(),
        });
    }
    if phi.iter().all(|v| *v == ZERO) {
        return Err(Error::ZeroVector("phi"));
    }
    let zeros: Vec<usize> = (0..n).filter(|&p| phi[p] == ZERO).collect();
    let plan = plan_design(base, target, mode, &zeros)?;
    for &p in &plan.i1 {
        if phi[p] == ZERO {
            return Err(Error::Genericity(format!(
                "phi has a zero coefficient at pole position {p}"
            )));
        }
    }
    let c = residues_for_plan(base, target, &plan);
    let mut b = vec![ZERO; n];
    for &p in &plan.i1 {
        b[p] = c[p] / phi[p].conj();
    }
    let pair = PerturbationPair::new(phi.to_vec(), b)?;
    let condition_estimate = plan_condition(base, target, &plan);
    if condition_estimate < VERIFY_COND_CAP {
        verify_orders(base, &pair, target, &plan)?;
    }
    Ok(AssignmentResult {
        pair,
        residues: c,
        condition_estimate,
        free_positions: zeros,
    })
}

/// Mirror image of [`design_psi_given_phi`]: given `ψ`, set
/// `aⱼ = conj(cⱼ/bⱼ)` on the pole set.
pub fn design_phi_given_psi(
    base: &BaseOperator,
    psi: &[Complex64],
    target: &TargetSpectrum,
    mode: BudgetMode,
) -> Result<AssignmentResult> {
    let n = base.len();
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi.len(),
        });
    }
    if psi.iter().all(|v| *v == ZERO) {
        return Err(Error::ZeroVector("psi"));
    }
    let zeros: Vec<usize> = (0..n).filter(|&p| psi[p] == ZERO).collect();
    let plan = plan_design(base, target, mode, &zeros)?;
    for &p in &plan.i1 {
        if psi[p] == ZERO {
            return Err(Error::Genericity(format!(
                "psi has a zero coefficient at pole position {p}"
            )));
        }
    }
    let c = residues_for_plan(base, target, &plan);
    let mut a = vec![ZERO; n];
    for &p in &plan.i1 {
        a[p] = (c[p] / psi[p]).conj();
    }
    let pair = PerturbationPair::new(a, psi.to_vec())?;
    let condition_estimate = plan_condition(base, target, &plan);
    if condition_estimate < VERIFY_COND_CAP {
        verify_orders(base, &pair, target, &plan)?;
    }
    Ok(AssignmentResult {
        pair,
        residues: c,
        condition_estimate,
        free_positions: zeros,
    })
}

/// Assignment through the confluent Cauchy system on the first `N = Σ mⱼ`
/// window positions, with `aₖ = 1`, `bₖ = cₖ`. No target point may lie on
/// the base spectrum.
pub fn design_confluent(
    base: &BaseOperator,
    target: &TargetSpectrum,
    mode: BudgetMode,
) -> Result<AssignmentResult> {
    let n = base.len();
    let total = target.total();
    let tol = SPECTRUM_MATCH_TOL * base.span();
    for z in target.points() {
        let (pos, dist) = base.nearest(*z);
        if dist <= tol {
            return Err(Error::TargetOnSpectrum {
                z: *z,
                lambda: base.lambda(pos),
            });
        }
    }
    match mode {
        BudgetMode::Exact if total != n => {
            return Err(Error::MultiplicityBudget {
                requested: total,
                available: n,
            })
        }
        _ if total > n => {
            return Err(Error::MultiplicityBudget {
                requested: total,
                available: n,
            })
        }
        _ => {}
    }
    let lambdas = &base.lambdas()[..total];
    let sys = confluent_system_matrix(lambdas, target);
    let mut rhs = vec![ZERO; total];
    let mut r = 0;
    for &m in target.multiplicities() {
        rhs[r] = -ONE; // the m = 1 row carries the inhomogeneity
        r += m;
    }
    let lu = Lu::factor(&sys);
    if lu.is_singular() {
        return Err(Error::SingularSystem(
            "confluent Cauchy system lost full rank in floating point".into(),
        ));
    }
    let c_head = lu.solve(&rhs)?;
    let s = singular_values(&sys);
    let condition_estimate = match (s.first(), s.last()) {
        (Some(&smax), Some(&smin)) if smin > 0.0 => smax / smin,
        _ => f64::INFINITY,
    };

    let mut a = vec![ZERO; n];
    let mut b = vec![ZERO; n];
    let mut c_full = vec![ZERO; n];
    for k in 0..total {
        a[k] = ONE;
        b[k] = c_head[k];
        c_full[k] = c_head[k];
    }
    let pair = PerturbationPair::new(a, b)?;
    let free_positions: Vec<usize> = (total..n).collect();
    Ok(AssignmentResult {
        pair,
        residues: c_full,
        condition_estimate,
        free_positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Lu;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn c(re_: f64, im: f64) -> Complex64 {
        Complex64::new(re_, im)
    }

    fn base12() -> BaseOperator {
        BaseOperator::new(vec![1.0, 2.0], 0, None).unwrap()
    }

    #[test]
    fn reduce_multiplicities_cases() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let (m, matched) = reduce_multiplicities(&base, &t);
        assert_eq!(m, vec![2]);
        assert_eq!(matched, vec![None]);

        let t = TargetSpectrum::new(vec![re(1.0)], vec![3]).unwrap();
        let (m, matched) = reduce_multiplicities(&base, &t);
        assert_eq!(m, vec![2]);
        assert_eq!(matched, vec![Some(0)]);

        let t = TargetSpectrum::new(vec![re(1.0)], vec![1]).unwrap();
        let (m, _) = reduce_multiplicities(&base, &t);
        assert_eq!(m, vec![0]);
    }

    #[test]
    fn residues_match_hand_computation() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let (c_, _) = prescribed_residues(&base, &t, BudgetMode::Exact).unwrap();
        assert!((c_[0] - re(1.0)).norm() < 1e-14);
        assert!((c_[1] - re(-4.0)).norm() < 1e-14);

        let base01 = BaseOperator::new(vec![0.0, 1.0], 0, None).unwrap();
        let t = TargetSpectrum::new(vec![c(0.0, 1.0)], vec![2]).unwrap();
        let (c_, _) = prescribed_residues(&base01, &t, BudgetMode::Exact).unwrap();
        assert!((c_[0] - re(-1.0)).norm() < 1e-14);
        assert!((c_[1] - c(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn residues_with_target_on_spectrum() {
        // single eigenvalue kept: no poles at all, F ≡ 1
        let base = BaseOperator::new(vec![5.0], 0, None).unwrap();
        let t = TargetSpectrum::new(vec![re(5.0)], vec![1]).unwrap();
        let (c_, plan) = prescribed_residues(&base, &t, BudgetMode::Exact).unwrap();
        assert!(plan.i1.is_empty());
        assert_eq!(c_, vec![ZERO]);
    }

    #[test]
    fn design_psi_nilpotent() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let r =
            design_psi_given_phi(&base, &[re(1.0), re(1.0)], &t, BudgetMode::Exact).unwrap();
        assert!((r.pair.b()[0] - re(1.0)).norm() < 1e-14);
        assert!((r.pair.b()[1] - re(-4.0)).norm() < 1e-14);
        assert!(r.free_positions.is_empty());
        assert!(r.condition_estimate < 100.0);
    }

    #[test]
    fn design_psi_rejects_unexplained_zero() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let err = design_psi_given_phi(&base, &[ZERO, re(1.0)], &t, BudgetMode::Exact);
        assert!(matches!(err, Err(Error::Genericity(_))));
    }

    #[test]
    fn design_phi_mirrors() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let r =
            design_phi_given_psi(&base, &[re(1.0), re(1.0)], &t, BudgetMode::Exact).unwrap();
        assert!((r.pair.a()[0] - re(1.0)).norm() < 1e-14);
        assert!((r.pair.a()[1] - re(-4.0)).norm() < 1e-14);

        let base01 = BaseOperator::new(vec![0.0, 1.0], 0, None).unwrap();
        let t = TargetSpectrum::new(vec![c(0.0, 1.0)], vec![2]).unwrap();
        let r =
            design_phi_given_psi(&base01, &[re(1.0), re(1.0)], &t, BudgetMode::Exact).unwrap();
        // a = conj(c/b): c = (−1, 2i) ⇒ a = (−1, −2i)
        assert!((r.pair.a()[0] - re(-1.0)).norm() < 1e-14);
        assert!((r.pair.a()[1] - c(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn confluent_agrees_with_residues() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let r = design_confluent(&base, &t, BudgetMode::Exact).unwrap();
        assert!((r.residues[0] - re(1.0)).norm() < 1e-12);
        assert!((r.residues[1] - re(-4.0)).norm() < 1e-12);
    }

    #[test]
    fn confluent_rejects_target_on_spectrum() {
        let base = base12();
        let t = TargetSpectrum::new(vec![re(1.0), re(0.0)], vec![1, 1]).unwrap();
        assert!(matches!(
            design_confluent(&base, &t, BudgetMode::Exact),
            Err(Error::TargetOnSpectrum { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let base = base12();
        let t = TargetSpectrum::new(vec![ZERO], vec![1]).unwrap();
        assert!(matches!(
            design_psi_given_phi(&base, &[re(1.0), re(1.0)], &t, BudgetMode::Exact),
            Err(Error::MultiplicityBudget { .. })
        ));
        // surplus mode parks position 1 and keeps λ = 2 as an eigenvalue
        let r =
            design_psi_given_phi(&base, &[re(1.0), re(1.0)], &t, BudgetMode::AllowSurplus)
                .unwrap();
        assert_eq!(r.pair.b()[1], ZERO);
    }

    #[test]
    fn cauchy_determinant_simple_2x2() {
        // λ = (1,2), simple targets (3,4): direct det −1/12, closed form
        // carries the same sign under the documented row ordering
        let t = TargetSpectrum::new(vec![re(3.0), re(4.0)], vec![1, 1]).unwrap();
        let lambdas = [1.0, 2.0];
        let closed = confluent_cauchy_determinant(&lambdas, &t).unwrap();
        let direct = Lu::factor(&confluent_system_matrix(&lambdas, &t)).det();
        assert!((closed - direct).norm() < 1e-12);
        assert!((closed - re(-1.0 / 12.0)).norm() < 1e-12);
    }

    #[test]
    fn cauchy_determinant_confluent_2x2() {
        let t = TargetSpectrum::new(vec![ZERO], vec![2]).unwrap();
        let lambdas = [1.0, 2.0];
        let closed = confluent_cauchy_determinant(&lambdas, &t).unwrap();
        let direct = Lu::factor(&confluent_system_matrix(&lambdas, &t)).det();
        assert!(
            (closed - direct).norm() < 1e-12 * direct.norm().max(1.0),
            "closed {closed} vs direct {direct}"
        );
        // rows (1/λₖ, 1/λₖ²) give det 1/4·... = −1/4
        assert!((direct - re(-0.25)).norm() < 1e-14);
    }

    #[test]
    fn cauchy_determinant_1x1() {
        let t = TargetSpectrum::new(vec![ZERO], vec![1]).unwrap();
        let closed = confluent_cauchy_determinant(&[1.0], &t).unwrap();
        assert!((closed - re(1.0)).norm() < 1e-14);
    }

    #[test]
    fn conjugating_targets_conjugates_residues_exactly() {
        let base = BaseOperator::new(vec![0.0, 1.0, 2.5, 4.0], 0, None).unwrap();
        let t = TargetSpectrum::new(vec![c(0.5, 1.5), c(-1.0, -0.25)], vec![3, 1]).unwrap();
        let (c1, _) = prescribed_residues(&base, &t, BudgetMode::Exact).unwrap();
        let (c2, _) = prescribed_residues(&base, &t.conjugate(), BudgetMode::Exact).unwrap();
        for (x, y) in c1.iter().zip(&c2) {
            assert_eq!(*x, y.conj());
        }
    }
}
