//! Command-level operations behind the `r1s` binary: JSON/CSV file
//! formats, the target-string grammar, the consistency suite run by
//! `verify`, and the `design`/`example`/`scan`/`charfn` front ends.
//!
//! Exit-code contract (scripting-friendly):
//! `0` success, `1` verification found an inconsistency, `2` input
//! contract violation, `3` conditioning or convergence failure.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::assignment::{
    design_confluent, design_phi_given_psi, design_psi_given_phi, AssignmentResult, BudgetMode,
    TargetSpectrum,
};
use crate::charfn::{krein_apply, predicted_spectrum, CharFn, SPLIT_TOL};
use crate::error::{Error, Result};
use crate::jordan::{certify_multiplicity, chain_resolvent_case, chain_sigma0, JordanChain};
use crate::linalg::norm2;
use crate::localization::{scan_report, strip_halfwidth};
use crate::operator::{
    assemble_dense, periodic_derivative, split_indices, BaseOperator, PerturbationPair,
};
use crate::oracle;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct GlobalOpts {
    /// Base tolerance for zero/eigenvalue detection inside `verify`.
    pub tol: f64,
    /// Seed for the randomized resolvent spot checks.
    pub seed: u64,
    /// Indentation of emitted JSON; 0 writes compact JSON.
    pub json_indent: usize,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            tol: 1e-8,
            seed: 0,
            json_indent: 2,
        }
    }
}

/// Map an error to the published exit code.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::IllConditioned { .. }
        | Error::SingularSystem(_)
        | Error::NonConvergence(_)
        | Error::RankNotStabilized { .. }
        | Error::NearEigenvalue { .. } => 3,
        Error::Diagnostic(_) => 1,
        _ => 2,
    }
}

// ---------------------------------------------------------------------
// complex literals and target strings
// ---------------------------------------------------------------------

/// Parse `a+bi` complex literals: `3`, `-1.5e-3`, `i`, `-i`, `2i`, `1+2i`,
/// `1.5e2-0.25i`.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let t: String = input.trim().replace(' ', "");
    let err = || Error::Parse {
        what: "complex literal",
        input: input.to_string(),
    };
    if t.is_empty() {
        return Err(err());
    }
    let parse_real = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|_| err()) };
    let parse_imag_coeff = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => parse_real(other),
        }
    };
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // split at the last sign that is not an exponent sign and not leading
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => Ok(Complex64::new(
                parse_real(&body[..k])?,
                parse_imag_coeff(&body[k..])?,
            )),
            None => Ok(Complex64::new(0.0, parse_imag_coeff(body)?)),
        }
    } else {
        Ok(Complex64::new(parse_real(&t)?, 0.0))
    }
}

/// Shortest-round-trip rendering accepted back by [`parse_complex`].
pub fn format_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// Parse the target grammar `point:multiplicity[,point:multiplicity…]`,
/// e.g. `0:2,1+2i:1`.
pub fn parse_targets(input: &str) -> Result<TargetSpectrum> {
    let mut points = Vec::new();
    let mut mults = Vec::new();
    for part in input.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (point_str, mult_str) = part.rsplit_once(':').ok_or_else(|| Error::Parse {
            what: "target entry (expected point:multiplicity)",
            input: part.to_string(),
        })?;
        points.push(parse_complex(point_str)?);
        mults.push(mult_str.trim().parse::<usize>().map_err(|_| Error::Parse {
            what: "target multiplicity",
            input: mult_str.to_string(),
        })?);
    }
    TargetSpectrum::new(points, mults)
}

pub fn format_targets(t: &TargetSpectrum) -> String {
    t.points()
        .iter()
        .zip(t.multiplicities())
        .map(|(z, m)| format!("{}:{}", format_complex(*z), m))
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------
// file formats
// ---------------------------------------------------------------------

fn c2a(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn a2c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `base.json`: the diagonal operator.
#[derive(Debug, Serialize, Deserialize)]
pub struct BaseJson {
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub index_offset: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_d: Option<f64>,
}

impl BaseJson {
    pub fn from_base(base: &BaseOperator) -> Self {
        BaseJson {
            lambdas: base.lambdas().to_vec(),
            index_offset: base.index_offset(),
            gap_d: base.gap_d(),
        }
    }

    pub fn into_base(self) -> Result<BaseOperator> {
        BaseOperator::new(self.lambdas, self.index_offset, self.gap_d)
    }
}

/// `pair.json` / combined problem file. Complex numbers are `[re, im]`
/// pairs everywhere. The `lambdas`/`index_offset` fields are optional in
/// a bare pair file and mandatory in the combined problem schema.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_offset: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_d: Option<f64>,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
}

impl ProblemJson {
    pub fn pair(&self) -> Result<PerturbationPair> {
        PerturbationPair::new(
            self.a.iter().copied().map(a2c).collect(),
            self.b.iter().copied().map(a2c).collect(),
        )
    }

    pub fn from_parts(base: &BaseOperator, pair: &PerturbationPair) -> Self {
        ProblemJson {
            lambdas: Some(base.lambdas().to_vec()),
            index_offset: Some(base.index_offset()),
            gap_d: base.gap_d(),
            a: pair.a().iter().copied().map(c2a).collect(),
            b: pair.b().iter().copied().map(c2a).collect(),
        }
    }
}

/// Output of `design`: the full problem plus design metadata.
#[derive(Debug, Serialize, Deserialize)]
pub struct DesignJson {
    #[serde(flatten)]
    pub problem: ProblemJson,
    /// Products `conj(aⱼ)·bⱼ` realized on the window.
    pub c: Vec<[f64; 2]>,
    pub condition_estimate: f64,
    /// Integer index labels whose `ψ` (or `φ`) component stayed free.
    pub free_indices: Vec<i64>,
    pub mode: String,
}

/// `charfn --dump` payload.
#[derive(Debug, Serialize, Deserialize)]
pub struct CharFnJson {
    pub poles: Vec<f64>,
    pub c: Vec<[f64; 2]>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T, indent: usize) -> Result<()> {
    let text = render_json(value, indent)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn render_json<T: Serialize>(value: &T, indent: usize) -> Result<String> {
    if indent == 0 {
        Ok(serde_json::to_string(value)?)
    } else {
        let pad = vec![b' '; indent];
        let mut out = Vec::new();
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
        let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
        value.serialize(&mut ser)?;
        Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
    }
}

fn read_base(path: &Path) -> Result<BaseOperator> {
    read_json::<BaseJson>(path)?.into_base()
}

fn read_problem(base_path: &Path, pair_path: &Path) -> Result<(BaseOperator, PerturbationPair)> {
    let base = read_base(base_path)?;
    let problem: ProblemJson = read_json(pair_path)?;
    if let Some(lambdas) = &problem.lambdas {
        if lambdas.len() != base.len()
            || lambdas
                .iter()
                .zip(base.lambdas())
                .any(|(x, y)| (x - y).abs() > 0.0)
        {
            return Err(Error::InconsistentInput(
                "pair file embeds a different base operator".into(),
            ));
        }
    }
    let pair = problem.pair()?;
    if pair.len() != base.len() {
        return Err(Error::DimensionMismatch {
            expected: base.len(),
            got: pair.len(),
        });
    }
    Ok((base, pair))
}

/// Coefficient vector file: a bare JSON array of `[re, im]` pairs.
pub fn read_coefficients(path: &Path) -> Result<Vec<Complex64>> {
    let raw: Vec<[f64; 2]> = read_json(path)?;
    Ok(raw.into_iter().map(a2c).collect())
}

// ---------------------------------------------------------------------
// verification suite
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct EigenvalueEntry {
    pub z: [f64; 2],
    pub algebraic: usize,
    pub geometric: usize,
    pub f_zero_order: usize,
    pub sigma0: bool,
    pub h0: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_max_residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub checks: Vec<CheckResult>,
    pub strip_halfwidth: f64,
    pub max_abs_im: f64,
    pub oracle_backward_error: f64,
    pub eigenvalues: Vec<EigenvalueEntry>,
    /// Eigenvalues inherited verbatim because both coefficients vanish.
    pub inherited: Vec<f64>,
}

impl VerificationReport {
    pub fn failing_check(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.ok)
    }
}

/// Matching radius for one predicted eigenvalue of multiplicity `m`: a
/// multiplicity-`m` eigenvalue moves like the m-th root of the backward
/// error, so the tolerance widens accordingly.
fn match_tol(m: usize, span: f64) -> f64 {
    let base = if m >= 2 { 1e-4 } else { 1e-7 };
    let sensitivity = 5e-13f64.powf(1.0 / m as f64);
    base.max(sensitivity) * span.max(1.0)
}

struct SplitMix(u64);

impl SplitMix {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    fn next_signed(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

/// Run the full theory-vs-oracle consistency suite on one problem.
pub fn verify_consistency(
    base: &BaseOperator,
    pair: &PerturbationPair,
    opts: &GlobalOpts,
) -> Result<VerificationReport> {
    let b = assemble_dense(base, pair)?;
    let scale = b.frobenius_norm().max(1.0);
    let span = base.span();
    let preds = predicted_spectrum(base, pair)?;
    let report = oracle::dense_eigenvalues(&b, 1e-10 * scale)?;
    let mut checks: Vec<CheckResult> = Vec::new();

    // eigenvalue count
    let total: usize = preds.iter().map(|p| p.algebraic).sum();
    checks.push(CheckResult {
        name: "eigenvalue-count".into(),
        ok: total == base.len(),
        detail: format!("predicted {total}, window {}", base.len()),
    });

    // multiset match, multiplicity-aware
    let mut pool: Vec<Complex64> = report.values.clone();
    let mut multiset_ok = true;
    let mut multiset_detail = String::new();
    for p in &preds {
        let tol = match_tol(p.algebraic, span);
        for _ in 0..p.algebraic {
            let nearest = pool
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| {
                    (*x - p.z).norm().partial_cmp(&(*y - p.z).norm()).unwrap()
                })
                .map(|(k, v)| (k, (v - p.z).norm()));
            match nearest {
                Some((k, dist)) if dist <= tol => {
                    pool.swap_remove(k);
                }
                Some((_, dist)) => {
                    multiset_ok = false;
                    let _ = write!(
                        multiset_detail,
                        "missing oracle eigenvalue for {} (mult {}, nearest at {dist:.3e} > {tol:.3e}); ",
                        format_complex(p.z),
                        p.algebraic
                    );
                    break;
                }
                None => {
                    multiset_ok = false;
                    multiset_detail.push_str("oracle pool exhausted; ");
                    break;
                }
            }
        }
    }
    if !pool.is_empty() {
        multiset_ok = false;
        let _ = write!(multiset_detail, "{} unclaimed oracle eigenvalues", pool.len());
    }
    checks.push(CheckResult {
        name: "eigenvalue-multiset".into(),
        ok: multiset_ok,
        detail: if multiset_detail.is_empty() {
            format!("{} predicted eigenvalues matched", preds.len())
        } else {
            multiset_detail
        },
    });

    // per-eigenvalue certificates and chains; --tol can only loosen the
    // published thresholds, never tighten below them
    let chain_threshold = opts.tol.max(1e-8);
    let krein_threshold = (opts.tol * 1e-2).max(1e-10);
    let mut entries = Vec::new();
    let mut inherited = Vec::new();
    let mut cert_ok = true;
    let mut cert_detail = String::new();
    let mut chain_ok = true;
    let mut chain_detail = String::new();
    for p in &preds {
        let mut chain_res: Option<f64> = None;
        let cert = match certify_multiplicity(base, pair, p.z) {
            Ok(c) => c,
            Err(e) => {
                cert_ok = false;
                let _ = write!(cert_detail, "{}: {e}; ", format_complex(p.z));
                entries.push(EigenvalueEntry {
                    z: c2a(p.z),
                    algebraic: p.algebraic,
                    geometric: 0,
                    f_zero_order: 0,
                    sigma0: p.sigma0,
                    h0: p.h0,
                    chain_max_residual: None,
                });
                continue;
            }
        };
        if cert.algebraic != p.algebraic {
            cert_ok = false;
            let _ = write!(
                cert_detail,
                "{}: certificate {} vs predicted {}; ",
                format_complex(p.z),
                cert.algebraic,
                p.algebraic
            );
        }
        if p.h0 {
            inherited.push(p.z.re);
        } else {
            let chain: Result<JordanChain> = if p.sigma0 {
                let pos = base.nearest(p.z).0;
                chain_sigma0(base, pair, pos, cert.algebraic)
            } else {
                chain_resolvent_case(base, pair, p.z, cert.f_zero_order)
            };
            match chain {
                Ok(ch) => {
                    let r = ch.max_residual();
                    chain_res = Some(r);
                    if r > chain_threshold {
                        chain_ok = false;
                        let _ = write!(
                            chain_detail,
                            "{}: residual {r:.3e}; ",
                            format_complex(p.z)
                        );
                    }
                }
                Err(e) => {
                    chain_ok = false;
                    let _ = write!(chain_detail, "{}: {e}; ", format_complex(p.z));
                }
            }
        }
        entries.push(EigenvalueEntry {
            z: c2a(p.z),
            algebraic: cert.algebraic,
            geometric: cert.geometric,
            f_zero_order: cert.f_zero_order,
            sigma0: cert.sigma0_member,
            h0: p.h0,
            chain_max_residual: chain_res,
        });
    }
    checks.push(CheckResult {
        name: "multiplicity-certificates".into(),
        ok: cert_ok,
        detail: if cert_detail.is_empty() {
            "theory and rank-stabilization multiplicities agree".into()
        } else {
            cert_detail
        },
    });
    checks.push(CheckResult {
        name: "jordan-chains".into(),
        ok: chain_ok,
        detail: if chain_detail.is_empty() {
            format!("all link residuals <= {chain_threshold:.1e}")
        } else {
            chain_detail
        },
    });

    // strip containment
    let halfwidth = strip_halfwidth(pair);
    let max_abs_im = report
        .values
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);
    let strip_ok = max_abs_im <= halfwidth + 1e-8 * scale;
    checks.push(CheckResult {
        name: "strip".into(),
        ok: strip_ok,
        detail: format!("max |Im mu| = {max_abs_im:.6e}, halfwidth = {halfwidth:.6e}"),
    });

    // seeded resolvent spot checks
    let mut rng = SplitMix(opts.seed ^ 0xc0ffee);
    let lam_lo = base.lambdas()[0];
    let lam_hi = *base.lambdas().last().unwrap();
    let mid = 0.5 * (lam_lo + lam_hi);
    let half = 0.5 * (lam_hi - lam_lo) + 1.0;
    let mut krein_ok = true;
    let mut krein_detail = String::new();
    let mut done = 0;
    let mut attempts = 0;
    while done < 5 && attempts < 200 {
        attempts += 1;
        let z = Complex64::new(
            mid + 2.0 * half * rng.next_signed(),
            (halfwidth + 1.0) * (2.0 * rng.next_signed()),
        );
        let g: Vec<Complex64> = (0..base.len())
            .map(|_| Complex64::new(rng.next_signed(), rng.next_signed()))
            .collect();
        if norm2(&g) == 0.0 {
            continue;
        }
        let f = match krein_apply(base, pair, z, &g) {
            Ok(f) => f,
            Err(_) => continue, // too close to the spectrum; resample
        };
        let mut r = b.matvec(&f);
        for ((ri, fi), gi) in r.iter_mut().zip(&f).zip(&g) {
            *ri -= z * fi + gi;
        }
        let rel = norm2(&r) / norm2(&g);
        if rel > krein_threshold {
            krein_ok = false;
            let _ = write!(
                krein_detail,
                "z = {}: residual {rel:.3e}; ",
                format_complex(z)
            );
        }
        done += 1;
    }
    checks.push(CheckResult {
        name: "krein-resolvent".into(),
        ok: krein_ok && done > 0,
        detail: if krein_detail.is_empty() {
            format!("{done} spot checks <= {krein_threshold:.1e}")
        } else {
            krein_detail
        },
    });

    let ok = checks.iter().all(|c| c.ok);
    Ok(VerificationReport {
        ok,
        checks,
        strip_halfwidth: halfwidth,
        max_abs_im,
        oracle_backward_error: report.backward_error,
        eigenvalues: entries,
        inherited,
    })
}

// ---------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignRoute {
    Residue,
    Confluent,
}

pub struct DesignCmd<'a> {
    pub base: &'a Path,
    /// Fixed φ coefficients (residue route).
    pub phi: Option<&'a Path>,
    /// Fixed ψ coefficients (residue route, mirrored).
    pub psi: Option<&'a Path>,
    pub targets: &'a str,
    pub route: DesignRoute,
    pub relaxed: bool,
    pub out: &'a Path,
}

/// `design`: build the perturbation pair realizing the target spectrum
/// and write the combined problem JSON with metadata.
pub fn cmd_design(opts: &GlobalOpts, cmd: &DesignCmd) -> Result<()> {
    let base = read_base(cmd.base)?;
    let target = parse_targets(cmd.targets)?;
    let mode = if cmd.relaxed {
        BudgetMode::AllowSurplus
    } else {
        BudgetMode::Exact
    };
    let (result, mode_name): (AssignmentResult, &str) = match cmd.route {
        DesignRoute::Confluent => (design_confluent(&base, &target, mode)?, "confluent"),
        DesignRoute::Residue => {
            if let Some(psi_path) = cmd.psi {
                let psi = read_coefficients(psi_path)?;
                (design_phi_given_psi(&base, &psi, &target, mode)?, "residue")
            } else {
                let phi = match cmd.phi {
                    Some(p) => read_coefficients(p)?,
                    None => vec![Complex64::new(1.0, 0.0); base.len()],
                };
                (design_psi_given_phi(&base, &phi, &target, mode)?, "residue")
            }
        }
    };
    if result.condition_estimate > 1e12 {
        return Err(Error::IllConditioned {
            estimate: result.condition_estimate,
        });
    }
    if result.condition_estimate > 1e10 {
        eprintln!(
            "warning: condition estimate {:.3e} above 1e10; designed spectrum may be inaccurate",
            result.condition_estimate
        );
    }
    let out = DesignJson {
        problem: ProblemJson::from_parts(&base, &result.pair),
        c: result.residues.iter().copied().map(c2a).collect(),
        condition_estimate: result.condition_estimate,
        free_indices: result
            .free_positions
            .iter()
            .map(|&p| base.index_of_position(p))
            .collect(),
        mode: mode_name.to_string(),
    };
    write_json(cmd.out, &out, opts.json_indent)
}

pub struct VerifyCmd<'a> {
    pub base: &'a Path,
    pub pair: &'a Path,
    /// Optional eigenvalue at which to emit a Jordan chain CSV.
    pub at: Option<&'a str>,
    pub chain_out: Option<&'a Path>,
    pub report_out: Option<&'a Path>,
}

/// `verify`: run the consistency suite; returns whether it passed.
pub fn cmd_verify(opts: &GlobalOpts, cmd: &VerifyCmd) -> Result<bool> {
    let (base, pair) = read_problem(cmd.base, cmd.pair)?;
    let report = verify_consistency(&base, &pair, opts)?;
    if let Some(at) = cmd.at {
        let z = parse_complex(at)?;
        let cert = certify_multiplicity(&base, &pair, z)?;
        let chain = if cert.sigma0_member {
            let pos = base.nearest(z).0;
            chain_sigma0(&base, &pair, pos, cert.algebraic)?
        } else {
            chain_resolvent_case(&base, &pair, z, cert.f_zero_order)?
        };
        if let Some(path) = cmd.chain_out {
            std::fs::write(path, chain_csv(&chain))?;
        } else {
            print!("{}", chain_csv(&chain));
        }
    }
    match cmd.report_out {
        Some(path) => write_json(path, &report, opts.json_indent)?,
        None => println!("{}", render_json(&report, opts.json_indent)?),
    }
    if let Some(fail) = report.failing_check() {
        eprintln!("verification failed: {} ({})", fail.name, fail.detail);
    }
    Ok(report.ok)
}

fn chain_csv(chain: &JordanChain) -> String {
    let dim = chain.vectors.first().map(|v| v.len()).unwrap_or(0);
    let mut out = String::from("k");
    for p in 0..dim {
        let _ = write!(out, ",re_{p},im_{p}");
    }
    out.push_str(",residual\n");
    for (k, v) in chain.vectors.iter().enumerate() {
        let _ = write!(out, "{k}");
        for x in v {
            let _ = write!(out, ",{},{}", x.re, x.im);
        }
        let _ = writeln!(out, ",{:e}", chain.residuals[k]);
    }
    out
}

pub struct ExampleCmd<'a> {
    pub name: &'a str,
    pub m: usize,
    /// Window radius for `periodic-derivative` (defaults to `m + 3`).
    pub window: Option<i64>,
    pub out_dir: Option<&'a Path>,
}

#[derive(Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub ok: bool,
    pub detail: String,
    pub verification: VerificationReport,
}

/// `example`: build one of the named showcase models, verify it, and
/// write the problem + report artifacts.
pub fn cmd_example(opts: &GlobalOpts, cmd: &ExampleCmd) -> Result<bool> {
    let (name, base, pair, ok_specific, detail) = match cmd.name {
        "periodic-derivative" => {
            let m = cmd.m.max(1);
            let window = cmd.window.unwrap_or(m as i64 + 3);
            let (base, pair) = periodic_derivative(m, window)?;
            let cert = certify_multiplicity(&base, &pair, ZERO)?;
            let want = 2 * m + 1;
            let mut ok = cert.algebraic == want && cert.f_zero_order == 2 * m;
            let mut detail = format!(
                "algebraic multiplicity at 0: {} (zero order {} + 1), want {want}",
                cert.algebraic, cert.f_zero_order
            );
            let scan = crate::localization::asymptotics_scan(&base, &pair)?;
            let max_outer = scan
                .deviations
                .iter()
                .filter(|(n, _)| n.abs() > m as i64)
                .map(|(_, d)| *d)
                .fold(0.0, f64::max);
            if max_outer > 1e-10 {
                ok = false;
                let _ = write!(detail, "; eigenvalue beyond the support moved by {max_outer:.3e}");
            }
            ("periodic-derivative", base, pair, ok, detail)
        }
        "move-to-i" => {
            let m = cmd.m.max(1);
            let base = BaseOperator::new((0..=m).map(|k| k as f64).collect(), 0, Some(1.0))?;
            let target = TargetSpectrum::new(vec![Complex64::new(0.0, 1.0)], vec![m + 1])?;
            let ones = vec![Complex64::new(1.0, 0.0); m + 1];
            let design = design_phi_given_psi(&base, &ones, &target, BudgetMode::Exact)?;
            let b = assemble_dense(&base, &design.pair)?;
            let rep = oracle::dense_eigenvalues(&b, 0.05)?;
            let center_dev = rep
                .clusters
                .first()
                .map(|cl| (cl.center - Complex64::new(0.0, 1.0)).norm())
                .unwrap_or(f64::INFINITY);
            let ok = rep.clusters.len() == 1
                && rep.clusters[0].size == m + 1
                && center_dev <= 1e-3;
            let detail = format!(
                "{} cluster(s); size {} want {}; |center - i| = {center_dev:.3e}",
                rep.clusters.len(),
                rep.clusters.first().map(|c| c.size).unwrap_or(0),
                m + 1
            );
            ("move-to-i", base, design.pair, ok, detail)
        }
        other => {
            return Err(Error::Parse {
                what: "example name (periodic-derivative | move-to-i)",
                input: other.to_string(),
            })
        }
    };

    let verification = verify_consistency(&base, &pair, opts)?;
    let ok = ok_specific && verification.ok;
    let report = ExampleReport {
        name: name.to_string(),
        ok,
        detail,
        verification,
    };
    if let Some(dir) = cmd.out_dir {
        std::fs::create_dir_all(dir)?;
        write_json(
            &dir.join(format!("{name}.json")),
            &ProblemJson::from_parts(&base, &pair),
            opts.json_indent,
        )?;
        write_json(&dir.join(format!("{name}-report.json")), &report, opts.json_indent)?;
    } else {
        println!("{}", render_json(&report, opts.json_indent)?);
    }
    if !ok {
        eprintln!("example {name} failed: {}", report.detail);
    }
    Ok(ok)
}

pub struct ScanCmd<'a> {
    pub base: &'a Path,
    pub pair: &'a Path,
    pub eps: f64,
    pub out: &'a Path,
}

/// `scan`: localization CSV with columns
/// `n,lambda,mu_re,mu_im,deviation,circle_count`.
pub fn cmd_scan(_opts: &GlobalOpts, cmd: &ScanCmd) -> Result<()> {
    let (base, pair) = read_problem(cmd.base, cmd.pair)?;
    let report = scan_report(&base, &pair, cmd.eps)?;
    let scan = crate::localization::asymptotics_scan(&base, &pair)?;
    let matched: std::collections::HashMap<i64, Complex64> =
        scan.matched.iter().copied().collect();
    let counts: std::collections::HashMap<i64, usize> =
        report.circle_counts.iter().copied().collect();
    let devs: std::collections::HashMap<i64, f64> = report.deviations.iter().copied().collect();
    let mut out = String::from("n,lambda,mu_re,mu_im,deviation,circle_count\n");
    for p in 0..base.len() {
        let n = base.index_of_position(p);
        let lam = base.lambda(p);
        let count = counts.get(&n).map(|c| c.to_string()).unwrap_or_default();
        match (matched.get(&n), devs.get(&n)) {
            (Some(mu), Some(d)) => {
                let _ = writeln!(out, "{n},{lam},{},{},{:e},{count}", mu.re, mu.im, d);
            }
            _ => {
                let _ = writeln!(out, "{n},{lam},,,,{count}");
            }
        }
    }
    for mu in &report.relocated {
        let _ = writeln!(out, ",,{},{},,", mu.re, mu.im);
    }
    std::fs::write(cmd.out, out)?;
    Ok(())
}

pub struct CharFnCmd<'a> {
    pub base: &'a Path,
    pub pair: &'a Path,
    pub dump: Option<&'a Path>,
    pub roots_out: Option<&'a Path>,
    pub eval_at: Option<&'a str>,
}

/// `charfn`: dump the pole/coefficient form, the zero set as CSV, or a
/// point evaluation.
pub fn cmd_charfn(opts: &GlobalOpts, cmd: &CharFnCmd) -> Result<()> {
    let (base, pair) = read_problem(cmd.base, cmd.pair)?;
    let split = split_indices(&pair, SPLIT_TOL);
    let f = CharFn::from_pair(&base, &pair, &split);

    if let Some(path) = cmd.dump {
        let dump = CharFnJson {
            poles: f.poles().to_vec(),
            c: f.coefficients().iter().copied().map(c2a).collect(),
        };
        write_json(path, &dump, opts.json_indent)?;
    }
    if let Some(path) = cmd.roots_out {
        let zeros = f.zeros(1e-4 * base.span())?;
        let mut out = String::from("re,im,multiplicity,residual_order_check\n");
        for (z, mult) in zeros {
            let dist = f.min_pole_distance(z);
            let cabs: f64 = f.coefficients().iter().map(|c| c.norm()).sum();
            let mut residual: f64 = 0.0;
            for k in 0..mult {
                let d = f.scaled_derivative(z, k)?;
                let local = cabs / dist.powi(k as i32 + 1) + 1.0;
                residual = residual.max(d.norm() / local);
            }
            let _ = writeln!(out, "{},{},{mult},{residual:e}", z.re, z.im);
        }
        std::fs::write(path, out)?;
    }
    if let Some(expr) = cmd.eval_at {
        let z = parse_complex(expr)?;
        let v = f.eval(z)?;
        #[derive(Serialize)]
        struct EvalOut {
            z: [f64; 2],
            value: [f64; 2],
        }
        println!(
            "{}",
            render_json(
                &EvalOut {
                    z: c2a(z),
                    value: c2a(v)
                },
                opts.json_indent
            )?
        );
    }
    Ok(())
}
