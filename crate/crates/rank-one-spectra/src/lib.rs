//! Spectral design for rank-one perturbations of self-adjoint operators.
//!
//! Given a diagonal operator `A` with simple real eigenvalues `λₙ` and a
//! pair of vectors `φ, ψ` with coefficients `aₙ, bₙ` in the eigenbasis, the
//! perturbed operator is
//!
//! ```text
//!     B = A + ⟨·, φ⟩ ψ,          (Bx)ᵢ = λᵢ xᵢ + (Σₖ xₖ conj(aₖ)) bᵢ.
//! ```
//!
//! The crate works with the scalar characteristic function
//!
//! ```text
//!     F(z) = Σₙ conj(aₙ)·bₙ / (λₙ − z) + 1,
//! ```
//!
//! whose zeros off the spectrum of `A` are exactly the relocated
//! eigenvalues of `B`, with zero order equal to algebraic multiplicity.
//! Points `λₙ` with `aₙbₙ = 0` stay eigenvalues of `B`, with multiplicity
//! one larger than the zero order of `F` there.
//!
//! On top of this the crate provides:
//!
//! * inverse design: prescribe a target spectrum with multiplicities and
//!   solve for `ψ` given `φ` (or vice versa), by residues of the prescribed
//!   characteristic function or through a confluent Cauchy linear system
//!   ([`assignment`]);
//! * Jordan chains and multiplicity certificates for every eigenvalue
//!   ([`jordan`]);
//! * localization certificates: the horizontal strip `|Im z| ≤ ‖φ‖‖ψ‖`,
//!   per-eigenvalue circles, resolvent regions and deviation scans
//!   ([`localization`]);
//! * an independent dense eigensolver oracle used to cross-check every
//!   theoretical claim ([`oracle`]).
//!
//! The `examples/` directory walks through each capability; the thin `r1s`
//! binary exposes the same operations as subcommands (`design`, `verify`,
//! `example`, `scan`, `charfn`).

pub mod assignment;
pub mod charfn;
pub mod cli;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod localization;
pub mod operator;
pub mod oracle;
pub mod poly;

pub use assignment::{AssignmentResult, BudgetMode, TargetSpectrum};
pub use charfn::{CharFn, RationalForm};
pub use error::{Error, Result};
pub use jordan::{ChainCase, JordanChain, MultiplicityCertificate};
pub use localization::LocalizationReport;
pub use operator::{BaseOperator, IndexSplit, PerturbationPair};
pub use oracle::EigenReport;
