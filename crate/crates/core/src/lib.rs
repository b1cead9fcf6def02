//! Divisor-count gaps between two linear forms.
//!
//! For `d(A, m) = #{a ∈ A : a | m}` and integers `b, c, e, f`, this crate
//! decides whether `|d(A, bn+c) - d(A, en+f)|` is unbounded for every infinite
//! `A ⊂ ℕ`, and backs each answer with evidence that can be re-checked:
//!
//! - [`classify`] returns a [`Verdict`]; negative verdicts carry a
//!   [`CounterexampleFamily`] with a proved bound.
//! - [`witness`] builds [`WitnessCertificate`]s showing a gap of at least `K`
//!   at an explicit `n`, and re-verifies them from scratch.
//! - [`explore`] scans difference sequences for arbitrary polynomial pairs.
//!
//! Supporting layers are [`arith`] (gcd, valuations, primality, prime search
//! in residue classes) and [`sets`] (set descriptions and the counting
//! function).

pub mod arith;
pub mod classify;
pub mod error;
pub mod explore;
pub mod json;
pub mod sets;
pub mod witness;

pub use arith::{Attestation, PrimalityConfig, SearchCaps};
pub use classify::{classify, proof_bound, Case, CaseLabel, CounterexampleFamily, FamilyKind, Instance, Side, Verdict, VerdictKind};
pub use error::{Error, Result};
pub use explore::{chen_gap, scan_difference, verify_counterexample, CounterexampleReport, IntPolynomial, ScanReport};
pub use sets::{Count, SetSpec};
pub use witness::{make_witness, sarkozy_witness, verify_certificate, WitnessCertificate, WitnessRequest};
