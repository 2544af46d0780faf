//! Exact arithmetic toolkit for epsilon-degeneration calculus.
//!
//! The crate is organized around five subsystems:
//!
//! * [`polyring`] — the scalar tower `Q ⊂ Q(ζ_N) ⊂ Q(ζ_N)[ε,ε⁻¹]` and sparse
//!   multivariate polynomials over it, with exact ε-limits.
//! * [`waring`] — Waring / border-Waring decompositions, Kumar expressions,
//!   generalized additive decompositions and de-bordering transforms.
//! * [`symrep`] — partitions, symmetric-group characters, plethysm and
//!   Littlewood–Richardson machinery, orbit multiplicities and obstruction scans.
//! * [`circuit`] — an arithmetic formula/circuit IR and the compiler passes
//!   (input homogenization, arity-3 conversion, Brent and VSBR depth
//!   reductions, Ben-Or–Cleve programs, continuant compilation).
//! * [`latin`] — Latin square enumeration, column signs and the fundamental
//!   invariant evaluation.

pub mod circuit;
pub mod error;
pub mod jsonio;
pub mod latin;
pub mod polyring;
pub mod symrep;
pub mod waring;

pub use error::Error;
