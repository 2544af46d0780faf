//! Arithmetic formula/circuit IR and the compiler passes: input
//! homogenization, conversion to the arity-3 basis, Brent and VSBR depth
//! reductions, Ben-Or–Cleve matrix programs, and continuant compilation.
//!
//! Formula-ness is a checked predicate on the one `Circuit` type (every gate
//! feeds at most one parent), not a separate type. Edge scales are permitted
//! on circuits; passes that produce formulas emit unit scales.

mod arity3;
mod boc;
mod brent;
mod continuant;
mod cpoly;
mod ihl;
mod ir;
mod vsbr;

pub use arity3::to_arity3;
pub use boc::{ben_or_cleve, ben_or_cleve_trace, MatrixProgram, ProgramPosition};
pub use brent::{brent_arity3, brent_depth_bound};
pub use continuant::{continuant_compile, ContinuantInput, ContinuantProgram};
pub use cpoly::{c_poly, c_poly_at, c_poly_enumerated, nc_elementary};
pub use ihl::{brent_standard, ihl_homogenize};
pub use ir::{Circuit, CircuitBuilder, GateId, GateKind};
pub use vsbr::{check_product_degree_ratio, vsbr_arity3, vsbr_mult_depth_bound};
