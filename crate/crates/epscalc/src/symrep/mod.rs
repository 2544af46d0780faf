//! Partitions, symmetric-function machinery (characters, plethysm,
//! Littlewood–Richardson), orbit-multiplicity formulas and obstruction scans.
//!
//! The plethysm coefficient `a_mu(d, delta)` always denotes the multiplicity
//! of `S_mu` in `Sym^d(Sym^delta)`, i.e. the first numeric argument is the
//! *outer* exponent. Calculation tables indexed `a_lambda(delta, d)` therefore
//! translate to `plethysm_coeff(lambda, delta, d)`.

mod lr;
mod orbit;
mod partition;
mod plethysm;
mod stab;

pub use lr::{lr_coeff, multi_lr_coeff};
pub use orbit::{
    obstruction_scan, orbit_mult_p11, orbit_mult_powersum, reduced_obstruction_check, ScanEntry,
};
pub use partition::{FrequencyVector, Partition};
pub use plethysm::{mn_character, pieri_precedes, plethysm_coeff, weyl_dimension, SymCtx};
pub use stab::{
    characterize_by_stabilizer, product_plus_power, stabilizer_generators, verify_stabilizer,
    Characterization,
};
