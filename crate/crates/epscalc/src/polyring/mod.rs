//! Exact scalar tower `Q ⊂ Q(ζ_N) ⊂ Q(ζ_N)[ε,ε⁻¹]` and sparse homogeneous
//! polynomial arithmetic with ε-limits.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so the whole module is safe for unrestricted data-parallel use.

mod cyclo;
mod laurent;
mod poly;

pub use cyclo::{cyclotomic_polynomial, CycloScalar};
pub use laurent::LaurentScalar;
pub use poly::{proportional, Degree, LinearForm, Monomial, Poly};

pub type Rational = num::BigRational;

use num::BigInt;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}
