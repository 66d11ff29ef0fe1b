//! Exact tools for discriminant-growth invariants of number fields.
//!
//! The polynomial layer is generic over the coefficient ring (see
//! [`poly::Coeff`]) and the root finder over the float type; the aliases
//! below fix the scalars used throughout.

pub mod abelian;
pub mod arith;
mod error;
pub mod gamma;
pub mod heights;
pub mod linalg;
pub mod numfield;
pub mod poly;

pub use error::{Error, Result};

pub use abelian::AbelianField;
pub use arith::FactoredReal;
pub use numfield::NumberField;

/// Polynomials with integer coefficients.
pub type IntPolynomial = poly::IntPoly;
/// Polynomials with rational coefficients.
pub type RatPolynomial = poly::RatPoly;
/// Polynomials over a prime field.
pub type ModPolynomial = poly::modp::ModPoly;
/// Double-precision complex roots.
pub type Root = num_complex::Complex64;
