//! Univariate polynomial algebra over Z, Q and F_p.

mod dense;
mod factor;
mod int;
pub mod modp;

pub use dense::{Coeff, FieldCoeff, Poly};
pub(crate) use factor::canonical_cmp;
pub use factor::{
    degree_pattern_certifies_irreducible, factor_over_q, good_prime, hensel_lift, is_irreducible,
    screen_primes, MAX_MODULAR_FACTORS,
};
pub(crate) use int::interpolate;
pub use int::{discriminant, resultant, IntPoly, RatPoly};
