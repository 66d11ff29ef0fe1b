//! Number fields given by a monic irreducible integer polynomial, with
//! maximal orders, composita and relative discriminant norms.

mod compositum;
mod order;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::modp::ModPoly;
use crate::poly::{discriminant, is_irreducible, IntPoly};

pub use compositum::{compositum, compositum_capped};
pub(crate) use order::Order;

/// Largest degree accepted by default.
pub const DEFAULT_DEGREE_CAP: usize = 24;

#[derive(Clone, Debug)]
pub struct NumberField {
    min_poly: IntPoly,
    integral_basis: Vec<Vec<BigRational>>,
    index: BigUint,
    abs_disc: BigInt,
    non_disjoint: bool,
}

impl NumberField {
    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    /// Rows are a Z-basis of the maximal order in the power basis.
    pub fn integral_basis(&self) -> &[Vec<BigRational>] {
        &self.integral_basis
    }

    /// `[O_K : Z[x]/(f)]`.
    pub fn index(&self) -> &BigUint {
        &self.index
    }

    /// Signed absolute discriminant.
    pub fn abs_disc(&self) -> &BigInt {
        &self.abs_disc
    }

    pub fn disc_magnitude(&self) -> BigUint {
        self.abs_disc.magnitude().clone()
    }

    /// Set when a compositum had to pick one of several non-conjugate
    /// embeddings.
    pub fn non_disjoint_choice(&self) -> bool {
        self.non_disjoint
    }

    pub fn summary(&self) -> FieldSummary {
        FieldSummary {
            min_poly: self.min_poly.to_string(),
            degree: self.degree(),
            abs_disc: self.abs_disc.to_string(),
            index: self.index.to_string(),
            integral_basis: self
                .integral_basis
                .iter()
                .map(|row| basis_element_string(row))
                .collect(),
            flags: if self.non_disjoint {
                vec!["non-linearly-disjoint embedding choice".into()]
            } else {
                Vec::new()
            },
        }
    }

    fn from_order(o: &Order, disc_f: &BigInt, non_disjoint: bool) -> Self {
        Self {
            min_poly: o.f.clone(),
            integral_basis: o.basis_rational(),
            index: o.index(),
            abs_disc: o.discriminant(disc_f),
            non_disjoint,
        }
    }
}

/// Serializable view of a field.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FieldSummary {
    pub min_poly: String,
    pub degree: usize,
    pub abs_disc: String,
    pub index: String,
    pub integral_basis: Vec<String>,
    pub flags: Vec<String>,
}

fn basis_element_string(row: &[BigRational]) -> String {
    let den = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let num = IntPoly::new(
        row.iter()
            .map(|q| q * &den)
            .map(|q| q.to_integer())
            .collect(),
    );
    if den.is_one() {
        num.to_string()
    } else {
        format!("({num})/{den}")
    }
}

/// Builds `Q[x]/(f)` with its maximal order, using the default degree cap.
pub fn build_field(f: &IntPoly) -> Result<NumberField> {
    build_field_capped(f, DEFAULT_DEGREE_CAP)
}

pub fn build_field_capped(f: &IntPoly, cap: usize) -> Result<NumberField> {
    let n = f
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    if !f.is_monic() {
        return Err(Error::InvalidInput(format!("{f} is not monic")));
    }
    crate::error::cap("field degree", cap as u64, n as u64)?;
    if !is_irreducible(f)? {
        return Err(Error::Reducible);
    }
    let disc = discriminant(f);
    let mut o = Order::equation(f);
    o.maximize(&disc)?;
    Ok(NumberField::from_order(&o, &disc, false))
}

/// `|Δ_L| / |Δ_K|^deg_lk`, the norm of the relative discriminant of `L/K`.
pub fn rel_disc_norm(l: &NumberField, k: &NumberField, deg_lk: usize) -> Result<BigUint> {
    if k.degree() * deg_lk != l.degree() {
        return Err(Error::NotInTower(format!(
            "degree {} is not {} * {deg_lk}",
            l.degree(),
            k.degree()
        )));
    }
    let base = k.disc_magnitude().pow(deg_lk as u32);
    let (q, r) = l.disc_magnitude().div_rem(&base);
    if !r.is_zero() || q.is_zero() {
        return Err(Error::NotInTower(format!(
            "|Δ_K|^{deg_lk} does not divide |Δ_L|"
        )));
    }
    Ok(q)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Lemma21Report {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub divides: bool,
    pub quotient: Option<BigUint>,
}

/// Norm-level check that `D_{LL'/K}` divides
/// `D_{L/K}^[LL':L] * D_{L'/K}^[LL':L']`.
pub fn check_lemma_2_1(
    k: &NumberField,
    l: &NumberField,
    lp: &NumberField,
) -> Result<Lemma21Report> {
    let big = compositum(l, lp)?;
    let n = big.degree();
    if n % l.degree() != 0 || n % lp.degree() != 0 || n % k.degree() != 0 {
        return Err(Error::NotInTower("compositum degree mismatch".into()));
    }
    let lhs = rel_disc_norm(&big, k, n / k.degree())?;
    let dl = rel_disc_norm(l, k, l.degree() / k.degree())?;
    let dlp = rel_disc_norm(lp, k, lp.degree() / k.degree())?;
    let rhs = dl.pow((n / l.degree()) as u32) * dlp.pow((n / lp.degree()) as u32);
    let (q, r) = rhs.div_rem(&lhs);
    let divides = r.is_zero();
    Ok(Lemma21Report {
        lhs,
        rhs,
        divides,
        quotient: divides.then_some(q),
    })
}

/// Necessary condition for `K ⊆ L`: whenever the polynomial of `L` has a
/// root modulo a good prime, so does the polynomial of `K`. This is a screen
/// and proves nothing when it passes.
pub fn embedding_screen(k: &NumberField, l: &NumberField, primes: usize) -> bool {
    let dk = discriminant(&k.min_poly);
    let dl = discriminant(&l.min_poly);
    let mut checked = 0;
    for p in crate::arith::primes::small_primes()
        .iter()
        .map(|&p| p as u64)
    {
        if checked >= primes {
            break;
        }
        let pb = BigInt::from(p);
        if (&dk % &pb).is_zero() || (&dl % &pb).is_zero() {
            continue;
        }
        checked += 1;
        let lp = ModPoly::from_int(&l.min_poly, p);
        if lp.root_count() > 0 && ModPoly::from_int(&k.min_poly, p).root_count() == 0 {
            return false;
        }
    }
    true
}

/// The field `Q`, as `Q[x]/(x)`.
pub fn rationals() -> NumberField {
    NumberField {
        min_poly: IntPoly::from_i64s(&[0, 1]),
        integral_basis: vec![vec![BigRational::one()]],
        index: BigUint::one(),
        abs_disc: BigInt::one(),
        non_disjoint: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(c: &[i64]) -> NumberField {
        build_field(&IntPoly::from_i64s(c)).unwrap()
    }

    #[test]
    fn quadratic_with_index_two() {
        let k = field(&[-5, 0, 1]);
        assert_eq!(k.abs_disc(), &BigInt::from(5));
        assert_eq!(k.index(), &BigUint::from(2u32));
        assert_eq!(k.summary().integral_basis, vec!["1", "(x + 1)/2"]);
        // (1 + x)/2 satisfies y^2 - y - 1
        let w = IntPoly::from_i64s(&[1, 1]);
        let sq = order::mul_mod_f(w.coeffs(), w.coeffs(), k.min_poly());
        // w^2 = 4 y^2, y^2 - y - 1 = 0  ->  w^2 - 2 w - 4 = 0
        let lhs: Vec<BigInt> = (0..2)
            .map(|i| &sq[i] - BigInt::from(2) * w.coeff(i) - BigInt::from(4 * u8::from(i == 0)))
            .collect();
        assert!(lhs.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn squarefree_discriminant_gives_power_basis() {
        let k = field(&[-1, -1, 0, 1]);
        assert_eq!(k.abs_disc(), &BigInt::from(-23));
        assert!(k.index().is_one());
    }

    #[test]
    fn real_quintic_of_conductor_eleven() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        assert_eq!(k.abs_disc(), &BigInt::from(14641));
    }

    #[test]
    fn index_divides_from_both_sides() {
        // x^3 - 2: disc -108, Δ = -108; x^2 + 3: Δ = -3; x^4 + 1: Δ = 256
        assert_eq!(field(&[-2, 0, 0, 1]).abs_disc(), &BigInt::from(-108));
        assert_eq!(field(&[3, 0, 1]).abs_disc(), &BigInt::from(-3));
        assert_eq!(field(&[1, 0, 0, 0, 1]).abs_disc(), &BigInt::from(256));
        // x^2 - 12 has index 2 over Z[sqrt 3]
        let k = field(&[-12, 0, 1]);
        assert_eq!(k.abs_disc(), &BigInt::from(12));
        assert_eq!(k.index(), &BigUint::from(2u32));
        // Q(zeta_9): Δ = 3^15 / ... = -3^9? disc of Phi_9 is 3^9
        assert_eq!(
            field(&[1, 0, 0, 1, 0, 0, 1]).abs_disc(),
            &BigInt::from(-19683)
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            build_field(&IntPoly::from_i64s(&[-1, 0, 1])).unwrap_err(),
            Error::Reducible
        );
        assert!(matches!(
            build_field(&IntPoly::from_i64s(&[-2, 0, 2])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            build_field_capped(&IntPoly::from_i64s(&[-2, 0, 0, 1]), 2),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn relative_norms() {
        let q2 = field(&[-2, 0, 1]);
        let q3 = field(&[-3, 0, 1]);
        let big = compositum(&q2, &q3).unwrap();
        assert_eq!(big.disc_magnitude(), BigUint::from(2304u32));
        assert_eq!(rel_disc_norm(&big, &q2, 2).unwrap(), BigUint::from(36u32));
        assert_eq!(rel_disc_norm(&q2, &q2, 1).unwrap(), BigUint::one());
        let eis = field(&[1, 1, 1]);
        assert_eq!(
            rel_disc_norm(&eis, &rationals(), 2).unwrap(),
            BigUint::from(3u32)
        );
        assert!(matches!(
            rel_disc_norm(&q3, &q2, 1),
            Err(Error::NotInTower(_))
        ));
    }

    #[test]
    fn lemma_examples() {
        let q = rationals();
        let q2 = field(&[-2, 0, 1]);
        let q3 = field(&[-3, 0, 1]);
        let r = check_lemma_2_1(&q, &q2, &q3).unwrap();
        assert_eq!(r.lhs, BigUint::from(2304u32));
        assert_eq!(r.rhs, BigUint::from(9216u32));
        assert_eq!(r.quotient, Some(BigUint::from(4u32)));
        let same = check_lemma_2_1(&q, &q2, &q2).unwrap();
        assert_eq!(same.lhs, BigUint::from(8u32));
        assert_eq!(same.rhs, BigUint::from(64u32));
        assert!(same.divides);
        let m3 = field(&[3, 0, 1]);
        let r = check_lemma_2_1(&q, &q2, &m3).unwrap();
        assert!(r.divides);
        assert_eq!(r.rhs, BigUint::from(64u32 * 9));
        // Q(sqrt 2, sqrt -3) has conductor 24 and Δ = 8 * 3 * 24
        assert_eq!(r.lhs, BigUint::from(576u32));
    }

    #[test]
    fn screen_accepts_subfields() {
        let q2 = field(&[-2, 0, 1]);
        let q3 = field(&[-3, 0, 1]);
        let big = compositum(&q2, &q3).unwrap();
        assert!(embedding_screen(&q2, &big, 50));
        let q5 = field(&[-5, 0, 1]);
        assert!(!embedding_screen(&q5, &big, 50));
    }
}
