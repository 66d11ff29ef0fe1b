//! Composita via the characteristic polynomial of `k*α + β`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::order::Order;
use super::NumberField;
use crate::error::{Error, Result};
use crate::poly::{
    canonical_cmp, discriminant, factor_over_q, interpolate, resultant, IntPoly, RatPoly,
};

/// Shifts tried before giving up on a squarefree characteristic polynomial.
const MAX_SHIFT: i64 = 64;

/// Compositum of `K = Q(α)` and `L = Q(β)` generated by `θ = k*α + β` for the
/// least `k >= 1` making the characteristic polynomial squarefree. When that
/// polynomial is reducible the field of a maximal-degree factor is returned
/// and flagged.
pub fn compositum(k: &NumberField, l: &NumberField) -> Result<NumberField> {
    compositum_capped(k, l, super::DEFAULT_DEGREE_CAP)
}

pub fn compositum_capped(k: &NumberField, l: &NumberField, cap: usize) -> Result<NumberField> {
    let f = k.min_poly();
    let g = l.min_poly();
    let (shift, h) = (1..=MAX_SHIFT)
        .map(|s| (s, char_poly(f, g, s)))
        .find(|(_, h)| h.is_squarefree())
        .ok_or_else(|| Error::SearchExhausted("no squarefree compositum generator".into()))?;
    let mut factors: Vec<IntPoly> = factor_over_q(&h)?.into_iter().map(|(p, _)| p).collect();
    let non_disjoint = factors.len() > 1;
    factors.sort_by(|a, b| b.deg().cmp(&a.deg()).then_with(|| canonical_cmp(a, b)));
    let h1 = factors.swap_remove(0);
    crate::error::cap("compositum degree", cap as u64, h1.deg() as u64)?;

    let alpha = recover_alpha(f, g, &h1, shift)?;
    let theta = RatPoly::x();
    let beta = reduce(
        &(&theta - &alpha.scale(&BigRational::from_integer(shift.into()))),
        &h1,
    );

    let n = h1.deg();
    let mut gens: Vec<RatPoly> = Vec::new();
    let mut ai = RatPoly::one();
    for _ in 0..f.deg() {
        let mut aibj = ai.clone();
        for _ in 0..g.deg() {
            gens.push(aibj.clone());
            aibj = mul_reduce(&aibj, &beta, &h1);
        }
        ai = mul_reduce(&ai, &alpha, &h1);
    }
    let den = gens
        .iter()
        .flat_map(|p| p.coeffs().iter())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|p| (0..n).map(|i| (p.coeff(i) * &den).to_integer()).collect())
        .collect();
    // Z[θ] is inside Z[α, β]; adding it keeps the span a ring even when the
    // generator list is redundant.
    rows.extend((0..n).map(|i| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = den.clone();
        v
    }));
    let mut order = Order::from_generators(&h1, &rows, &den);
    let disc = discriminant(&h1);
    order.maximize(&disc)?;
    Ok(NumberField::from_order(&order, &disc, non_disjoint))
}

/// `Res_y(f(y), g(x - s*y))`, interpolated from integer resultants.
fn char_poly(f: &IntPoly, g: &IntPoly, s: i64) -> IntPoly {
    let n = f.deg() * g.deg();
    let xs: Vec<i64> = (0..=n as i64).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|&x0| {
            let lin = IntPoly::from_i64s(&[x0, -s]);
            resultant(f, &g.compose(&lin))
        })
        .collect();
    let mut h = interpolate(&xs, &ys);
    if h.lc() < BigInt::zero() {
        h = -&h;
    }
    h
}

fn reduce(a: &RatPoly, h: &IntPoly) -> RatPoly {
    a.div_rem(&h.to_rational()).expect("nonzero modulus").1
}

fn mul_reduce(a: &RatPoly, b: &RatPoly, h: &IntPoly) -> RatPoly {
    reduce(&(a * b), h)
}

fn inverse(a: &RatPoly, h: &IntPoly) -> Result<RatPoly> {
    let (g, s, _) = a.ext_gcd(&h.to_rational());
    if g.deg() != 0 || g.is_zero() {
        return Err(Error::Degenerate(
            "non-invertible element in compositum".into(),
        ));
    }
    Ok(reduce(&s, h))
}

/// Polynomials in `y` over `F = Q[θ]/(h)`, coefficient of `y^i` at index `i`.
type FPoly = Vec<RatPoly>;

fn trim(p: &mut FPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// The common root `α` of `f(y)` and `g(θ - s*y)` in `F`.
fn recover_alpha(f: &IntPoly, g: &IntPoly, h: &IntPoly, s: i64) -> Result<RatPoly> {
    let c = |x: &BigInt| RatPoly::constant(BigRational::from_integer(x.clone()));
    let mut a: FPoly = f.coeffs().iter().map(c).collect();
    // Horner for g(θ - s*y)
    let lin: FPoly = vec![
        RatPoly::x(),
        RatPoly::constant(BigRational::from_integer((-s).into())),
    ];
    let mut b: FPoly = Vec::new();
    for gc in g.coeffs().iter().rev() {
        let mut next: FPoly = vec![RatPoly::zero(); b.len() + 1];
        for (i, bi) in b.iter().enumerate() {
            for (j, lj) in lin.iter().enumerate() {
                let t = mul_reduce(bi, lj, h);
                next[i + j] = &next[i + j] + &t;
            }
        }
        next[0] = &next[0] + &c(gc);
        b = next;
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, h)?;
        a = b;
        b = r;
    }
    if a.len() != 2 {
        return Err(Error::Degenerate(format!(
            "gcd in compositum has degree {}",
            a.len().saturating_sub(1)
        )));
    }
    let inv = inverse(&a[1], h)?;
    Ok(reduce(&(-&mul_reduce(&a[0], &inv, h)), h))
}

fn rem(a: &FPoly, b: &FPoly, h: &IntPoly) -> Result<FPoly> {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = inverse(&b[db], h)?;
    while r.len() > db {
        let top = r.len() - 1;
        let q = mul_reduce(&r[top], &inv, h);
        for (j, bj) in b.iter().enumerate() {
            let t = mul_reduce(&q, bj, h);
            r[top - db + j] = &r[top - db + j] - &t;
        }
        r[top] = RatPoly::zero();
        trim(&mut r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{build_field, rationals};
    use num_bigint::BigUint;

    fn field(c: &[i64]) -> NumberField {
        build_field(&IntPoly::from_i64s(c)).unwrap()
    }

    #[test]
    fn char_poly_of_sum_of_square_roots() {
        let h = char_poly(
            &IntPoly::from_i64s(&[-2, 0, 1]),
            &IntPoly::from_i64s(&[-3, 0, 1]),
            1,
        );
        assert_eq!(h, IntPoly::from_i64s(&[1, 0, -10, 0, 1]));
    }

    #[test]
    fn biquadratic() {
        let k = compositum(&field(&[-2, 0, 1]), &field(&[-3, 0, 1])).unwrap();
        assert_eq!(k.degree(), 4);
        assert_eq!(k.disc_magnitude(), BigUint::from(2304u32));
        assert!(!k.non_disjoint_choice());
    }

    #[test]
    fn with_rationals_is_identity() {
        let k = field(&[-1, -1, 0, 1]);
        let c = compositum(&k, &rationals()).unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.abs_disc(), k.abs_disc());
        let c = compositum(&rationals(), &k).unwrap();
        assert_eq!(c.abs_disc(), k.abs_disc());
    }

    #[test]
    fn equal_fields_are_flagged() {
        let q2 = field(&[-2, 0, 1]);
        let c = compositum(&q2, &q2).unwrap();
        assert_eq!(c.degree(), 2);
        assert_eq!(c.disc_magnitude(), BigUint::from(8u32));
        assert!(c.non_disjoint_choice());
    }

    #[test]
    fn cubic_times_quadratic() {
        // Q(2^(1/3)) and Q(sqrt -3) generate the Galois closure, Δ = -2^4 3^7 * ...
        let k = compositum(&field(&[-2, 0, 0, 1]), &field(&[3, 0, 1])).unwrap();
        assert_eq!(k.degree(), 6);
        // |Δ| = |Δ_K|^2 * N(D_{L/K}); known value 2^4 3^7 = 34992
        assert_eq!(k.disc_magnitude(), BigUint::from(34992u32));
    }
}
