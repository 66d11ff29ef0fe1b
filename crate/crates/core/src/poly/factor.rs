//! Factorization over Q: squarefree decomposition, factorization modulo a
//! good prime, quadratic Hensel lifting and subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::int::{discriminant, IntPoly};
use super::modp::ModPoly;
use crate::arith::primes::is_prime_u64;
use crate::error::{Error, Result};

/// Largest number of modular factors accepted for subset recombination.
pub const MAX_MODULAR_FACTORS: usize = 24;

/// Factors `f` over Q into primitive irreducibles with positive leading
/// coefficient, with multiplicities. The product equals `f` up to a rational
/// constant. Factors are sorted by (degree, coefficients).
pub fn factor_over_q(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        for g in factor_squarefree(&part)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| canonical_cmp(a, b));
    Ok(out)
}

pub(crate) fn canonical_cmp(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// True when `f` is irreducible over Q (and of positive degree).
pub fn is_irreducible(f: &IntPoly) -> Result<bool> {
    if f.deg() == 0 {
        return Ok(false);
    }
    let fs = factor_over_q(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Smallest prime not dividing `lc(f) * disc(f)`.
pub fn good_prime(f: &IntPoly) -> u64 {
    let bad = f.lc() * discriminant(f);
    (2u64..)
        .filter(|&p| is_prime_u64(p))
        .find(|&p| !(&bad % BigInt::from(p)).is_zero())
        .expect("some prime does not divide a nonzero integer")
}

/// Factors a primitive squarefree polynomial of positive degree.
fn factor_squarefree(f: &IntPoly) -> Result<Vec<IntPoly>> {
    let f = f.normalized();
    if f.deg() <= 1 {
        return Ok(vec![f]);
    }
    let p = good_prime(&f);
    let modular = ModPoly::from_int(&f, p).monic().factor_squarefree();
    if modular.len() == 1 {
        return Ok(vec![f]);
    }
    if modular.len() > MAX_MODULAR_FACTORS {
        return Err(Error::CapExceeded {
            what: "modular factor count",
            limit: MAX_MODULAR_FACTORS as u64,
            value: modular.len() as u64,
        });
    }
    // Mignotte: every factor of lc*f has coefficients below |lc| 2^n ||f||_2.
    let bound = BigInt::from(2) * f.lc().abs() * (BigInt::one() << f.deg()) * f.norm2_ceil();
    let pb = BigInt::from(p);
    let mut a = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        a += 1;
    }
    let lifted = hensel_lift(&f, &modular, p, a);
    Ok(recombine(f, lifted, &modulus))
}

fn recombine(mut f: IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), s) {
            let lc = f.lc();
            let mut g = IntPoly::constant(lc.clone());
            for &i in &subset {
                g = reduce_mod(&(&g * &lifted[i]), modulus);
            }
            let g = symmetric(&g, modulus).normalized();
            if let Some(q) = f.exact_div(&g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                f = q.normalized();
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, h)| h)
                    .collect();
            }
            None => s += 1,
        }
    }
    if f.deg() > 0 {
        found.push(f.normalized());
    }
    found.sort_by(canonical_cmp);
    found
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = idx.clone();
        // advance to the next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    })
}

fn reduce_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Division by a monic polynomial over Z.
fn div_rem_monic(a: &IntPoly, h: &IntPoly) -> (IntPoly, IntPoly) {
    let (q, r, _) = a.pseudo_div_rem(h).expect("monic divisor");
    (q, r)
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

/// Lifts `f = lc * prod factors (mod p)` to monic factors modulo `p^a`.
pub fn hensel_lift(f: &IntPoly, factors: &[ModPoly], p: u64, a: u32) -> Vec<IntPoly> {
    let modulus = BigInt::from(p).pow(a);
    lift_tree(f, factors, p, &modulus)
}

fn lift_tree(target: &IntPoly, factors: &[ModPoly], p: u64, modulus: &BigInt) -> Vec<IntPoly> {
    if factors.len() == 1 {
        let inv = inverse_mod(&target.lc(), modulus);
        return vec![reduce_mod(&target.scale(&inv), modulus)];
    }
    let k = factors.len() / 2;
    let lc_p = ModPoly::from_int(&IntPoly::constant(target.lc()), p);
    let g0 = factors[..k].iter().fold(lc_p, |acc, f| acc.mul(f));
    let h0 = factors[k..]
        .iter()
        .fold(ModPoly::one(p), |acc, f| acc.mul(f));
    let (one, s0, t0) = g0.ext_gcd(&h0);
    debug_assert!(one.is_one());
    let (g, h) = lift_pair(target, &g0, &h0, &s0, &t0, p, modulus);
    let mut out = lift_tree(&g, &factors[..k], p, modulus);
    out.extend(lift_tree(&h, &factors[k..], p, modulus));
    out
}

/// Quadratic Hensel lifting of `f = g h` with Bezout cofactors `s g + t h = 1`.
fn lift_pair(
    f: &IntPoly,
    g0: &ModPoly,
    h0: &ModPoly,
    s0: &ModPoly,
    t0: &ModPoly,
    p: u64,
    target: &BigInt,
) -> (IntPoly, IntPoly) {
    let mut m = BigInt::from(p);
    let (mut g, mut h, mut s, mut t) = (g0.to_int(), h0.to_int(), s0.to_int(), t0.to_int());
    while &m < target {
        let m2 = &m * &m;
        let e = reduce_mod(&(f - &(&g * &h)), &m2);
        let (q, r) = div_rem_monic(&reduce_mod(&(&s * &e), &m2), &h);
        let g1 = reduce_mod(&(&(&g + &(&t * &e)) + &(&q * &g)), &m2);
        let h1 = reduce_mod(&(&h + &r), &m2);
        let b = reduce_mod(&(&(&(&s * &g1) + &(&t * &h1)) - &IntPoly::one()), &m2);
        let (c, d) = div_rem_monic(&reduce_mod(&(&s * &b), &m2), &h1);
        let s1 = reduce_mod(&(&s - &d), &m2);
        let t1 = reduce_mod(&(&(&t - &(&t * &b)) - &(&c * &g1)), &m2);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = m2;
    }
    (reduce_mod(&g, target), reduce_mod(&h, target))
}

/// Degree-pattern irreducibility screen: `Some(true)` when the factor-degree
/// patterns modulo the given primes admit no common proper subset sum, which
/// proves irreducibility; `None` when inconclusive.
pub fn degree_pattern_certifies_irreducible(f: &IntPoly, primes: &[u64]) -> Option<bool> {
    let n = f.deg();
    let mut possible = vec![true; n + 1];
    for &p in primes {
        if (f.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = ModPoly::from_int(f, p).monic();
        if !fp.is_squarefree() {
            continue;
        }
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in fp.factor_degrees() {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (s, ok) in possible.iter_mut().enumerate() {
            *ok &= sums[s];
        }
    }
    if (1..n).all(|s| !possible[s]) {
        Some(true)
    } else {
        None
    }
}

/// Number of primes used after the factorization prime in the screen.
pub fn screen_primes(f: &IntPoly, count: usize) -> Vec<u64> {
    let p0 = good_prime(f);
    let bad = f.lc() * discriminant(f);
    (p0 + 1..)
        .filter(|&p| is_prime_u64(p) && !(&bad % BigInt::from(p)).is_zero())
        .take(count)
        .map(|p| p.to_u64().unwrap_or(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn expand(fs: &[(IntPoly, u32)]) -> IntPoly {
        fs.iter()
            .fold(IntPoly::one(), |acc, (g, e)| &acc * &g.pow(*e))
    }

    /// Irreducibility by brute force over monic integer candidate factors of
    /// degree <= n/2 with coefficients bounded by `box_bound`.
    fn brute_force_has_factor(f: &IntPoly, box_bound: i64) -> bool {
        let n = f.deg();
        for d in 1..=n / 2 {
            let mut coeffs = vec![-box_bound; d];
            loop {
                let mut c: Vec<i64> = coeffs.clone();
                c.push(1);
                if p(&c).divides(f) {
                    return true;
                }
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    coeffs[i] += 1;
                    if coeffs[i] > box_bound {
                        coeffs[i] = -box_bound;
                        i += 1;
                    } else {
                        break;
                    }
                }
                if i == d {
                    break;
                }
            }
        }
        false
    }

    #[test]
    fn classical_examples() {
        let fs = factor_over_q(&p(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            fs,
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );
        let fs = factor_over_q(&p(&[-2, 0, 1]).pow(2)).unwrap();
        assert_eq!(fs, vec![(p(&[-2, 0, 1]), 2)]);
    }

    #[test]
    fn x4_plus_1_needs_recombination() {
        let f = p(&[1, 0, 0, 0, 1]);
        assert!(is_irreducible(&f).unwrap());
        // modular factorization is nontrivial at the chosen prime
        let q = good_prime(&f);
        assert!(ModPoly::from_int(&f, q).factor_squarefree().len() > 1);
        // monic factors of a monic quartic have coefficients bounded by 2^4
        assert!(!brute_force_has_factor(&f, 4));
        assert!(degree_pattern_certifies_irreducible(&f, &screen_primes(&f, 3)).is_none());
    }

    #[test]
    fn swinnerton_dyer_quartic() {
        // minimal polynomial of sqrt2 + sqrt3
        let f = p(&[1, 0, -10, 0, 1]);
        assert!(is_irreducible(&f).unwrap());
        let g = &f * &p(&[-5, 0, 1]);
        let fs = factor_over_q(&g).unwrap();
        assert_eq!(fs, vec![(p(&[-5, 0, 1]), 1), (f, 1)]);
    }

    #[test]
    fn non_monic_factors() {
        let a = p(&[3, -1, 6]);
        let b = p(&[-3, 0, 2, 5]);
        let c = p(&[1, 4]);
        let f = &(&a * &b) * &c.pow(2);
        let fs = factor_over_q(&f).unwrap();
        assert_eq!(expand(&fs), f.normalized());
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn cyclotomic_x12_minus_1() {
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fs = factor_over_q(&p(&c)).unwrap();
        // one factor per divisor of 12
        assert_eq!(fs.len(), 6);
        assert_eq!(expand(&fs), p(&c));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
