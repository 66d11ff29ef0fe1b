//! Integer factorization: trial division below 10^6, then Pollard-Brent rho.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::{is_prime, small_primes};

/// Prime factorization of `n >= 1` as sorted `(prime, exponent)` pairs.
///
/// Panics on `n = 0`.
pub fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.insert(pb, e);
        }
    }
    if !rest.is_one() {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_prime(&m) {
                *out.entry(m).or_insert(0) += 1;
                continue;
            }
            let d = find_factor(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out.into_iter().collect()
}

/// Factorization of a nonzero signed integer's absolute value.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigUint, u32)> {
    factor_biguint(&n.abs().to_biguint().expect("absolute value"))
}

/// Factorization of a machine integer.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor_biguint(&BigUint::from(n))
        .into_iter()
        .map(|(p, e)| (p.to_u64().expect("factor of u64"), e))
        .collect()
}

/// Finds a nontrivial factor of a composite `n` that has no prime factor
/// below the trial-division limit.
fn find_factor(n: &BigUint) -> BigUint {
    if let Some(r) = perfect_square_root(n) {
        return r;
    }
    let mut c = BigUint::one();
    loop {
        if let Some(d) = brent_rho(n, &c) {
            return d;
        }
        c += 1u32;
    }
}

fn perfect_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn brent_rho(n: &BigUint, c: &BigUint) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let m: u64 = 128;
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (&q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_oracle(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn small_values() {
        assert!(factor_u64(1).is_empty());
        assert_eq!(factor_u64(2304), vec![(2, 8), (3, 2)]);
        assert_eq!(factor_u64(14641), vec![(11, 4)]);
        for n in 1..5000 {
            assert_eq!(factor_u64(n), trial_oracle(n));
        }
    }

    #[test]
    fn large_semiprime_goes_through_rho() {
        // two primes above the trial-division limit
        let p = 1_000_003u64;
        let q = 998_244_353u64;
        let n = BigUint::from(p) * BigUint::from(q) * BigUint::from(q);
        let f = factor_biguint(&n);
        assert_eq!(f, vec![(BigUint::from(p), 1), (BigUint::from(q), 2)]);
    }

    #[test]
    fn large_square_of_prime() {
        let p = BigUint::from(1_000_000_007u64);
        let f = factor_biguint(&(&p * &p));
        assert_eq!(f, vec![(p, 2)]);
    }
}
