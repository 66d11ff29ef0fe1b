//! Exact integer arithmetic: primality, factorization, certified logarithms
//! and power products with rational exponents.

mod factor;
mod factored;
pub mod logs;
pub mod primes;

pub use factor::{factor_bigint, factor_biguint, factor_u64};
pub use factored::FactoredReal;
pub use primes::{first_primes, is_prime, is_prime_u64};

use num_bigint::BigUint;

/// Factors a positive integer into a [`FactoredReal`].
pub fn factor_integer(n: &BigUint) -> FactoredReal {
    FactoredReal::from_integer(n)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Kronecker symbol `(a / n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    let mut result = 1i32;
    let mut n = n;
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a / n), n odd
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(24), 8);
        assert_eq!(totient(11), 10);
        assert_eq!(totient(120), 32);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in -30i64..30 {
                let e = primes::pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expect = if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expect, "({a}/{p})");
            }
        }
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(1, 8), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
    }
}
