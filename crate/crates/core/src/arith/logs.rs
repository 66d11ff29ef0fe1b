//! Fixed-point natural logarithms of integers with rigorous error bounds.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Bounds `(lo, hi)` with `lo <= atanh(a/b) * 2^w <= hi` for `0 <= a/b <= 1/3`.
fn atanh_fixed(a: &BigUint, b: &BigUint, w: u32) -> (BigUint, BigUint) {
    let scale = BigUint::one() << w;
    let mut p = (a * &scale) / b;
    let x = (a * a * &scale) / (b * b);
    let mut err_p = 1u64;
    let mut sum = BigUint::zero();
    let mut err_sum = 0u64;
    let mut j = 0u64;
    while !p.is_zero() {
        let denom = 2 * j + 1;
        sum += &p / denom;
        err_sum += err_p / denom + 2;
        p = (&p * &x) >> w;
        err_p = err_p / 9 + 3;
        j += 1;
    }
    // remaining terms are bounded by err_p * 9/8
    err_sum += 2 * err_p + 2;
    let hi = &sum + BigUint::from(err_sum);
    (sum, hi)
}

/// Bounds `(lo, hi)` with `lo <= ln(n) * 2^w <= hi`.
pub fn ln_bounds(n: &BigUint, w: u32) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "logarithm of zero");
    if n.is_one() {
        return (BigInt::zero(), BigInt::zero());
    }
    let k = n.bits() - 1;
    let pow = BigUint::one() << k;
    let a = n - &pow;
    let b = n + &pow;
    let (l2lo, l2hi) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), w);
    let (tlo, thi) = atanh_fixed(&a, &b, w);
    let two_k = BigUint::from(2 * k);
    let lo = &two_k * l2lo + (tlo << 1u32);
    let hi = &two_k * l2hi + (thi << 1u32);
    (BigInt::from(lo), BigInt::from(hi))
}

/// Sign of `sum_i c_i * ln(n_i)`, decided by increasing the working precision.
/// The caller must guarantee the sum is nonzero (e.g. distinct primes with
/// not-all-zero coefficients); otherwise this does not terminate below the
/// precision ceiling and returns `None`.
pub fn sign_of_log_combination(terms: &[(BigUint, BigInt)]) -> Option<std::cmp::Ordering> {
    let mut w = 64u32;
    while w <= 1 << 16 {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (n, c) in terms {
            let (l, h) = ln_bounds(n, w);
            if c.is_negative() {
                lo += c * &h;
                hi += c * &l;
            } else {
                lo += c * &l;
                hi += c * &h;
            }
        }
        if lo.is_positive() {
            return Some(std::cmp::Ordering::Greater);
        }
        if hi.is_negative() {
            return Some(std::cmp::Ordering::Less);
        }
        w *= 2;
    }
    None
}

/// `ln(n)` as an `f64`, accurate for arbitrarily large `n`.
pub fn ln_f64(n: &BigUint) -> f64 {
    let (lo, hi) = ln_bounds(n, 80);
    let mid: BigInt = (lo + hi) >> 1u32;
    // mid / 2^80, split to stay in f64 range
    let int_part = &mid >> 80u32;
    let frac = &mid - (&int_part << 80u32);
    int_part.to_f64().unwrap_or(f64::INFINITY) + frac.to_f64().unwrap_or(0.0) / 2f64.powi(80)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_bracket_f64_logs() {
        for n in [2u64, 3, 5, 10, 12, 1000, 123_456_789, u64::MAX] {
            let (lo, hi) = ln_bounds(&BigUint::from(n), 60);
            let scale = 2f64.powi(60);
            let l = lo.to_f64().unwrap() / scale;
            let h = hi.to_f64().unwrap() / scale;
            let exact = (n as f64).ln();
            assert!(l <= exact + 1e-12 && exact - 1e-12 <= h, "n = {n}");
            assert!(h - l < 1e-14);
        }
    }

    #[test]
    fn ln2_digits() {
        // ln 2 = 0.693147180559945309417232121458...
        let (lo, hi) = ln_bounds(&BigUint::from(2u32), 200);
        let digits = BigInt::from(10u32).pow(40u32);
        let lo_d = (&lo * &digits) >> 200u32;
        let hi_d = (&hi * &digits) >> 200u32;
        let expect: BigInt = "6931471805599453094172321214581765680755".parse().unwrap();
        assert!(lo_d <= expect && expect <= hi_d + 1);
    }

    #[test]
    fn sign_of_close_combination() {
        // 3^9 = 19683 < 7^8 = 5764801: 9 ln 3 - 8 ln 7 < 0
        let t = [
            (BigUint::from(3u32), BigInt::from(9)),
            (BigUint::from(7u32), BigInt::from(-8)),
        ];
        assert_eq!(sign_of_log_combination(&t), Some(std::cmp::Ordering::Less));
        // 2^10 = 1024 > 10^3 = 2^3 5^3: 7 ln 2 - 3 ln 5 > 0
        let t = [
            (BigUint::from(2u32), BigInt::from(7)),
            (BigUint::from(5u32), BigInt::from(-3)),
        ];
        assert_eq!(
            sign_of_log_combination(&t),
            Some(std::cmp::Ordering::Greater)
        );
    }
}
