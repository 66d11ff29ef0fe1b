//! Positive reals of the form `prod p^e` with prime bases and rational exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::factor::factor_biguint;
use super::logs::{ln_bounds, sign_of_log_combination};
use super::primes::is_prime;

/// Above this many bits the cleared-denominator integers are not formed and
/// the comparison switches to certified logarithms.
const EXACT_COMPARE_BITS: u64 = 1 << 15;

/// A positive real `prod p^(e_p)`; the empty product is 1.
///
/// Canonical: bases are primes, exponents are nonzero. Equality of values is
/// equality of representations because logarithms of distinct primes are
/// linearly independent over the rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredReal {
    factors: BTreeMap<BigUint, BigRational>,
}

impl FactoredReal {
    pub fn one() -> Self {
        Self::default()
    }

    /// Factors a positive integer.
    pub fn from_integer(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "FactoredReal must be positive");
        let factors = factor_biguint(n)
            .into_iter()
            .map(|(p, e)| (p, BigRational::from_integer(BigInt::from(e))))
            .collect();
        Self { factors }
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_integer(&BigUint::from(n))
    }

    /// `p^e` for a prime `p`. Panics if `p` is not prime.
    pub fn prime_power(p: impl Into<BigUint>, e: BigRational) -> Self {
        let p = p.into();
        assert!(is_prime(&p), "{p} is not prime");
        let mut factors = BTreeMap::new();
        if !e.is_zero() {
            factors.insert(p, e);
        }
        Self { factors }
    }

    /// Builds from `(prime, exponent)` pairs, merging repeated primes.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, BigRational)>,
    {
        let mut out = Self::one();
        for (p, e) in pairs {
            out = &out * &Self::prime_power(p, e);
        }
        out
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, BigRational> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The exponent of `p` (zero when absent).
    pub fn exponent(&self, p: &BigUint) -> BigRational {
        self.factors
            .get(p)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The value as an integer, when every exponent is a nonnegative integer.
    pub fn to_integer(&self) -> Option<BigUint> {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            if !e.is_integer() || e.is_negative() {
                return None;
            }
            acc *= p.pow(e.to_integer().to_u32()?);
        }
        Some(acc)
    }

    pub fn inv(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        }
    }

    pub fn powi(&self, k: i64) -> Self {
        self.pow(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Rational power: exponents are scaled by `q`.
    pub fn pow(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::one();
        }
        Self {
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), e * q))
                .collect(),
        }
    }

    /// `self^(1/k)`.
    pub fn root(&self, k: u64) -> Self {
        assert!(k > 0, "zeroth root");
        self.pow(&BigRational::new(BigInt::one(), BigInt::from(k)))
    }

    /// Natural logarithm as an f64, for display only.
    pub fn ln_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(p, e)| {
                let (lo, hi) = ln_bounds(p, 64);
                let lp = ((lo + hi) >> 1u32).to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(64);
                e.to_f64().unwrap_or(0.0) * lp
            })
            .sum()
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        self.ln_f64().exp()
    }

    /// Decimal rendering with `digits` digits after the point.
    pub fn decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits, self.to_f64())
    }

    fn compare(&self, other: &Self) -> Ordering {
        let quotient = self / other;
        if quotient.is_one() {
            return Ordering::Equal;
        }
        let d = quotient
            .factors
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let scaled: Vec<(BigUint, BigInt)> = quotient
            .factors
            .iter()
            .map(|(p, e)| (p.clone(), (e * &d).to_integer()))
            .collect();
        let bits: u64 = scaled
            .iter()
            .map(|(p, c)| {
                c.abs()
                    .to_u64()
                    .unwrap_or(u64::MAX)
                    .saturating_mul(p.bits())
            })
            .fold(0u64, |a, b| a.saturating_add(b));
        if bits <= EXACT_COMPARE_BITS {
            let mut num = BigUint::one();
            let mut den = BigUint::one();
            for (p, c) in &scaled {
                let k = c.abs().to_u32().expect("exponent bounded by bit budget");
                if c.is_positive() {
                    num *= p.pow(k);
                } else {
                    den *= p.pow(k);
                }
            }
            num.cmp(&den)
        } else {
            sign_of_log_combination(&scaled)
                .expect("log-linear combination of distinct primes is nonzero")
        }
    }
}

impl Ord for FactoredReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl PartialOrd for FactoredReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &FactoredReal {
    type Output = FactoredReal;

    fn mul(self, rhs: &FactoredReal) -> FactoredReal {
        let mut factors = self.factors.clone();
        for (p, e) in &rhs.factors {
            let entry = factors.entry(p.clone()).or_insert_with(BigRational::zero);
            *entry += e;
            if entry.is_zero() {
                factors.remove(p);
            }
        }
        FactoredReal { factors }
    }
}

impl Mul for FactoredReal {
    type Output = FactoredReal;

    fn mul(self, rhs: FactoredReal) -> FactoredReal {
        &self * &rhs
    }
}

impl Div for &FactoredReal {
    type Output = FactoredReal;

    fn div(self, rhs: &FactoredReal) -> FactoredReal {
        self * &rhs.inv()
    }
}

impl Div for FactoredReal {
    type Output = FactoredReal;

    fn div(self, rhs: FactoredReal) -> FactoredReal {
        &self / &rhs
    }
}

impl fmt::Display for FactoredReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if e.is_one() {
                    p.to_string()
                } else if e.is_integer() {
                    format!("{p}^{e}")
                } else {
                    format!("{p}^({e})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl Serialize for FactoredReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FactoredReal", 3)?;
        s.serialize_field("exact", &self.to_string())?;
        let factors: Vec<(String, String)> = self
            .factors
            .iter()
            .map(|(p, e)| (p.to_string(), e.to_string()))
            .collect();
        s.serialize_field("factors", &factors)?;
        s.serialize_field("approx", &self.decimal(10))?;
        s.end()
    }
}
