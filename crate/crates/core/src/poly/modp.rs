//! Polynomials over F_p for small primes p, with distinct-degree and
//! equal-degree (Cantor-Zassenhaus) factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::int::IntPoly;
use crate::arith::primes::{mul_mod, pow_mod};

/// Seed of the equal-degree splitting stream; fixed so runs are reproducible.
const SPLIT_SEED: u64 = 0x6a09_e667_f3bc_c908;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    c: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { p, c }
    }

    pub fn from_int(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            f.coeffs()
                .iter()
                .map(|a| a.mod_floor(&pb).to_u64().expect("reduced residue"))
                .collect(),
        )
    }

    /// Lifts to integer coefficients in `[0, p)`.
    pub fn to_int(&self) -> IntPoly {
        IntPoly::new(self.c.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0)) % self.p)
            .collect();
        Self::new(self.p, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + self.p - o.c.get(i).unwrap_or(&0)) % self.p)
            .collect();
        Self::new(self.p, v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, v)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(
            self.p,
            self.c.iter().map(|&a| mul_mod(a, k, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.lc()))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let dd = d.deg();
        if self.c.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let inv = self.inv(d.lc());
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = mul_mod(r[i + dd], inv, self.p);
            if c != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.p - mul_mod(c, dc, self.p)) % self.p;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let k = self.inv(r0.lc());
        (r0.scale(k), s0.scale(k), t0.scale(k))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(g, d)` where `g` is the product of all irreducible factors
    /// of degree `d`.
    pub fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let p = self.p;
        let mut f = self.monic();
        let mut out = Vec::new();
        let mut h = Self::x(p);
        let pb = BigUint::from(p);
        let mut d = 1;
        while f.deg() >= 2 * d {
            h = h.pow_mod(&pb, &f);
            let g = h.sub(&Self::x(p)).gcd(&f);
            if g.deg() > 0 {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.deg() > 0 {
            let deg = f.deg();
            out.push((f, deg));
        }
        out
    }

    /// Splits a monic product of distinct irreducibles of degree `d`.
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let n = self.deg();
        if n == d {
            return vec![self.clone()];
        }
        let p = self.p;
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.deg() == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
                a.pow_mod(&e, self).sub(&Self::one(p))
            };
            let g = b.gcd(self);
            if g.deg() > 0 && g.deg() < n {
                let h = self.div_rem(&g).0.monic();
                let mut out = g.equal_degree(d, rng);
                out.extend(h.equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Complete factorization of a squarefree polynomial into monic
    /// irreducibles, sorted by (degree, coefficients).
    pub fn factor_squarefree(&self) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ self.p);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree() {
            out.extend(g.equal_degree(d, &mut rng));
        }
        out.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.c.cmp(&b.c)));
        out
    }

    /// Degrees of the irreducible factors of a squarefree polynomial.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree() {
            out.extend(std::iter::repeat_n(d, g.deg() / d));
        }
        out.sort_unstable();
        out
    }

    /// Number of roots in F_p of a squarefree polynomial.
    pub fn root_count(&self) -> usize {
        let f = self.monic();
        let xp = Self::x(self.p).pow_mod(&BigUint::from(self.p), &f);
        xp.sub(&Self::x(self.p)).gcd(&f).deg()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[ModPoly], p: u64) -> ModPoly {
        fs.iter().fold(ModPoly::one(p), |acc, f| acc.mul(f))
    }

    #[test]
    fn factors_x4_plus_1_mod_small_primes() {
        let f = IntPoly::from_i64s(&[1, 0, 0, 0, 1]);
        for p in [3u64, 5, 7, 11, 13, 17] {
            let fp = ModPoly::from_int(&f, p);
            let fs = fp.factor_squarefree();
            assert!(fs.len() >= 2, "x^4+1 splits mod {p}");
            assert_eq!(product(&fs, p), fp);
        }
    }

    #[test]
    fn factors_mod_two() {
        // x^6 + x^5 + x^4 + x^3 + x^2 + x + 1 = (x^3+x+1)(x^3+x^2+1) mod 2
        let f = ModPoly::new(2, vec![1; 7]);
        let fs = f.factor_squarefree();
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, 2), f);
        assert_eq!(f.factor_degrees(), vec![3, 3]);
    }

    #[test]
    fn splitting_of_cyclotomic() {
        // Phi_7 splits completely mod 29 (29 = 1 mod 7)
        let f = ModPoly::new(29, vec![1; 7]);
        assert_eq!(f.factor_degrees(), vec![1; 6]);
        assert_eq!(f.root_count(), 6);
        // mod 2 the order of 2 in (Z/7)^x is 3
        assert_eq!(ModPoly::new(2, vec![1; 7]).root_count(), 0);
    }
}
