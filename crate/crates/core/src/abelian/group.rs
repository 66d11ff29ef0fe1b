//! The unit group `(Z/m)^x` as a product of cyclic groups with fixed
//! generators, so that elements become integer coordinate vectors.

use std::collections::HashMap;

use crate::arith::factor_u64;
use crate::arith::primes::{mul_mod, pow_mod};

/// Which cyclic factor of a prime-power unit group a coordinate describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// `(Z/q^k)^x` for odd `q`, generated by a fixed primitive root.
    Odd,
    /// The factor `<-1>` of `(Z/2^k)^x`, `k >= 2`.
    MinusOne,
    /// The factor `<5>` of `(Z/2^k)^x`, `k >= 3`.
    Five,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub q: u64,
    pub k: u32,
    pub kind: Kind,
    /// `q^k`
    pub modulus: u64,
    pub order: u64,
    pub generator: u64,
}

impl Component {
    pub fn key(&self) -> (u64, Kind) {
        (self.q, self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    pub m: u64,
    pub comps: Vec<Component>,
}

/// Least primitive root modulo `q` that stays primitive modulo `q^2`.
pub fn prime_generator(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let fs: Vec<u64> = factor_u64(q - 1).into_iter().map(|(l, _)| l).collect();
    let g = (2..q)
        .find(|&g| fs.iter().all(|&l| pow_mod(g, (q - 1) / l, q) != 1))
        .expect("primitive root exists");
    if q < (1 << 32) && pow_mod(g, q - 1, q * q) == 1 {
        g + q
    } else {
        g
    }
}

impl UnitGroup {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        let mut comps = Vec::new();
        for (q, k) in factor_u64(m) {
            let qk = q.pow(k);
            if q == 2 {
                if k >= 2 {
                    comps.push(Component {
                        q,
                        k,
                        kind: Kind::MinusOne,
                        modulus: qk,
                        order: 2,
                        generator: qk - 1,
                    });
                }
                if k >= 3 {
                    comps.push(Component {
                        q,
                        k,
                        kind: Kind::Five,
                        modulus: qk,
                        order: qk / 4,
                        generator: 5,
                    });
                }
            } else {
                comps.push(Component {
                    q,
                    k,
                    kind: Kind::Odd,
                    modulus: qk,
                    order: qk / q * (q - 1),
                    generator: prime_generator(q) % qk,
                });
            }
        }
        Self { m, comps }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn orders(&self) -> Vec<u64> {
        self.comps.iter().map(|c| c.order).collect()
    }

    pub fn order(&self) -> u64 {
        self.comps.iter().map(|c| c.order).product()
    }

    pub fn index_of(&self, key: (u64, Kind)) -> Option<usize> {
        self.comps.iter().position(|c| c.key() == key)
    }

    /// Residue modulo `m` with the given coordinates.
    pub fn residue(&self, coords: &[u64]) -> u64 {
        let mut parts: Vec<(u64, u64)> = factor_u64(self.m)
            .into_iter()
            .map(|(q, k)| (q.pow(k), 1 % q.pow(k)))
            .collect();
        for (c, &x) in self.comps.iter().zip(coords) {
            let v = pow_mod(c.generator, x % c.order, c.modulus);
            let part = parts
                .iter_mut()
                .find(|(md, _)| *md == c.modulus)
                .expect("component modulus divides m");
            part.1 = mul_mod(part.1, v, c.modulus);
        }
        crt(&parts, self.m)
    }

    /// Coordinates of a unit modulo `m`; `None` if `a` is not a unit.
    pub fn coords(&self, a: u64) -> Option<Vec<u64>> {
        if num_integer::gcd(a, self.m) != 1 {
            return None;
        }
        let mut out = vec![0u64; self.rank()];
        for (i, c) in self.comps.iter().enumerate() {
            let r = a % c.modulus;
            match c.kind {
                Kind::Odd => out[i] = dlog(c.generator, r, c.modulus, c.order),
                Kind::MinusOne => out[i] = u64::from(r % 4 == 3),
                Kind::Five => {
                    let r = if r % 4 == 3 { c.modulus - r } else { r };
                    out[i] = dlog(5, r, c.modulus, c.order);
                }
            }
        }
        Some(out)
    }
}

/// Chinese remaindering of pairwise coprime `(modulus, residue)` pairs.
pub fn crt(parts: &[(u64, u64)], m: u64) -> u64 {
    let mut acc: u128 = 0;
    let mm = m as u128;
    for &(md, r) in parts {
        let rest = m / md;
        // rest^{-1} mod md
        let inv = inv_mod(rest % md, md);
        let term = (r as u128 * inv as u128 % md as u128) * rest as u128 % mm;
        acc = (acc + term) % mm;
    }
    acc as u64
}

pub fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(m as i128) as u64
}

/// Discrete logarithm of `a` to base `g` in a cyclic group of order `n`
/// modulo `md`, by Pohlig-Hellman with baby-step giant-step.
pub fn dlog(g: u64, a: u64, md: u64, n: u64) -> u64 {
    let mut residues: Vec<(u64, u64)> = Vec::new();
    for (l, e) in factor_u64(n) {
        let le = l.pow(e);
        let cof = n / le;
        let gl = pow_mod(g, cof, md);
        let al = pow_mod(a, cof, md);
        // digits base l
        let gamma = pow_mod(gl, le / l, md);
        let mut x = 0u64;
        let mut lk = 1u64;
        for _ in 0..e {
            let ginv_x = pow_mod(gl, (le - x % le) % le, md);
            let h = pow_mod(mul_mod(al, ginv_x, md), le / lk / l, md);
            let d = bsgs(gamma, h, md, l);
            x += d * lk;
            lk *= l;
        }
        residues.push((le, x % le));
    }
    if n == 1 {
        return 0;
    }
    crt(&residues, n)
}

fn bsgs(g: u64, h: u64, md: u64, n: u64) -> u64 {
    let s = (n as f64).sqrt() as u64 + 1;
    let mut table = HashMap::with_capacity(s as usize);
    let mut cur = 1u64;
    for j in 0..s {
        table.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, md);
    }
    let step = pow_mod(inv_mod(g, md), s, md);
    let mut y = h;
    for i in 0..=s {
        if let Some(&j) = table.get(&y) {
            return (i * s + j) % n;
        }
        y = mul_mod(y, step, md);
    }
    panic!("discrete log does not exist");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_round_trip() {
        for m in [
            1u64, 2, 3, 4, 8, 15, 16, 24, 45, 63, 100, 105, 128, 243, 1001,
        ] {
            let g = UnitGroup::new(m);
            let phi: u64 = (1..=m).filter(|&a| num_integer::gcd(a, m) == 1).count() as u64;
            assert_eq!(g.order(), phi, "order of units mod {m}");
            for a in (1..m.max(2)).filter(|&a| num_integer::gcd(a, m) == 1) {
                let c = g.coords(a).unwrap();
                assert_eq!(g.residue(&c), a % m.max(1), "round trip of {a} mod {m}");
            }
        }
    }

    #[test]
    fn generators_are_primitive_mod_squares() {
        for q in [3u64, 5, 7, 29, 191, 487] {
            let g = prime_generator(q);
            let n = q * (q - 1);
            let fs = factor_u64(n);
            assert!(fs.iter().all(|&(l, _)| pow_mod(g, n / l, q * q) != 1));
        }
        // 10 is a primitive root mod 487 but not mod 487^2
        assert_eq!(pow_mod(10, 486, 487 * 487), 1);
    }

    #[test]
    fn discrete_logs() {
        let md = 1_000_003u64;
        let g = prime_generator(md);
        for x in [0u64, 1, 17, 999_999, 123_456] {
            let a = pow_mod(g, x, md);
            assert_eq!(dlog(g, a, md, md - 1), x);
        }
    }
}
