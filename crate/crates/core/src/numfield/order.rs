//! Orders given by a basis in the power basis, enlarged to p-maximality by
//! the Round 2 (Pohst-Zassenhaus) loop.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor_bigint;
use crate::arith::primes::mul_mod;
use crate::error::{Error, Result};
use crate::linalg::{
    diagonal_product, hnf_lower_mod, hnf_mod, left_kernel_mod_p, solve_lower, solve_upper,
    to_u64_mod, IntMatrix,
};
use crate::poly::IntPoly;

/// A full-rank subring of `Z[x]/(f)` tensored with Q, stored as
/// `rows(m) / d` in the power basis with `m` lower triangular.
#[derive(Clone, Debug)]
pub(crate) struct Order {
    pub f: IntPoly,
    pub m: IntMatrix,
    pub d: BigInt,
}

/// `a * b mod f` on coefficient vectors of length `deg f`; `f` monic.
pub(crate) fn mul_mod_f(a: &[BigInt], b: &[BigInt], f: &IntPoly) -> Vec<BigInt> {
    let n = f.deg();
    let mut prod = vec![BigInt::zero(); 2 * n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    let fc = f.coeffs();
    for k in (n..2 * n).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for (j, fj) in fc.iter().enumerate().take(n) {
            prod[k - n + j] -= &c * fj;
        }
    }
    prod.truncate(n);
    prod
}

impl Order {
    /// The equation order `Z[x]/(f)`.
    pub fn equation(f: &IntPoly) -> Self {
        let n = f.deg();
        let m = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        Self {
            f: f.clone(),
            m,
            d: BigInt::one(),
        }
    }

    /// Order spanned by integral elements given as integer vectors over a
    /// common denominator `d`. The span must be a ring containing `Z[x]`.
    pub fn from_generators(f: &IntPoly, gens: &[Vec<BigInt>], d: &BigInt) -> Self {
        let n = f.deg();
        let m = hnf_lower_mod(gens, n, d);
        let mut o = Self {
            f: f.clone(),
            m,
            d: d.clone(),
        };
        o.normalize();
        o
    }

    pub fn degree(&self) -> usize {
        self.f.deg()
    }

    fn normalize(&mut self) {
        let mut g = self.d.clone();
        for row in &self.m {
            for x in row {
                g = g.gcd(x);
            }
        }
        if !g.is_one() {
            for row in self.m.iter_mut() {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
            self.d /= &g;
        }
    }

    /// `[O : Z[x]] = d^n / det(m)`.
    pub fn index(&self) -> BigUint {
        let n = self.degree() as u32;
        let num = self.d.pow(n);
        let det = diagonal_product(&self.m);
        let (q, r) = num.div_rem(&det);
        assert!(r.is_zero(), "order does not contain Z[x]");
        q.magnitude().clone()
    }

    /// Signed discriminant `disc(f) / index^2`.
    pub fn discriminant(&self, disc_f: &BigInt) -> BigInt {
        let idx = BigInt::from(self.index());
        let (q, r) = disc_f.div_rem(&(&idx * &idx));
        assert!(r.is_zero(), "index^2 must divide disc(f)");
        q
    }

    /// `table[i][j]` = coordinates of `w_i * w_j` in the basis.
    fn mult_table(&self) -> Vec<Vec<Vec<BigInt>>> {
        let n = self.degree();
        let mut t = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = mul_mod_f(&self.m[i], &self.m[j], &self.f);
                let v: Vec<BigInt> = prod
                    .iter()
                    .map(|x| {
                        let (q, r) = x.div_rem(&self.d);
                        assert!(r.is_zero(), "basis elements are not integral");
                        q
                    })
                    .collect();
                let c = solve_lower(&self.m, &v).expect("order closed under products");
                t[i][j] = c.clone();
                t[j][i] = c;
            }
        }
        t
    }

    /// Enlarges the order until it is p-maximal.
    pub fn make_p_maximal(&mut self, p: u64) {
        while let Some(bigger) = self.enlarge_at(p) {
            *self = bigger;
        }
    }

    /// One Round 2 step: the multiplier ring of the p-radical, or `None`
    /// when it equals the order (which certifies p-maximality).
    fn enlarge_at(&self, p: u64) -> Option<Self> {
        let n = self.degree();
        let table = self.mult_table();
        let tp: Vec<Vec<Vec<u64>>> = table
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.iter().map(|x| to_u64_mod(x, p)).collect())
                    .collect()
            })
            .collect();
        let mul_p = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; n];
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    if b[j] == 0 {
                        continue;
                    }
                    let s = mul_mod(a[i], b[j], p);
                    for (k, o) in out.iter_mut().enumerate() {
                        *o = (*o + mul_mod(s, tp[i][j][k], p)) % p;
                    }
                }
            }
            out
        };
        // p-radical = kernel of x -> x^(p^j) with p^j >= n
        let mut frob_exp: u128 = p as u128;
        while frob_exp < n as u128 {
            frob_exp *= p as u128;
        }
        let mut a_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0u64; n];
            e[i] = 1;
            let mut acc = {
                let mut one = vec![0u64; n];
                // 1 in basis coordinates
                let c = solve_lower(&self.m, &unit_power(n, &self.d)).expect("1 lies in the order");
                for (k, x) in c.iter().enumerate() {
                    one[k] = to_u64_mod(x, p);
                }
                one
            };
            let mut base = e;
            let mut k = frob_exp;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul_p(&acc, &base);
                }
                base = mul_p(&base, &base);
                k >>= 1;
            }
            a_rows.push(acc);
        }
        let ker = left_kernel_mod_p(&a_rows, n, p);
        let pb = BigInt::from(p);
        let gens: Vec<Vec<BigInt>> = ker
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let ip = hnf_mod(&gens, n, &pb);
        // U = { y : y * I_p in p * I_p }
        let mut b_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n * n);
            for gen in &ip {
                let mut prod = vec![BigInt::zero(); n];
                for (l, g) in gen.iter().enumerate() {
                    if g.is_zero() {
                        continue;
                    }
                    for (k, x) in table[i][l].iter().enumerate() {
                        prod[k] += g * x;
                    }
                }
                let c = solve_upper(&ip, &prod).expect("p-radical is an ideal");
                row.extend(c.iter().map(|x| to_u64_mod(x, p)));
            }
            b_rows.push(row);
        }
        let uker = left_kernel_mod_p(&b_rows, n * n, p);
        if uker.is_empty() {
            return None;
        }
        let ugens: Vec<Vec<BigInt>> = uker
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let u = hnf_mod(&ugens, n, &pb);
        // new order (1/p) U, in power coordinates over denominator p*d
        let new_gens: Vec<Vec<BigInt>> = u
            .iter()
            .map(|row| {
                (0..n)
                    .map(|k| {
                        row.iter()
                            .zip(&self.m)
                            .map(|(c, mrow)| c * &mrow[k])
                            .sum::<BigInt>()
                    })
                    .collect()
            })
            .collect();
        let mut gens = new_gens;
        gens.extend(self.m.iter().map(|r| r.iter().map(|x| x * &pb).collect()));
        Some(Self::from_generators(&self.f, &gens, &(&self.d * &pb)))
    }

    /// Runs Round 2 at every prime whose square divides `disc(O)`.
    pub fn maximize(&mut self, disc_f: &BigInt) -> Result<()> {
        let disc = self.discriminant(disc_f);
        for (p, e) in factor_bigint(&disc) {
            if e < 2 {
                continue;
            }
            let p = p
                .to_u64()
                .ok_or_else(|| Error::InvalidInput(format!("index prime {p} exceeds 64 bits")))?;
            self.make_p_maximal(p);
        }
        Ok(())
    }

    /// Basis as rationals in the power basis.
    pub fn basis_rational(&self) -> Vec<Vec<num_rational::BigRational>> {
        self.m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| num_rational::BigRational::new(x.clone(), self.d.clone()))
                    .collect()
            })
            .collect()
    }
}

/// `d * 1` as a power-basis vector.
fn unit_power(n: usize, d: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[0] = d.abs();
    v
}
