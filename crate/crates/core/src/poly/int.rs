//! Integer-specific polynomial algebra: content, pseudo-division,
//! subresultant resultants, discriminants and squarefree decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dense::Poly;
use crate::error::{Error, Result};

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl Poly<BigInt> {
    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs()
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs().iter().map(|a| a / &c).collect())
    }

    /// Primitive with positive leading coefficient: the canonical
    /// representative of the class `f * Q^x`.
    pub fn normalized(&self) -> Self {
        let p = self.primitive_part();
        if p.lc().is_negative() {
            -&p
        } else {
            p
        }
    }

    /// Pseudo-division: returns `(q, r, k)` with `lc(d)^k * self = q*d + r`
    /// and `deg r < deg d`, where `k = max(deg self - deg d + 1, 0)`.
    pub fn pseudo_div_rem(&self, d: &Self) -> Result<(Self, Self, u32)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(fd) = self.degree() else {
            return Ok((Self::zero(), Self::zero(), 0));
        };
        if fd < dd {
            return Ok((Self::zero(), self.clone(), 0));
        }
        let k = (fd - dd + 1) as u32;
        let lc = d.lc();
        let mut rem: Vec<BigInt> = self.coeffs().to_vec();
        let mut quot = vec![BigInt::zero(); fd - dd + 1];
        for i in (0..=fd - dd).rev() {
            let c = rem[i + dd].clone();
            for q in quot.iter_mut() {
                *q *= &lc;
            }
            for r in rem.iter_mut().take(i + dd + 1) {
                *r *= &lc;
            }
            quot[i] += &c;
            if !c.is_zero() {
                for (j, dc) in d.coeffs().iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem), k))
    }

    /// Exact quotient over Z, if `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let Some(fd) = self.degree() else {
            return Some(Self::zero());
        };
        if fd < dd {
            return None;
        }
        let lc = d.lc();
        let mut rem: Vec<BigInt> = self.coeffs().to_vec();
        let mut quot = vec![BigInt::zero(); fd - dd + 1];
        for i in (0..=fd - dd).rev() {
            let (c, r) = rem[i + dd].div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (j, dc) in d.coeffs().iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.iter().all(|r| r.is_zero()).then(|| Self::new(quot))
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.exact_div(self).is_some()
    }

    pub fn to_rational(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Clears denominators; the result is primitive up to sign.
    pub fn from_rational(f: &RatPoly) -> Self {
        let den = f
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::new(
            f.coeffs()
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs()
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// `ceil(||f||_2)`.
    pub fn norm2_ceil(&self) -> BigInt {
        let s: BigInt = self.coeffs().iter().map(|c| c * c).sum();
        let r = s.sqrt();
        if &r * &r == s {
            r
        } else {
            r + 1
        }
    }

    /// Primitive gcd with positive leading coefficient, scaled by the gcd of
    /// the contents (primitive remainder sequence).
    pub fn gcd_z(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r, _) = a.pseudo_div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_part();
        }
        a.normalized().scale(&c)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd_z(&self.derivative()).deg() == 0
    }

    /// Squarefree decomposition of the primitive part: pairs `(a_i, i)` with
    /// `pp(self) = prod a_i^i` up to sign, each `a_i` primitive, squarefree
    /// and of positive degree.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let f = self.normalized();
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        // Yun's algorithm over Q, converting back to primitive integer factors.
        let fq = f.to_rational();
        let d = fq.derivative();
        let mut a = fq.gcd(&d);
        let mut b = fq.div_rem(&a).expect("gcd divides").0;
        let mut c = d.div_rem(&a).expect("gcd divides").0;
        let mut dd = &c - &b.derivative();
        let mut i = 1;
        while b.deg() > 0 {
            a = b.gcd(&dd);
            b = b.div_rem(&a).expect("gcd divides").0;
            c = dd.div_rem(&a).expect("gcd divides").0;
            dd = &c - &b.derivative();
            if a.deg() > 0 {
                out.push((Self::from_rational(&a).normalized(), i));
            }
            i += 1;
        }
        out
    }
}

/// Newton interpolation through integer points; the result must be integral.
pub(crate) fn interpolate(xs: &[i64], ys: &[BigInt]) -> IntPoly {
    let m = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().cloned().map(BigRational::from_integer).collect();
    for j in 1..m {
        for i in (j..m).rev() {
            let den = BigRational::from_integer(BigInt::from(xs[i] - xs[i - j]));
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    let mut acc = RatPoly::zero();
    for i in (0..m).rev() {
        let lin = RatPoly::new(vec![
            BigRational::from_integer(BigInt::from(-xs[i])),
            BigRational::one(),
        ]);
        acc = &(&acc * &lin) + &RatPoly::constant(dd[i].clone());
    }
    IntPoly::from_rational(&acc)
}

/// Resultant `Res(f, g) = lc(f)^deg(g) * prod_{f(a)=0} g(a)` by the
/// subresultant algorithm.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let ca = a.content();
    let cb = b.content();
    a = a.primitive_part();
    b = b.primitive_part();
    let t = ca.pow(b.deg() as u32) * cb.pow(a.deg() as u32);
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    if b.deg() == 0 {
        return s * t * b.lc().pow(a.deg() as u32);
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (a.deg() - b.deg()) as u32;
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        let (_, r, _) = a.pseudo_div_rem(&b).expect("nonzero divisor");
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        let div = &gg * h.pow(delta);
        b = Poly::new(r.coeffs().iter().map(|c| c / &div).collect());
        gg = a.lc();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            _ => gg.pow(delta) / h.pow(delta - 1),
        };
        if b.deg() == 0 {
            let n = a.deg() as u32;
            let hh = if n == 0 {
                BigInt::one()
            } else {
                b.lc().pow(n) / h.pow(n - 1)
            };
            return s * t * hh;
        }
    }
}

/// Discriminant `(-1)^(n(n-1)/2) / lc * Res(f, f')`.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let n = f.deg();
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let r = resultant(f, &f.derivative()) / f.lc();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    /// Sylvester-matrix determinant by fraction-free elimination.
    fn sylvester_oracle(f: &IntPoly, g: &IntPoly) -> BigInt {
        let (m, n) = (f.deg(), g.deg());
        let size = m + n;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = BigRational::from_integer(f.coeff(m - j));
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = BigRational::from_integer(g.coeff(n - j));
            }
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let pv = mat[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let factor = &mat[r][col] / &pv;
                for c in col..size {
                    let v = &factor * &mat[col][c];
                    mat[r][c] -= v;
                }
            }
        }
        det.to_integer()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])), BigInt::from(-1));
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), BigInt::from(1));
        assert_eq!(discriminant(&p(&[-1, -1, 0, 1])), BigInt::from(-23));
        assert_eq!(discriminant(&p(&[-5, 0, 1])), BigInt::from(20));
        assert_eq!(discriminant(&p(&[1, 3, -3, -4, 1, 1])), BigInt::from(14641));
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases = [
            (p(&[3, -1, 4, 2]), p(&[1, 5, -9])),
            (p(&[2, 0, 0, 0, 3]), p(&[-7, 2, 1, 1])),
            (p(&[6, 4]), p(&[1, 2, 3, 4, 5])),
            (p(&[1, -3, 3, -1]), p(&[-1, 2, -1])),
            (p(&[5, 1, 0, 2, 0, -3]), p(&[2, 2, 0, 6])),
        ];
        for (f, g) in &cases {
            assert_eq!(resultant(f, g), sylvester_oracle(f, g), "{f} , {g}");
        }
    }

    #[test]
    fn pseudo_division() {
        let (q, r, k) = p(&[-1, 0, 1]).pseudo_div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!((q, r, k), (p(&[1, 1]), IntPoly::zero(), 2));
        let f = p(&[1, 2, 3, 4]);
        let d = p(&[1, 0, 3]);
        let (q, r, k) = f.pseudo_div_rem(&d).unwrap();
        assert!(r.deg() < 2);
        assert_eq!(f.scale(&d.lc().pow(k)), &(&q * &d) + &r);
    }

    #[test]
    fn content_and_squarefree() {
        assert_eq!(p(&[0, 4, 6]).content(), BigInt::from(2));
        let f = p(&[-2, 0, 1]).pow(2);
        assert_eq!(f.squarefree_decomposition(), vec![(p(&[-2, 0, 1]), 2)]);
        let g = &p(&[1, 1]) * &p(&[-1, 1]).pow(3);
        assert_eq!(
            g.squarefree_decomposition(),
            vec![(p(&[1, 1]), 1), (p(&[-1, 1]), 3)]
        );
        assert!(!f.is_squarefree());
        assert!(p(&[-1, -1, 0, 1]).is_squarefree());
    }
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
