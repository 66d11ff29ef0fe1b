//! Field descriptors: named shortcuts (`Q`, `sqrt2`, `sqrt-3`, `i`,
//! `zeta7`, `cyclic(7,3)`), the abelian form `m=<m>;H=<residues>` and raw
//! polynomials `poly=c0,c1,...` with the constant term first.

use std::fmt;
use std::str::FromStr;

use gammalab_core::abelian::{generator_polynomial, AbelianField};
use gammalab_core::numfield::{build_field_capped, NumberField};
use gammalab_core::poly::IntPoly;
use gammalab_core::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Abelian(AbelianField),
    Poly(IntPoly),
}

fn squarefree_part(d: i64) -> i64 {
    let sign = d.signum();
    let mut n = d.unsigned_abs();
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * (out * n) as i64
}

fn quadratic(d: i64) -> Result<AbelianField> {
    if d == 0 {
        return Err(Error::InvalidInput("sqrt0 is not a field".into()));
    }
    match squarefree_part(d) {
        1 => Ok(AbelianField::rationals()),
        s => AbelianField::quadratic(s),
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidInput(format!("unknown field descriptor {t:?}"));
        if let Some(cs) = t.strip_prefix("poly=") {
            let coeffs: Vec<i64> = cs
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            let f = IntPoly::from_i64s(&coeffs);
            if f.deg() == 0 {
                return Err(Error::InvalidInput(format!("{t:?} is constant")));
            }
            return Ok(Descriptor::Poly(f));
        }
        if t.starts_with("m=") {
            return t.parse().map(Descriptor::Abelian);
        }
        let lower = t.to_ascii_lowercase();
        let field = match lower.as_str() {
            "q" | "qq" | "rationals" => AbelianField::rationals(),
            "i" => AbelianField::quadratic(-1)?,
            _ => {
                if let Some(d) = lower.strip_prefix("sqrt") {
                    let d = d.trim_start_matches('(').trim_end_matches(')');
                    quadratic(d.parse().map_err(|_| bad())?)?
                } else if let Some(m) = lower.strip_prefix("zeta") {
                    AbelianField::cyclotomic(m.parse().map_err(|_| bad())?)?
                } else if let Some(args) = lower
                    .strip_prefix("cyclic(")
                    .and_then(|r| r.strip_suffix(')'))
                {
                    let (q, p) = args.split_once(',').ok_or_else(bad)?;
                    let q = q.trim().parse().map_err(|_| bad())?;
                    let p = p.trim().parse().map_err(|_| bad())?;
                    AbelianField::cyclic_subfield(q, p)?
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(Descriptor::Abelian(field))
    }
}

impl fmt::Display for Descriptor {
    /// Canonical form, used as the cache key.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Abelian(a) => write!(f, "{a}"),
            Descriptor::Poly(p) => {
                let cs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                write!(f, "poly={}", cs.join(","))
            }
        }
    }
}

impl Descriptor {
    pub fn abelian(&self) -> Option<&AbelianField> {
        match self {
            Descriptor::Abelian(a) => Some(a),
            Descriptor::Poly(_) => None,
        }
    }

    /// Defining polynomial: the Gaussian-period polynomial for abelian fields.
    pub fn polynomial(&self) -> Result<IntPoly> {
        match self {
            Descriptor::Abelian(a) => generator_polynomial(a),
            Descriptor::Poly(p) => Ok(p.clone()),
        }
    }

    pub fn number_field(&self, degree_cap: usize) -> Result<NumberField> {
        if let Descriptor::Abelian(a) = self {
            if a.is_rational() {
                return Ok(gammalab_core::numfield::rationals());
            }
            if a.degree() > degree_cap as u64 {
                return Err(Error::CapExceeded {
                    what: "field degree",
                    limit: degree_cap as u64,
                    value: a.degree(),
                });
            }
        }
        build_field_capped(&self.polynomial()?, degree_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Descriptor {
        s.parse().unwrap()
    }

    #[test]
    fn shortcuts() {
        assert_eq!(
            d("sqrt2"),
            Descriptor::Abelian(AbelianField::quadratic(2).unwrap())
        );
        assert_eq!(d("sqrt8"), d("sqrt2"));
        assert_eq!(d("sqrt-3"), d("m=3;H=1"));
        assert_eq!(d("sqrt4"), d("Q"));
        assert_eq!(d("i"), d("sqrt(-1)"));
        assert_eq!(
            d("zeta7"),
            Descriptor::Abelian(AbelianField::cyclotomic(7).unwrap())
        );
        assert_eq!(d("cyclic(7, 3)"), d("m=7;H={1,6}"));
        assert_eq!(d("poly=1,0,-2").to_string(), "poly=1,0,-2");
        assert_eq!(
            d("poly=-2,0,1"),
            Descriptor::Poly(IntPoly::from_i64s(&[-2, 0, 1]))
        );
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "sqrt",
            "sqrt0",
            "zeta",
            "cyclic(7,5)",
            "poly=3",
            "poly=1,x",
            "m=4",
            "foo",
        ] {
            assert!(s.parse::<Descriptor>().is_err(), "{s}");
        }
    }

    #[test]
    fn canonical_keys_round_trip() {
        for s in ["Q", "sqrt5", "zeta12", "cyclic(11,5)", "poly=1,1,1"] {
            let a = d(s);
            assert_eq!(d(&a.to_string()), a);
        }
    }
}
