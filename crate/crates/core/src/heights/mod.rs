//! Absolute logarithmic Weil heights through the Mahler measure, with
//! certified enclosures, exhaustive enumeration of bounded height and
//! minimum-height probes inside cyclic fields of prime degree.

mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::abelian::{abelian_disc, cyclotomic, AbelianField};
use crate::arith::{is_prime_u64, totient};
use crate::error::{cap, Error, Result};
use crate::numfield::build_field;
use crate::poly::{
    canonical_cmp, discriminant, factor_over_q, interpolate, is_irreducible, resultant, IntPoly,
};

pub use roots::{aberth, inclusion_disks, newton_polish, RootDisk};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default bound on the number of coefficient vectors an enumeration visits.
pub const DEFAULT_WORK_CAP: u64 = 20_000_000;
pub const DEFAULT_SCREEN_SIZE: usize = 50;
const ABERTH_ITERATIONS: usize = 500;

/// An enclosure `[lo, hi]` of a height. When the Mahler measure is known to
/// be an integer it is kept, and comparisons against `log r` bounds become
/// exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Height {
    pub lo: f64,
    pub hi: f64,
    #[serde(serialize_with = "opt_display")]
    pub mahler: Option<BigUint>,
}

fn opt_display<S: Serializer, T: fmt::Display>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// `[ln x (1 - 4u) , ln x (1 + 4u)]`, widened for the rounding of `ln`.
fn ln_enclosure(x: f64) -> (f64, f64) {
    let l = x.ln();
    let slack = 4.0 * f64::EPSILON * l.abs() + f64::MIN_POSITIVE;
    (l - slack, l + slack)
}

fn ln_big(n: &BigUint) -> (f64, f64) {
    if n.bits() < 1000 {
        let x = n.to_f64().expect("finite");
        let (lo, hi) = ln_enclosure(x);
        // conversion to f64 is correct to half an ulp
        let rel = 2.0 * f64::EPSILON;
        (lo - rel, hi + rel)
    } else {
        let shift = n.bits() - 64;
        let top = (n >> shift).to_f64().expect("finite");
        let base = top.ln() + shift as f64 * std::f64::consts::LN_2;
        let slack = 1e-12 * base.abs();
        (base - slack, base + slack)
    }
}

impl Height {
    pub fn exact(mahler: BigUint, degree: usize) -> Self {
        let (lo, hi) = if mahler.is_one() {
            (0.0, 0.0)
        } else {
            let (lo, hi) = ln_big(&mahler);
            let d = degree as f64;
            (lo / d * (1.0 - f64::EPSILON), hi / d * (1.0 + f64::EPSILON))
        };
        Self {
            lo,
            hi,
            mahler: Some(mahler),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn overlaps(&self, o: &Height, slack: f64) -> bool {
        self.lo <= o.hi + slack && o.lo <= self.hi + slack
    }
}

/// A height bound `B`, either an exact `log r` for rational `r > 1` or a
/// decimal value.
#[derive(Clone, Debug, PartialEq)]
pub enum HeightBound {
    Log(BigRational),
    Value(f64),
}

impl HeightBound {
    pub fn log(r: i64) -> Self {
        HeightBound::Log(BigRational::from_integer(r.into()))
    }

    /// Enclosure of `B`.
    pub fn enclosure(&self) -> (f64, f64) {
        match self {
            HeightBound::Value(b) => (*b, *b),
            HeightBound::Log(r) => {
                let (nlo, nhi) = ln_big(r.numer().magnitude());
                let (dlo, dhi) = ln_big(r.denom().magnitude());
                (nlo - dhi, nhi - dlo)
            }
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            HeightBound::Value(b) => *b > 0.0 && b.is_finite(),
            HeightBound::Log(r) => *r > BigRational::one(),
        }
    }

    /// An integer `C` with `M(f) < e^{dB}` implying `|a_i| ≤ C(d,i) C`.
    fn mahler_ceiling(&self, d: usize) -> BigUint {
        match self {
            HeightBound::Log(r) => r.pow(d as i32).ceil().to_integer().magnitude().clone(),
            HeightBound::Value(b) => {
                let v = (d as f64 * b).exp() * (1.0 + 1e-9);
                BigUint::from(v.ceil() as u64)
            }
        }
    }
}

impl fmt::Display for HeightBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightBound::Log(r) => write!(f, "log({r})"),
            HeightBound::Value(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for HeightBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Accepts `log(r)`, `log:r` or a decimal.
impl FromStr for HeightBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("log(")
            .and_then(|t| t.strip_suffix(')'))
            .or_else(|| s.strip_prefix("log:"));
        let b = match inner {
            Some(r) => HeightBound::Log(
                r.trim()
                    .parse::<BigRational>()
                    .map_err(|e| Error::InvalidInput(format!("bad ratio {r:?}: {e}")))?,
            ),
            None => HeightBound::Value(
                s.parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad height bound {s:?}: {e}")))?,
            ),
        };
        if !b.is_positive() {
            return Err(Error::InvalidInput(format!(
                "height bound {s} must be positive"
            )));
        }
        Ok(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Below,
    NotBelow,
    /// The enclosure straddles the bound.
    Ambiguous,
}

/// Decides `h < B` for a height of an element of degree `d`.
pub fn compare_to_bound(h: &Height, bound: &HeightBound, d: usize) -> Verdict {
    if let (Some(m), HeightBound::Log(r)) = (&h.mahler, bound) {
        // M < r^d
        let lhs = BigInt::from(m.clone()) * r.denom().pow(d as u32);
        let rhs = r.numer().pow(d as u32);
        return if lhs < rhs {
            Verdict::Below
        } else {
            Verdict::NotBelow
        };
    }
    let (blo, bhi) = bound.enclosure();
    if h.hi < blo {
        Verdict::Below
    } else if h.lo >= bhi {
        Verdict::NotBelow
    } else {
        Verdict::Ambiguous
    }
}

fn cyclotomic_index(f: &IntPoly) -> Option<u64> {
    let d = f.deg() as u64;
    if !f.is_monic() || f.coeff(0).abs() != BigInt::one() {
        return None;
    }
    // φ(m) >= sqrt(m / 2)
    (1..=2 * d * d + 2)
        .filter(|&m| totient(m) == d)
        .find(|&m| cyclotomic(m) == *f)
}

/// Height enclosure of a root of a squarefree `f` with `f(0) != 0` or
/// `f = ±x`. Width is whatever the certified disks give.
pub fn height_enclosure(f: &IntPoly) -> Result<Height> {
    let d = f
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::InvalidInput("constant polynomial".into()))?;
    let lc = f.lc().magnitude().clone();
    let a0 = f.coeff(0).magnitude().clone();
    if d == 1 {
        return Ok(Height::exact(lc.max(a0), 1));
    }
    if cyclotomic_index(f).is_some() {
        return Ok(Height::exact(BigUint::one(), d));
    }
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().expect("finite"))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::CapExceeded {
            what: "coefficient bits for floating root isolation",
            limit: 1023,
            value: f.max_abs_coeff().bits(),
        });
    }
    let mut z = aberth(&coeffs, ABERTH_ITERATIONS);
    newton_polish(&coeffs, &mut z);
    let disks = inclusion_disks(&coeffs, &z)
        .ok_or_else(|| Error::Degenerate(format!("root inclusion disks of {f} overlap")))?;
    let ranges: Vec<(f64, f64)> = disks.iter().map(|dk| dk.modulus_range()).collect();
    if ranges.iter().all(|&(lo, _)| lo > 1.0) {
        return Ok(Height::exact(a0, d));
    }
    if ranges.iter().all(|&(_, hi)| hi < 1.0) {
        return Ok(Height::exact(lc, d));
    }
    let (mut lo, mut hi) = ln_big(&lc);
    for (rlo, rhi) in ranges {
        if rlo > 1.0 {
            lo += ln_enclosure(rlo).0;
        }
        if rhi > 1.0 {
            hi += ln_enclosure(rhi).1;
        }
    }
    let df = d as f64;
    let slack = 4.0 * df * f64::EPSILON * (1.0 + hi.abs());
    Ok(Height {
        lo: ((lo - slack) / df).max(0.0),
        hi: (hi + slack) / df,
        mahler: None,
    })
}

/// `h(α)` for a root `α` of the irreducible polynomial `f`.
pub fn weil_height(f: &IntPoly) -> Result<Height> {
    weil_height_tol(f, DEFAULT_TOLERANCE)
}

pub fn weil_height_tol(f: &IntPoly, tolerance: f64) -> Result<Height> {
    if f.deg() == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    if !is_irreducible(f)? {
        return Err(Error::Reducible);
    }
    let h = height_enclosure(f)?;
    if h.width() > tolerance {
        return Err(Error::Degenerate(format!(
            "height of {f} only enclosed to width {:e}",
            h.width()
        )));
    }
    Ok(h)
}

/// Primitive, positive leading coefficient.
fn normalize(f: &IntPoly) -> IntPoly {
    let g = f.primitive_part();
    if g.lc().is_negative() {
        -&g
    } else {
        g
    }
}

/// Minimal polynomial of `1/α`; `None` for `α = 0`.
pub fn reciprocal_min_poly(f: &IntPoly) -> Option<IntPoly> {
    if f.coeff(0).is_zero() {
        return None;
    }
    Some(normalize(&f.reversed()))
}

/// Minimal polynomial of `α^k`, from `Res_x(f(x), y - x^k)`.
pub fn power_min_poly(f: &IntPoly, k: u32) -> Result<IntPoly> {
    let d = f.deg();
    let xs: Vec<i64> = (0..=d as i64).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|&y0| {
            let g = &IntPoly::constant(BigInt::from(y0))
                - &IntPoly::monomial(BigInt::one(), k as usize);
            resultant(f, &g)
        })
        .collect();
    let g = interpolate(&xs, &ys);
    let fs = factor_over_q(&g)?;
    let first = fs
        .into_iter()
        .map(|(p, _)| p)
        .find(|p| p.deg() > 0)
        .ok_or_else(|| Error::Degenerate("constant power polynomial".into()))?;
    Ok(normalize(&first))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraicNumber {
    pub min_poly: IntPoly,
    pub degree: usize,
    pub height: Height,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Census {
    pub degree: usize,
    pub bound: HeightBound,
    /// Polynomials certified below the bound, in canonical order.
    pub numbers: Vec<AlgebraicNumber>,
    /// Polynomials whose enclosure straddles the bound.
    pub ambiguous: Vec<AlgebraicNumber>,
    pub polynomial_count: usize,
    /// `degree * polynomial_count`: the number of algebraic numbers.
    pub root_count: usize,
    pub box_size: u64,
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficient bounds `|a_i| ≤ C(d,i) ⌈e^{dB}⌉`.
fn coefficient_box(d: usize, bound: &HeightBound) -> Vec<BigUint> {
    let c = bound.mahler_ceiling(d);
    (0..=d).map(|i| binomial(d, i) * &c).collect()
}

pub fn enumerate_bounded(d: usize, bound: &HeightBound) -> Result<Census> {
    enumerate_bounded_capped(d, bound, DEFAULT_WORK_CAP)
}

/// Every algebraic number of degree exactly `d` and height below `bound`,
/// one entry per minimal polynomial.
pub fn enumerate_bounded_capped(d: usize, bound: &HeightBound, work_cap: u64) -> Result<Census> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    if !bound.is_positive() {
        return Err(Error::InvalidInput("height bound must be positive".into()));
    }
    let bx = coefficient_box(d, bound);
    let widths: Vec<u64> = bx
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let b = b.to_u64().unwrap_or(u64::MAX / 4);
            // leading coefficient is positive
            if i == d {
                b
            } else {
                b.saturating_mul(2).saturating_add(1)
            }
        })
        .collect();
    let size = widths.iter().fold(1u64, |acc, &w| acc.saturating_mul(w));
    cap("coefficient vectors to enumerate", work_cap, size)?;
    let offsets: Vec<i64> = bx
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if i == d {
                1
            } else {
                -(b.to_i64().expect("box fits"))
            }
        })
        .collect();
    let results: Vec<Option<(AlgebraicNumber, Verdict)>> = (0..size)
        .into_par_iter()
        .map(|mut idx| {
            let mut cs = Vec::with_capacity(d + 1);
            for (w, off) in widths.iter().zip(&offsets) {
                cs.push(BigInt::from((idx % w) as i64 + off));
                idx /= w;
            }
            classify(IntPoly::new(cs), d, bound)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut numbers = Vec::new();
    let mut ambiguous = Vec::new();
    for (a, v) in results.into_iter().flatten() {
        match v {
            Verdict::Below => numbers.push(a),
            Verdict::Ambiguous => ambiguous.push(a),
            Verdict::NotBelow => {}
        }
    }
    numbers.sort_by(|a, b| canonical_cmp(&a.min_poly, &b.min_poly));
    ambiguous.sort_by(|a, b| canonical_cmp(&a.min_poly, &b.min_poly));
    Ok(Census {
        degree: d,
        bound: bound.clone(),
        polynomial_count: numbers.len(),
        root_count: numbers.len() * d,
        numbers,
        ambiguous,
        box_size: size,
    })
}

fn classify(
    f: IntPoly,
    d: usize,
    bound: &HeightBound,
) -> Result<Option<(AlgebraicNumber, Verdict)>> {
    if f.deg() != d || (d > 1 && f.coeff(0).is_zero()) || !f.content().is_one() {
        return Ok(None);
    }
    let height = match height_enclosure(&f) {
        Ok(h) => h,
        // repeated roots, so reducible
        Err(Error::Degenerate(_)) if !f.is_squarefree() => return Ok(None),
        Err(e) => return Err(e),
    };
    let v = compare_to_bound(&height, bound, d);
    if v == Verdict::NotBelow || !is_irreducible(&f)? {
        return Ok(None);
    }
    Ok(Some((
        AlgebraicNumber {
            min_poly: f,
            degree: d,
            height,
        },
        v,
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail")]
pub enum Identification {
    /// Discriminant match and agreement on every screened prime.
    Identified {
        screen_size: usize,
    },
    Rejected(String),
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeCandidate {
    pub number: AlgebraicNumber,
    pub identification: Identification,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub field: AbelianField,
    pub bound: HeightBound,
    pub screen_size: usize,
    pub candidates: Vec<ProbeCandidate>,
    /// `None` means no element of `L \ Q` has height below the bound.
    pub min_height: Option<Height>,
    /// Identified candidates whose enclosure meets the minimal one.
    pub witnesses: Vec<IntPoly>,
    pub ambiguous: Vec<AlgebraicNumber>,
}

/// Monic polynomial of `lc * α`.
fn monic_associate(f: &IntPoly) -> IntPoly {
    let d = f.deg();
    let lc = f.lc();
    let cs: Vec<BigInt> = (0..=d)
        .map(|i| f.coeff(i) * lc.pow((d - i) as u32) / &lc)
        .collect();
    IntPoly::new(cs)
}

/// Whether `g` defines the field `l` of prime degree: degree, discriminant
/// and complete splitting at the first `screen` primes not dividing the
/// conductor, `lc(g)` or `disc(g)`.
pub fn identify(g: &IntPoly, l: &AbelianField, screen: usize) -> Identification {
    if g.deg() as u64 != l.degree() {
        return Identification::Rejected(format!("degree {} differs from {}", g.deg(), l.degree()));
    }
    let target = abelian_disc(l).to_integer().expect("integral discriminant");
    match build_field(&monic_associate(g)) {
        Ok(nf) if nf.disc_magnitude() != target => {
            return Identification::Rejected(format!(
                "|disc| {} differs from {target}",
                nf.disc_magnitude()
            ));
        }
        Ok(_) => {}
        Err(e) => return Identification::Inconclusive(e.to_string()),
    }
    let bad = BigInt::from(l.conductor()) * g.lc() * discriminant(g);
    let mut checked = 0;
    let mut r = 1u64;
    while checked < screen {
        r += 1;
        if !is_prime_u64(r) || (&bad % r).is_zero() {
            continue;
        }
        checked += 1;
        let splits = crate::poly::modp::ModPoly::from_int(g, r).root_count() == g.deg();
        let predicted = l.contains_residue(r).expect("r is prime to the conductor");
        if splits != predicted {
            return Identification::Rejected(format!("splitting at {r} disagrees"));
        }
    }
    Identification::Identified {
        screen_size: screen,
    }
}

pub fn min_height_probe(l: &AbelianField, bound: &HeightBound) -> Result<ProbeReport> {
    min_height_probe_with(l, bound, DEFAULT_SCREEN_SIZE, DEFAULT_WORK_CAP)
}

/// Smallest height of an element of `L \ Q` below `bound`, for `L` of
/// prime degree, over `Q`.
pub fn min_height_probe_with(
    l: &AbelianField,
    bound: &HeightBound,
    screen: usize,
    work_cap: u64,
) -> Result<ProbeReport> {
    let p = l.degree();
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{l} has non-prime degree {p}")));
    }
    let census = enumerate_bounded_capped(p as usize, bound, work_cap)?;
    let candidates: Vec<ProbeCandidate> = census
        .numbers
        .into_par_iter()
        .map(|number| ProbeCandidate {
            identification: identify(&number.min_poly, l, screen),
            number,
        })
        .collect();
    let identified: Vec<&ProbeCandidate> = candidates
        .iter()
        .filter(|c| matches!(c.identification, Identification::Identified { .. }))
        .collect();
    let min_height = identified
        .iter()
        .map(|c| &c.number.height)
        .min_by(|a, b| a.hi.partial_cmp(&b.hi).unwrap_or(Ordering::Equal))
        .cloned();
    let witnesses = match &min_height {
        Some(m) => identified
            .iter()
            .filter(|c| c.number.height.lo <= m.hi)
            .map(|c| c.number.min_poly.clone())
            .collect(),
        None => Vec::new(),
    };
    Ok(ProbeReport {
        field: l.clone(),
        bound: bound.clone(),
        screen_size: screen,
        candidates,
        min_height,
        witnesses,
        ambiguous: census.ambiguous,
    })
}

#[cfg(test)]
mod tests;
