//! Minimal polynomials of Gaussian periods, computed exactly in
//! `Z[x]/(x^m - 1)` and reduced modulo `Φ_m` at the end.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::AbelianField;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Largest conductor for which periods are expanded.
pub const MAX_PERIOD_CONDUCTOR: u64 = 20_000;

/// Candidate elements tried after the plain period.
const MAX_FALLBACKS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorPolynomial {
    pub poly: IntPoly,
    /// Describes the traced element when the plain period was degenerate.
    pub fallback: Option<String>,
}

/// Minimal polynomial of `Σ_{h∈H} ζ_m^h`.
pub fn generator_polynomial(a: &AbelianField) -> Result<IntPoly> {
    generator_polynomial_flagged(a).map(|g| g.poly)
}

/// As [`generator_polynomial`], falling back to traces of `ζ + c·ζ^e` when
/// the period generates a proper subfield.
pub fn generator_polynomial_flagged(a: &AbelianField) -> Result<GeneratorPolynomial> {
    let m = a.conductor();
    if m == 1 {
        return Ok(GeneratorPolynomial {
            poly: IntPoly::from_i64s(&[-1, 1]),
            fallback: None,
        });
    }
    crate::error::cap("period conductor", MAX_PERIOD_CONDUCTOR, m)?;
    crate::error::cap(
        "field degree",
        crate::numfield::DEFAULT_DEGREE_CAP as u64,
        a.degree(),
    )?;
    let h = a.subgroup_elements(m).expect("subgroup is smaller than m");
    let reps = coset_representatives(m, &h);
    let phi = cyclotomic(m);
    let mut candidates: Vec<(Vec<(u64, i64)>, Option<String>)> = vec![(vec![(1, 1)], None)];
    'outer: for e in 2..m {
        for c in 1..=2 {
            candidates.push((
                vec![(1, 1), (e, c)],
                Some(format!("trace of ζ + {c}·ζ^{e}")),
            ));
            if candidates.len() > MAX_FALLBACKS {
                break 'outer;
            }
        }
    }
    for (beta, note) in candidates {
        let poly = period_polynomial(m, &h, &reps, &beta, &phi)?;
        if poly.is_squarefree() {
            return Ok(GeneratorPolynomial {
                poly,
                fallback: note,
            });
        }
    }
    Err(Error::Degenerate(format!(
        "no generating period found for {a}"
    )))
}

fn coset_representatives(m: u64, h: &[u64]) -> Vec<u64> {
    let mut covered: HashSet<u64> = HashSet::new();
    let mut reps = Vec::new();
    for t in 1..m {
        if num_integer::gcd(t, m) != 1 || covered.contains(&t) {
            continue;
        }
        reps.push(t);
        for &x in h {
            covered.insert(t * x % m);
        }
    }
    reps
}

/// `∏_j (X - Σ_{h∈H} σ_{t_j h}(β))` for `β = Σ c·ζ^e`.
fn period_polynomial(
    m: u64,
    h: &[u64],
    reps: &[u64],
    beta: &[(u64, i64)],
    phi: &IntPoly,
) -> Result<IntPoly> {
    let mu = m as usize;
    let mut coeffs: Vec<Vec<BigInt>> = vec![unit(mu)];
    for &t in reps {
        let mut eta: BTreeMap<usize, i64> = BTreeMap::new();
        for &x in h {
            let a = t * x % m;
            for &(e, c) in beta {
                *eta.entry((a * e % m) as usize).or_insert(0) += c;
            }
        }
        let eta: Vec<(usize, BigInt)> = eta
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (e, BigInt::from(c)))
            .collect();
        let mut next = vec![vec![BigInt::zero(); mu]; coeffs.len() + 1];
        for (k, ck) in coeffs.iter().enumerate() {
            for (i, x) in ck.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                next[k + 1][i] += x;
                for (e, c) in &eta {
                    next[k][(i + e) % mu] -= c * x;
                }
            }
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let r = reduce_mod_monic(c, phi);
        if r.iter().skip(1).any(|x| !x.is_zero()) {
            return Err(Error::Degenerate(
                "period coefficient is not rational".into(),
            ));
        }
        out.push(r.into_iter().next().unwrap_or_default());
    }
    Ok(IntPoly::new(out))
}

fn unit(m: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); m];
    v[0] = BigInt::one();
    v
}

fn reduce_mod_monic(mut a: Vec<BigInt>, f: &IntPoly) -> Vec<BigInt> {
    let d = f.deg();
    let fc = f.coeffs();
    for k in (d..a.len()).rev() {
        let c = std::mem::take(&mut a[k]);
        if c.is_zero() {
            continue;
        }
        for j in 0..d {
            a[k - d + j] -= &c * &fc[j];
        }
    }
    a.truncate(d.max(1));
    a
}

/// The cyclotomic polynomial `Φ_m`.
pub fn cyclotomic(m: u64) -> IntPoly {
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut done: Vec<(u64, IntPoly)> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        let mut num = &IntPoly::monomial(BigInt::one(), d as usize) - &IntPoly::one();
        for (e, phi) in &done {
            if d % e == 0 {
                num = num.exact_div(phi).expect("Φ_e divides x^d - 1");
            }
        }
        done.push((d, num));
    }
    done.pop().expect("m has a divisor").1
}
