//! Towers of cyclic fields `L_i` of degree `p_i` (the first primes) and
//! prime conductor `q_i`, and finite scans of `γ'` over their composita.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{gamma_prime, prop_3_1_bound, ratio, GammaReport};
use crate::abelian::{abelian_disc, join, AbelianField};
use crate::arith::{first_primes, is_prime_u64, FactoredReal};
use crate::error::{cap, Error, Result};

/// Default bound on the number of stages a scan may combine.
pub const MAX_SCAN_STAGES: usize = 12;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Stage {
    pub p: u64,
    pub q: u64,
    pub field: AbelianField,
    /// `|Δ_{L_i}|^(1/p_i^2) = q_i^((p_i - 1)/p_i^2)`
    pub stage_value: FactoredReal,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CfTower {
    pub stages: Vec<Stage>,
}

impl CfTower {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Compositum of the stages whose indices are set in `mask`.
    pub fn compositum(&self, mask: u64) -> AbelianField {
        self.stages
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(AbelianField::rationals(), |acc, (_, s)| {
                join(&acc, &s.field)
            })
    }

    /// `|Δ_{L_J}| = ∏_{i∈J} |Δ_{L_i}|^([L_J:Q]/p_i)`, from the coprimality of
    /// the stage discriminants.
    pub fn compositum_disc(&self, mask: u64) -> FactoredReal {
        let picked: Vec<&Stage> = self.picked(mask).collect();
        let deg: u64 = picked.iter().map(|s| s.p).product();
        FactoredReal::from_pairs(
            picked
                .iter()
                .map(|s| (BigUint::from(s.q), ratio((s.p - 1) * (deg / s.p), 1))),
        )
    }

    fn picked(&self, mask: u64) -> impl Iterator<Item = &Stage> {
        self.stages
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| s)
    }

    /// Stages contained in `k`, as a bit mask.
    pub fn support(&self, k: &AbelianField) -> u64 {
        self.stages
            .iter()
            .enumerate()
            .filter(|(_, s)| k.contains(&s.field))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Stages for the first `n` primes `p`, each with the least unused prime
/// `q ≡ 1 mod p` such that `q^(p-1) ≤ 3^(p^2)`.
pub fn build_cf_tower(n: usize) -> Result<CfTower> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "a tower needs at least one stage".into(),
        ));
    }
    let three = BigUint::from(3u32);
    let mut stages: Vec<Stage> = Vec::with_capacity(n);
    for p in first_primes(n) {
        let limit = three.pow((p * p) as u32);
        let mut q = p + 1;
        let found = loop {
            if BigUint::from(q).pow((p - 1) as u32) > limit {
                break None;
            }
            if is_prime_u64(q) && stages.iter().all(|s| s.q != q) {
                break Some(q);
            }
            q = q
                .checked_add(p)
                .ok_or_else(|| Error::SearchExhausted(format!("q overflow for p = {p}")))?;
        };
        let q = found.ok_or_else(|| {
            Error::SearchExhausted(format!(
                "no prime q = 1 mod {p} with q^{} <= 3^{}",
                p - 1,
                p * p
            ))
        })?;
        let field = AbelianField::cyclic_subfield(q, p)?;
        let stage_value = FactoredReal::prime_power(q, ratio(p - 1, p * p));
        stages.push(Stage {
            p,
            q,
            field,
            stage_value,
        });
    }
    Ok(CfTower { stages })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScannedField {
    /// Degrees `p_i` of the participating stages.
    pub stages: Vec<u64>,
    pub gamma_prime: FactoredReal,
    pub witness: AbelianField,
    pub bound_3_1: FactoredReal,
    pub closed_form_agrees: bool,
    pub report: GammaReport,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScanReport {
    pub base: AbelianField,
    pub scanned: Vec<ScannedField>,
    pub max_value: FactoredReal,
    pub at_most_three: bool,
    pub bound_3_1: FactoredReal,
    pub failures: Vec<String>,
}

pub fn liminf_scan(tower: &CfTower, k: &AbelianField) -> Result<ScanReport> {
    liminf_scan_capped(tower, k, MAX_SCAN_STAGES)
}

/// `γ'(M/K)` for every compositum `M` of stages containing `K`, each value
/// checked against `|Δ_{M'}|^(1/[M':Q]^2)` where `M'` is the compositum of
/// the stages of `M` outside `F`.
pub fn liminf_scan_capped(
    tower: &CfTower,
    k: &AbelianField,
    max_stages: usize,
) -> Result<ScanReport> {
    let n = tower.len();
    cap("tower stages in a scan", max_stages as u64, n as u64)?;
    let full: u64 = (1 << n) - 1;
    let support = tower.support(k);
    if tower.compositum(support) != *k {
        return Err(Error::NotInTower(format!(
            "{k} is not a compositum of tower stages"
        )));
    }
    let masks: Vec<u64> = (1..=full).filter(|m| m & support == support).collect();
    let scanned: Vec<ScannedField> = masks
        .into_par_iter()
        .map(|mask| scan_one(tower, k, mask))
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let three = FactoredReal::from_u64(3);
    for s in &scanned {
        if !s.closed_form_agrees {
            failures.push(format!("closed form disagrees for stages {:?}", s.stages));
        }
        if s.gamma_prime > s.bound_3_1 {
            failures.push(format!(
                "stages {:?}: γ' = {} exceeds the bound {}",
                s.stages, s.gamma_prime, s.bound_3_1
            ));
        }
    }
    let max_value = scanned
        .iter()
        .map(|s| s.gamma_prime.clone())
        .max()
        .unwrap_or_else(FactoredReal::one);
    let bound_3_1 = prop_3_1_bound(
        &tower
            .stages
            .iter()
            .map(|s| s.field.clone())
            .collect::<Vec<_>>(),
    )?;
    Ok(ScanReport {
        base: k.clone(),
        at_most_three: max_value <= three,
        max_value,
        bound_3_1,
        failures,
        scanned,
    })
}

fn scan_one(tower: &CfTower, k: &AbelianField, mask: u64) -> Result<ScannedField> {
    let m = tower.compositum(mask);
    let mut report = gamma_prime(&m, k)?;
    let fields: Vec<AbelianField> = tower.picked(mask).map(|s| s.field.clone()).collect();
    let bound = prop_3_1_bound(&fields)?;
    report.bound_3_1 = Some(bound.clone());
    let closed_form_agrees = abelian_disc(&m) == tower.compositum_disc(mask)
        && report.entries.iter().all(|e| {
            let rest = mask & !tower.support(&e.field);
            let deg: u64 = tower.picked(rest).map(|s| s.p).product();
            let expected = tower
                .compositum_disc(rest)
                .pow(&BigRational::new(BigInt::one(), BigInt::from(deg * deg)));
            e.gamma == expected
        });
    Ok(ScannedField {
        stages: tower.picked(mask).map(|s| s.p).collect(),
        gamma_prime: report.sup_value.clone(),
        witness: report.sup_witness.clone(),
        bound_3_1: bound,
        closed_form_agrees,
        report,
    })
}
