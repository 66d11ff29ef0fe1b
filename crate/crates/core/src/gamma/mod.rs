//! The discriminant-growth quantities `γ_M(F)`, `γ'(M/K)` and sampled
//! lower bounds for `γ(M/K)`, all as exact [`FactoredReal`] values.

mod tower;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{
    abelian_disc, intermediate_fields_capped, join, meet, AbelianField, DEFAULT_FIELD_CAP,
};
use crate::arith::{is_prime_u64, FactoredReal};
use crate::error::{Error, Result};

pub use tower::{
    build_cf_tower, liminf_scan, liminf_scan_capped, CfTower, ScanReport, ScannedField, Stage,
    MAX_SCAN_STAGES,
};

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `|Δ_MF|^(1/([MF:Q][MF:F])) / |Δ_F|^(1/[MF:Q])`.
///
/// `m_disc` is only used to reject inputs where `|Δ_M|` cannot divide
/// `|Δ_MF|`.
pub fn gamma_m_f(
    m_disc: &FactoredReal,
    f_disc: &FactoredReal,
    mf_disc: &FactoredReal,
    deg_mf: u64,
    deg_f: u64,
) -> Result<FactoredReal> {
    if deg_f == 0 || deg_mf % deg_f != 0 {
        return Err(Error::InvalidInput(format!(
            "[F:Q] = {deg_f} does not divide [MF:Q] = {deg_mf}"
        )));
    }
    if (mf_disc / m_disc).to_integer().is_none() {
        return Err(Error::InvalidInput("|Δ_M| does not divide |Δ_MF|".into()));
    }
    let rel = deg_mf / deg_f;
    Ok(&mf_disc.pow(&ratio(1, deg_mf * rel)) / &f_disc.pow(&ratio(1, deg_mf)))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GammaEntry {
    pub field: AbelianField,
    pub degree: u64,
    pub abs_disc: FactoredReal,
    pub gamma: FactoredReal,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GammaReport {
    pub base: AbelianField,
    pub field: AbelianField,
    pub entries: Vec<GammaEntry>,
    pub sup_value: FactoredReal,
    pub sup_witness: AbelianField,
    pub bound_3_1: Option<FactoredReal>,
}

/// First maximizer in list order.
fn argmax<'a, T>(items: &'a [T], key: impl Fn(&T) -> &FactoredReal) -> Option<&'a T> {
    let mut best: Option<&T> = None;
    for it in items {
        if best.is_none_or(|b| key(it) > key(b)) {
            best = Some(it);
        }
    }
    best
}

/// `γ'(M/K)`: the supremum of `γ_M(F)` over `K ⊆ F ⊆ M`.
pub fn gamma_prime(m: &AbelianField, k: &AbelianField) -> Result<GammaReport> {
    gamma_prime_capped(m, k, DEFAULT_FIELD_CAP)
}

/// [`gamma_prime`] with a bound on the number of intermediate fields.
pub fn gamma_prime_capped(
    m: &AbelianField,
    k: &AbelianField,
    field_cap: u64,
) -> Result<GammaReport> {
    let fields = intermediate_fields_capped(k, m, field_cap)?;
    let dm = abelian_disc(m);
    let deg_m = m.degree();
    let entries: Vec<GammaEntry> = fields
        .into_par_iter()
        .map(|f| {
            let df = abelian_disc(&f);
            let gamma = gamma_m_f(&dm, &df, &dm, deg_m, f.degree())?;
            Ok(GammaEntry {
                degree: f.degree(),
                field: f,
                abs_disc: df,
                gamma,
            })
        })
        .collect::<Result<_>>()?;
    let best = argmax(&entries, |e| &e.gamma).expect("K itself is an entry");
    Ok(GammaReport {
        base: k.clone(),
        field: m.clone(),
        sup_value: best.gamma.clone(),
        sup_witness: best.field.clone(),
        entries,
        bound_3_1: None,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExternalEntry {
    pub field: AbelianField,
    pub compositum: AbelianField,
    pub gamma: FactoredReal,
    pub meet: AbelianField,
    pub gamma_meet: FactoredReal,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExternalReport {
    pub base: AbelianField,
    pub field: AbelianField,
    pub gamma_prime: FactoredReal,
    pub entries: Vec<ExternalEntry>,
    pub failures: Vec<String>,
}

/// For each sampled `F ⊇ K` checks `γ_M(F) ≤ γ_M(M ∩ F) ≤ γ'(M/K)`.
pub fn gamma_external_sample(
    m: &AbelianField,
    k: &AbelianField,
    sample: &[AbelianField],
) -> Result<ExternalReport> {
    if let Some(bad) = sample.iter().find(|f| !f.contains(k)) {
        return Err(Error::NotSubfield(format!("{k} is not contained in {bad}")));
    }
    let sup = gamma_prime(m, k)?.sup_value;
    let dm = abelian_disc(m);
    let entries: Vec<ExternalEntry> = sample
        .par_iter()
        .map(|f| {
            let mf = join(m, f);
            let gamma = gamma_m_f(
                &dm,
                &abelian_disc(f),
                &abelian_disc(&mf),
                mf.degree(),
                f.degree(),
            )?;
            let e = meet(m, f);
            let gamma_meet = gamma_m_f(&dm, &abelian_disc(&e), &dm, m.degree(), e.degree())?;
            let holds = gamma <= gamma_meet && gamma_meet <= sup;
            Ok(ExternalEntry {
                field: f.clone(),
                compositum: mf,
                gamma,
                meet: e,
                gamma_meet,
                holds,
            })
        })
        .collect::<Result<_>>()?;
    let failures = entries
        .iter()
        .filter(|e| !e.holds)
        .map(|e| {
            format!(
                "γ_M({}) = {} exceeds γ_M({}) = {} or γ' = {sup}",
                e.field, e.gamma, e.meet, e.gamma_meet
            )
        })
        .collect();
    Ok(ExternalReport {
        base: k.clone(),
        field: m.clone(),
        gamma_prime: sup,
        entries,
        failures,
    })
}

/// Quadratic fields `Q(√d)` with squarefree `|d| ≤ 30` and the cyclic fields
/// of degree 3 and 5 with prime conductor below 100, minus those inside `m`.
pub fn default_external_sample(m: &AbelianField) -> Vec<AbelianField> {
    let mut out = Vec::new();
    for d in -30i64..=30 {
        if let Ok(f) = AbelianField::quadratic(d) {
            out.push(f);
        }
    }
    for p in [3u64, 5] {
        for q in (p + 1..100).filter(|&q| q % p == 1 && is_prime_u64(q)) {
            out.push(AbelianField::cyclic_subfield(q, p).expect("q = 1 mod p"));
        }
    }
    out.retain(|f| !m.contains(f));
    out
}

/// `max_i |Δ_{L_i}|^(1/p_i^2)` for cyclic fields of distinct prime degrees
/// with pairwise coprime discriminants.
pub fn prop_3_1_bound(fields: &[AbelianField]) -> Result<FactoredReal> {
    let mut discs = Vec::with_capacity(fields.len());
    for (i, f) in fields.iter().enumerate() {
        let p = f.degree();
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{f} has non-prime degree {p}")));
        }
        if fields[..i].iter().any(|g| g.degree() == p) {
            return Err(Error::InvalidInput(format!("degree {p} occurs twice")));
        }
        let d = abelian_disc(f);
        if let Some(prev) = discs.iter().find(|(_, e): &&(u64, FactoredReal)| {
            e.factors().keys().any(|q| d.factors().contains_key(q))
        }) {
            return Err(Error::InvalidInput(format!(
                "discriminants of the degree {} and degree {p} fields are not coprime",
                prev.0
            )));
        }
        discs.push((p, d));
    }
    discs
        .iter()
        .map(|(p, d)| d.pow(&ratio(1, p * p)))
        .max()
        .ok_or_else(|| Error::InvalidInput("empty field list".into()))
}
