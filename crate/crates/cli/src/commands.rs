//! One function per subcommand, each producing an [`Output`].

use gammalab_core::abelian::{abelian_disc, generator_polynomial, join, AbelianField};
use gammalab_core::arith::{factor_integer, FactoredReal};
use gammalab_core::gamma::{
    build_cf_tower, default_external_sample, gamma_external_sample, gamma_m_f, gamma_prime_capped,
    liminf_scan_capped,
};
use gammalab_core::heights::{
    enumerate_bounded_capped, min_height_probe_with, HeightBound, Identification,
};
use gammalab_core::numfield::compositum_capped;
use gammalab_core::Error;
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::cache::{compute_entry, field_entry, Cache};
use crate::config::RunConfig;
use crate::descriptor::Descriptor;
use crate::report::Output;
use crate::verify::{run_suite, Suite};
use crate::RunError;

const DIGITS: usize = 8;

fn approx(x: &FactoredReal) -> String {
    format!("{x} ≈ {}", x.decimal(DIGITS))
}

fn descriptor(s: &str) -> Result<Descriptor, RunError> {
    Ok(s.parse::<Descriptor>()?)
}

fn abelian(s: &str) -> Result<AbelianField, RunError> {
    match descriptor(s)? {
        Descriptor::Abelian(a) => Ok(a),
        Descriptor::Poly(_) => {
            Err(Error::InvalidInput(format!("{s:?} must be an abelian descriptor")).into())
        }
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report data serializes")
}

pub fn field_info(
    cfg: &RunConfig,
    cache: Option<&mut Cache>,
    desc: &str,
) -> Result<Output, RunError> {
    let d = descriptor(desc)?;
    let mut out = Output {
        paper_refs: vec![
            "field data: maximal order discriminant",
            "abelian fields: conductor-discriminant formula",
        ],
        ..Default::default()
    };
    let mut results = serde_json::Map::new();
    results.insert("descriptor".into(), json!(d.to_string()));
    out.text.push(format!("field      {d}"));
    let within_cap = match &d {
        Descriptor::Abelian(a) => {
            let disc = abelian_disc(a);
            results.insert("conductor".into(), json!(a.conductor()));
            results.insert("degree".into(), json!(a.degree()));
            results.insert("abs_disc".into(), to_value(&disc));
            out.text.push(format!("conductor  {}", a.conductor()));
            out.text.push(format!("degree     {}", a.degree()));
            out.text.push(format!("|Δ|        {disc}"));
            a.degree() <= cfg.degree_cap as u64
        }
        Descriptor::Poly(f) => {
            results.insert("min_poly".into(), json!(f.to_string()));
            results.insert("degree".into(), json!(f.deg()));
            out.text.push(format!("min poly   {f}"));
            out.text.push(format!("degree     {}", f.deg()));
            true
        }
    };
    if !within_cap {
        results.insert("round2".into(), Value::Null);
        out.text.push(format!(
            "round 2    skipped above degree cap {}",
            cfg.degree_cap
        ));
        out.results = Value::Object(results);
        return Ok(out);
    }
    let entry = field_entry(cache, &d, cfg.degree_cap)?;
    let magnitude: BigUint = entry
        .discriminant
        .trim_start_matches('-')
        .parse()
        .expect("cached integer");
    let factored = factor_integer(&magnitude);
    if let Descriptor::Abelian(a) = &d {
        let poly = generator_polynomial(a)?;
        results.insert("min_poly".into(), json!(poly.to_string()));
        out.text.push(format!("min poly   {poly}"));
        if abelian_disc(a) != factored {
            out.failures.push(format!(
                "conductor-discriminant value {} differs from Round 2 value {}",
                abelian_disc(a),
                factored
            ));
        }
    } else {
        results.insert("abs_disc".into(), to_value(&factored));
        out.text.push(format!("|Δ|        {factored}"));
    }
    out.text.push(format!("Δ          {}", entry.discriminant));
    out.text
        .push(format!("basis den. {}", entry.basis_denominators.join(",")));
    results.insert("round2".into(), to_value(&entry));
    out.results = Value::Object(results);
    Ok(out)
}

pub fn gamma(cfg: &RunConfig, m: &str, f: &str) -> Result<Output, RunError> {
    let (dm, df) = (descriptor(m)?, descriptor(f)?);
    let (g, mf, deg_mf, deg_f, route) = match (dm.abelian(), df.abelian()) {
        (Some(a), Some(b)) => {
            let j = join(a, b);
            let g = gamma_m_f(
                &abelian_disc(a),
                &abelian_disc(b),
                &abelian_disc(&j),
                j.degree(),
                b.degree(),
            )?;
            (g, j.to_string(), j.degree(), b.degree(), "abelian")
        }
        _ => {
            let nm = dm.number_field(cfg.degree_cap)?;
            let nf = df.number_field(cfg.degree_cap)?;
            let big = compositum_capped(&nm, &nf, cfg.degree_cap)?;
            let fr = |x: &gammalab_core::NumberField| factor_integer(&x.disc_magnitude());
            let g = gamma_m_f(
                &fr(&nm),
                &fr(&nf),
                &fr(&big),
                big.degree() as u64,
                nf.degree() as u64,
            )?;
            (
                g,
                big.min_poly().to_string(),
                big.degree() as u64,
                nf.degree() as u64,
                "round2",
            )
        }
    };
    Ok(Output {
        results: json!({
            "M": dm.to_string(),
            "F": df.to_string(),
            "MF": mf,
            "degree_MF": deg_mf,
            "degree_F": deg_f,
            "route": route,
            "gamma": g,
        }),
        paper_refs: vec!["gamma_M(F): discriminant growth of MF over F"],
        text: vec![approx(&g)],
        ..Default::default()
    })
}

pub fn gamma_prime(cfg: &RunConfig, m: &str, k: &str, external: bool) -> Result<Output, RunError> {
    let (m, k) = (abelian(m)?, abelian(k)?);
    let report = gamma_prime_capped(&m, &k, cfg.subgroup_cap)?;
    let mut out = Output {
        paper_refs: vec!["gamma'(M/K): supremum over intermediate fields"],
        ..Default::default()
    };
    out.text.push(format!(
        "{:<28} {:>6}  {:<24} gamma",
        "F", "degree", "|Δ_F|"
    ));
    for e in &report.entries {
        out.text.push(format!(
            "{:<28} {:>6}  {:<24} {}",
            e.field.to_string(),
            e.degree,
            e.abs_disc.to_string(),
            approx(&e.gamma)
        ));
    }
    out.text.push(format!(
        "sup = {} at F = {}",
        approx(&report.sup_value),
        report.sup_witness
    ));
    let mut results = json!({ "report": report });
    if external {
        out.paper_refs
            .push("gamma(M/K) >= gamma'(M/K): external fields reduce to M ∩ F");
        let mut sample: Vec<AbelianField> = default_external_sample(&m)
            .iter()
            .map(|f| join(f, &k))
            .filter(|f| !m.contains(f))
            .collect();
        sample.sort();
        sample.dedup();
        let ext = gamma_external_sample(&m, &k, &sample)?;
        out.text.push(format!(
            "external sample: {} fields, {} violations",
            ext.entries.len(),
            ext.failures.len()
        ));
        out.failures.extend(ext.failures.iter().cloned());
        results["external"] = to_value(&ext);
    }
    out.results = results;
    Ok(out)
}

pub fn tower_build(stages: usize) -> Result<Output, RunError> {
    let tower = build_cf_tower(stages)?;
    let three = FactoredReal::from_u64(3);
    let mut out = Output {
        paper_refs: vec!["CF tower: cyclic stages of prime degree with stage value at most 3"],
        ..Default::default()
    };
    let header: Vec<String> = ["p", "q", "abs_disc", "stage_value", "approx", "at_most_3"]
        .map(String::from)
        .into();
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    out.text.push(format!(
        "{:>4} {:>6} {:>28}  {:<16} verdict",
        "p", "q", "|Δ|", "stage value"
    ));
    for s in &tower.stages {
        let disc = BigUint::from(s.q).pow((s.p - 1) as u32);
        let ok = s.stage_value <= three;
        if s.q % s.p != 1 {
            out.failures
                .push(format!("q = {} is not 1 mod {}", s.q, s.p));
        }
        if !ok {
            out.failures
                .push(format!("stage value {} exceeds 3", s.stage_value));
        }
        let verdict = if ok { "≤ 3: yes" } else { "≤ 3: no" };
        out.text.push(format!(
            "{:>4} {:>6} {:>28}  {:<16} {verdict}",
            s.p,
            s.q,
            disc.to_string(),
            s.stage_value.to_string()
        ));
        rows.push(vec![
            s.p.to_string(),
            s.q.to_string(),
            disc.to_string(),
            s.stage_value.to_string(),
            s.stage_value.decimal(DIGITS),
            ok.to_string(),
        ]);
        json_rows.push(json!({
            "p": s.p,
            "q": s.q,
            "field": s.field,
            "abs_disc": disc.to_string(),
            "stage_value": s.stage_value,
            "at_most_3": ok,
        }));
    }
    out.results = json!({ "stages": json_rows });
    out.table = Some((header, rows));
    Ok(out)
}

pub fn tower_scan(
    cfg: &RunConfig,
    stages: usize,
    base: &str,
    full: bool,
) -> Result<Output, RunError> {
    let k = abelian(base)?;
    let tower = build_cf_tower(stages)?;
    let report = liminf_scan_capped(&tower, &k, cfg.subset_cap)?;
    let all_agree = report.scanned.iter().all(|s| s.closed_form_agrees);
    let mut out = Output {
        paper_refs: vec![
            "gamma'(M/K) over sub-composita of the CF tower",
            "closed form |Δ_M'|^(1/[M':Q]^2) for each intermediate field",
        ],
        failures: report.failures.clone(),
        ..Default::default()
    };
    let header: Vec<String> = [
        "stages",
        "gamma_prime",
        "approx",
        "witness",
        "bound",
        "closed_form_agrees",
    ]
    .map(String::from)
    .into();
    let rows: Vec<Vec<String>> = report
        .scanned
        .iter()
        .map(|s| {
            vec![
                s.stages
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                s.gamma_prime.to_string(),
                s.gamma_prime.decimal(DIGITS),
                s.witness.to_string(),
                s.bound_3_1.to_string(),
                s.closed_form_agrees.to_string(),
            ]
        })
        .collect();
    out.text.push(format!(
        "base {}; {} composita scanned",
        report.base,
        report.scanned.len()
    ));
    out.text
        .push(format!("max gamma' = {}", approx(&report.max_value)));
    out.text.push(format!(
        "max-of-stages bound = {}",
        approx(&report.bound_3_1)
    ));
    out.text.push(format!(
        "closed form agrees everywhere: {}",
        if all_agree { "yes" } else { "no" }
    ));
    out.text.push(format!(
        "≤ 3: {}",
        if report.at_most_three { "yes" } else { "no" }
    ));
    out.results = if full {
        to_value(&report)
    } else {
        let summary: Vec<Value> = report
            .scanned
            .iter()
            .map(|s| {
                json!({
                    "stages": s.stages,
                    "gamma_prime": s.gamma_prime,
                    "witness": s.witness,
                    "bound": s.bound_3_1,
                    "closed_form_agrees": s.closed_form_agrees,
                })
            })
            .collect();
        json!({
            "base": report.base,
            "scanned_count": report.scanned.len(),
            "max_value": report.max_value,
            "bound": report.bound_3_1,
            "at_most_three": report.at_most_three,
            "closed_form_agrees": all_agree,
            "scanned": summary,
        })
    };
    out.table = Some((header, rows));
    Ok(out)
}

pub fn verify(cfg: &RunConfig, suite: Suite, trials: usize) -> Result<Output, RunError> {
    let r = run_suite(suite, trials, cfg.seed, cfg.degree_cap);
    let tag = match suite {
        Suite::Lemma21 => "relative discriminant of a compositum divides the product",
        Suite::Prop22 => "gamma_M(F) <= gamma_M(M ∩ F) <= gamma'(M/Q)",
        Suite::Prop31 => "gamma' over stage composita is at most the largest stage value",
        Suite::Cor23 => "gamma(M/K) = gamma'(M/K) for abelian M/K",
    };
    let mut out = Output {
        paper_refs: vec![tag],
        text: vec![format!(
            "{}: {}/{} passed (seed {})",
            r.suite, r.passed, r.trials, r.seed
        )],
        ..Default::default()
    };
    if let Some(c) = &r.first_counterexample {
        out.failures.push(format!(
            "{} trial(s) failed; first counterexample {c}",
            r.failed
        ));
    }
    out.results = to_value(&r);
    Ok(out)
}

fn parse_bound(s: &str) -> Result<HeightBound, RunError> {
    s.parse::<HeightBound>()
        .map_err(|e| RunError::Usage(format!("bad height bound {s:?}: {e}")))
}

const HEIGHT_COLUMNS: [&str; 6] = [
    "min_poly",
    "degree",
    "height_lo",
    "height_hi",
    "field_id",
    "screen_N",
];

fn height_row(
    f: &impl ToString,
    d: usize,
    lo: f64,
    hi: f64,
    field: &str,
    screen: &str,
) -> Vec<String> {
    vec![
        f.to_string(),
        d.to_string(),
        lo.to_string(),
        hi.to_string(),
        field.into(),
        screen.into(),
    ]
}

pub fn heights_enumerate(cfg: &RunConfig, degree: usize, bound: &str) -> Result<Output, RunError> {
    let bound = parse_bound(bound)?;
    let census = enumerate_bounded_capped(degree, &bound, cfg.work_cap)?;
    let mut out = Output {
        paper_refs: vec!["Northcott: finitely many algebraic numbers of bounded degree and height"],
        ..Default::default()
    };
    for a in census
        .numbers
        .iter()
        .filter(|a| a.height.width() > cfg.tolerance)
    {
        out.failures.push(format!(
            "height of {} is only known to width {:e}",
            a.min_poly,
            a.height.width()
        ));
    }
    let rows: Vec<Vec<String>> = census
        .numbers
        .iter()
        .map(|a| height_row(&a.min_poly, a.degree, a.height.lo, a.height.hi, "", ""))
        .collect();
    out.text.push(format!(
        "degree {degree}, bound {bound}: {} polynomials, {} algebraic numbers, {} ambiguous",
        census.polynomial_count,
        census.root_count,
        census.ambiguous.len()
    ));
    for a in &census.numbers {
        out.text.push(format!(
            "{:<40} h ∈ [{:.12}, {:.12}]",
            a.min_poly.to_string(),
            a.height.lo,
            a.height.hi
        ));
    }
    out.results = to_value(&census);
    out.table = Some((HEIGHT_COLUMNS.map(String::from).into(), rows));
    Ok(out)
}

pub fn heights_probe(cfg: &RunConfig, field: &str, bound: &str) -> Result<Output, RunError> {
    let l = abelian(field)?;
    let bound = parse_bound(bound)?;
    let r = min_height_probe_with(&l, &bound, cfg.screen_size, cfg.work_cap)?;
    let mut out = Output {
        paper_refs: vec!["minimal height of L \\ Q for a stage field L"],
        ..Default::default()
    };
    let field_id = l.to_string();
    let rows = r
        .candidates
        .iter()
        .filter_map(|c| match c.identification {
            Identification::Identified { screen_size } => Some(height_row(
                &c.number.min_poly,
                c.number.degree,
                c.number.height.lo,
                c.number.height.hi,
                &field_id,
                &screen_size.to_string(),
            )),
            _ => None,
        })
        .collect();
    match &r.min_height {
        Some(h) => out.text.push(format!(
            "{field_id}: min height in [{:.12}, {:.12}] attained by {}",
            h.lo,
            h.hi,
            r.witnesses
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        None => out
            .text
            .push(format!("{field_id}: no element of L \\ Q below {bound}")),
    }
    let inconclusive = r
        .candidates
        .iter()
        .filter(|c| matches!(c.identification, Identification::Inconclusive(_)))
        .count();
    out.text.push(format!(
        "{} candidates screened, {} inconclusive, {} ambiguous at the bound",
        r.candidates.len(),
        inconclusive,
        r.ambiguous.len()
    ));
    out.results = to_value(&r);
    out.table = Some((HEIGHT_COLUMNS.map(String::from).into(), rows));
    Ok(out)
}

/// Descriptors written to the cache by `cache audit --populate`.
pub fn audit_corpus() -> Vec<String> {
    let mut v: Vec<String> = [
        "sqrt2",
        "sqrt-3",
        "sqrt5",
        "i",
        "zeta5",
        "zeta7",
        "zeta8",
        "zeta12",
        "cyclic(7,3)",
        "cyclic(11,5)",
    ]
    .map(String::from)
    .into();
    v.extend(
        [
            "poly=-5,0,1",
            "poly=-1,-1,0,1",
            "poly=-2,0,0,1",
            "poly=1,-1,0,0,1",
        ]
        .map(String::from),
    );
    v
}

pub fn cache_audit(
    cfg: &RunConfig,
    cache: Option<&mut Cache>,
    populate: bool,
) -> Result<Output, RunError> {
    let cache = cache.ok_or_else(|| {
        RunError::Usage("cache audit needs a cache directory (--cache-dir)".into())
    })?;
    if populate {
        for d in audit_corpus() {
            field_entry(Some(&mut *cache), &descriptor(&d)?, cfg.degree_cap)?;
        }
    }
    let entries = cache.entries()?;
    let mut out = Output {
        paper_refs: vec!["cache audit: stored Round 2 data against recomputation"],
        ..Default::default()
    };
    let mut rows = Vec::new();
    for e in &entries {
        let fresh = compute_entry(&descriptor(&e.key)?, cfg.degree_cap)?;
        let ok = &fresh == e;
        if !ok {
            out.failures
                .push(format!("cache entry {} differs from recomputation", e.key));
        }
        rows.push(json!({"key": e.key, "matches": ok}));
    }
    out.text.push(format!(
        "{} entries audited, {} mismatches",
        entries.len(),
        out.failures.len()
    ));
    out.results = json!({ "entries": rows, "mismatches": out.failures.len() });
    Ok(out)
}
