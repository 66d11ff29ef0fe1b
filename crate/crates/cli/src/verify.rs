//! Seeded property suites. Every trial is a statement that must hold, so a
//! single failed trial is a bug in the engines.

use gammalab_core::abelian::{intermediate_fields, join, AbelianField};
use gammalab_core::arith::{is_prime_u64, FactoredReal};
use gammalab_core::gamma::{gamma_external_sample, liminf_scan, prop_3_1_bound, CfTower, Stage};
use gammalab_core::numfield::{self, build_field_capped, check_lemma_2_1};
use gammalab_core::poly::{discriminant, is_irreducible, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemma21,
    Prop22,
    Prop31,
    Cor23,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma21",
            Suite::Prop22 => "prop22",
            Suite::Prop31 => "prop31",
            Suite::Cor23 => "cor23",
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_counterexample: Option<Value>,
}

/// Outcome of one trial: `Err` carries the counterexample dump.
type Trial = Result<(), Value>;

pub fn run_suite(suite: Suite, trials: usize, seed: u64, degree_cap: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcomes: Vec<Trial> = match suite {
        Suite::Lemma21 => {
            let inputs: Vec<_> = (0..trials).map(|_| coprime_pair(&mut rng)).collect();
            inputs
                .par_iter()
                .map(|(f, g)| lemma21_trial(f, g, degree_cap))
                .collect()
        }
        Suite::Prop22 => {
            let pool = abelian_pool();
            let inputs: Vec<_> = (0..trials)
                .map(|_| (pick_abelian(&pool, &mut rng), pick_abelian(&pool, &mut rng)))
                .collect();
            inputs
                .par_iter()
                .map(|(m, f)| external_trial(m, &AbelianField::rationals(), f))
                .collect()
        }
        Suite::Cor23 => {
            let pool = abelian_pool();
            let inputs: Vec<_> = (0..trials)
                .map(|_| {
                    let m = pick_abelian(&pool, &mut rng);
                    let subs =
                        intermediate_fields(&AbelianField::rationals(), &m).expect("small field");
                    let k = subs.choose(&mut rng).expect("Q is a subfield").clone();
                    let f = join(&k, &pick_abelian(&pool, &mut rng));
                    (m, k, f)
                })
                .collect();
            inputs
                .par_iter()
                .map(|(m, k, f)| external_trial(m, k, f))
                .collect()
        }
        Suite::Prop31 => {
            let inputs: Vec<_> = (0..trials).map(|_| random_stages(&mut rng)).collect();
            inputs.par_iter().map(|s| prop31_trial(s)).collect()
        }
    };
    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    SuiteResult {
        suite: suite.name(),
        seed,
        trials,
        passed: trials - failed,
        failed,
        first_counterexample: outcomes.into_iter().find_map(|o| o.err()),
    }
}

fn random_monic_irreducible(rng: &mut ChaCha8Rng) -> IntPoly {
    loop {
        let d = rng.gen_range(2..=4);
        let mut cs: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        cs.push(1);
        let f = IntPoly::from_i64s(&cs);
        if is_irreducible(&f).unwrap_or(false) {
            return f;
        }
    }
}

/// Two monic irreducible polynomials with coprime discriminants.
fn coprime_pair(rng: &mut ChaCha8Rng) -> (IntPoly, IntPoly) {
    loop {
        let f = random_monic_irreducible(rng);
        let g = random_monic_irreducible(rng);
        if discriminant(&f).gcd(&discriminant(&g)).is_one() {
            return (f, g);
        }
    }
}

fn lemma21_trial(f: &IntPoly, g: &IntPoly, cap: usize) -> Trial {
    let dump = |why: String| json!({"L": f.to_string(), "L'": g.to_string(), "reason": why});
    let l = build_field_capped(f, cap).map_err(|e| dump(e.to_string()))?;
    let lp = build_field_capped(g, cap).map_err(|e| dump(e.to_string()))?;
    let r = check_lemma_2_1(&numfield::rationals(), &l, &lp).map_err(|e| dump(e.to_string()))?;
    if r.divides {
        Ok(())
    } else {
        Err(dump(format!("{} does not divide {}", r.lhs, r.rhs)))
    }
}

/// Quadratic, cyclic cubic and quintic, and small cyclotomic fields.
fn abelian_pool() -> Vec<AbelianField> {
    let mut pool: Vec<AbelianField> = (-30i64..=30)
        .filter_map(|d| AbelianField::quadratic(d).ok())
        .collect();
    for p in [3u64, 5] {
        for q in (p + 1..70).filter(|&q| q % p == 1 && is_prime_u64(q)) {
            pool.push(AbelianField::cyclic_subfield(q, p).expect("q = 1 mod p"));
        }
    }
    for m in [3u64, 4, 5, 7, 8, 9, 12, 15] {
        pool.push(AbelianField::cyclotomic(m).expect("m > 0"));
    }
    pool
}

/// A pool field, or the compositum of two of them.
fn pick_abelian(pool: &[AbelianField], rng: &mut ChaCha8Rng) -> AbelianField {
    let a = pool.choose(rng).expect("non-empty pool").clone();
    if rng.gen_bool(0.5) {
        let b = pool.choose(rng).expect("non-empty pool");
        let j = join(&a, b);
        if j.degree() <= 40 {
            return j;
        }
    }
    a
}

fn external_trial(m: &AbelianField, k: &AbelianField, f: &AbelianField) -> Trial {
    let dump = |why: String| json!({"M": m, "K": k, "F": f, "reason": why});
    let r =
        gamma_external_sample(m, k, std::slice::from_ref(f)).map_err(|e| dump(e.to_string()))?;
    match r.failures.first() {
        None => Ok(()),
        Some(why) => Err(dump(why.clone())),
    }
}

/// Stages of distinct prime degree in {2,3,5,7} with distinct prime
/// conductors, so the discriminants are coprime.
fn random_stages(rng: &mut ChaCha8Rng) -> Vec<(u64, u64)> {
    let mut degrees: Vec<u64> = vec![2, 3, 5, 7];
    degrees.shuffle(rng);
    let n = rng.gen_range(1..=3);
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &p in &degrees[..n] {
        let choices: Vec<u64> = (3..200u64)
            .filter(|&q| q % p == 1 && is_prime_u64(q) && out.iter().all(|&(_, r)| r != q))
            .collect();
        out.push((p, *choices.choose(rng).expect("primes = 1 mod p exist")));
    }
    out.sort();
    out
}

fn prop31_trial(stages: &[(u64, u64)]) -> Trial {
    let dump = |why: String| json!({"stages": stages, "reason": why});
    let tower = CfTower {
        stages: stages
            .iter()
            .map(|&(p, q)| Stage {
                p,
                q,
                field: AbelianField::cyclic_subfield(q, p).expect("q = 1 mod p"),
                stage_value: FactoredReal::prime_power(
                    q,
                    BigRational::new(BigInt::from(p - 1), BigInt::from(p * p)),
                ),
            })
            .collect(),
    };
    let report =
        liminf_scan(&tower, &AbelianField::rationals()).map_err(|e| dump(e.to_string()))?;
    if let Some(f) = report.failures.first() {
        return Err(dump(f.clone()));
    }
    let fields: Vec<AbelianField> = tower.stages.iter().map(|s| s.field.clone()).collect();
    let bound = prop_3_1_bound(&fields).map_err(|e| dump(e.to_string()))?;
    if bound != report.bound_3_1 {
        return Err(dump(format!(
            "bound {} differs from the scan's {}",
            bound, report.bound_3_1
        )));
    }
    if report.scanned.iter().any(|s| s.gamma_prime > bound)
        || report.scanned.len() + 1 != 1 << stages.len()
    {
        return Err(dump("γ' exceeds the bound or composita are missing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_repeat() {
        for suite in [Suite::Lemma21, Suite::Prop22, Suite::Prop31, Suite::Cor23] {
            let a = run_suite(suite, 6, 1, 24);
            assert_eq!(a.passed, 6, "{a:?}");
            assert_eq!(a, run_suite(suite, 6, 1, 24));
        }
    }

    #[test]
    fn stages_are_coprime() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_stages(&mut rng);
            let mut qs: Vec<u64> = s.iter().map(|x| x.1).collect();
            qs.sort();
            qs.dedup();
            assert_eq!(qs.len(), s.len());
            assert!(s.iter().all(|&(p, q)| q % p == 1));
        }
    }
}
