//! The ten acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p gammalab --test acceptance -- --nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use gammalab::verify::{run_suite, Suite};
use gammalab_core::abelian::{abelian_disc, generator_polynomial, join, AbelianField};
use gammalab_core::arith::FactoredReal;
use gammalab_core::gamma::{build_cf_tower, gamma_m_f, gamma_prime, liminf_scan};
use gammalab_core::heights::{
    enumerate_bounded, power_min_poly, reciprocal_min_poly, weil_height, Height, HeightBound,
};
use gammalab_core::numfield::build_field;
use gammalab_core::poly::{is_irreducible, IntPoly};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gammalab"))
        .args(args)
        .env_remove("GAMMALAB_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), stdout))
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut full = vec!["--deterministic", "--format", "json"];
    full.extend_from_slice(args);
    let (code, out) = cli(&full)?;
    ensure(code == 0, format!("{args:?} exited with {code}"))?;
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn pp(p: u64, a: i64, b: i64) -> FactoredReal {
    FactoredReal::prime_power(p, BigRational::new(a.into(), b.into()))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let built = cli_json(&["tower", "build", "--stages", "8"])?;
    let stages = built["results"]["stages"].as_array().ok_or("no stages")?;
    ensure(stages.len() == 8, "expected 8 stages")?;
    let three = FactoredReal::from_u64(3);
    for s in stages {
        let (p, q) = (s["p"].as_u64().ok_or("p")?, s["q"].as_u64().ok_or("q")?);
        ensure(q % p == 1, format!("q = {q} is not 1 mod {p}"))?;
        ensure(
            pp(q, p as i64 - 1, (p * p) as i64) <= three,
            format!("stage ({p},{q}) exceeds 3"),
        )?;
        ensure(s["at_most_3"] == true, "reported verdict is not yes")?;
    }
    let scan = cli_json(&["tower", "scan", "--stages", "8", "--base", "Q"])?;
    let r = &scan["results"];
    ensure(
        r["scanned_count"] == 255,
        format!("scanned {}", r["scanned_count"]),
    )?;
    ensure(r["at_most_three"] == true, "max γ' exceeds 3")?;
    ensure(
        scan["failures"].as_array().is_some_and(|f| f.is_empty()),
        "scan reported failures",
    )?;
    ensure(
        start.elapsed() < Duration::from_secs(60),
        format!("took {:?}", start.elapsed()),
    )
}

fn criterion_2() -> Check {
    let tower = build_cf_tower(8).map_err(|e| e.to_string())?;
    let scan = liminf_scan(&tower, &AbelianField::rationals()).map_err(|e| e.to_string())?;
    ensure(scan.scanned.len() == 255, "expected 255 composita")?;
    let mut pairs = 0;
    for s in &scan.scanned {
        ensure(
            s.closed_form_agrees,
            format!("engine disagreement at {:?}", s.stages),
        )?;
        for e in &s.report.entries {
            // M' collects the stages of M not contained in F
            let rest: Vec<_> = tower
                .stages
                .iter()
                .filter(|st| s.stages.contains(&st.p) && !e.field.contains(&st.field))
                .collect();
            let deg: u64 = rest.iter().map(|st| st.p).product();
            let disc = FactoredReal::from_pairs(rest.iter().map(|st| {
                (
                    BigUint::from(st.q),
                    BigRational::from_integer(BigInt::from((st.p - 1) * (deg / st.p))),
                )
            }));
            let expected = disc.pow(&BigRational::new(1.into(), BigInt::from(deg * deg)));
            ensure(
                e.gamma == expected,
                format!(
                    "γ_M({}) = {} but closed form gives {expected}",
                    e.field, e.gamma
                ),
            )?;
            pairs += 1;
        }
    }
    ensure(pairs > 255, "no intermediate fields compared")
}

fn criterion_3() -> Check {
    let q = |d| AbelianField::quadratic(d).unwrap();
    let m = join(&q(2), &q(3));
    let r = gamma_prime(&m, &AbelianField::rationals()).map_err(|e| e.to_string())?;
    ensure(
        r.sup_value == &pp(2, 1, 2) * &pp(3, 1, 8),
        format!("γ' = {}", r.sup_value),
    )?;
    ensure(r.sup_witness.is_rational(), "witness is not Q")?;
    let g = gamma_m_f(
        &abelian_disc(&q(2)),
        &abelian_disc(&q(3)),
        &abelian_disc(&m),
        4,
        2,
    )
    .map_err(|e| e.to_string())?;
    ensure(g == pp(2, 1, 2), format!("γ_Q(√2)(Q(√3)) = {g}"))?;
    let d = abelian_disc(&m);
    let g = gamma_m_f(&d, &d, &d, 4, 4).map_err(|e| e.to_string())?;
    ensure(g.is_one(), "γ_M(M) is not 1")?;
    let (code, out) = cli(&[
        "--format",
        "text",
        "--deterministic",
        "gamma",
        "--M",
        "sqrt2",
        "--F",
        "sqrt3",
    ])?;
    ensure(
        code == 0 && out == "2^(1/2) ≈ 1.41421356\n",
        format!("cli printed {out:?}"),
    )
}

fn suite_check(suite: Suite, seed: u64, limit: Duration) -> Check {
    let start = Instant::now();
    let r = run_suite(suite, 200, seed, 24);
    ensure(
        r.passed == 200,
        format!(
            "{}: {}/200, first counterexample {:?}",
            r.suite, r.passed, r.first_counterexample
        ),
    )?;
    ensure(
        start.elapsed() < limit,
        format!("took {:?}", start.elapsed()),
    )
}

fn criterion_4() -> Check {
    suite_check(Suite::Lemma21, 1, Duration::from_secs(120))
}

fn criterion_5() -> Check {
    suite_check(Suite::Prop22, 1, Duration::from_secs(300))?;
    suite_check(Suite::Cor23, 1, Duration::from_secs(300))
}

fn criterion_6() -> Check {
    let q = |d| AbelianField::quadratic(d).unwrap();
    let cyc = |q, p| AbelianField::cyclic_subfield(q, p).unwrap();
    let zeta = |m| AbelianField::cyclotomic(m).unwrap();
    let mut fields = vec![cyc(11, 5)];
    fields.extend([-1, 2, -2, 3, -3, 5, -7, 6, 13, -15, 17, 21].map(q));
    fields.extend([
        cyc(7, 3),
        AbelianField::from_subgroup(9, &[1, 8]).unwrap(),
        cyc(13, 3),
        cyc(19, 3),
        cyc(31, 5),
        AbelianField::from_subgroup(13, &[1, 5, 8, 12]).unwrap(),
        cyc(29, 7),
    ]);
    fields.extend([
        zeta(5),
        zeta(7),
        zeta(8),
        zeta(9),
        zeta(12),
        zeta(15),
        zeta(13),
    ]);
    fields.extend([
        join(&q(2), &q(3)),
        join(&q(-1), &q(5)),
        join(&cyc(7, 3), &q(-3)),
    ]);
    ensure(fields.len() == 30, format!("{} fields", fields.len()))?;
    ensure(
        abelian_disc(&fields[0]) == FactoredReal::from_u64(14641),
        "cyclic(11,5) discriminant",
    )?;
    for f in &fields {
        ensure(f.degree() <= 12, format!("{f} has degree {}", f.degree()))?;
        let nf = generator_polynomial(f)
            .and_then(|g| build_field(&g))
            .map_err(|e| format!("{f}: {e}"))?;
        let round2 = FactoredReal::from_integer(&nf.disc_magnitude());
        ensure(
            abelian_disc(f) == round2,
            format!("{f}: {} vs {round2}", abelian_disc(f)),
        )?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let f = build_field(&IntPoly::from_i64s(&[-5, 0, 1])).map_err(|e| e.to_string())?;
    ensure(
        *f.abs_disc() == BigInt::from(5) && *f.index() == BigUint::from(2u32),
        "x^2 - 5",
    )?;
    let f = build_field(&IntPoly::from_i64s(&[-1, -1, 0, 1])).map_err(|e| e.to_string())?;
    ensure(
        *f.abs_disc() == BigInt::from(-23) && *f.index() == BigUint::from(1u32),
        "x^3 - x - 1",
    )
}

/// Height of a root of `a x^2 + b x + c` from the quadratic formula.
fn quadratic_height(a: i64, b: i64, c: i64) -> f64 {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    let disc = b * b - 4.0 * a * c;
    let moduli = if disc >= 0.0 {
        let s = disc.sqrt();
        [((-b + s) / (2.0 * a)).abs(), ((-b - s) / (2.0 * a)).abs()]
    } else {
        let m = (c / a).abs().sqrt();
        [m, m]
    };
    (a.ln() + moduli.iter().map(|m| m.max(1.0).ln()).sum::<f64>()) / 2.0
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Irreducible quadratics of height below `bound`, searched over twice the
/// coefficient box the census uses.
fn quadratic_oracle(bound: f64) -> Vec<IntPoly> {
    let e = (2.0 * bound).exp().ceil() as i64;
    let mut out = Vec::new();
    for a in 1..=2 * e {
        for b in -4 * e..=4 * e {
            for c in -2 * e..=2 * e {
                let disc = b * b - 4 * a * c;
                let root = (disc.max(0) as f64).sqrt().round() as i64;
                if c == 0 || gcd(gcd(a, b), c) != 1 || root * root == disc {
                    continue;
                }
                if quadratic_height(a, b, c) < bound {
                    out.push(IntPoly::from_i64s(&[c, b, a]));
                }
            }
        }
    }
    out.sort_by_key(|f| f.to_string());
    out
}

fn criterion_8() -> Check {
    let count = |d, b: HeightBound| {
        enumerate_bounded(d, &b)
            .map(|c| c.root_count)
            .map_err(|e| e.to_string())
    };
    ensure(count(1, HeightBound::log(2))? == 3, "degree 1, log 2")?;
    ensure(count(1, HeightBound::log(3))? == 7, "degree 1, log 3")?;
    let census = enumerate_bounded(2, &HeightBound::Value(0.2)).map_err(|e| e.to_string())?;
    ensure(census.ambiguous.is_empty(), "ambiguous census entries")?;
    ensure(
        census.numbers.iter().all(|a| a.height.width() <= 1e-10),
        "wide enclosure",
    )?;
    let mut got: Vec<IntPoly> = census.numbers.iter().map(|a| a.min_poly.clone()).collect();
    got.sort_by_key(|f| f.to_string());
    ensure(
        got == quadratic_oracle(0.2),
        "census differs from the oracle",
    )?;
    let h = weil_height(&IntPoly::from_i64s(&[-1, -1, 1])).map_err(|e| e.to_string())?;
    ensure(
        h.width() <= 1e-10 && (h.midpoint() - 0.2406059125).abs() < 1e-10,
        format!("golden ratio {h:?}"),
    )
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut corpus = Vec::new();
    while corpus.len() < 100 {
        let d = rng.gen_range(2..=4);
        let mut cs: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        cs.push(rng.gen_range(1..=3));
        let f = IntPoly::from_i64s(&cs);
        if cs[0] != 0 && f.content() == BigInt::from(1) && is_irreducible(&f).unwrap_or(false) {
            corpus.push(f);
        }
    }
    for f in &corpus {
        let h = weil_height(f).map_err(|e| format!("{f}: {e}"))?;
        let inv = reciprocal_min_poly(f).ok_or("no reciprocal")?;
        let hi = weil_height(&inv).map_err(|e| e.to_string())?;
        ensure(h.overlaps(&hi, 1e-8), format!("h(1/α) for {f}"))?;
        let sq = power_min_poly(f, 2).map_err(|e| e.to_string())?;
        let hs = weil_height(&sq).map_err(|e| e.to_string())?;
        let doubled = Height {
            lo: 2.0 * h.lo,
            hi: 2.0 * h.hi,
            mahler: None,
        };
        ensure(hs.overlaps(&doubled, 1e-8), format!("h(α²) for {f}"))?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    let runs: [&[&str]; 7] = [
        &["tower", "build", "--stages", "5"],
        &["tower", "scan", "--stages", "4"],
        &["gamma-prime", "--M", "zeta12", "--external"],
        &[
            "heights",
            "enumerate",
            "--degree",
            "2",
            "--bound",
            "0.3",
            "--format",
            "csv",
        ],
        &[
            "heights",
            "probe",
            "--field",
            "cyclic(7,3)",
            "--bound",
            "0.3",
        ],
        &["verify", "prop22", "--trials", "40", "--seed", "5"],
        &["field", "info", "zeta7", "--format", "text"],
    ];
    for args in runs {
        let mut full = vec!["--deterministic"];
        full.extend_from_slice(args);
        let a = cli(&full)?;
        let b = cli(&full)?;
        ensure(a.0 == 0, format!("{args:?} exited with {}", a.0))?;
        ensure(a == b, format!("{args:?} is not reproducible"))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 10] = [
        (
            "tower of 8 stages and scan of 255 composita, all at most 3",
            criterion_1,
        ),
        (
            "closed form equals direct evaluation on every scanned pair",
            criterion_2,
        ),
        ("worked exact values", criterion_3),
        (
            "relative discriminant divisibility, 200 trials",
            criterion_4,
        ),
        (
            "external fields and abelian bases, 200 trials each",
            criterion_5,
        ),
        (
            "conductor-discriminant equals Round 2 on 30 fields",
            criterion_6,
        ),
        ("Round 2 unit cases", criterion_7),
        ("Northcott census against oracle", criterion_8),
        (
            "height functional equations on 100 polynomials",
            criterion_9,
        ),
        ("deterministic output", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(()) => println!(
                "PASS criterion {:>2}: {name} ({:.1?})",
                i + 1,
                start.elapsed()
            ),
            Err(e) => {
                println!("FAIL criterion {:>2}: {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
