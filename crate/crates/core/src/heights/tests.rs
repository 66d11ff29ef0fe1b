use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(cs: &[i64]) -> IntPoly {
    IntPoly::from_i64s(cs)
}

fn polys(c: &Census) -> Vec<IntPoly> {
    c.numbers.iter().map(|a| a.min_poly.clone()).collect()
}

#[test]
fn exact_heights() {
    let h = weil_height(&p(&[-2, 1])).unwrap();
    assert_eq!(h.mahler, Some(BigUint::from(2u32)));
    assert!((h.midpoint() - 2f64.ln()).abs() < 1e-15);
    let h = weil_height(&p(&[1, 1, 1])).unwrap();
    assert_eq!((h.lo, h.hi), (0.0, 0.0));
    let h = weil_height(&p(&[-3, 2])).unwrap();
    assert_eq!(h.mahler, Some(BigUint::from(3u32)));
    assert!(weil_height(&p(&[-1, 0, 1])).is_err());
    assert!(weil_height(&p(&[5])).is_err());
}

#[test]
fn golden_ratio() {
    let h = weil_height(&p(&[-1, -1, 1])).unwrap();
    assert!(h.width() <= 1e-10);
    let oracle = 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!(h.lo <= oracle + 1e-15 && oracle - 1e-15 <= h.hi);
    assert!((h.midpoint() - 0.2406059125).abs() < 1e-10);
}

#[test]
fn all_roots_outside_give_integer_mahler_measure() {
    // roots ±√2
    let h = weil_height(&p(&[-2, 0, 1])).unwrap();
    assert_eq!(h.mahler, Some(BigUint::from(2u32)));
    // 2x^2 - 1 has roots ±1/√2 inside the circle
    let h = weil_height(&p(&[-1, 0, 2])).unwrap();
    assert_eq!(h.mahler, Some(BigUint::from(2u32)));
}

#[test]
fn census_degree_one() {
    let c = enumerate_bounded(1, &HeightBound::log(2)).unwrap();
    assert_eq!(polys(&c), vec![p(&[-1, 1]), p(&[0, 1]), p(&[1, 1])]);
    assert!(c.ambiguous.is_empty());
    let c = enumerate_bounded(1, &HeightBound::log(3)).unwrap();
    assert_eq!(c.polynomial_count, 7);
    assert_eq!(c.root_count, 7);
    for q in [p(&[-2, 1]), p(&[2, 1]), p(&[-1, 2]), p(&[1, 2])] {
        assert!(polys(&c).contains(&q), "{q}");
    }
    let c = enumerate_bounded(1, &"0.6931".parse().unwrap()).unwrap();
    assert_eq!(c.polynomial_count, 3);
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

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = (n as f64).sqrt().round() as i64;
        r * r == n
    }
}

/// Brute force over twice the coefficient box with closed-form heights.
fn quadratic_oracle(bound: f64) -> Vec<IntPoly> {
    let e = (2.0 * bound).exp().ceil() as i64;
    let (ba, bb, bc) = (2 * e, 4 * e, 2 * e);
    let mut out = Vec::new();
    for a in 1..=ba {
        for b in -bb..=bb {
            for c in -bc..=bc {
                if c == 0
                    || num_integer::gcd(num_integer::gcd(a, b), c) != 1
                    || is_square(b * b - 4 * a * c)
                {
                    continue;
                }
                let h = quadratic_height(a, b, c);
                assert!((h - bound).abs() > 1e-9, "oracle boundary case");
                if h < bound {
                    out.push(p(&[c, b, a]));
                }
            }
        }
    }
    out.sort_by(canonical_cmp);
    out
}

#[test]
fn census_degree_two_matches_oracle() {
    let c = enumerate_bounded(2, &HeightBound::Value(0.2)).unwrap();
    assert!(c.ambiguous.is_empty());
    assert_eq!(polys(&c), quadratic_oracle(0.2));
    for q in [p(&[1, 1, 1]), p(&[1, 0, 1]), p(&[1, -1, 1])] {
        assert!(polys(&c).contains(&q));
    }
    assert!(!polys(&c).contains(&p(&[-1, -1, 1])));
    assert!(c.numbers.iter().all(|a| a.height.width() <= 1e-10));
    let c = enumerate_bounded(2, &HeightBound::Value(0.3)).unwrap();
    assert_eq!(polys(&c), quadratic_oracle(0.3));
}

#[test]
fn census_cap() {
    assert!(matches!(
        enumerate_bounded_capped(3, &HeightBound::Value(1.0), 1000),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn bound_parsing() {
    assert_eq!(
        "log(2)".parse::<HeightBound>().unwrap(),
        HeightBound::log(2)
    );
    assert_eq!(
        "log:3/2".parse::<HeightBound>().unwrap().to_string(),
        "log(3/2)"
    );
    assert!("log(1)".parse::<HeightBound>().is_err());
    assert!("-0.5".parse::<HeightBound>().is_err());
}

#[test]
fn probes() {
    let l = AbelianField::cyclic_subfield(3, 2).unwrap();
    let r = min_height_probe(&l, &HeightBound::Value(0.4)).unwrap();
    assert_eq!(r.min_height.as_ref().unwrap().hi, 0.0);
    assert!(r.witnesses.contains(&p(&[1, 1, 1])));
    assert!(r.witnesses.contains(&p(&[1, -1, 1])));

    let l = AbelianField::from_subgroup(5, &[4]).unwrap();
    let r = min_height_probe(&l, &HeightBound::Value(0.25)).unwrap();
    let m = r.min_height.unwrap();
    assert!((m.midpoint() - 0.2406059125).abs() < 1e-9);
    assert!(r.witnesses.contains(&p(&[-1, -1, 1])));
    assert!(r
        .candidates
        .iter()
        .any(|c| c.number.min_poly == p(&[1, 0, 1])
            && matches!(c.identification, Identification::Rejected(_))));

    let l = AbelianField::quadratic(2).unwrap();
    let r = min_height_probe(&l, &HeightBound::Value(0.1)).unwrap();
    assert!(r.min_height.is_none() && r.witnesses.is_empty());

    assert!(min_height_probe(
        &AbelianField::cyclotomic(5).unwrap(),
        &HeightBound::Value(0.1)
    )
    .is_err());
}

#[test]
fn cyclic_cubic_probe() {
    let l = AbelianField::cyclic_subfield(7, 3).unwrap();
    let r = min_height_probe(&l, &HeightBound::Value(0.3)).unwrap();
    // x^3 + x^2 - 2x - 1 generates the cubic subfield of Q(ζ_7)
    assert!(r
        .candidates
        .iter()
        .any(|c| c.number.min_poly == p(&[-1, -2, 1, 1])
            && c.identification == Identification::Identified { screen_size: 50 }));
    assert!(r.min_height.is_some());
}

#[test]
fn stage_fields_share_no_candidates() {
    let stages = [
        AbelianField::cyclic_subfield(3, 2).unwrap(),
        AbelianField::quadratic(5).unwrap(),
        AbelianField::quadratic(-1).unwrap(),
    ];
    let census = enumerate_bounded(2, &HeightBound::Value(0.45)).unwrap();
    for a in &census.numbers {
        let hits = stages
            .iter()
            .filter(|l| {
                matches!(
                    identify(&a.min_poly, l, 50),
                    Identification::Identified { .. }
                )
            })
            .count();
        assert!(hits <= 1, "{}", a.min_poly);
    }
}

/// Random irreducible polynomials of degree 2 to 4 with small coefficients.
pub(crate) fn corpus(n: usize, seed: u64) -> Vec<IntPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let d = rng.gen_range(2..=4);
        let mut cs: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        cs.push(rng.gen_range(1..=3));
        let f = p(&cs);
        if f.coeff(0).is_zero() || !f.content().is_one() || !is_irreducible(&f).unwrap() {
            continue;
        }
        out.push(f);
    }
    out
}

#[test]
fn functional_equations_on_corpus() {
    for f in corpus(100, 7) {
        let h = weil_height(&f).unwrap();
        let inv = weil_height(&reciprocal_min_poly(&f).unwrap()).unwrap();
        assert!(h.overlaps(&inv, 1e-8), "{f}: {h:?} vs {inv:?}");
        let sq = power_min_poly(&f, 2).unwrap();
        let hs = weil_height(&sq).unwrap();
        let doubled = Height {
            lo: 2.0 * h.lo,
            hi: 2.0 * h.hi,
            mahler: None,
        };
        assert!(hs.overlaps(&doubled, 1e-8), "{f} squared to {sq}");
    }
}

#[test]
fn powers() {
    assert_eq!(power_min_poly(&p(&[-2, 0, 1]), 2).unwrap(), p(&[-2, 1]));
    assert_eq!(power_min_poly(&p(&[1, 1, 1]), 3).unwrap(), p(&[-1, 1]));
    let f = p(&[-1, -1, 1]);
    let cube = power_min_poly(&f, 3).unwrap();
    assert_eq!(cube, p(&[-1, -4, 1]));
    let h3 = weil_height(&cube).unwrap();
    assert!((h3.midpoint() - 3.0 * weil_height(&f).unwrap().midpoint()).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn census_is_monotone(b1 in 0.05f64..0.5, b2 in 0.05f64..0.5) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        let a = enumerate_bounded(2, &HeightBound::Value(lo)).unwrap();
        let b = enumerate_bounded(2, &HeightBound::Value(hi)).unwrap();
        prop_assert!(a.polynomial_count <= b.polynomial_count);
        let pb = polys(&b);
        prop_assert!(polys(&a).iter().all(|f| pb.contains(f)));
    }

    #[test]
    fn conjugate_invariance(k in 0usize..100) {
        let f = corpus(100, 11)[k].clone();
        // α -> -α
        let g = normalize(&f.scale_variable(&BigInt::from(-1)));
        let (h, hg) = (weil_height(&f).unwrap(), weil_height(&g).unwrap());
        prop_assert!(h.overlaps(&hg, 1e-10));
    }
}
