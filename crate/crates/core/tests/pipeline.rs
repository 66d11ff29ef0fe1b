//! End-to-end use of the public API across modules.

use gammalab_core::abelian::{abelian_disc, generator_polynomial, join, meet, AbelianField};
use gammalab_core::gamma::{build_cf_tower, gamma_m_f, gamma_prime};
use gammalab_core::heights::{min_height_probe, HeightBound};
use gammalab_core::numfield::{build_field, compositum};
use gammalab_core::{FactoredReal, IntPolynomial};

#[test]
fn abelian_and_polynomial_routes_agree_on_gamma() {
    let m = AbelianField::quadratic(2).unwrap();
    let f = AbelianField::cyclic_subfield(7, 3).unwrap();
    let mf = join(&m, &f);
    let abelian = gamma_m_f(
        &abelian_disc(&m),
        &abelian_disc(&f),
        &abelian_disc(&mf),
        mf.degree(),
        f.degree(),
    )
    .unwrap();

    let nm = build_field(&generator_polynomial(&m).unwrap()).unwrap();
    let nf = build_field(&generator_polynomial(&f).unwrap()).unwrap();
    let big = compositum(&nm, &nf).unwrap();
    let disc = |n: &gammalab_core::NumberField| FactoredReal::from_integer(&n.disc_magnitude());
    let round2 = gamma_m_f(
        &disc(&nm),
        &disc(&nf),
        &disc(&big),
        big.degree() as u64,
        nf.degree() as u64,
    )
    .unwrap();
    assert_eq!(abelian, round2);
    assert_eq!(big.degree(), 6);
}

#[test]
fn tower_stage_fields_are_disjoint() {
    let tower = build_cf_tower(4).unwrap();
    for (i, a) in tower.stages.iter().enumerate() {
        for b in &tower.stages[i + 1..] {
            assert!(meet(&a.field, &b.field).is_rational());
        }
    }
    let full = tower.compositum(0b1111);
    assert_eq!(abelian_disc(&full), tower.compositum_disc(0b1111));
    let r = gamma_prime(&tower.compositum(0b11), &AbelianField::rationals()).unwrap();
    assert!(r.sup_value <= FactoredReal::from_u64(3));
}

#[test]
fn probe_finds_the_golden_ratio() {
    let r = min_height_probe(
        &AbelianField::quadratic(5).unwrap(),
        &HeightBound::Value(0.25),
    )
    .unwrap();
    assert!(r
        .witnesses
        .contains(&IntPolynomial::from_i64s(&[-1, -1, 1])));
}
