//! Intermediate fields `K ⊆ F ⊆ M` as subgroups of `H_K / H_M`, enumerated
//! one Sylow subgroup at a time.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use super::lattice::Lattice;
use super::{group_exponent, AbelianField};
use crate::arith::factor_u64;
use crate::error::{Error, Result};

/// Largest Sylow subgroup of `H_K / H_M` that is enumerated element-wise.
pub const SYLOW_ORDER_CAP: u64 = 4096;

/// Default bound on the number of intermediate fields returned.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

/// Every field between `k` and `m`, both included, in canonical order.
pub fn intermediate_fields(k: &AbelianField, m: &AbelianField) -> Result<Vec<AbelianField>> {
    intermediate_fields_capped(k, m, DEFAULT_FIELD_CAP)
}

pub fn intermediate_fields_capped(
    k: &AbelianField,
    m: &AbelianField,
    cap: u64,
) -> Result<Vec<AbelianField>> {
    if !m.contains(k) {
        return Err(Error::NotSubfield(format!("{k} is not contained in {m}")));
    }
    let g = m.unit_group();
    let n = group_exponent(&g);
    let lk = k.lifted(&g);
    let lm = m.lattice().clone();
    let order = m.degree() / k.degree();
    let mut per_prime: Vec<Vec<Vec<Vec<BigInt>>>> = Vec::new();
    let mut total: u64 = 1;
    for (l, e) in factor_u64(order) {
        let le = l.pow(e);
        crate::error::cap("Sylow subgroup order", SYLOW_ORDER_CAP, le)?;
        let subs = sylow_subgroups(&lk, &lm, order / le, le)?;
        total = total.saturating_mul(subs.len() as u64);
        crate::error::cap("intermediate fields", cap, total)?;
        per_prime.push(subs);
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut choice = vec![0usize; per_prime.len()];
    loop {
        let mut gens = lm.basis.clone();
        for (i, subs) in per_prime.iter().enumerate() {
            gens.extend(subs[choice[i]].iter().cloned());
        }
        let lat = Lattice::from_generators(&gens, g.rank(), &n);
        out.push(AbelianField::canonical(g.m, lat));
        // odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                out.sort();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < per_prime[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Subgroups of the `l`-Sylow part of `lk / lm`, each as a list of
/// generating vectors. `cof` is the order of the quotient divided by the
/// order `le` of its Sylow part.
fn sylow_subgroups(lk: &Lattice, lm: &Lattice, cof: u64, le: u64) -> Result<Vec<Vec<Vec<BigInt>>>> {
    let cofb = BigInt::from(cof);
    let zero = lm.reduce(&vec![BigInt::zero(); lm.dim()]);
    let gens: Vec<Vec<BigInt>> = lk
        .basis
        .iter()
        .map(|row| lm.reduce(&row.iter().map(|x| x * &cofb).collect::<Vec<_>>()))
        .filter(|v| *v != zero)
        .collect();
    // elements of the Sylow part
    let mut elems: Vec<Vec<BigInt>> = vec![zero.clone()];
    let mut index: HashMap<Vec<BigInt>, usize> = HashMap::from([(zero, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for gv in &gens {
            let s: Vec<BigInt> = elems[i].iter().zip(gv).map(|(a, b)| a + b).collect();
            let s = lm.reduce(&s);
            if !index.contains_key(&s) {
                index.insert(s.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(s);
            }
        }
    }
    if elems.len() as u64 != le {
        return Err(Error::Degenerate(format!(
            "Sylow part has {} elements, expected {le}",
            elems.len()
        )));
    }
    let add = |a: usize, b: usize| -> usize {
        let s: Vec<BigInt> = elems[a].iter().zip(&elems[b]).map(|(x, y)| x + y).collect();
        index[&lm.reduce(&s)]
    };
    // subgroups by successive adjunction of single elements
    let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![0]]);
    let mut states: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![0], Vec::new())];
    let mut head = 0;
    while head < states.len() {
        let (members, gens_of) = states[head].clone();
        head += 1;
        let member_set: HashSet<usize> = members.iter().copied().collect();
        for x in 0..elems.len() {
            if member_set.contains(&x) {
                continue;
            }
            let mut grown: HashSet<usize> = member_set.clone();
            let mut cur = x;
            while !member_set.contains(&cur) {
                for &s in &members {
                    grown.insert(add(s, cur));
                }
                cur = add(cur, x);
            }
            let mut sorted: Vec<usize> = grown.into_iter().collect();
            sorted.sort_unstable();
            if seen.insert(sorted.clone()) {
                let mut gg = gens_of.clone();
                gg.push(x);
                states.push((sorted, gg));
                crate::error::cap("Sylow subgroups", DEFAULT_FIELD_CAP, states.len() as u64)?;
            }
        }
    }
    Ok(states
        .into_iter()
        .map(|(_, g)| g.into_iter().map(|i| elems[i].clone()).collect())
        .collect())
}
