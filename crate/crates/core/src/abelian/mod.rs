//! Abelian number fields as fixed fields of subgroups `H` of `(Z/m)^x`,
//! with `m` the conductor. A subgroup is stored as the lattice of its
//! preimage in discrete-log coordinates, which keeps composita of many
//! cyclic fields cheap even when `φ(m)` is in the trillions.

mod group;
mod lattice;
mod periods;
mod subgroups;

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{factor_u64, is_prime_u64, kronecker, FactoredReal};
use crate::error::{Error, Result};

pub use group::{Kind, UnitGroup};
pub use lattice::Lattice;
pub use periods::{
    cyclotomic, generator_polynomial, generator_polynomial_flagged, GeneratorPolynomial,
};
pub use subgroups::{
    intermediate_fields, intermediate_fields_capped, DEFAULT_FIELD_CAP, SYLOW_ORDER_CAP,
};

/// Subgroups up to this order are printed element by element; larger ones
/// by a generating set.
pub const LISTED_SUBGROUP_LIMIT: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianField {
    m: u64,
    lattice: Lattice,
}

pub(crate) fn group_exponent(g: &UnitGroup) -> BigInt {
    g.orders()
        .iter()
        .fold(BigInt::one(), |acc, &n| acc.lcm(&BigInt::from(n)))
}

fn unit_vector(dim: usize, i: usize, scale: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); dim];
    v[i] = BigInt::from(scale);
    v
}

fn diagonal(g: &UnitGroup) -> Vec<Vec<BigInt>> {
    (0..g.rank())
        .map(|i| unit_vector(g.rank(), i, g.comps[i].order))
        .collect()
}

/// Generators of `U_j = {x : x ≡ 1 mod q^j, x ≡ 1 away from q}`.
pub(crate) fn congruence_kernel(g: &UnitGroup, q: u64, j: u32) -> Vec<Vec<BigInt>> {
    let r = g.rank();
    let mut out = Vec::new();
    for (i, c) in g.comps.iter().enumerate() {
        if c.q != q || j >= c.k {
            continue;
        }
        let scale = match c.kind {
            Kind::Odd => {
                if j == 0 {
                    1
                } else {
                    q.pow(j - 1) * (q - 1)
                }
            }
            Kind::MinusOne => {
                if j <= 1 {
                    1
                } else {
                    continue;
                }
            }
            Kind::Five => {
                if j <= 2 {
                    1
                } else {
                    1 << (j - 2)
                }
            }
        };
        out.push(unit_vector(r, i, scale));
    }
    out
}

/// Lattice of the preimage of a subgroup under reduction `to.m -> from.m`.
fn lift_lattice(lat: &Lattice, from: &UnitGroup, to: &UnitGroup) -> Lattice {
    let r = to.rank();
    let map: Vec<Option<usize>> = to.comps.iter().map(|c| from.index_of(c.key())).collect();
    let mut gens = diagonal(to);
    for row in &lat.basis {
        gens.push(
            map.iter()
                .map(|src| src.map_or_else(BigInt::zero, |i| row[i].clone()))
                .collect(),
        );
    }
    for (j, src) in map.iter().enumerate() {
        if src.is_none() {
            gens.push(unit_vector(r, j, 1));
        }
    }
    Lattice::from_generators(&gens, r, &group_exponent(to))
}

/// Image of a subgroup under reduction `from.m -> to.m`.
fn project_lattice(lat: &Lattice, from: &UnitGroup, to: &UnitGroup) -> Lattice {
    let map: Vec<usize> = to
        .comps
        .iter()
        .map(|c| from.index_of(c.key()).expect("target component exists"))
        .collect();
    let mut gens = diagonal(to);
    for row in &lat.basis {
        gens.push(map.iter().map(|&i| row[i].clone()).collect());
    }
    Lattice::from_generators(&gens, to.rank(), &group_exponent(to))
}

impl AbelianField {
    /// Fixed field of the subgroup with lattice `lat` modulo `m`, reduced to
    /// its conductor.
    pub(crate) fn canonical(m: u64, lat: Lattice) -> Self {
        let mut m = m;
        let mut lat = lat;
        let mut g = UnitGroup::new(m);
        for (q, k) in factor_u64(m) {
            let mut k = k;
            while k >= 1 {
                let ker = congruence_kernel(&g, q, k - 1);
                if !ker.iter().all(|v| lat.contains(v)) {
                    break;
                }
                let g2 = UnitGroup::new(m / q);
                lat = project_lattice(&lat, &g, &g2);
                m /= q;
                g = g2;
                k -= 1;
            }
        }
        Self { m, lattice: lat }
    }

    pub(crate) fn from_lattice_gens(m: u64, gens: Vec<Vec<BigInt>>) -> Self {
        let g = UnitGroup::new(m);
        let mut all = diagonal(&g);
        all.extend(gens);
        Self::canonical(
            m,
            Lattice::from_generators(&all, g.rank(), &group_exponent(&g)),
        )
    }

    pub fn rationals() -> Self {
        Self::canonical(1, Lattice::identity(0))
    }

    /// `Q(ζ_m)`.
    pub fn cyclotomic(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        Ok(Self::from_lattice_gens(m, Vec::new()))
    }

    /// Fixed field of the subgroup generated by `residues` modulo `m`.
    pub fn from_subgroup(m: u64, residues: &[u64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let g = UnitGroup::new(m);
        let mut gens = Vec::new();
        for &a in residues {
            let c = g
                .coords(a % m)
                .ok_or_else(|| Error::InvalidInput(format!("{a} is not a unit modulo {m}")))?;
            gens.push(c.into_iter().map(BigInt::from).collect());
        }
        Ok(Self::from_lattice_gens(m, gens))
    }

    /// `Q(√d)` for squarefree `d ∉ {0, 1}`, as the kernel of the Kronecker
    /// character of its discriminant.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || factor_u64(d.unsigned_abs()).iter().any(|&(_, e)| e > 1) {
            return Err(Error::InvalidInput(format!(
                "{d} is not a squarefree integer other than 0, 1"
            )));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let m = disc.unsigned_abs();
        let g = UnitGroup::new(m);
        let r = g.rank();
        let signs: Vec<bool> = (0..r)
            .map(|i| kronecker(disc, g.residue(&unit_vector_u64(r, i))) == -1)
            .collect();
        let first = signs.iter().position(|&s| s);
        let mut gens = Vec::new();
        for (i, &s) in signs.iter().enumerate() {
            if !s {
                gens.push(unit_vector(r, i, 1));
                continue;
            }
            gens.push(unit_vector(r, i, 2));
            if let Some(f) = first {
                let mut v = unit_vector(r, i, 1);
                v[f] += 1;
                gens.push(v);
            }
        }
        Ok(Self::from_lattice_gens(m, gens))
    }

    /// The degree-`p` subfield of `Q(ζ_q)` for primes `q ≡ 1 mod p`.
    pub fn cyclic_subfield(q: u64, p: u64) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(Error::InvalidInput(format!("{q} is not prime")));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if q % p != 1 {
            return Err(Error::InvalidInput(format!("{q} is not 1 mod {p}")));
        }
        Ok(Self::from_lattice_gens(q, vec![vec![BigInt::from(p)]]))
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn unit_group(&self) -> UnitGroup {
        UnitGroup::new(self.m)
    }

    pub fn degree(&self) -> u64 {
        self.lattice
            .index()
            .to_u64()
            .expect("degree fits in 64 bits")
    }

    /// `|H| = φ(m) / degree`.
    pub fn subgroup_order(&self) -> u64 {
        self.unit_group().order() / self.degree()
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    pub(crate) fn lifted(&self, to: &UnitGroup) -> Lattice {
        lift_lattice(&self.lattice, &self.unit_group(), to)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &AbelianField) -> bool {
        if self.m % other.m != 0 {
            return false;
        }
        let g = self.unit_group();
        other.lifted(&g).contains_lattice(&self.lattice)
    }

    /// Whether the unit `a` mod the conductor lies in `H`, i.e. whether the
    /// primes `≡ a` split completely. `None` if `a` is not a unit.
    pub fn contains_residue(&self, a: u64) -> Option<bool> {
        let g = self.unit_group();
        let c = g.coords(a % self.m.max(1))?;
        let v: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
        Some(self.lattice.contains(&v))
    }

    /// Residues generating `H`, one per HNF row that is not the identity.
    pub fn subgroup_generators(&self) -> Vec<u64> {
        let g = self.unit_group();
        let mut out: Vec<u64> = self
            .lattice
            .basis
            .iter()
            .map(|row| {
                let c: Vec<u64> = row
                    .iter()
                    .zip(g.orders())
                    .map(|(x, n)| x.mod_floor(&BigInt::from(n)).to_u64().expect("fits"))
                    .collect();
                g.residue(&c)
            })
            .filter(|&a| a != 1 % self.m.max(1))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All elements of `H`, sorted; `None` if `|H|` exceeds `limit`.
    pub fn subgroup_elements(&self, limit: u64) -> Option<Vec<u64>> {
        if self.subgroup_order() > limit {
            return None;
        }
        let m = self.m;
        let one = 1 % m.max(1);
        let gens = self.subgroup_generators();
        let mut seen: HashSet<u64> = HashSet::from([one]);
        let mut queue = VecDeque::from([one]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = ((x as u128 * g as u128) % m as u128) as u64;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<u64> = seen.into_iter().collect();
        out.sort_unstable();
        Some(out)
    }
}

fn unit_vector_u64(dim: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    v[i] = 1;
    v
}

impl Ord for AbelianField {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then(self.m.cmp(&o.m))
            .then_with(|| self.lattice.cmp(&o.lattice))
    }
}

impl PartialOrd for AbelianField {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = match self.subgroup_elements(LISTED_SUBGROUP_LIMIT) {
            Some(all) => all,
            None => self.subgroup_generators(),
        };
        // 1 mod 1 is 0, but the trivial group reads better as 1
        let list: Vec<String> = list
            .iter()
            .map(|&a| if self.m == 1 { 1 } else { a }.to_string())
            .collect();
        write!(f, "m={};H={}", self.m, list.join(","))
    }
}

impl Serialize for AbelianField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for AbelianField {
    type Err = Error;

    /// Parses `m=<modulus>;H=<residues>`; the residues are read as generators
    /// and the result is reduced to its conductor.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse abelian field {s:?}"));
        let (ms, hs) = s.trim().split_once(';').ok_or_else(bad)?;
        let m: u64 = ms
            .trim()
            .strip_prefix("m=")
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let hs = hs.trim().strip_prefix("H=").ok_or_else(bad)?.trim();
        let hs = hs.trim_start_matches('{').trim_end_matches('}');
        let residues: Vec<u64> = hs
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Self::from_subgroup(m, &residues)
    }
}

fn common_group(a: &AbelianField, b: &AbelianField) -> UnitGroup {
    UnitGroup::new(a.m.lcm(&b.m))
}

/// Compositum: the intersection of the fixing subgroups.
pub fn join(a: &AbelianField, b: &AbelianField) -> AbelianField {
    let g = common_group(a, b);
    let lat = a
        .lifted(&g)
        .intersection(&b.lifted(&g), &group_exponent(&g));
    AbelianField::canonical(g.m, lat)
}

/// Intersection: the subgroup generated by both fixing subgroups.
pub fn meet(a: &AbelianField, b: &AbelianField) -> AbelianField {
    let g = common_group(a, b);
    let lat = a.lifted(&g).sum(&b.lifted(&g), &group_exponent(&g));
    AbelianField::canonical(g.m, lat)
}

/// `|Δ_A|` by the conductor-discriminant formula. The exponent of `q` is
/// `Σ_{j<k} ([G:H] - [G:H·U_j])`: the number of characters of `G/H` that are
/// nontrivial on `U_j`, summed over the levels where they can be.
pub fn abelian_disc(a: &AbelianField) -> FactoredReal {
    let g = a.unit_group();
    let n = group_exponent(&g);
    let deg = a.lattice.index();
    let mut pairs = Vec::new();
    for (q, k) in factor_u64(a.m) {
        let mut e = BigInt::zero();
        for j in 0..k {
            let mut gens = a.lattice.basis.clone();
            gens.extend(congruence_kernel(&g, q, j));
            let bigger = Lattice::from_generators(&gens, g.rank(), &n);
            e += &deg - bigger.index();
        }
        if !e.is_zero() {
            pairs.push((BigUint::from(q), BigRational::from_integer(e)));
        }
    }
    FactoredReal::from_pairs(pairs)
}

/// Whether `a` and `b` are linearly disjoint over `over`.
pub fn linearly_disjoint(a: &AbelianField, b: &AbelianField, over: &AbelianField) -> Result<bool> {
    if !a.contains(over) || !b.contains(over) {
        return Err(Error::NotSubfield(format!(
            "{over} is not inside both {a} and {b}"
        )));
    }
    let d = over.degree();
    let j = join(a, b);
    Ok(j.degree() / d == (a.degree() / d) * (b.degree() / d) && meet(a, b) == *over)
}
