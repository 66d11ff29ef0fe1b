//! Full-rank sublattices of `Z^r` containing `N * Z^r`, kept in Hermite
//! normal form. A subgroup of a finite abelian group `Z^r / diag(n)` is the
//! lattice of its preimage.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::linalg::{diagonal_product, hnf_mod, solve_upper, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    /// Upper-triangular HNF basis.
    pub basis: IntMatrix,
}

impl Lattice {
    pub fn from_generators(gens: &[Vec<BigInt>], dim: usize, modulus: &BigInt) -> Self {
        Self {
            basis: hnf_mod(gens, dim, modulus),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `[Z^r : L]`.
    pub fn index(&self) -> BigInt {
        diagonal_product(&self.basis)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_upper(&self.basis, v).is_some()
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        o.basis.iter().all(|row| self.contains(row))
    }

    /// `L + L'`.
    pub fn sum(&self, o: &Lattice, modulus: &BigInt) -> Self {
        let mut gens = self.basis.clone();
        gens.extend(o.basis.iter().cloned());
        Self::from_generators(&gens, self.dim(), modulus)
    }

    /// `N * L^*`, the scaled dual, for `N * Z^r ⊆ L`.
    fn scaled_dual(&self, n: &BigInt) -> Self {
        let r = self.dim();
        // rows of (N * B^{-1})^T: solve c * B = N e_i for each i
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(r);
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = n.clone();
            cols.push(solve_upper(&self.basis, &e).expect("N Z^r lies in the lattice"));
        }
        let gens: Vec<Vec<BigInt>> = (0..r)
            .map(|j| (0..r).map(|i| cols[i][j].clone()).collect())
            .collect();
        Self::from_generators(&gens, r, n)
    }

    /// `L ∩ L'` via `(L ∩ L')^* = L^* + L'^*`.
    pub fn intersection(&self, o: &Lattice, modulus: &BigInt) -> Self {
        let s = self
            .scaled_dual(modulus)
            .sum(&o.scaled_dual(modulus), modulus);
        s.scaled_dual(modulus)
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (j, row) in self.basis.iter().enumerate() {
            let q = v[j].div_floor(&row[j]);
            if !q.is_zero() {
                for k in j..v.len() {
                    v[k] -= &q * &row[k];
                }
            }
        }
        v
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_generators(&[], dim, &BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(rows: &[Vec<i64>], n: i64) -> Lattice {
        let dim = rows.first().map_or(0, |r| r.len());
        let gens: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Lattice::from_generators(&gens, dim, &BigInt::from(n))
    }

    /// Brute-force membership of the lattice points in the box `[0, n)^2`.
    fn points(l: &Lattice, n: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if l.contains(&[BigInt::from(a), BigInt::from(b)]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn intersection_matches_brute_force(
            a in proptest::collection::vec(-30i64..30, 2),
            b in proptest::collection::vec(-30i64..30, 2),
        ) {
            let n = 12;
            let la = lat(&[a], n);
            let lb = lat(&[b], n);
            let meet = la.intersection(&lb, &BigInt::from(n));
            let pa = points(&la, n);
            let pb = points(&lb, n);
            let both: Vec<_> = pa.iter().filter(|p| pb.contains(p)).cloned().collect();
            prop_assert_eq!(points(&meet, n), both);
            let join = la.sum(&lb, &BigInt::from(n));
            prop_assert!(join.contains_lattice(&la) && join.contains_lattice(&lb));
            prop_assert!(la.contains_lattice(&meet) && lb.contains_lattice(&meet));
        }
    }

    #[test]
    fn reduce_gives_canonical_cosets() {
        let l = lat(&[vec![2, 1]], 4);
        let a = l.reduce(&[BigInt::from(5), BigInt::from(7)]);
        let b = l.reduce(&[BigInt::from(3), BigInt::from(10)]);
        assert_eq!(a, b);
        assert_eq!(l.index(), BigInt::from(4));
    }
}
