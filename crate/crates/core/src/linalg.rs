//! Integer lattices in Hermite normal form and linear algebra over F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::primes::{mul_mod, pow_mod};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Upper-triangular Hermite normal form of the lattice generated by `gens`
/// together with `modulus * Z^dim`. Requires `modulus > 0`; the result is a
/// `dim x dim` basis with positive diagonal and entries above each pivot
/// reduced into `[0, pivot)`.
///
/// Every intermediate entry stays below `modulus` in absolute value: rows
/// are inserted into a running basis that starts at `modulus * I`, which
/// always lies in the lattice.
pub fn hnf_mod(gens: &[Vec<BigInt>], dim: usize, modulus: &BigInt) -> IntMatrix {
    assert!(modulus.is_positive(), "HNF modulus must be positive");
    let mut h: IntMatrix = (0..dim)
        .map(|i| {
            let mut row = vec![BigInt::zero(); dim];
            row[i] = modulus.clone();
            row
        })
        .collect();
    for g in gens {
        assert_eq!(g.len(), dim, "generator dimension");
        let mut v: Vec<BigInt> = g.clone();
        for j in 0..dim {
            let pivot = h[j][j].clone();
            let q = v[j].div_floor(&pivot);
            if !q.is_zero() {
                for k in j..dim {
                    let t = &q * &h[j][k];
                    v[k] -= t;
                }
            }
            if v[j].is_zero() {
                continue;
            }
            let e = pivot.extended_gcd(&v[j]);
            let (a, b, g) = (e.x, e.y, e.gcd);
            let u = &v[j] / &g;
            let w = &pivot / &g;
            for k in j..dim {
                let hk = h[j][k].clone();
                let vk = v[k].clone();
                h[j][k] = &a * &hk + &b * &vk;
                v[k] = &u * &hk - &w * &vk;
            }
            reduce_row(&mut h, j, dim);
            for k in j + 1..dim {
                let q = v[k].div_floor(&h[k][k]);
                if !q.is_zero() {
                    for l in k..dim {
                        let t = &q * &h[k][l];
                        v[l] -= t;
                    }
                }
            }
        }
    }
    for j in (0..dim).rev() {
        reduce_row(&mut h, j, dim);
    }
    for j in 0..dim {
        for i in 0..j {
            let q = h[i][j].div_floor(&h[j][j]);
            if !q.is_zero() {
                for k in j..dim {
                    let t = &q * &h[j][k];
                    h[i][k] -= t;
                }
            }
        }
    }
    h
}

/// Reduces the entries of row `j` right of its pivot by the rows below.
fn reduce_row(h: &mut IntMatrix, j: usize, dim: usize) {
    for k in j + 1..dim {
        let q = h[j][k].div_floor(&h[k][k]);
        if !q.is_zero() {
            for l in k..dim {
                let t = &q * &h[k][l];
                h[j][l] -= t;
            }
        }
    }
}

/// Lower-triangular Hermite form: the upper form computed in reversed
/// coordinates, so row `i` involves only coordinates `0..=i`.
pub fn hnf_lower_mod(gens: &[Vec<BigInt>], dim: usize, modulus: &BigInt) -> IntMatrix {
    let rev: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().rev().cloned().collect())
        .collect();
    let h = hnf_mod(&rev, dim, modulus);
    h.into_iter()
        .rev()
        .map(|row| row.into_iter().rev().collect())
        .collect()
}

pub fn diagonal_product(h: &IntMatrix) -> BigInt {
    (0..h.len()).map(|i| h[i][i].clone()).product()
}

/// Solves `c * h = v` for upper-triangular `h`; `None` if `c` is not integral.
pub fn solve_upper(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = h.len();
    let mut c = vec![BigInt::zero(); n];
    for j in 0..n {
        let mut acc = v[j].clone();
        for i in 0..j {
            acc -= &c[i] * &h[i][j];
        }
        let (q, r) = acc.div_rem(&h[j][j]);
        if !r.is_zero() {
            return None;
        }
        c[j] = q;
    }
    Some(c)
}

/// Solves `c * h = v` for lower-triangular `h`; `None` if `c` is not integral.
pub fn solve_lower(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = h.len();
    let mut c = vec![BigInt::zero(); n];
    for j in (0..n).rev() {
        let mut acc = v[j].clone();
        for i in j + 1..n {
            acc -= &c[i] * &h[i][j];
        }
        let (q, r) = acc.div_rem(&h[j][j]);
        if !r.is_zero() {
            return None;
        }
        c[j] = q;
    }
    Some(c)
}

/// Inverse of a square integer matrix over Q; `None` if singular.
pub fn inverse_rational(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let inv = BigRational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of the left kernel `{c : c * m = 0}` over F_p of an `r x k` matrix.
pub fn left_kernel_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    // Row-reduce [m | I]; rows whose m-part vanishes give the kernel.
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|x| x % p).collect();
            r.extend((0..rows).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(piv, rank);
        let inv = pow_mod(a[rank][col], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..cols + rows {
                    let t = mul_mod(f, a[rank][c], p);
                    a[r][c] = (a[r][c] + p - t) % p;
                }
            }
        }
        rank += 1;
    }
    a[rank..].iter().map(|row| row[cols..].to_vec()).collect()
}

pub(crate) fn to_u64_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}
