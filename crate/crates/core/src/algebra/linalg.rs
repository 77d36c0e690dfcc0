//! Exact linear algebra: reduced row echelon form and kernels over any [`Scalar`], plus a
//! sparse fraction-free rank routine for large rational matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{Rational, Scalar};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<C: Scalar>(m: &mut Vec<Vec<C>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse().unwrap();
        for x in m[r].iter_mut().skip(c) {
            *x = x.times(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].minus(&factor.times(&pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<C: Scalar>(rows: &[Vec<C>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right kernel `{v : M v = 0}`; empty iff the kernel is trivial.
///
/// `rows` must be rectangular. One basis vector per free column, with a 1 in that column.
pub fn kernel_basis<C: Scalar>(rows: &[Vec<C>]) -> Vec<Vec<C>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![C::zero(); cols];
        v[free] = C::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = m[i][free].negate();
        }
        basis.push(v);
    }
    basis
}

pub fn mat_vec<C: Scalar>(rows: &[Vec<C>], v: &[C]) -> Vec<C> {
    rows.iter()
        .map(|r| r.iter().zip(v).fold(C::zero(), |acc, (a, b)| acc.plus(&a.times(b))))
        .collect()
}

/// A sparse rational row as `(column, value)` pairs with strictly increasing columns.
pub type SparseRow = Vec<(usize, Rational)>;

pub(crate) type IntRow = Vec<(usize, BigInt)>;

pub(crate) fn to_primitive(row: &SparseRow) -> IntRow {
    let lcm = row.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let ints: IntRow = row
        .iter()
        .filter(|(_, q)| !Scalar::is_zero(q))
        .map(|(c, q)| (*c, (q * Rational::from_integer(lcm.clone())).to_integer()))
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut row: IntRow) -> IntRow {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    if row.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in row.iter_mut() {
            *x = -&*x;
        }
    }
    row
}

/// `a * x - b * y` on sparse integer rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a rational matrix given as sparse rows, by fraction-free elimination on
/// primitive integer rows.
pub fn sparse_rank(rows: &[SparseRow]) -> usize {
    let mut echelon: BTreeMap<usize, IntRow> = BTreeMap::new();
    for row in rows {
        let mut r = to_primitive(row);
        while let Some(&(lead, _)) = r.first() {
            let Some(p) = echelon.get(&lead) else { break };
            let a = &p[0].1;
            let b = &r[0].1;
            let g = a.gcd(b);
            r = make_primitive(combine(&(a / &g), &r, &(b / &g), p));
        }
        if let Some(&(lead, _)) = r.first() {
            echelon.insert(lead, r);
        }
    }
    echelon.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&m(&[&[1, 0], &[0, 1]])).is_empty());
        assert_eq!(kernel_basis(&m(&[&[0, 0, 0]])).len(), 3);
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(1), int(-1), int(1)]);
        assert!(mat_vec(&a, &k[0]).iter().all(|x| Scalar::is_zero(x)));
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1], &[1, 3, 4]]);
        let sparse: Vec<SparseRow> = a
            .iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !Scalar::is_zero(x)).collect())
            .collect();
        assert_eq!(sparse_rank(&sparse), 2);
        assert_eq!(rank(&a), 2);
    }
}
