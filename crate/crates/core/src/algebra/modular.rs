//! Exact rank of large integer matrices by multi-modular elimination.
//!
//! Every prime gives a lower bound: a minor that is nonzero modulo `p` is nonzero over `Q`.
//! The matching upper bound comes from the kernel. The reduced echelon kernel basis modulo
//! several primes is combined by CRT, lifted to rationals by rational reconstruction, and
//! checked exactly against the integer matrix. Verified kernel vectors bound the rank from
//! above, so the returned rank is exact regardless of which primes were used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::{to_primitive, IntRow, SparseRow};
use super::scalar::Rational;

/// Primes just below `2^31`, in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 30..1u64 << 31).rev().filter(|&n| {
        n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0)
    })
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

struct Echelon {
    pivots: Vec<usize>,
    /// Input rows that ended up holding the pivots.
    pivot_rows: Vec<usize>,
    /// `kernel[i][f]`: entry at pivot `i` of the kernel vector for free column `f`.
    kernel: Vec<Vec<u64>>,
}

/// Gauss–Jordan elimination modulo `p` on the selected rows.
fn echelon_mod(rows: &[IntRow], select: &[usize], ncols: usize, p: u64) -> Echelon {
    let mut a: Vec<(usize, Vec<u64>)> = select
        .iter()
        .map(|&i| {
            let mut dense = vec![0u64; ncols];
            for (c, x) in &rows[i] {
                dense[*c] = residue(x, p);
            }
            (i, dense)
        })
        .collect();
    let m = a.len();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let rank = pivots.len();
        if rank == m {
            break;
        }
        let Some(r) = (rank..m).find(|&r| a[r].1[col] != 0) else { continue };
        a.swap(rank, r);
        let inv = pow_mod(a[rank].1[col], p - 2, p);
        let (head, tail) = a.split_at_mut(rank);
        let (pivot_row, tail) = tail.split_first_mut().unwrap();
        let pivot_row = &mut pivot_row.1;
        for x in pivot_row[col..].iter_mut() {
            *x = *x * inv % p;
        }
        for (_, row) in head.iter_mut().chain(tail.iter_mut()) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let f = p - f;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if *y != 0 {
                    *x = (*x + f * y) % p;
                }
            }
        }
        pivots.push(col);
    }
    let free = free_columns(&pivots, ncols);
    let kernel = (0..pivots.len())
        .map(|i| free.iter().map(|&j| (p - a[i].1[j]) % p).collect())
        .collect();
    let pivot_rows = a[..pivots.len()].iter().map(|(i, _)| *i).collect();
    Echelon { pivots, pivot_rows, kernel }
}

fn free_columns(pivots: &[usize], ncols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..ncols).filter(|&c| !is_pivot[c]).collect()
}

/// `n/d` with `n = d x mod m` and `|n|, d <= sqrt(m/2)`, if one exists.
#[cfg(test)]
fn rational_reconstruction(x: &BigInt, m: &BigInt) -> Option<Rational> {
    reconstruct_with_bound(x, m, &(m / BigInt::from(2)).sqrt())
}

fn reconstruct_with_bound(x: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if &t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Lifts the kernel columns. Entries of a reduced echelon kernel share most of their
/// denominator, so each entry is first tried against the denominator found so far and
/// only reconstructed from scratch when that fails. On failure returns the offending
/// `(pivot, column)`.
fn lift(acc: &[Vec<BigInt>], nfree: usize, m: &BigInt, bound: &BigInt) -> Result<Vec<Vec<Rational>>, (usize, usize)> {
    let mut denom = BigInt::one();
    let mut out = Vec::with_capacity(nfree);
    for f in 0..nfree {
        let mut col = Vec::with_capacity(acc.len());
        for (i, row) in acc.iter().enumerate() {
            let x = &row[f];
            let mut y = (x * &denom).mod_floor(m);
            if &y > bound {
                y -= m;
            }
            if &y.abs() <= bound {
                col.push(Rational::new(y, denom.clone()));
                continue;
            }
            let q = reconstruct_with_bound(x, m, bound).ok_or((i, f))?;
            denom = denom.lcm(q.denom());
            if &denom > bound {
                return Err((i, f));
            }
            col.push(q);
        }
        out.push(col);
    }
    Ok(out)
}

/// Checks `M v = 0` exactly for every candidate kernel vector.
fn verify_kernel(rows: &[IntRow], pivots: &[usize], free: &[usize], values: &[Vec<Rational>]) -> bool {
    for (f, &j) in free.iter().enumerate() {
        let denom = values.iter().fold(BigInt::one(), |acc, col| acc.lcm(col[f].denom()));
        let mut v: Vec<Option<BigInt>> = vec![None; free.len() + pivots.len()];
        v[j] = Some(denom.clone());
        for (i, &c) in pivots.iter().enumerate() {
            let q = &values[i][f];
            if !q.is_zero() {
                v[c] = Some(q.numer() * (&denom / q.denom()));
            }
        }
        for row in rows {
            let mut acc = BigInt::zero();
            for (c, x) in row {
                if let Some(w) = &v[*c] {
                    acc += x * w;
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

struct Certified {
    rank: usize,
    /// Reduced echelon kernel basis, one full-length vector per free column.
    kernel: Option<Vec<Vec<Rational>>>,
}

fn certify(rows: &[SparseRow], ncols: usize, want_kernel: bool) -> Certified {
    let rows: Vec<IntRow> = rows.iter().map(to_primitive).filter(|r| !r.is_empty()).collect();
    let all: Vec<usize> = (0..rows.len()).collect();
    if rows.is_empty() {
        let kernel = (0..ncols).map(|j| (0..ncols).map(|i| Rational::from_integer((i == j).into())).collect());
        return Certified { rank: 0, kernel: Some(kernel.collect()) };
    }
    let mut best: Option<Echelon> = None;
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<Vec<Rational>>> = None;
    // entry `(pivot, free column)` that blocked the last lift; retried alone first
    let mut stuck: Option<(usize, usize)> = None;
    // primes combined so far, and how many to wait for before the next full lift
    let (mut used, mut next_lift) = (0usize, 0usize);
    for p in primes() {
        // Once a pivot pattern is known, only the rows that carried it matter for the kernel.
        let select = best.as_ref().map_or(&all, |b| &b.pivot_rows);
        let e = echelon_mod(&rows, select, ncols, p);
        if e.pivots.len() == ncols || (!want_kernel && e.pivots.len() == rows.len()) {
            return Certified { rank: e.pivots.len(), kernel: Some(Vec::new()).filter(|_| e.pivots.len() == ncols) };
        }
        // Over Q the pivot list is the lexicographically smallest one any prime can produce.
        let better = match &best {
            None => true,
            Some(b) => e.pivots.len() > b.pivots.len() || (e.pivots.len() == b.pivots.len() && e.pivots < b.pivots),
        };
        if better {
            acc = e.kernel.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            modulus = BigInt::from(p);
            previous = None;
            stuck = None;
            (used, next_lift) = (1, 0);
            best = Some(e);
            continue;
        }
        let b = best.as_ref().unwrap();
        if e.pivots != b.pivots {
            continue;
        }
        let m_inv = pow_mod(residue(&modulus, p), p - 2, p);
        for (acc_row, new_row) in acc.iter_mut().zip(&e.kernel) {
            for (x, &a) in acc_row.iter_mut().zip(new_row) {
                let diff = (a + p - residue(x, p)) % p;
                let step = diff * m_inv % p;
                if step != 0 {
                    *x += &modulus * BigInt::from(step);
                }
            }
        }
        modulus *= BigInt::from(p);
        let bound = (&modulus / BigInt::from(2)).sqrt();
        let nfree = ncols - b.pivots.len();
        used += 1;
        if used < next_lift {
            continue;
        }
        if let Some((i, f)) = stuck {
            if reconstruct_with_bound(&acc[i][f], &modulus, &bound).is_none() {
                continue;
            }
        }
        let lifted = match lift(&acc, nfree, &modulus, &bound) {
            Ok(l) => l,
            Err(at) => {
                stuck = Some(at);
                next_lift = used + used.div_ceil(4);
                continue;
            }
        };
        if previous.as_ref() != Some(&lifted) {
            previous = Some(lifted);
            continue;
        }
        let free = free_columns(&b.pivots, ncols);
        let by_pivot: Vec<Vec<Rational>> =
            (0..b.pivots.len()).map(|i| lifted.iter().map(|col| col[i].clone()).collect()).collect();
        if verify_kernel(&rows, &b.pivots, &free, &by_pivot) {
            let kernel = want_kernel.then(|| {
                free.iter()
                    .zip(&lifted)
                    .map(|(&j, col)| {
                        let mut v = vec![Rational::zero(); ncols];
                        v[j] = Rational::one();
                        for (&c, q) in b.pivots.iter().zip(col) {
                            v[c] = q.clone();
                        }
                        v
                    })
                    .collect()
            });
            return Certified { rank: b.pivots.len(), kernel };
        }
        // The pivot pattern came from an unlucky prime; start over with every row.
        best = None;
        previous = None;
        stuck = None;
        (used, next_lift) = (0, 0);
    }
    unreachable!("the prime supply is far larger than any matrix needs")
}

/// Exact rank of a rational matrix with `ncols` columns given by sparse rows.
pub fn certified_rank(rows: &[SparseRow], ncols: usize) -> usize {
    certify(rows, ncols, false).rank
}

/// Exact kernel basis of a rational matrix, in reduced echelon form: one vector per
/// non-pivot column, with a 1 in that column.
pub fn certified_kernel(rows: &[SparseRow], ncols: usize) -> Vec<Vec<Rational>> {
    certify(rows, ncols, true).kernel.expect("kernel requested")
}
