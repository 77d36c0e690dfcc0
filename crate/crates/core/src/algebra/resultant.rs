use std::collections::HashMap;

use super::form::MPoly;
use super::scalar::Scalar;
use super::AlgebraError;

/// Sylvester resultant of `p` and `q` with respect to variable `v`.
///
/// Convention: the Sylvester matrix has `deg_v q` shifted rows of the coefficients of `p`
/// (leading coefficient first) above `deg_v p` shifted rows of `q`, so
/// `res(p, q) = lc(p)^deg(q) * prod q(a)` over the roots `a` of `p`. For example
/// `res_x(x - 1, x + 1) = 2`.
pub fn resultant<C: Scalar>(p: &MPoly<C>, q: &MPoly<C>, v: usize) -> Result<MPoly<C>, AlgebraError> {
    if p.is_zero() || q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    if m == 0 && n == 0 {
        return Ok(MPoly::constant(C::one()));
    }
    let size = m + n;
    let mut rows: Vec<Vec<MPoly<C>>> = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![MPoly::zero(); size];
        for (i, c) in pc.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![MPoly::zero(); size];
        for (i, c) in qc.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    Ok(determinant(&rows))
}

/// Determinant of a small square matrix of polynomials, by expansion over column subsets.
pub fn determinant<C: Scalar>(rows: &[Vec<MPoly<C>>]) -> MPoly<C> {
    let n = rows.len();
    assert!(n <= 20, "determinant expansion is exponential in the size");
    let mut layer: HashMap<u32, MPoly<C>> = HashMap::new();
    layer.insert(0, MPoly::constant(C::one()));
    for row in rows {
        let mut next: HashMap<u32, MPoly<C>> = HashMap::new();
        for (mask, acc) in &layer {
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                let inversions = (mask >> (c + 1)).count_ones();
                let mut term = acc.mul(entry);
                if inversions % 2 == 1 {
                    term = term.neg();
                }
                let slot = next.entry(mask | (1 << c)).or_insert_with(MPoly::zero);
                *slot = slot.add(&term);
            }
        }
        layer = next;
    }
    layer.remove(&((1u32 << n) - 1)).unwrap_or_else(MPoly::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Rational};

    fn poly(terms: &[([u32; 3], i64)]) -> MPoly<Rational> {
        MPoly::from_terms(terms.iter().map(|(m, c)| (*m, int(*c))))
    }

    #[test]
    fn linear_pair() {
        let r = resultant(&poly(&[([1, 0, 0], 1), ([0, 0, 0], -1)]), &poly(&[([1, 0, 0], 1), ([0, 0, 0], 1)]), 0).unwrap();
        assert_eq!(r, MPoly::constant(int(2)));
    }

    #[test]
    fn tangent_conics() {
        // res_x(x^2 + y^2 - z^2, x^2 + 2y^2 - z^2) = y^4
        let p = poly(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)]);
        let q = poly(&[([2, 0, 0], 1), ([0, 2, 0], 2), ([0, 0, 2], -1)]);
        assert_eq!(resultant(&p, &q, 0).unwrap(), poly(&[([0, 4, 0], 1)]));
    }

    #[test]
    fn parabola_and_line() {
        // res_x(x^2 - y, x - y) = y^2 - y
        let p = poly(&[([2, 0, 0], 1), ([0, 1, 0], -1)]);
        let q = poly(&[([1, 0, 0], 1), ([0, 1, 0], -1)]);
        assert_eq!(resultant(&p, &q, 0).unwrap(), poly(&[([0, 2, 0], 1), ([0, 1, 0], -1)]));
    }

    #[test]
    fn zero_input_is_an_error() {
        let p = poly(&[([1, 0, 0], 1)]);
        assert!(resultant(&p, &MPoly::zero(), 0).is_err());
    }
}
