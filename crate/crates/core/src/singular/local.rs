//! Dimensions of local algebras at the origin, by truncation.
//!
//! For generators `H` of positive order, `dim k[x,y]_(x,y) / (H)` is the stable value of
//! `D(N) = dim P_<N / span{ trunc_<N(x^a y^b h) }`. `D` is nondecreasing, and by Nakayama
//! two consecutive equal values mean it has stabilized.

use crate::algebra::{AffinePolynomial, FieldElement, Scalar};
use crate::arrangement::{ArrangementPolynomial, Conic};

use super::{normalize, ProjectivePoint, SingularError};

fn mono_index(i: u32, j: u32) -> usize {
    let t = (i + j) as usize;
    t * (t + 1) / 2 + j as usize
}

/// `D(N)` for the given generators.
fn truncated_colength<C: Scalar>(gens: &[AffinePolynomial<C>], n: u32) -> usize {
    let cols = (n as usize) * (n as usize + 1) / 2;
    let mut rows: Vec<Vec<C>> = Vec::new();
    for h in gens {
        let low: Vec<([u32; 2], &C)> = h.terms().iter().filter(|(m, _)| m[0] + m[1] < n).map(|(m, c)| (*m, c)).collect();
        for s in 0..n.saturating_sub(1) {
            for a in 0..=s {
                let b = s - a;
                let mut row = vec![C::zero(); cols];
                let mut any = false;
                for (m, c) in &low {
                    let (i, j) = (m[0] + a, m[1] + b);
                    if i + j < n {
                        row[mono_index(i, j)] = (*c).clone();
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return cols;
    }
    cols - crate::algebra::rank(&rows)
}

/// `dim` of the local algebra of the ideal generated by `gens` at the origin.
///
/// Every generator must vanish at the origin. Fails with `NonIsolated` if the truncated
/// dimension has not stabilized by order `cap`.
pub fn local_algebra_dimension<C: Scalar>(gens: &[AffinePolynomial<C>], cap: u32) -> Result<usize, SingularError> {
    assert!(gens.iter().all(|g| g.constant_term().is_zero()), "generators must vanish at the origin");
    let mut prev = truncated_colength(gens, 1);
    for n in 2..=cap {
        let cur = truncated_colength(gens, n);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(SingularError::NonIsolated)
}

/// The affine chart where the point's last nonzero coordinate is 1, and the other two
/// coordinates of the point in that chart.
pub(crate) fn chart_of(p: &ProjectivePoint) -> (usize, [FieldElement; 2]) {
    let q = normalize(p);
    let chart = (0..3).rev().find(|&i| !q[i].is_zero()).expect("nonzero point");
    let others: Vec<FieldElement> = (0..3).filter(|&i| i != chart).map(|i| q[i].clone()).collect();
    (chart, [others[0].clone(), others[1].clone()])
}

fn local_equation(f: &ArrangementPolynomial, p: &ProjectivePoint) -> Result<AffinePolynomial<FieldElement>, SingularError> {
    let (chart, at) = chart_of(p);
    let g = f.form().to_field().localize(chart, [&at[0], &at[1]]);
    let gx = g.derivative(0);
    let gy = g.derivative(1);
    if !g.constant_term().is_zero() || !gx.constant_term().is_zero() || !gy.constant_term().is_zero() {
        return Err(SingularError::NotSingular);
    }
    Ok(g)
}

fn cap_for(f: &ArrangementPolynomial) -> u32 {
    let d = f.degree().max(2) - 1;
    d * d + 2
}

/// Milnor number: colength of `(g_x, g_y)` for the local equation `g` at `p`.
pub fn local_milnor(f: &ArrangementPolynomial, p: &ProjectivePoint) -> Result<u32, SingularError> {
    let g = local_equation(f, p)?;
    let gens = [g.derivative(0), g.derivative(1)];
    local_algebra_dimension(&gens, cap_for(f)).map(|d| d as u32)
}

/// Tjurina number: colength of `(g, g_x, g_y)` for the local equation `g` at `p`.
pub fn local_tjurina(f: &ArrangementPolynomial, p: &ProjectivePoint) -> Result<u32, SingularError> {
    let g = local_equation(f, p)?;
    let gens = [g.derivative(0), g.derivative(1), g];
    local_algebra_dimension(&gens, cap_for(f)).map(|d| d as u32)
}

/// Local intersection multiplicity of two conics at a common point.
pub fn intersection_multiplicity(ci: &Conic, cj: &Conic, p: &ProjectivePoint) -> Result<u32, SingularError> {
    if !ci.eval(p).is_zero() || !cj.eval(p).is_zero() {
        return Err(SingularError::PointNotOnBoth);
    }
    let (chart, at) = chart_of(p);
    let gens = [
        ci.form().to_field().localize(chart, [&at[0], &at[1]]),
        cj.form().to_field().localize(chart, [&at[0], &at[1]]),
    ];
    // two conics without common component meet with multiplicity at most 4
    local_algebra_dimension(&gens, 6).map(|d| d as u32)
}
