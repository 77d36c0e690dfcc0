//! Pairwise conic intersections, merged into Galois orbits.
//!
//! The arrangement is pulled back by an invertible rational `T`. For each pair the
//! resultant `R_ij(u) = Res_x(F'_i(x, u, 1), F'_j(x, u, 1))` is computed, and every
//! irreducible factor `m` of any `R_ij` defines one number field `K_m = Q(θ)`. `T` is
//! accepted only if, for every factor and every pair it divides, the two conics restricted
//! to `y = θ` have a common root of degree exactly one in `x`, and all such pairs agree on
//! it. Then each factor corresponds to exactly one Galois orbit of intersection points, and
//! its multiplicity in `R_ij` is the local intersection multiplicity, which is cross-checked
//! against the local algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{
    factor_squarefree, resultant, FieldElement, MPoly, NumberField, Rational, Scalar, UPoly,
};
use crate::arrangement::{apply3, identity3, random_transform, Conic, ConicArrangement, Matrix3};

use super::local::intersection_multiplicity;
use super::{normalize, tangent_classes, LocatedPoint};

/// Upper bound on coordinate changes tried before giving up. Generic ones are accepted
/// with probability one, so this is never reached in practice.
const MAX_ATTEMPTS: u64 = 256;

/// Locates all intersection points of an arrangement, one record per Galois orbit.
pub fn locate_singular_points(arr: &ConicArrangement) -> Vec<LocatedPoint> {
    for attempt in 0..MAX_ATTEMPTS {
        let t = if attempt == 0 { identity3() } else { random_transform(attempt) };
        if let Some(points) = try_locate(arr, &t) {
            return points;
        }
    }
    panic!("no admissible coordinate change found after {MAX_ATTEMPTS} attempts");
}

/// `F(x, u, 1)` as a polynomial in `x` (variable 0) and `u` (variable 1).
fn dehomogenize(c: &Conic) -> MPoly<Rational> {
    let [a, b, cz, d, e, f] = c.coeffs().clone();
    MPoly::from_terms([
        ([2, 0, 0], a),
        ([0, 2, 0], b),
        ([0, 0, 0], cz),
        ([1, 1, 0], d),
        ([1, 0, 0], e),
        ([0, 1, 0], f),
    ])
}

/// `F(x, θ, 1)` as a univariate polynomial over the field of `θ`.
fn restrict(c: &Conic, theta: &FieldElement) -> UPoly<FieldElement> {
    let [a, b, cz, d, e, f] = c.coeffs().clone().map(FieldElement::rational);
    let c0 = b.times(theta).times(theta).plus(&f.times(theta)).plus(&cz);
    let c1 = d.times(theta).plus(&e);
    UPoly::new(vec![c0, c1, a])
}

struct Factor {
    poly: UPoly<Rational>,
    root_box: crate::algebra::CBox,
    pairs: Vec<(usize, usize, u32)>,
}

fn pair_factors(ci: &Conic, cj: &Conic) -> Option<Vec<(UPoly<Rational>, crate::algebra::CBox, u32)>> {
    let r = resultant(&dehomogenize(ci), &dehomogenize(cj), 0).ok()?;
    let coeffs: Vec<Rational> = (0..=4).map(|k| r.coeff(&[0, k, 0])).collect();
    let u = UPoly::new(coeffs);
    if u.degree() != Some(4) {
        return None;
    }
    let mut out = Vec::new();
    for (i, part) in u.squarefree_decomposition().iter().enumerate() {
        for (m, boxes) in factor_squarefree(part) {
            out.push((m, boxes[0].clone(), i as u32 + 1));
        }
    }
    Some(out)
}

fn try_locate(arr: &ConicArrangement, t: &Matrix3) -> Option<Vec<LocatedPoint>> {
    let moved = arr.transform(t);
    let conics = moved.conics();
    if conics.iter().any(|c| c.coeffs()[0].is_zero()) {
        return None;
    }
    let pairs: Vec<(usize, usize)> =
        (0..conics.len()).flat_map(|i| (i + 1..conics.len()).map(move |j| (i, j))).collect();
    let per_pair: Vec<Option<Vec<_>>> =
        pairs.par_iter().map(|&(i, j)| pair_factors(&conics[i], &conics[j])).collect();

    let mut factors: BTreeMap<Vec<Rational>, Factor> = BTreeMap::new();
    for (&(i, j), found) in pairs.iter().zip(per_pair) {
        for (m, root_box, e) in found? {
            factors
                .entry(m.coeffs().to_vec())
                .or_insert_with(|| Factor { poly: m, root_box, pairs: Vec::new() })
                .pairs
                .push((i, j, e));
        }
    }

    let located: Vec<Option<LocatedPoint>> = factors
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|f| orbit_point(arr, conics, t, f))
        .collect();
    located.into_iter().collect()
}

fn orbit_point(arr: &ConicArrangement, moved: &[Conic], t: &Matrix3, f: Factor) -> Option<LocatedPoint> {
    let degree = f.poly.degree().unwrap();
    let theta = if degree == 1 {
        FieldElement::rational(-f.poly.coeff(0))
    } else {
        Arc::new(NumberField::from_isolated(f.poly.clone(), f.root_box.clone())).generator()
    };
    let mut x: Option<FieldElement> = None;
    for &(i, j, _) in &f.pairs {
        let g = restrict(&moved[i], &theta).gcd(&restrict(&moved[j], &theta));
        if g.degree() != Some(1) {
            return None;
        }
        let root = g.coeff(0).negate();
        match &x {
            None => x = Some(root),
            Some(prev) if *prev == root => {}
            Some(_) => return None,
        }
    }
    let local = [x?, theta, FieldElement::one()];
    let point = normalize(&apply3(t, &local));

    let mut incident: Vec<usize> = f.pairs.iter().flat_map(|&(i, j, _)| [i, j]).collect();
    incident.sort_unstable();
    incident.dedup();
    let conics = arr.conics();
    debug_assert!((0..conics.len()).all(|c| incident.contains(&c) == conics[c].eval(&point).is_zero()));

    let mut pair_multiplicities = BTreeMap::new();
    for &(i, j, e) in &f.pairs {
        let local = intersection_multiplicity(&conics[i], &conics[j], &point).ok()?;
        if local != e {
            return None;
        }
        pair_multiplicities.insert((i, j), e);
    }
    let tangent_classes = tangent_classes(conics, &incident, &point);
    Some(LocatedPoint { point, orbit_size: degree, incident, pair_multiplicities, tangent_classes })
}

