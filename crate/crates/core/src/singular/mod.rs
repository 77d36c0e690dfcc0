//! Singular points of conic arrangements: location, classification, local invariants.

mod local;
mod locate;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{rational_string, FieldElement, Scalar};
use crate::arrangement::{defining_polynomial, Conic, ConicArrangement};
use crate::combinatorics::WeakCombinatorics;

pub use local::{intersection_multiplicity, local_algebra_dimension, local_milnor, local_tjurina};
pub use locate::locate_singular_points;

/// Homogeneous coordinates over a common field.
pub type ProjectivePoint = [FieldElement; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularError {
    #[error("point is not a singular point of the curve")]
    NotSingular,
    #[error("local algebra did not stabilize; the singularity is not isolated")]
    NonIsolated,
    #[error("point does not lie on both conics")]
    PointNotOnBoth,
}

/// Scale so the last nonzero coordinate is 1.
pub fn normalize(p: &ProjectivePoint) -> ProjectivePoint {
    let last = (0..3).rev().find(|&i| !p[i].is_zero()).expect("projective point must be nonzero");
    let inv = p[last].inverse().unwrap();
    std::array::from_fn(|i| if i == last { FieldElement::one() } else { p[i].times(&inv) })
}

fn proportional(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> bool {
    (0..3).all(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        a[j].times(&b[k]).minus(&a[k].times(&b[j])).is_zero()
    })
}

/// Partition of the incident conics by common tangent line at `p`.
pub fn tangent_classes(conics: &[Conic], incident: &[usize], p: &ProjectivePoint) -> Vec<Vec<usize>> {
    let mut classes: Vec<(Vec<usize>, [FieldElement; 3])> = Vec::new();
    for &i in incident {
        let g = conics[i].gradient_at(p);
        match classes.iter_mut().find(|(_, t)| proportional(t, &g)) {
            Some((members, _)) => members.push(i),
            None => classes.push((vec![i], g)),
        }
    }
    classes.into_iter().map(|(m, _)| m).collect()
}

/// One Galois orbit of intersection points, before local invariants are attached.
#[derive(Clone, Debug)]
pub struct LocatedPoint {
    /// Representative, normalized so the last nonzero coordinate is 1.
    pub point: ProjectivePoint,
    pub orbit_size: usize,
    pub incident: Vec<usize>,
    pub pair_multiplicities: BTreeMap<(usize, usize), u32>,
    pub tangent_classes: Vec<Vec<usize>>,
}

impl LocatedPoint {
    pub fn multiplicity(&self) -> usize {
        self.incident.len()
    }

    pub fn max_pair_multiplicity(&self) -> u32 {
        self.pair_multiplicities.values().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityType {
    Node,
    Tacnode,
    OrdinaryTriple,
    OrdinaryQuadruple,
    Other {
        multiplicity: usize,
        /// Sizes of the tangent classes, largest first.
        tangent_pattern: Vec<usize>,
        max_pair_multiplicity: u32,
    },
}

impl SingularityType {
    pub fn is_q_type(&self) -> bool {
        !matches!(self, SingularityType::Other { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SingularityType::Node => "node",
            SingularityType::Tacnode => "tacnode",
            SingularityType::OrdinaryTriple => "ordinary_triple",
            SingularityType::OrdinaryQuadruple => "ordinary_quadruple",
            SingularityType::Other { .. } => "other",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SingularityType::Other { multiplicity, tangent_pattern, max_pair_multiplicity } => json!({
                "kind": "other",
                "multiplicity": multiplicity,
                "tangent_pattern": tangent_pattern,
                "max_pair_multiplicity": max_pair_multiplicity,
            }),
            t => json!({ "kind": t.name() }),
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::Other { multiplicity, tangent_pattern, max_pair_multiplicity } => write!(
                f,
                "other(m={multiplicity}, tangents={tangent_pattern:?}, max pair mult={max_pair_multiplicity})"
            ),
            t => f.write_str(t.name()),
        }
    }
}

pub fn classify_point(p: &LocatedPoint) -> SingularityType {
    let m = p.multiplicity();
    let mult = p.max_pair_multiplicity();
    let distinct = p.tangent_classes.iter().all(|c| c.len() == 1);
    match m {
        2 if mult == 1 => SingularityType::Node,
        2 if mult == 2 && !distinct => SingularityType::Tacnode,
        3 if mult == 1 && distinct => SingularityType::OrdinaryTriple,
        4 if mult == 1 && distinct => SingularityType::OrdinaryQuadruple,
        _ => {
            let mut tangent_pattern: Vec<usize> = p.tangent_classes.iter().map(Vec::len).collect();
            tangent_pattern.sort_unstable_by(|a, b| b.cmp(a));
            SingularityType::Other { multiplicity: m, tangent_pattern, max_pair_multiplicity: mult }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SingularPointRecord {
    pub located: LocatedPoint,
    pub kind: SingularityType,
    pub milnor: u32,
    pub tjurina: u32,
    pub quasi_homogeneous: bool,
}

pub fn is_quasi_homogeneous(r: &SingularPointRecord) -> bool {
    r.milnor == r.tjurina
}

/// Exact coordinate: a rational string, or minimal polynomial plus isolating box.
pub fn coordinate_json(c: &FieldElement) -> Value {
    if let Some(q) = c.as_rational() {
        return Value::String(rational_string(&q));
    }
    let a = c.to_algebraic();
    json!({
        "minimal_polynomial": a.minimal_polynomial.coeffs().iter().map(rational_string).collect::<Vec<_>>(),
        "box": a.root_box.corners().iter().map(rational_string).collect::<Vec<_>>(),
    })
}

fn approx_string(p: &ProjectivePoint) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(" : "))
}

impl SingularPointRecord {
    pub fn to_json(&self) -> Value {
        let p = &self.located;
        json!({
            "point": p.point.iter().map(coordinate_json).collect::<Vec<_>>(),
            "approx": approx_string(&p.point),
            "orbit_size": p.orbit_size,
            "incident_conics": p.incident,
            "pairwise_multiplicities": p.pair_multiplicities.iter()
                .map(|((i, j), m)| json!({"pair": [i, j], "multiplicity": m}))
                .collect::<Vec<_>>(),
            "tangent_pattern": p.tangent_classes,
            "type": self.kind.to_json(),
            "milnor": self.milnor,
            "tjurina": self.tjurina,
            "quasi_homogeneous": self.quasi_homogeneous,
        })
    }

    fn sort_key(&self) -> (Vec<usize>, usize, String) {
        let coords = serde_json::to_string(&self.to_json()["point"]).unwrap();
        (self.located.incident.clone(), self.located.orbit_size, coords)
    }
}

impl fmt::Display for SingularPointRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.located;
        write!(
            f,
            "{} x{} on conics {:?}: {}, mu={}, tau={}{}",
            approx_string(&p.point),
            p.orbit_size,
            p.incident,
            self.kind,
            self.milnor,
            self.tjurina,
            if self.quasi_homogeneous { "" } else { " (not quasi-homogeneous)" }
        )
    }
}

/// Records for every singular point of the arrangement curve, canonically ordered.
pub fn singular_records(arr: &ConicArrangement) -> Result<Vec<SingularPointRecord>, SingularError> {
    let f = defining_polynomial(arr);
    let located = locate_singular_points(arr);
    let mut records = located
        .into_par_iter()
        .map(|p| {
            let milnor = local_milnor(&f, &p.point)?;
            let tjurina = local_tjurina(&f, &p.point)?;
            let kind = classify_point(&p);
            Ok(SingularPointRecord { located: p, kind, milnor, tjurina, quasi_homogeneous: milnor == tjurina })
        })
        .collect::<Result<Vec<_>, SingularError>>()?;
    records.sort_by_cached_key(|r| r.sort_key());
    Ok(records)
}

/// Weak combinatorics with orbits weighted by size, the flag saying every point is one of
/// the four admissible types, and the records themselves.
pub fn weak_combinatorics(
    arr: &ConicArrangement,
) -> Result<(WeakCombinatorics, bool, Vec<SingularPointRecord>), SingularError> {
    let records = singular_records(arr)?;
    let mut wc = WeakCombinatorics::new(arr.len() as u64, 0, 0, 0, 0);
    for r in &records {
        let n = r.located.orbit_size as u64;
        match r.kind {
            SingularityType::Node => wc.n2 += n,
            SingularityType::Tacnode => wc.t2 += n,
            SingularityType::OrdinaryTriple => wc.n3 += n,
            SingularityType::OrdinaryQuadruple => wc.n4 += n,
            SingularityType::Other { .. } => wc.other_count += n,
        }
    }
    let q_flag = wc.other_count == 0;
    Ok((wc, q_flag, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::arrangement::{fixtures, validate_arrangement};

    fn rational_point(p: &ProjectivePoint) -> Option<[crate::algebra::Rational; 3]> {
        Some([p[0].as_rational()?, p[1].as_rational()?, p[2].as_rational()?])
    }

    fn pair_totals(points: &[LocatedPoint], k: usize) -> Vec<u32> {
        let mut totals = vec![0; k * k];
        for p in points {
            for (&(i, j), &m) in &p.pair_multiplicities {
                totals[i * k + j] += m * p.orbit_size as u32;
            }
        }
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| totals[i * k + j]).collect()
    }

    #[test]
    fn tangent_pair_has_two_tacnodes() {
        let arr = fixtures::tangent_pair();
        let points = locate_singular_points(&arr);
        assert_eq!(points.len(), 2);
        let mut coords: Vec<_> = points.iter().map(|p| rational_point(&p.point).unwrap()).collect();
        coords.sort();
        assert_eq!(coords, vec![[int(-1), int(0), int(1)], [int(1), int(0), int(1)]]);
        assert!(points.iter().all(|p| p.pair_multiplicities[&(0, 1)] == 2));
        let (wc, q, records) = weak_combinatorics(&arr).unwrap();
        assert_eq!(wc, WeakCombinatorics::new(2, 0, 2, 0, 0));
        assert!(q);
        assert!(records.iter().all(|r| r.milnor == 3 && r.tjurina == 3));
    }

    #[test]
    fn generic_pair_is_one_orbit_of_four_nodes() {
        let arr = fixtures::generic_pair();
        let points = locate_singular_points(&arr);
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].orbit_size, 4);
        let (wc, q, _) = weak_combinatorics(&arr).unwrap();
        assert_eq!(wc, WeakCombinatorics::new(2, 4, 0, 0, 0));
        assert!(q);
    }

    #[test]
    fn pencil_base_points() {
        let (wc, q, records) = weak_combinatorics(&fixtures::pencil3()).unwrap();
        assert_eq!(wc, WeakCombinatorics::new(3, 0, 0, 4, 0));
        assert!(q);
        let mut coords: Vec<_> = records.iter().map(|r| rational_point(&r.located.point).unwrap()).collect();
        coords.sort();
        let expected: Vec<_> = [[-1, -1], [-1, 1], [1, -1], [1, 1]].iter().map(|[a, b]| [int(*a), int(*b), int(1)]).collect();
        assert_eq!(coords, expected);
        assert!(records.iter().all(|r| r.milnor == 4 && r.tjurina == 4));

        let (wc, _, records) = weak_combinatorics(&fixtures::pencil4()).unwrap();
        assert_eq!(wc, WeakCombinatorics::new(4, 0, 0, 0, 4));
        assert!(records.iter().all(|r| r.milnor == 9 && r.tjurina == 9));
    }

    #[test]
    fn five_circles() {
        let arr = fixtures::five_circles();
        let (wc, q, records) = weak_combinatorics(&arr).unwrap();
        assert!(!q);
        let origin = records
            .iter()
            .find(|r| rational_point(&r.located.point) == Some([int(0), int(0), int(1)]))
            .unwrap();
        assert_eq!(origin.located.incident, vec![0, 1, 2, 3, 4]);
        assert_eq!((origin.milnor, origin.tjurina), (16, 15));
        assert!(!origin.quasi_homogeneous);
        assert!(matches!(origin.kind, SingularityType::Other { multiplicity: 5, .. }));
        // circular points: one orbit of size two on every circle, x^2 + 1 = 0 after normalization
        let circular = records.iter().find(|r| r.located.orbit_size == 2).unwrap();
        assert_eq!(circular.located.incident.len(), 5);
        assert!(circular.located.point[2].is_zero());
        assert_eq!(circular.located.point[0].minimal_polynomial(), crate::algebra::UPoly::from_ints(&[1, 0, 1]));
        assert_eq!(wc.n2, 10);
        assert_eq!(wc.other_count, 3);
        assert_eq!(pair_totals(&locate_singular_points(&arr), 5), vec![4; 10]);
    }

    #[test]
    fn pair_totals_are_four() {
        for arr in [fixtures::tangent_pair(), fixtures::generic_pair(), fixtures::pencil3(), fixtures::pencil4()] {
            let k = arr.len();
            assert_eq!(pair_totals(&locate_singular_points(&arr), k), vec![4; k * (k - 1) / 2]);
        }
    }

    #[test]
    fn hyperosculating_pair() {
        let arr = validate_arrangement(vec![
            Conic::from_ints([1, 0, 0, 0, 0, -1]),
            Conic::from_ints([1, 1, 0, 0, 0, -1]),
        ])
        .unwrap();
        let points = locate_singular_points(&arr);
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].pair_multiplicities[&(0, 1)], 4);
        let kind = classify_point(&points[0]);
        assert_eq!(kind, SingularityType::Other { multiplicity: 2, tangent_pattern: vec![2], max_pair_multiplicity: 4 });
    }

    #[test]
    fn records_are_sorted_and_serializable() {
        let (_, _, records) = weak_combinatorics(&fixtures::five_circles()).unwrap();
        let keys: Vec<_> = records.iter().map(|r| r.sort_key()).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
        let v = records.iter().map(|r| r.to_json()).collect::<Vec<_>>();
        assert!(serde_json::to_string(&v).unwrap().contains("minimal_polynomial"));
    }
}
