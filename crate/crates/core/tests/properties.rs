use std::sync::Arc;

use conics_core::algebra::linalg::mat_vec;
use conics_core::algebra::{
    int, isolate_roots, isolate_squarefree, kernel_basis, rank, rat, resultant, CBox, FieldElement, HomogeneousForm, MPoly,
    NumberField, Rational, RootDescriptor, Scalar, UPoly,
};
use conics_core::arrangement::{fixtures, random_transform, Matrix3};
use conics_core::combinatorics::check_count;
use conics_core::freeness::{freeness_report, global_tjurina, mdr};
use conics_core::singular::{locate_singular_points, weak_combinatorics};
use conics_core::{defining_polynomial, pencil_members, validate_arrangement, ArrangementPolynomial, Conic};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = i64> {
    -4i64..=4
}

fn field(which: usize) -> Arc<NumberField> {
    let m = match which {
        0 => UPoly::from_ints(&[-2, 0, 1]),
        1 => UPoly::from_ints(&[-1, -1, 0, 1]),
        _ => UPoly::from_ints(&[1, 0, -10, 0, 1]),
    };
    let b = isolate_squarefree(&m).remove(0);
    Arc::new(NumberField::new(m, b).unwrap())
}

fn element(k: &Arc<NumberField>, c: &[(i64, i64)]) -> FieldElement {
    let coords = c.iter().take(k.degree()).map(|&(p, q)| rat(p, q)).collect();
    FieldElement::new(k.clone(), coords)
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-6i64..=6, 1i64..=4), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(which in 0usize..3, a in coords(), b in coords(), c in coords()) {
        let k = field(which);
        let (a, b, c) = (element(&k, &a), element(&k, &b), element(&k, &c));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.plus(&b).minus(&b), a.clone());
        if !Scalar::is_zero(&a) {
            prop_assert!(a.times(&a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(
        rows in 1usize..6,
        cols in 1usize..7,
        entries in proptest::collection::vec(-3i64..=3, 36),
        dup in any::<bool>(),
    ) {
        let mut m: Vec<Vec<Rational>> =
            (0..rows).map(|i| (0..cols).map(|j| int(entries[i * 6 + j])).collect()).collect();
        if dup && rows > 1 {
            // force a dependency
            m[rows - 1] = m[0].iter().zip(&m[1]).map(|(x, y)| x * int(2) - y).collect();
        }
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len() + rank(&m), cols);
        for v in &ker {
            prop_assert!(mat_vec(&m, v).iter().all(|x| Scalar::is_zero(x)));
        }
    }

    #[test]
    fn resultant_detects_common_roots(
        p0 in proptest::collection::vec(small(), 6),
        q0 in proptest::collection::vec(small(), 6),
        (a, b) in (small(), small()),
        t in -6i64..=6,
    ) {
        let conic = |c: &[i64]| Conic::from_ints([c[0], c[1], c[2], c[3], c[4], c[5]]).form().poly().clone();
        let through = |f: MPoly<Rational>| {
            let v = f.eval(&[int(a), int(b), int(1)]);
            f.sub(&MPoly::monomial([0, 0, 2], v))
        };
        let (p, q) = (through(conic(&p0)), through(conic(&q0)));
        prop_assume!(p.degree_in(0) == Some(2) && q.degree_in(0) == Some(2));
        let r = resultant(&p, &q, 0).unwrap();
        prop_assert!(Scalar::is_zero(&r.eval(&[int(0), int(b), int(1)])));

        // away from the common root, vanishing matches a shared factor or a double drop in degree
        let slice = |f: &MPoly<Rational>| {
            UPoly::new(f.coefficients_in(0).iter().map(|c| c.eval(&[int(0), int(t), int(1)])).collect())
        };
        let (ps, qs) = (slice(&p), slice(&q));
        let common = ps.is_zero() || qs.is_zero() || ps.gcd(&qs).degree().unwrap_or(0) > 0;
        let both_drop = Scalar::is_zero(&ps.coeff(2)) && Scalar::is_zero(&qs.coeff(2));
        prop_assert_eq!(Scalar::is_zero(&r.eval(&[int(0), int(t), int(1)])), common || both_drop);
    }

    #[test]
    fn root_isolation(
        linear in proptest::collection::vec((-5i64..=5, 1usize..=3), 0..3),
        quadratic in proptest::collection::vec((-6i64..=6, 1usize..=2), 0..3),
        cubic in any::<bool>(),
    ) {
        let mut u = UPoly::from_ints(&[1]);
        for &(a, e) in &linear {
            u = u.mul(&UPoly::from_ints(&[-a, 1]).pow(e as u32));
        }
        for &(c, e) in &quadratic {
            u = u.mul(&UPoly::from_ints(&[-c, 0, 1]).pow(e as u32));
        }
        if cubic {
            u = u.mul(&UPoly::from_ints(&[-2, 0, 0, 1]));
        }
        prop_assume!(u.degree().unwrap() > 0);
        let roots = isolate_roots(&u);
        prop_assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), u.degree().unwrap());
        let boxes: Vec<CBox> = roots
            .iter()
            .map(|(r, _)| match r {
                RootDescriptor::Rational(q) => CBox::real(q.clone()),
                RootDescriptor::Algebraic(k) => k.root_box().clone(),
            })
            .collect();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                prop_assert!(!boxes[i].intersects(&boxes[j]));
            }
        }
    }
}

fn circle(a: i64, b: i64, r: i64) -> Conic {
    Conic::from_ints([1, 1, a * a + b * b - r * r, 0, -2 * a, -2 * b])
}

/// Rational point on the circle, from the stereographic parameter `s`.
fn circle_point(a: i64, b: i64, r: i64, s: i64) -> [Rational; 3] {
    let d = int(1 + s * s);
    [int(a) + int(r) * int(1 - s * s) / &d, int(b) + int(r) * int(2 * s) / &d, int(1)]
}

fn inverse3(m: &Matrix3) -> Matrix3 {
    let det = conics_core::arrangement::det3(m);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            (&m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]) / &det
        })
    })
}

fn apply(m: &Matrix3, p: &[Rational; 3]) -> [Rational; 3] {
    std::array::from_fn(|i| (0..3).map(|j| &m[i][j] * &p[j]).sum())
}

fn circles() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    proptest::collection::vec((-4i64..=4, -4i64..=4, 1i64..=5), 2..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn defining_polynomial_vanishes_on_members(cs in circles(), s in -5i64..=5, seed in 0u64..1000) {
        let conics: Vec<Conic> = cs.iter().map(|&(a, b, r)| circle(a, b, r)).collect();
        let Ok(arr) = validate_arrangement(conics) else { return Ok(()) };
        let t = random_transform(seed);
        let moved = arr.transform(&t);
        let f = defining_polynomial(&moved);
        let back = inverse3(&t);
        for &(a, b, r) in &cs {
            // F(T x) vanishes at T^-1 p whenever F(p) = 0
            let p = apply(&back, &circle_point(a, b, r, s));
            prop_assert!(Scalar::is_zero(&f.form().eval(&p)));
        }
    }

    #[test]
    fn validation_is_order_independent(
        raw in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 6), 1..5),
        rot in 0usize..4,
    ) {
        let conics: Vec<Conic> =
            raw.iter().map(|c| Conic::from_ints([c[0], c[1], c[2], c[3], c[4], c[5]])).collect();
        let mut permuted = conics.clone();
        permuted.reverse();
        let n = permuted.len();
        permuted.rotate_left(rot % n);
        prop_assert_eq!(validate_arrangement(conics).is_ok(), validate_arrangement(permuted).is_ok());
    }
}

fn conic_strategy() -> impl Strategy<Value = Conic> {
    proptest::collection::vec(-3i64..=3, 6).prop_map(|c| Conic::from_ints([c[0], c[1], c[2], c[3], c[4], c[5]]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pair_multiplicities_sum_to_four(a in conic_strategy(), b in conic_strategy()) {
        let Ok(arr) = validate_arrangement(vec![a, b]) else { return Ok(()) };
        let total: usize = locate_singular_points(&arr)
            .iter()
            .map(|p| p.orbit_size * p.pair_multiplicities.get(&(0, 1)).copied().unwrap_or(0) as usize)
            .sum();
        prop_assert_eq!(total, 4);
    }

    #[test]
    fn pencil_arrangements_satisfy_count(
        g1 in conic_strategy(),
        g2 in conic_strategy(),
        params in proptest::sample::subsequence(vec![-2i64, -1, 0, 1, 2, 3], 2..=3),
    ) {
        let params: Vec<Rational> = params.into_iter().map(int).collect();
        let Ok(arr) = pencil_members(&g1, &g2, &params) else { return Ok(()) };
        let (wc, q_flag, records) = weak_combinatorics(&arr).unwrap();
        for r in &records {
            prop_assert!(r.tjurina <= r.milnor);
            if r.kind.is_q_type() {
                prop_assert_eq!(r.tjurina, r.milnor);
            }
        }
        if q_flag {
            prop_assert!(check_count(&wc));
        }
        let local: u64 = records.iter().map(|r| r.located.orbit_size as u64 * r.tjurina as u64).sum();
        prop_assert_eq!(global_tjurina(&defining_polynomial(&arr)).unwrap(), local);
    }

    #[test]
    fn witnesses_satisfy_identity(
        factors in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 2..5),
        conic in proptest::option::of(conic_strategy()),
    ) {
        let line = |c: &[i64]| {
            HomogeneousForm::from_dense(1, &[int(c[0]), int(c[1]), int(c[2])])
        };
        let mut f = line(&factors[0]);
        for c in &factors[1..] {
            f = f.mul(&line(c));
        }
        if let Some(q) = conic {
            f = f.mul(&q.form());
        }
        prop_assume!(!f.is_zero());
        let curve = ArrangementPolynomial::curve(f.clone());
        let Ok(report) = freeness_report(&curve) else { return Ok(()) };
        prop_assert!(report.witness.holds_for(&f));
        prop_assert!(report.mdr <= report.degree - 1);
    }

    #[test]
    fn freeness_invariants_survive_coordinate_changes(
        factors in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 3..5),
        seed in 0u64..1000,
    ) {
        let mut f = HomogeneousForm::from_dense(0, &[int(1)]);
        for c in &factors {
            f = f.mul(&HomogeneousForm::from_dense(1, &[int(c[0]), int(c[1]), int(c[2])]));
        }
        prop_assume!(!f.is_zero());
        let a = ArrangementPolynomial::curve(f.clone());
        let b = ArrangementPolynomial::curve(f.transform(&random_transform(seed)));
        match (global_tjurina(&a), global_tjurina(&b)) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x, y);
                prop_assert_eq!(mdr(&a).unwrap().degree, mdr(&b).unwrap().degree);
            }
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }

    #[test]
    fn classification_survives_coordinate_changes(which in 0usize..3, seed in 0u64..10_000) {
        let arr = match which {
            0 => fixtures::tangent_pair(),
            1 => fixtures::generic_pair(),
            _ => fixtures::pencil3(),
        };
        let (wc, q, recs) = weak_combinatorics(&arr).unwrap();
        let (wc2, q2, recs2) = weak_combinatorics(&arr.transform(&random_transform(seed))).unwrap();
        prop_assert_eq!(wc, wc2);
        prop_assert_eq!(q, q2);
        let sig = |rs: &[conics_core::SingularPointRecord]| {
            let mut v: Vec<_> = rs.iter().map(|r| (r.kind.name(), r.milnor, r.tjurina, r.located.orbit_size)).collect();
            v.sort();
            v
        };
        prop_assert_eq!(sig(&recs), sig(&recs2));
    }
}

#[test]
fn equal_invariants_outside_the_admissible_types() {
    // members of t x^2 + yz touch pairwise at (0:0:1) and (0:1:0); three branches
    // y = a x^2 give a weighted homogeneous point that is none of the four types
    let params = [int(-1), int(2), int(3)];
    let arr = pencil_members(&Conic::from_ints([0, 0, 0, 0, 0, 1]), &Conic::from_ints([1, 0, 0, 0, 0, 0]), &params).unwrap();
    let (wc, q_flag, records) = weak_combinatorics(&arr).unwrap();
    assert!(!q_flag);
    assert_eq!(wc.other_count, 2);
    for r in &records {
        assert!(!r.kind.is_q_type());
        assert_eq!((r.milnor, r.tjurina), (10, 10));
        assert!(r.quasi_homogeneous);
    }
}
