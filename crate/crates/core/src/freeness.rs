//! Minimal degree of Jacobian relations, global Tjurina number, and the du Plessis–Wall
//! freeness criterion.

use std::fmt;

use rayon::prelude::*;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{
    certified_kernel, certified_rank, int, monomial_basis, monomial_count, monomial_index, rat, rational_string,
    HomogeneousForm, MPoly, Rational, Scalar, SparseRow, UPoly,
};
use crate::arrangement::ArrangementPolynomial;
use crate::combinatorics::WeakCombinatorics;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreenessError {
    #[error("curve is not reduced")]
    NotReduced,
    #[error("Hilbert function did not stabilize by degree {0}; singularities are not isolated")]
    NonIsolatedSingularities(u32),
    #[error("curve must have degree at least 1")]
    DegreeTooSmall,
}

/// Images of the basis of `(S_r)^3` under `(a, b, c) -> a f_x + b f_y + c f_z`, as sparse
/// rows over the monomial basis of `S_{r+d-1}`. Row `i * |S_r| + j` is the `j`-th monomial
/// of degree `r` in slot `i`.
pub fn jacobian_rows(grad: &[HomogeneousForm<Rational>; 3], r: u32) -> Vec<SparseRow> {
    let mut rows = Vec::with_capacity(3 * monomial_count(r));
    for g in grad {
        for m in monomial_basis(r) {
            let mut row: SparseRow = g
                .poly()
                .terms()
                .iter()
                .map(|(e, c)| (monomial_index(&[e[0] + m[0], e[1] + m[1], e[2] + m[2]]), c.clone()))
                .collect();
            row.sort_unstable_by_key(|p| p.0);
            rows.push(row);
        }
    }
    rows
}

/// A nontrivial relation `a f_x + b f_y + c f_z = 0` with `a, b, c` of degree `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyzygyWitness {
    pub degree: u32,
    pub forms: [HomogeneousForm<Rational>; 3],
}

impl SyzygyWitness {
    /// Checks the relation exactly against the partials of `f`.
    pub fn holds_for(&self, f: &HomogeneousForm<Rational>) -> bool {
        let grad = f.gradient();
        let sum = (0..3).fold(MPoly::zero(), |acc, i| acc.add(&self.forms[i].poly().mul(grad[i].poly())));
        sum.is_zero() && self.forms.iter().any(|a| !a.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "a": self.forms[0].coefficient_map(rational_string),
            "b": self.forms[1].coefficient_map(rational_string),
            "c": self.forms[2].coefficient_map(rational_string),
        })
    }
}

impl fmt::Display for SyzygyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.forms[0], self.forms[1], self.forms[2])
    }
}

/// First point `(a, b, 1)` with small integer coordinates off the curve.
fn point_off_curve(f: &HomogeneousForm<Rational>) -> [Rational; 3] {
    for radius in 0i64.. {
        for a in -radius..=radius {
            for b in -radius..=radius {
                if a.abs().max(b.abs()) != radius {
                    continue;
                }
                let p = [int(a), int(b), int(1)];
                if !Scalar::is_zero(&f.eval(&p)) {
                    return p;
                }
            }
        }
    }
    unreachable!()
}

/// Decides whether `f` has no repeated factor.
///
/// With `P` off the curve, restrict `f` to the lines through `P` and `(1, t, 0)`. A repeated
/// factor of `f` gives a repeated root on every such line. Conversely, if `f` is reduced,
/// the restriction has a repeated root only for the roots `t` of a nonzero discriminant of
/// degree at most `d(d-1)`, so `d(d-1) + 1` lines decide.
pub fn is_reduced(f: &HomogeneousForm<Rational>) -> bool {
    if f.is_zero() {
        return false;
    }
    let d = f.degree();
    if d <= 1 {
        return true;
    }
    let p = point_off_curve(f);
    let s = MPoly::<Rational>::var(0);
    (0..=d * (d - 1)).any(|t| {
        let q = [int(1), int(t as i64), int(0)];
        let subs: [MPoly<Rational>; 3] =
            std::array::from_fn(|i| s.scale(&p[i]).add(&MPoly::constant(q[i].clone())));
        let g = f.poly().compose(&subs);
        let coeffs: Vec<Rational> = (0..=d).map(|k| g.coeff(&[k, 0, 0])).collect();
        UPoly::new(coeffs).is_squarefree()
    })
}

fn check_reduced(f: &ArrangementPolynomial) -> Result<(), FreenessError> {
    if f.degree() == 0 {
        return Err(FreenessError::DegreeTooSmall);
    }
    // arrangement products of validated conics are reduced by construction
    if f.source().is_none() && !is_reduced(f.form()) {
        return Err(FreenessError::NotReduced);
    }
    Ok(())
}

/// Smallest `r` with a nontrivial relation among the partials, and one such relation.
pub fn mdr(f: &ArrangementPolynomial) -> Result<SyzygyWitness, FreenessError> {
    check_reduced(f)?;
    let grad = f.form().gradient();
    for r in 0..f.degree() {
        let rows = jacobian_rows(&grad, r);
        // relations among the rows are the kernel of the transpose
        let mut columns: Vec<SparseRow> = vec![Vec::new(); monomial_count(r + f.degree() - 1)];
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row {
                columns[*i].push((j, c.clone()));
            }
        }
        let Some(v) = certified_kernel(&columns, rows.len()).into_iter().next() else { continue };
        let n = monomial_count(r);
        let forms = std::array::from_fn(|i| HomogeneousForm::from_dense(r, &v[i * n..(i + 1) * n]));
        return Ok(SyzygyWitness { degree: r, forms });
    }
    unreachable!("the Koszul relations have degree d - 1")
}

/// `dim S_t - dim (J_f)_t`.
pub fn hilbert_function(grad: &[HomogeneousForm<Rational>; 3], d: u32, t: u32) -> usize {
    let dim = monomial_count(t);
    if t + 1 < d {
        return dim;
    }
    dim - certified_rank(&jacobian_rows(grad, t + 1 - d), dim)
}

/// Total Tjurina number: the eventual value of the Hilbert function of `S / J_f`, taken once
/// three consecutive degrees from `3(d - 2)` on agree.
pub fn global_tjurina(f: &ArrangementPolynomial) -> Result<u64, FreenessError> {
    check_reduced(f)?;
    let d = f.degree();
    let grad = f.form().gradient();
    let cap = 5 * d;
    let start = 3 * d.saturating_sub(2);
    let mut values: Vec<usize> = (start..start + 3).into_par_iter().map(|t| hilbert_function(&grad, d, t)).collect();
    let mut t = start + 2;
    loop {
        let n = values.len();
        if values[n - 1] == values[n - 2] && values[n - 2] == values[n - 3] {
            return Ok(values[n - 1] as u64);
        }
        t += 1;
        if t > cap {
            return Err(FreenessError::NonIsolatedSingularities(cap));
        }
        values.push(hilbert_function(&grad, d, t));
    }
}

/// `n2 + 3 t2 + 4 n3 + 9 n4`.
pub fn tjurina_from_combinatorics(wc: &WeakCombinatorics) -> u64 {
    wc.n2 + 3 * wc.t2 + 4 * wc.n3 + 9 * wc.n4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotFreeReason {
    /// `r > (d - 1)/2`
    MdrAboveThreshold,
    /// `r^2 - r(d - 1) + (d - 1)^2 != tau`
    TjurinaMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Free,
    NotFree(NotFreeReason),
}

impl Verdict {
    pub fn is_free(&self) -> bool {
        *self == Verdict::Free
    }

    pub fn code(&self) -> &'static str {
        match self {
            Verdict::Free => "free",
            Verdict::NotFree(NotFreeReason::MdrAboveThreshold) => "mdr_above_threshold",
            Verdict::NotFree(NotFreeReason::TjurinaMismatch) => "tjurina_mismatch",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Free => f.write_str("Free"),
            Verdict::NotFree(NotFreeReason::MdrAboveThreshold) => f.write_str("NotFree (mdr above (d-1)/2)"),
            Verdict::NotFree(NotFreeReason::TjurinaMismatch) => f.write_str("NotFree (r^2 - r(d-1) + (d-1)^2 != tau)"),
        }
    }
}

/// `r^2 - r(d - 1) + (d - 1)^2`
pub fn dpw_value(d: u32, r: u32) -> i64 {
    let (d, r) = (d as i64, r as i64);
    r * r - r * (d - 1) + (d - 1) * (d - 1)
}

pub fn du_plessis_wall(d: u32, r: u32, tau: u64) -> Verdict {
    if 2 * r > d - 1 {
        Verdict::NotFree(NotFreeReason::MdrAboveThreshold)
    } else if dpw_value(d, r) == tau as i64 {
        Verdict::Free
    } else {
        Verdict::NotFree(NotFreeReason::TjurinaMismatch)
    }
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    pub degree: u32,
    pub tau: u64,
    pub mdr: u32,
    pub witness: SyzygyWitness,
    pub threshold: Rational,
    pub dpw_value: i64,
    pub verdict: Verdict,
    pub weak_combinatorics: Option<WeakCombinatorics>,
}

impl FreenessReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "tau": self.tau,
            "mdr": self.mdr,
            "witness": self.witness.to_json(),
            "dpw_threshold": rational_string(&self.threshold),
            "dpw_value": self.dpw_value,
            "verdict": if self.verdict.is_free() { "Free" } else { "NotFree" },
            "reason": self.verdict.code(),
            "weak_combinatorics": self.weak_combinatorics,
        })
    }
}

impl fmt::Display for FreenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows = vec![
            ("degree d", self.degree.to_string()),
            ("tau(C)", self.tau.to_string()),
            ("mdr r", self.mdr.to_string()),
            ("witness", self.witness.to_string()),
            ("(d-1)/2", self.threshold.to_string()),
            ("r^2-r(d-1)+(d-1)^2", self.dpw_value.to_string()),
        ];
        if let Some(wc) = &self.weak_combinatorics {
            rows.push(("weak combinatorics", wc.to_string()));
        }
        rows.push(("verdict", self.verdict.to_string()));
        let lines: Vec<String> = rows.iter().map(|(k, v)| format!("{k:<20}{v}")).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

impl FreenessReport {
    pub fn assemble(degree: u32, witness: SyzygyWitness, tau: u64, weak_combinatorics: Option<WeakCombinatorics>) -> Self {
        FreenessReport {
            degree,
            tau,
            mdr: witness.degree,
            threshold: rat(degree as i64 - 1, 2),
            dpw_value: dpw_value(degree, witness.degree),
            verdict: du_plessis_wall(degree, witness.degree, tau),
            witness,
            weak_combinatorics,
        }
    }
}

/// `mdr`, `tau`, and the verdict. Arrangement curves also carry their weak combinatorics.
pub fn freeness_report(f: &ArrangementPolynomial) -> Result<FreenessReport, FreenessError> {
    check_reduced(f)?;
    let witness = mdr(f)?;
    let tau = global_tjurina(f)?;
    let weak_combinatorics = match f.source() {
        Some(arr) => crate::singular::weak_combinatorics(arr).ok().map(|w| w.0),
        None => None,
    };
    Ok(FreenessReport::assemble(f.degree(), witness, tau, weak_combinatorics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{defining_polynomial, fixtures};
    use crate::parse::parse_form;
    use crate::singular::weak_combinatorics;

    fn curve(text: &str) -> ArrangementPolynomial {
        ArrangementPolynomial::curve(parse_form(text).unwrap())
    }

    fn local_sum(arr: &crate::arrangement::ConicArrangement) -> u64 {
        let (_, _, records) = weak_combinatorics(arr).unwrap();
        records.iter().map(|r| r.located.orbit_size as u64 * r.tjurina as u64).sum()
    }

    #[test]
    fn mdr_examples() {
        let f = curve("x^2 + y^2 + z^2");
        let w = mdr(&f).unwrap();
        assert_eq!(w.degree, 1);
        assert!(w.holds_for(f.form()));
        let f = curve("x*y*z");
        let w = mdr(&f).unwrap();
        assert_eq!(w.degree, 1);
        assert!(w.holds_for(f.form()));
        for d in 2..=5 {
            let f = curve(&format!("x^{d} + y^{d} + z^{d}"));
            let w = mdr(&f).unwrap();
            assert_eq!(w.degree, d - 1);
            assert!(w.holds_for(f.form()));
        }
    }

    #[test]
    fn tjurina_of_small_curves() {
        assert_eq!(global_tjurina(&curve("x^2 + y^2 + z^2")).unwrap(), 0);
        assert_eq!(global_tjurina(&curve("x*y*z")).unwrap(), 3);
        // cuspidal cubic: one A2 point
        assert_eq!(global_tjurina(&curve("y^2*z - x^3")).unwrap(), 2);
    }

    #[test]
    fn fixtures_against_local_sums() {
        for (arr, tau) in [
            (fixtures::generic_pair(), 4),
            (fixtures::tangent_pair(), 6),
            (fixtures::pencil3(), 16),
            (fixtures::pencil4(), 36),
        ] {
            let f = defining_polynomial(&arr);
            assert_eq!(global_tjurina(&f).unwrap(), tau);
            assert_eq!(local_sum(&arr), tau);
            let report = freeness_report(&f).unwrap();
            assert!(!report.verdict.is_free());
            assert!(report.witness.holds_for(f.form()));
        }
    }

    #[test]
    fn five_circles_tjurina() {
        let arr = fixtures::five_circles();
        let f = defining_polynomial(&arr);
        let start = std::time::Instant::now();
        let tau = global_tjurina(&f).unwrap();
        eprintln!("five circles tau = {tau} in {:?}", start.elapsed());
        assert_eq!(tau, local_sum(&arr));
    }

    #[test]
    fn criterion_arithmetic() {
        // r = 2 exceeds (4 - 1)/2 even though 4 - 6 + 9 = 7
        assert_eq!(du_plessis_wall(4, 2, 7), Verdict::NotFree(NotFreeReason::MdrAboveThreshold));
        assert_eq!(du_plessis_wall(5, 2, 12), Verdict::Free);
        assert_eq!(du_plessis_wall(5, 2, 11), Verdict::NotFree(NotFreeReason::TjurinaMismatch));
        assert_eq!(du_plessis_wall(6, 3, 0), Verdict::NotFree(NotFreeReason::MdrAboveThreshold));
        let r = freeness_report(&curve("x*y*z")).unwrap();
        assert_eq!((r.degree, r.mdr, r.tau, r.dpw_value, r.verdict), (3, 1, 3, 3, Verdict::Free));
        let r = freeness_report(&curve("x^2+y^2+z^2")).unwrap();
        assert_eq!(r.verdict, Verdict::NotFree(NotFreeReason::MdrAboveThreshold));
    }

    #[test]
    fn combinatorial_tjurina() {
        assert_eq!(tjurina_from_combinatorics(&WeakCombinatorics::new(2, 4, 0, 0, 0)), 4);
        assert_eq!(tjurina_from_combinatorics(&WeakCombinatorics::new(3, 0, 0, 4, 0)), 16);
        assert_eq!(tjurina_from_combinatorics(&WeakCombinatorics::new(5, 1, 1, 1, 1)), 17);
    }

    #[test]
    fn reducedness() {
        assert!(is_reduced(&parse_form("x*y*z").unwrap()));
        assert!(!is_reduced(&parse_form("x^2*y").unwrap()));
        assert!(!is_reduced(&parse_form("(x^2 + y^2 - z^2)^2 * x").unwrap()));
        assert!(is_reduced(&parse_form("(x^2-y*z)*(x^2+y*z)").unwrap()));
        assert_eq!(mdr(&curve("x^2*y")), Err(FreenessError::NotReduced));
        assert_eq!(global_tjurina(&curve("(x+y)^2*z")), Err(FreenessError::NotReduced));
    }
}
