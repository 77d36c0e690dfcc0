//! Arithmetic of weak combinatorics: the count identity, the freeness equation, the
//! orbifold inequality with its constants, and exhaustive enumeration.

use std::fmt;

use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{int, rat, serialize_rationals, Rational};
use crate::singular::SingularityType;

/// `(k; n2, t2, n3, n4)` plus the number of singular points of any other type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WeakCombinatorics {
    pub k: u64,
    pub n2: u64,
    pub t2: u64,
    pub n3: u64,
    pub n4: u64,
    pub other_count: u64,
}

impl WeakCombinatorics {
    pub fn new(k: u64, n2: u64, t2: u64, n3: u64, n4: u64) -> Self {
        WeakCombinatorics { k, n2, t2, n3, n4, other_count: 0 }
    }

    /// `t2 + n3 + 3 n4`, the part of the Tjurina number above `2k^2 - 2k`.
    fn excess(&self) -> i128 {
        (self.t2 + self.n3 + 3 * self.n4) as i128
    }
}

impl fmt::Display for WeakCombinatorics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}, {}, {})", self.k, self.n2, self.t2, self.n3, self.n4)?;
        if self.other_count > 0 {
            write!(f, " + {} other", self.other_count)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("alpha = {alpha} is outside the validity window for {kind}")]
    AlphaOutOfWindow { kind: String, alpha: Rational },
    #[error("no orbifold Euler number is available for {0}")]
    UnsupportedType(String),
    #[error("alpha window [3/(2k), 1/2] is empty for k = {0}")]
    EmptyWindow(u64),
    #[error("the inequality needs k >= 3, got k = {0}")]
    KTooSmall(u64),
}

/// Pairs of distinct conics meet in 4 points counted with multiplicity.
pub fn check_count(wc: &WeakCombinatorics) -> bool {
    wc.n2 + 2 * wc.t2 + 3 * wc.n3 + 6 * wc.n4 == 2 * wc.k * (wc.k - 1)
}

/// Integer roots `r` with `0 <= r <= (2k - 1)/2` of
/// `r^2 - r(2k - 1) + 2k^2 - 2k + 1 - (t2 + n3 + 3 n4) = 0`.
pub fn freeness_equation_roots(wc: &WeakCombinatorics) -> Vec<u64> {
    let k = wc.k as i128;
    let disc = (2 * k - 1).pow(2) - 4 * (2 * k * k - 2 * k + 1 - wc.excess());
    if disc < 0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    if s * s != disc {
        return Vec::new();
    }
    let mut roots: Vec<u64> = [2 * k - 1 - s, 2 * k - 1 + s]
        .into_iter()
        .filter(|n| n % 2 == 0 && *n >= 0 && n / 2 <= k - 1)
        .map(|n| (n / 2) as u64)
        .collect();
    roots.dedup();
    roots
}

/// `t2 + n3 + 3 n4 >= k^2 - k + 3/4`: the freeness equation has real roots.
pub fn discriminant_condition(wc: &WeakCombinatorics) -> bool {
    let k = wc.k as i128;
    4 * wc.excess() >= 4 * k * k - 4 * k + 3
}

/// All `(n2, t2, n3, n4) >= 0` with `n2 + 2 t2 + 3 n3 + 6 n4 = 2k^2 - 2k`, in increasing
/// lexicographic order of `(n4, n3, t2)`.
pub fn enumerate_admissible(k: u64) -> impl Iterator<Item = WeakCombinatorics> {
    let total = 2 * k * (k - 1);
    (0..=total / 6).flat_map(move |n4| block(k, n4))
}

fn block(k: u64, n4: u64) -> impl Iterator<Item = WeakCombinatorics> {
    let rest = 2 * k * (k - 1) - 6 * n4;
    (0..=rest / 3).flat_map(move |n3| {
        let rest = rest - 3 * n3;
        (0..=rest / 2).map(move |t2| WeakCombinatorics::new(k, rest - 2 * t2, t2, n3, n4))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremAReport {
    pub k_min: u64,
    pub k_max: u64,
    pub vectors_checked: u64,
    /// `(k, number of admissible vectors)`
    pub per_k: Vec<(u64, u64)>,
    pub counterexamples: Vec<(WeakCombinatorics, Vec<u64>)>,
}

/// Runs the freeness equation over every admissible vector for `k_min <= k <= k_max`.
pub fn verify_theorem_a(k_min: u64, k_max: u64) -> TheoremAReport {
    assert!(2 <= k_min && k_min <= k_max, "need 2 <= k_min <= k_max");
    let mut per_k = Vec::new();
    let mut counterexamples = Vec::new();
    for k in k_min..=k_max {
        let blocks: Vec<(u64, Vec<(WeakCombinatorics, Vec<u64>)>)> = (0..=2 * k * (k - 1) / 6)
            .into_par_iter()
            .map(|n4| {
                let mut count = 0;
                let mut bad = Vec::new();
                for wc in block(k, n4) {
                    count += 1;
                    let roots = freeness_equation_roots(&wc);
                    if !roots.is_empty() {
                        bad.push((wc, roots));
                    }
                }
                (count, bad)
            })
            .collect();
        per_k.push((k, blocks.iter().map(|b| b.0).sum()));
        counterexamples.extend(blocks.into_iter().flat_map(|b| b.1));
    }
    counterexamples.sort();
    let vectors_checked = per_k.iter().map(|p| p.1).sum();
    TheoremAReport { k_min, k_max, vectors_checked, per_k, counterexamples }
}

/// A local orbifold Euler number, or an upper bound for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbifoldEuler {
    Exact(Rational),
    UpperBound(Rational),
}

impl OrbifoldEuler {
    pub fn value(&self) -> &Rational {
        match self {
            OrbifoldEuler::Exact(v) | OrbifoldEuler::UpperBound(v) => v,
        }
    }
}

/// Milnor number of each admissible type.
pub fn type_milnor(kind: &SingularityType) -> Option<u32> {
    match kind {
        SingularityType::Node => Some(1),
        SingularityType::Tacnode => Some(3),
        SingularityType::OrdinaryTriple => Some(4),
        SingularityType::OrdinaryQuadruple => Some(9),
        SingularityType::Other { .. } => None,
    }
}

/// Local orbifold Euler number of the pair `(P^2, alpha D)` at a point of the given type.
pub fn orbifold_euler(kind: &SingularityType, alpha: &Rational) -> Result<OrbifoldEuler, CombinatoricsError> {
    let zero = int(0);
    let one = int(1);
    let out_of_window = || CombinatoricsError::AlphaOutOfWindow { kind: kind.to_string(), alpha: alpha.clone() };
    match kind {
        SingularityType::Node => {
            if alpha < &zero || alpha > &one {
                return Err(out_of_window());
            }
            Ok(OrbifoldEuler::Exact((&one - alpha) * (&one - alpha)))
        }
        SingularityType::Tacnode => {
            if alpha <= &rat(1, 4) || alpha > &rat(3, 4) {
                return Err(out_of_window());
            }
            let v = int(3) - int(4) * alpha;
            Ok(OrbifoldEuler::Exact(&v * &v / int(8)))
        }
        SingularityType::OrdinaryTriple | SingularityType::OrdinaryQuadruple => {
            let m = if *kind == SingularityType::OrdinaryTriple { 3 } else { 4 };
            if alpha < &zero || alpha > &rat(2, m) {
                return Err(out_of_window());
            }
            let v = &one - int(m) * alpha / int(2);
            Ok(OrbifoldEuler::UpperBound(&v * &v))
        }
        SingularityType::Other { .. } => Err(CombinatoricsError::UnsupportedType(kind.to_string())),
    }
}

/// The value of alpha used for the inequality.
pub fn selected_alpha() -> Rational {
    rat(1, 2)
}

/// `[3/(2k), 1/2]`: alpha making the pair effective and log canonical.
pub fn alpha_window(k: u64) -> Result<(Rational, Rational), CombinatoricsError> {
    let lo = rat(3, 2 * k as i64);
    let hi = rat(1, 2);
    if lo > hi {
        return Err(CombinatoricsError::EmptyWindow(k));
    }
    Ok((lo, hi))
}

/// `3((mu - 1)/2 + 1 - e_orb)` at `alpha = 1/2`, a lower bound for the point's
/// contribution to the left side of the orbifold inequality.
pub fn langer_summand(kind: &SingularityType) -> Result<Rational, CombinatoricsError> {
    let mu = type_milnor(kind).ok_or_else(|| CombinatoricsError::UnsupportedType(kind.to_string()))?;
    let e = orbifold_euler(kind, &selected_alpha())?;
    Ok(int(3) * ((int(mu as i64) - int(1)) / int(2) + int(1) - e.value()))
}

const Q_TYPES: [SingularityType; 4] = [
    SingularityType::Node,
    SingularityType::Tacnode,
    SingularityType::OrdinaryTriple,
    SingularityType::OrdinaryQuadruple,
];

fn counts(wc: &WeakCombinatorics) -> [u64; 4] {
    [wc.n2, wc.t2, wc.n3, wc.n4]
}

/// `9/4 n2 + 45/8 t2 + 117/16 n3 + 15 n4`.
pub fn langer_lhs_bound(wc: &WeakCombinatorics) -> Rational {
    Q_TYPES
        .iter()
        .zip(counts(wc))
        .map(|(t, n)| langer_summand(t).unwrap() * int(n as i64))
        .fold(int(0), |a, b| a + b)
}

/// `5k^2 - 3k`, the right side of the orbifold inequality at `alpha = 1/2`.
pub fn langer_rhs(k: u64) -> Rational {
    let k = int(k as i64);
    int(5) * &k * &k - int(3) * k
}

/// Orbifold inequality with the lower bound for the left side.
pub fn check_langer_inequality(wc: &WeakCombinatorics) -> bool {
    langer_lhs_bound(wc) <= langer_rhs(wc.k)
}

/// `8k + n2 + 3/4 n3 >= 5/2 t2`.
pub fn check_theorem_b(wc: &WeakCombinatorics) -> Result<bool, CombinatoricsError> {
    if wc.k < 3 {
        return Err(CombinatoricsError::KTooSmall(wc.k));
    }
    Ok(32 * wc.k + 4 * wc.n2 + 3 * wc.n3 >= 10 * wc.t2)
}

/// `4/9 k^2 + 4/3 k`.
pub fn tacnode_bound(k: u64) -> Rational {
    let k = int(k as i64);
    rat(4, 9) * &k * &k + rat(4, 3) * k
}

/// `t2 <= 4/9 k^2 + 4/3 k`; meaningful for vectors with nodes and tacnodes only.
pub fn check_tacnode_bound(wc: &WeakCombinatorics) -> bool {
    int(wc.t2 as i64) <= tacnode_bound(wc.k)
}

/// Linear form `c_k k + c_2 n2 + c_t t2 + c_3 n3 + c_4 n4 + c_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearForm(#[serde(serialize_with = "serialize_rationals")] pub [Rational; 6]);

impl LinearForm {
    fn eval(&self, wc: &WeakCombinatorics) -> Rational {
        let v = [wc.k, wc.n2, wc.t2, wc.n3, wc.n4, 1];
        self.0.iter().zip(v).map(|(c, x)| c * int(x as i64)).fold(int(0), |a, b| a + b)
    }

    fn sub(&self, o: &LinearForm) -> LinearForm {
        LinearForm(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    fn scale(&self, c: &Rational) -> LinearForm {
        LinearForm(std::array::from_fn(|i| &self.0[i] * c))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBCheck {
    pub k: u64,
    /// Summands for node, tacnode, triple, quadruple.
    #[serde(serialize_with = "serialize_rationals")]
    pub summands: Vec<Rational>,
    pub summands_match: bool,
    /// `5k^2 - 3k` after substituting the count identity, as a linear form.
    pub linear_rhs: LinearForm,
    /// Right minus left side; a positive multiple of the final inequality.
    pub difference: LinearForm,
    pub difference_is_multiple: bool,
    /// Admissible vectors on which the substituted right side equals `5k^2 - 3k`.
    pub vectors_checked: u64,
    pub substitution_holds: bool,
    /// Admissible vectors on which the orbifold inequality and the final inequality agree.
    pub equivalence_holds: bool,
}

impl TheoremBCheck {
    pub fn passed(&self) -> bool {
        self.summands_match && self.difference_is_multiple && self.substitution_holds && self.equivalence_holds
    }
}

/// Re-derives the final inequality from the orbifold inequality at a given `k`.
///
/// The summands are recomputed from the Milnor numbers and orbifold Euler numbers. The
/// right side `5k^2 - 3k` is rewritten with `2k^2 = 2k + n2 + 2 t2 + 3 n3 + 6 n4`, and the
/// difference of the two sides must be a positive multiple of `8k + n2 + 3/4 n3 - 5/2 t2`.
/// Both rewritings are then checked on every admissible vector for this `k`.
pub fn verify_theorem_b(k: u64) -> Result<TheoremBCheck, CombinatoricsError> {
    alpha_window(k)?;
    let summands: Vec<Rational> = Q_TYPES.iter().map(langer_summand).collect::<Result<_, _>>()?;
    let expected = [rat(9, 4), rat(45, 8), rat(117, 16), int(15)];
    let summands_match = summands == expected;

    let zero = || int(0);
    let lhs = LinearForm([zero(), summands[0].clone(), summands[1].clone(), summands[2].clone(), summands[3].clone(), zero()]);
    let count = LinearForm([int(2), int(1), int(2), int(3), int(6), zero()]);
    let mut linear_rhs = count.scale(&rat(5, 2));
    linear_rhs.0[0] -= int(3);
    let difference = linear_rhs.sub(&lhs);
    let target = LinearForm([int(8), int(1), rat(-5, 2), rat(3, 4), zero(), zero()]);
    let ratio = &difference.0[0] / &target.0[0];
    let difference_is_multiple = ratio > int(0) && difference == target.scale(&ratio);

    let mut vectors_checked = 0;
    let mut substitution_holds = true;
    let mut equivalence_holds = true;
    let rhs = langer_rhs(k);
    for wc in enumerate_admissible(k) {
        vectors_checked += 1;
        substitution_holds &= linear_rhs.eval(&wc) == rhs;
        equivalence_holds &= check_langer_inequality(&wc) == check_theorem_b(&wc)?;
    }
    Ok(TheoremBCheck {
        k,
        summands,
        summands_match,
        linear_rhs,
        difference,
        difference_is_multiple,
        vectors_checked,
        substitution_holds,
        equivalence_holds,
    })
}

/// Per-vector outcomes of every check, for tabular reports.
#[derive(Clone, Debug, Serialize)]
pub struct VectorChecks {
    pub vector: WeakCombinatorics,
    pub count: bool,
    pub freeness_roots: Vec<u64>,
    pub discriminant: bool,
    pub theorem_b: Option<bool>,
    pub langer: Option<bool>,
    /// Only for vectors without triple or quadruple points.
    pub tacnode_bound: Option<bool>,
}

pub fn vector_checks(wc: &WeakCombinatorics) -> VectorChecks {
    let b = check_theorem_b(wc).ok();
    VectorChecks {
        vector: *wc,
        count: check_count(wc),
        freeness_roots: freeness_equation_roots(wc),
        discriminant: discriminant_condition(wc),
        theorem_b: b,
        langer: b.map(|_| check_langer_inequality(wc)),
        tacnode_bound: (wc.k >= 3 && wc.n3 == 0 && wc.n4 == 0).then(|| check_tacnode_bound(wc)),
    }
}
