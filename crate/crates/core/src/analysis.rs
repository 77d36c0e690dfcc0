//! The full pipeline for one arrangement: singular points, freeness, and the inequality
//! checks, with cross-checks between independent computations.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::rational_string;
use crate::arrangement::{defining_polynomial, ArrangementDocument, ConicArrangement};
use crate::combinatorics::{
    check_count, check_tacnode_bound, check_theorem_b, langer_lhs_bound, langer_rhs, tacnode_bound, WeakCombinatorics,
};
use crate::freeness::{global_tjurina, mdr, tjurina_from_combinatorics, FreenessError, FreenessReport};
use crate::singular::{weak_combinatorics, SingularError, SingularPointRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Freeness(#[from] FreenessError),
}

/// Inequality checks for arrangements whose points are all of the four admissible types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityChecks {
    pub count: bool,
    /// Absent for `k < 3`.
    pub theorem_b: Option<bool>,
    pub langer: Option<LangerCheck>,
    /// Only for arrangements with nodes and tacnodes alone, `k >= 3`.
    pub tacnode_bound: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LangerCheck {
    pub lhs_bound: crate::algebra::Rational,
    pub rhs: crate::algebra::Rational,
    pub holds: bool,
}

impl InequalityChecks {
    pub fn evaluate(wc: &WeakCombinatorics) -> Self {
        let big_enough = wc.k >= 3;
        InequalityChecks {
            count: check_count(wc),
            theorem_b: check_theorem_b(wc).ok(),
            langer: big_enough.then(|| {
                let lhs_bound = langer_lhs_bound(wc);
                let rhs = langer_rhs(wc.k);
                let holds = lhs_bound <= rhs;
                LangerCheck { lhs_bound, rhs, holds }
            }),
            tacnode_bound: (big_enough && wc.n3 == 0 && wc.n4 == 0).then(|| check_tacnode_bound(wc)),
        }
    }

    pub fn to_json(&self, k: u64) -> Value {
        json!({
            "count_identity": self.count,
            "theorem_b": self.theorem_b,
            "langer": self.langer.as_ref().map(|l| json!({
                "lhs_bound": rational_string(&l.lhs_bound),
                "rhs": rational_string(&l.rhs),
                "holds": l.holds,
            })),
            "tacnode_bound": self.tacnode_bound.map(|b| json!({
                "bound": rational_string(&tacnode_bound(k)),
                "holds": b,
            })),
        })
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub arrangement: ConicArrangement,
    pub weak_combinatorics: WeakCombinatorics,
    pub q_flag: bool,
    pub records: Vec<SingularPointRecord>,
    /// From the Hilbert function of the Jacobian ideal.
    pub tau_global: u64,
    /// Sum of local Tjurina numbers weighted by orbit size.
    pub tau_local: u64,
    /// `n2 + 3 t2 + 4 n3 + 9 n4`, for arrangements with admissible points only.
    pub tau_combinatorial: Option<u64>,
    pub freeness: FreenessReport,
    pub checks: Option<InequalityChecks>,
}

impl AnalysisReport {
    /// The two Tjurina computations agree, and so does the combinatorial formula when it applies.
    pub fn consistent(&self) -> bool {
        self.tau_global == self.tau_local && self.tau_combinatorial.is_none_or(|t| t == self.tau_global)
    }

    pub fn to_json(&self) -> Value {
        let doc: Value = serde_json::from_str(&ArrangementDocument::from_conics(self.arrangement.conics()).to_json()).unwrap();
        json!({
            "arrangement": doc,
            "weak_combinatorics": self.weak_combinatorics,
            "q_flag": self.q_flag,
            "singular_points": self.records.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "tau": {
                "hilbert": self.tau_global,
                "local_sum": self.tau_local,
                "combinatorial": self.tau_combinatorial,
            },
            "freeness": self.freeness.to_json(),
            "checks": self.checks.as_ref().map(|c| c.to_json(self.weak_combinatorics.k)),
            "consistent": self.consistent(),
        })
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "conics: {}", self.arrangement.len())?;
        for (i, c) in self.arrangement.conics().iter().enumerate() {
            writeln!(f, "  C{i}: {c}")?;
        }
        writeln!(f, "weak combinatorics (k; n2, t2, n3, n4): {}", self.weak_combinatorics)?;
        writeln!(f, "all points node/tacnode/ordinary triple/ordinary quadruple: {}", self.q_flag)?;
        writeln!(f, "singular points (one line per Galois orbit, coordinates approximate):")?;
        for r in &self.records {
            writeln!(f, "  {r}")?;
        }
        write!(f, "tau(C): {} (Hilbert function), {} (sum of local)", self.tau_global, self.tau_local)?;
        if let Some(t) = self.tau_combinatorial {
            write!(f, ", {t} (from combinatorics)")?;
        }
        writeln!(f)?;
        writeln!(f, "mdr: {}  witness: {}", self.freeness.mdr, self.freeness.witness)?;
        writeln!(
            f,
            "du Plessis-Wall: d = {}, (d-1)/2 = {}, r^2-r(d-1)+(d-1)^2 = {}",
            self.freeness.degree, self.freeness.threshold, self.freeness.dpw_value
        )?;
        writeln!(f, "verdict: {}", self.freeness.verdict)?;
        if let Some(c) = &self.checks {
            writeln!(f, "count identity n2+2t2+3n3+6n4 = 2k(k-1): {}", yes_no(c.count))?;
            if let Some(b) = c.theorem_b {
                writeln!(f, "8k + n2 + 3/4 n3 >= 5/2 t2: {}", yes_no(b))?;
            }
            if let Some(l) = &c.langer {
                writeln!(f, "orbifold bound {} <= {}: {}", l.lhs_bound, l.rhs, yes_no(l.holds))?;
            }
            if let Some(t) = c.tacnode_bound {
                writeln!(f, "t2 <= {}: {}", tacnode_bound(self.weak_combinatorics.k), yes_no(t))?;
            }
        }
        if !self.consistent() {
            writeln!(f, "WARNING: Tjurina computations disagree")?;
        }
        Ok(())
    }
}

pub fn analyze(arr: &ConicArrangement) -> Result<AnalysisReport, AnalysisError> {
    let f = defining_polynomial(arr);
    let (located, (witness, tau_global)) =
        rayon::join(|| weak_combinatorics(arr), || (mdr(&f), global_tjurina(&f)));
    let (wc, q_flag, records) = located?;
    let (witness, tau_global) = (witness?, tau_global?);
    let tau_local = records.iter().map(|r| r.located.orbit_size as u64 * r.tjurina as u64).sum();
    Ok(AnalysisReport {
        arrangement: arr.clone(),
        weak_combinatorics: wc,
        q_flag,
        tau_combinatorial: q_flag.then(|| tjurina_from_combinatorics(&wc)),
        checks: q_flag.then(|| InequalityChecks::evaluate(&wc)),
        freeness: FreenessReport::assemble(f.degree(), witness, tau_global, Some(wc)),
        records,
        tau_global,
        tau_local,
    })
}
