//! Smooth conics, validated arrangements, defining polynomials, and pencils.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{int, parse_rational, rat, rational_string, FieldElement, HomogeneousForm, MPoly, Rational, Scalar};

/// A 3x3 rational matrix acting on column vectors of projective coordinates.
pub type Matrix3 = [[Rational; 3]; 3];

pub fn det3<C: Scalar>(m: &[[C; 3]; 3]) -> C {
    let minor = |a: &C, b: &C, c: &C, d: &C| a.times(d).minus(&b.times(c));
    m[0][0]
        .times(&minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
        .minus(&m[0][1].times(&minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
        .plus(&m[0][2].times(&minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1])))
}

pub fn identity3() -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { int(1) } else { int(0) }))
}

/// Apply `m` to a projective point with field coordinates.
pub fn apply3(m: &Matrix3, p: &[FieldElement; 3]) -> [FieldElement; 3] {
    std::array::from_fn(|i| {
        (0..3).fold(FieldElement::zero(), |acc, j| acc.plus(&p[j].times(&FieldElement::rational(m[i][j].clone()))))
    })
}

/// Deterministic invertible transformation with small rational entries, drawn from `seed`.
pub fn random_transform(seed: u64) -> Matrix3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m: Matrix3 = std::array::from_fn(|_| {
            std::array::from_fn(|_| {
                let num: i64 = rng.gen_range(-3..=3);
                let den: i64 = if rng.gen_bool(0.2) { 2 } else { 1 };
                rat(num, den)
            })
        });
        if !det3(&m).is_zero() {
            return m;
        }
    }
}

/// `a x^2 + b y^2 + c z^2 + d xy + e xz + f yz`, coefficients in the order `(a, b, c, d, e, f)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Conic {
    coeffs: [Rational; 6],
}

const CONIC_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [1, 0, 1], [0, 1, 1]];

impl Conic {
    pub fn new(coeffs: [Rational; 6]) -> Self {
        Conic { coeffs }
    }

    pub fn from_ints(c: [i64; 6]) -> Self {
        Conic { coeffs: c.map(int) }
    }

    /// `None` unless the form is a nonzero quadratic form.
    pub fn from_form(form: &HomogeneousForm<Rational>) -> Option<Self> {
        if form.degree() != 2 || form.is_zero() {
            return None;
        }
        Some(Conic { coeffs: CONIC_MONOMIALS.map(|m| form.coeff(&m)) })
    }

    pub fn coeffs(&self) -> &[Rational; 6] {
        &self.coeffs
    }

    /// The symmetric matrix `A` with `F(v) = v^T A v`.
    pub fn matrix(&self) -> Matrix3 {
        let [a, b, c, d, e, f] = &self.coeffs;
        let h = |q: &Rational| q / int(2);
        [
            [a.clone(), h(d), h(e)],
            [h(d), b.clone(), h(f)],
            [h(e), h(f), c.clone()],
        ]
    }

    pub fn determinant(&self) -> Rational {
        det3(&self.matrix())
    }

    pub fn is_smooth(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn form(&self) -> HomogeneousForm<Rational> {
        HomogeneousForm::new(2, MPoly::from_terms(CONIC_MONOMIALS.iter().copied().zip(self.coeffs.iter().cloned())))
            .expect("quadratic terms")
    }

    /// True when the coefficient vectors are proportional.
    pub fn proportional(&self, other: &Conic) -> bool {
        (0..6).all(|i| {
            (i + 1..6).all(|j| {
                &self.coeffs[i] * &other.coeffs[j] == &self.coeffs[j] * &other.coeffs[i]
            })
        })
    }

    /// The conic `F(T x)`.
    pub fn transform(&self, t: &Matrix3) -> Conic {
        Conic::from_form(&self.form().transform(t)).expect("an invertible change of coordinates keeps the degree")
    }

    pub fn eval(&self, p: &[FieldElement; 3]) -> FieldElement {
        self.form().to_field().eval(p)
    }

    /// Gradient at `p`; its entries are the coefficients of the tangent line.
    pub fn gradient_at(&self, p: &[FieldElement; 3]) -> [FieldElement; 3] {
        let m = self.matrix();
        std::array::from_fn(|i| {
            (0..3).fold(FieldElement::zero(), |acc, j| {
                acc.plus(&p[j].times(&FieldElement::rational(&m[i][j] * int(2))))
            })
        })
    }

    /// `self + t * other`
    pub fn combine(&self, t: &Rational, other: &Conic) -> Conic {
        Conic { coeffs: std::array::from_fn(|i| &self.coeffs[i] + t * &other.coeffs[i]) }
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form())
    }
}

impl fmt::Debug for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conic({})", self.form())
    }
}

/// One reason an arrangement was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TooFew,
    SingularMember(usize),
    DuplicateMembers(usize, usize),
    /// A pencil parameter giving a singular member.
    SingularPencilMember(Rational),
    /// The two pencil generators are proportional.
    ProportionalGenerators,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFew => write!(f, "an arrangement needs at least two conics"),
            Violation::SingularMember(i) => write!(f, "conic {i} is singular"),
            Violation::DuplicateMembers(i, j) => write!(f, "conics {i} and {j} coincide"),
            Violation::SingularPencilMember(t) => write!(f, "pencil member at t = {t} is singular"),
            Violation::ProportionalGenerators => write!(f, "pencil generators are proportional"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("invalid arrangement: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("{0}")]
    Format(String),
}

impl ArrangementError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ArrangementError::Invalid(v) => v,
            ArrangementError::Format(_) => &[],
        }
    }
}

/// At least two smooth, pairwise distinct conics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConicArrangement {
    conics: Vec<Conic>,
}

/// Check smoothness, distinctness and size; all violations are reported together.
pub fn validate_arrangement(conics: Vec<Conic>) -> Result<ConicArrangement, ArrangementError> {
    let mut violations = Vec::new();
    if conics.len() < 2 {
        violations.push(Violation::TooFew);
    }
    for (i, c) in conics.iter().enumerate() {
        if !c.is_smooth() {
            violations.push(Violation::SingularMember(i));
        }
    }
    for i in 0..conics.len() {
        for j in i + 1..conics.len() {
            if conics[i].proportional(&conics[j]) {
                violations.push(Violation::DuplicateMembers(i, j));
            }
        }
    }
    if violations.is_empty() {
        Ok(ConicArrangement { conics })
    } else {
        Err(ArrangementError::Invalid(violations))
    }
}

impl ConicArrangement {
    pub fn conics(&self) -> &[Conic] {
        &self.conics
    }

    pub fn len(&self) -> usize {
        self.conics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conics.is_empty()
    }

    /// The arrangement in new coordinates: each member `C` becomes `C(T x)`.
    pub fn transform(&self, t: &Matrix3) -> ConicArrangement {
        ConicArrangement { conics: self.conics.iter().map(|c| c.transform(t)).collect() }
    }
}

/// The defining form of a plane curve, remembering the arrangement it came from.
#[derive(Clone, Debug)]
pub struct ArrangementPolynomial {
    form: HomogeneousForm<Rational>,
    source: Option<ConicArrangement>,
}

impl ArrangementPolynomial {
    /// A free-standing curve with no arrangement behind it.
    pub fn curve(form: HomogeneousForm<Rational>) -> Self {
        ArrangementPolynomial { form, source: None }
    }

    pub fn form(&self) -> &HomogeneousForm<Rational> {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn source(&self) -> Option<&ConicArrangement> {
        self.source.as_ref()
    }
}

/// Product of the member quadrics, of degree `2k`.
pub fn defining_polynomial(arr: &ConicArrangement) -> ArrangementPolynomial {
    let form = arr
        .conics
        .iter()
        .map(Conic::form)
        .reduce(|acc, f| acc.mul(&f))
        .expect("validated arrangements are nonempty");
    ArrangementPolynomial { form, source: Some(arr.clone()) }
}

/// The members `g1 + t g2` for each parameter `t`.
pub fn pencil_members(g1: &Conic, g2: &Conic, params: &[Rational]) -> Result<ConicArrangement, ArrangementError> {
    if g1.proportional(g2) {
        return Err(ArrangementError::Invalid(vec![Violation::ProportionalGenerators]));
    }
    let members: Vec<Conic> = params.iter().map(|t| g1.combine(t, g2)).collect();
    let singular: Vec<Violation> = params
        .iter()
        .zip(&members)
        .filter(|(_, c)| !c.is_smooth())
        .map(|(t, _)| Violation::SingularPencilMember(t.clone()))
        .collect();
    if !singular.is_empty() {
        return Err(ArrangementError::Invalid(singular));
    }
    validate_arrangement(members)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ConicRecord {
    pub coeffs: Vec<String>,
}

/// On-disk arrangement document: `{"conics": [{"coeffs": ["1", "1", "-2", "0", "0", "0"]}, ...]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ArrangementDocument {
    pub conics: Vec<ConicRecord>,
}

impl ArrangementDocument {
    pub fn from_conics(conics: &[Conic]) -> Self {
        ArrangementDocument {
            conics: conics
                .iter()
                .map(|c| ConicRecord { coeffs: c.coeffs.iter().map(rational_string).collect() })
                .collect(),
        }
    }

    /// Parse the JSON text; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, ArrangementError> {
        serde_json::from_str(text).map_err(|e| {
            ArrangementError::Format(format!("line {}, column {}: {}", e.line(), e.column(), e))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_conics(&self) -> Result<Vec<Conic>, ArrangementError> {
        self.conics
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                if rec.coeffs.len() != 6 {
                    return Err(ArrangementError::Format(format!(
                        "conic {i}: expected 6 coefficients, found {}",
                        rec.coeffs.len()
                    )));
                }
                let mut out: Vec<Rational> = Vec::with_capacity(6);
                for (j, s) in rec.coeffs.iter().enumerate() {
                    let q = parse_rational(s).ok_or_else(|| {
                        ArrangementError::Format(format!("conic {i}, coefficient {j}: not a rational: {s:?}"))
                    })?;
                    out.push(q);
                }
                Ok(Conic::new(out.try_into().unwrap()))
            })
            .collect()
    }

    pub fn to_arrangement(&self) -> Result<ConicArrangement, ArrangementError> {
        validate_arrangement(self.to_conics()?)
    }
}

/// Fixtures used across tests, benchmarks and the command line.
pub mod fixtures {
    use super::*;

    /// `x^2 + y^2 - z^2` and `x^2 + 2y^2 - z^2`: two tacnodes at `(±1 : 0 : 1)`.
    pub fn tangent_pair() -> ConicArrangement {
        validate_arrangement(vec![Conic::from_ints([1, 1, -1, 0, 0, 0]), Conic::from_ints([1, 2, -1, 0, 0, 0])]).unwrap()
    }

    /// Two conics meeting transversally in four nodes.
    pub fn generic_pair() -> ConicArrangement {
        // x^2 + y^2 - 2z^2 and x^2 + 4y^2 - 4z^2 meet at (±2/√3 : ±√(2/3) : 1)
        validate_arrangement(vec![Conic::from_ints([1, 1, -2, 0, 0, 0]), Conic::from_ints([1, 4, -4, 0, 0, 0])]).unwrap()
    }

    pub fn pencil_generators() -> (Conic, Conic) {
        (Conic::from_ints([1, 1, -2, 0, 0, 0]), Conic::from_ints([1, -1, 0, 0, 0, 0]))
    }

    /// Members `t = 0, 2, 3` of the pencil `x^2 + y^2 - 2z^2 + t (x^2 - y^2)`.
    pub fn pencil3() -> ConicArrangement {
        let (g1, g2) = pencil_generators();
        pencil_members(&g1, &g2, &[int(0), int(2), int(3)]).unwrap()
    }

    /// Members `t = 0, 2, 3, 4` of the same pencil.
    pub fn pencil4() -> ConicArrangement {
        let (g1, g2) = pencil_generators();
        pencil_members(&g1, &g2, &[int(0), int(2), int(3), int(4)]).unwrap()
    }

    /// Five circles of radius 5 through the origin, centred at
    /// `(3,4), (4,3), (-3,4), (-4,3), (5,0)`.
    pub fn five_circles() -> ConicArrangement {
        let circle = |a: i64, b: i64| {
            // (x - a z)^2 + (y - b z)^2 - 25 z^2
            Conic::from_ints([1, 1, a * a + b * b - 25, 0, -2 * a, -2 * b])
        };
        validate_arrangement(vec![circle(3, 4), circle(4, 3), circle(-3, 4), circle(-4, 3), circle(5, 0)]).unwrap()
    }
}
