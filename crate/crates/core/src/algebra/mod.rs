//! Exact arithmetic substrate: rationals, number fields, polynomials, resultants, root
//! isolation, and linear algebra.

mod cbox;
mod form;
pub mod linalg;
mod modular;
mod number_field;
mod resultant;
mod roots;
mod scalar;
mod upoly;

pub use cbox::{CBox, Interval};
pub use form::{
    monomial_basis, monomial_count, monomial_index, AffinePolynomial, HomogeneousForm, MPoly, Monomial,
    VARIABLES,
};
pub use modular::{certified_kernel, certified_rank};
pub use linalg::{kernel_basis, rank, sparse_rank, SparseRow};
pub use number_field::{AlgebraicNumber, FieldElement, NumberField};
pub use resultant::{determinant, resultant};
pub use roots::{factor_squarefree, is_irreducible, isolate_roots, isolate_squarefree, refine_root, refine_to, RootDescriptor};
pub use scalar::{int, rat, to_f64, Rational, Scalar};
pub use upoly::UPoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("minimal polynomial is reducible over the rationals")]
    Reducible,
    #[error("box does not isolate exactly one root")]
    AmbiguousBox,
}

/// Rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}

/// Serializes a sequence of rationals as strings, for `#[serde(serialize_with)]`.
pub fn serialize_rationals<S: serde::Serializer, V: AsRef<[Rational]>>(v: &V, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.as_ref().iter().map(rational_string))
}
