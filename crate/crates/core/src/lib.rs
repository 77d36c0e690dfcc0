//! Exact analysis of arrangements of smooth conics in the complex projective plane:
//! singular points and their Milnor and Tjurina numbers, freeness through the minimal
//! degree of Jacobian relations, and the arithmetic of weak combinatorics.

pub mod algebra;
pub mod analysis;
pub mod arrangement;
pub mod combinatorics;
pub mod freeness;
pub mod parse;
pub mod singular;

pub use algebra::{FieldElement, HomogeneousForm, NumberField, Rational};
pub use analysis::{analyze, AnalysisError, AnalysisReport};
pub use arrangement::{
    defining_polynomial, pencil_members, validate_arrangement, ArrangementDocument, ArrangementError,
    ArrangementPolynomial, Conic, ConicArrangement,
};
pub use combinatorics::{CombinatoricsError, WeakCombinatorics};
pub use freeness::{freeness_report, FreenessError, FreenessReport, Verdict};
pub use parse::{parse_form, ParseError};
pub use singular::{weak_combinatorics, SingularError, SingularPointRecord, SingularityType};
