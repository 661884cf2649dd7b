//! Class forms, generation, extraction, verification and classification.

mod classify;
mod constraints;
mod diffring;
mod exactness;
mod extract;
mod forms;
mod formula;
mod generate;
mod verify;

pub use classify::{
    classify, Candidate, CandidateJson, ClassificationReport, ClassifyError, ReportJson,
    ResidualJson, RootJson, Verdict,
};
pub use constraints::{
    audit, check_relations, relations, Audit, Outcome, RelationCheck, KNOWN_DISCREPANCIES,
};
pub use exactness::{is_exact, is_total_derivative, NotExact};
pub use extract::{extract, Extraction, ExtractionFailure};
pub(crate) use extract::{solve_system, split_coefficients};
pub use forms::{FormClass, FormCoefficients};
pub use generate::{
    generate, generate_coefficients, generate_with, lie_form, tresse_criteria, RootCoefficients,
};
pub use verify::{regeneration_residuals, verify, Residual, Verification};
