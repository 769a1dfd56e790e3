use thiserror::Error;

use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("not square: {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("host mismatch: {0}")]
    HostMismatch(String),
    #[error("antipode is not bijective")]
    AntipodeNotBijective,
    #[error("functional is not convolution invertible")]
    UNotConvolutionInvertible,
    #[error("identity `{0}` failed")]
    VerificationFailed(String),
    #[error("acting algebra is not the coinvariant subalgebra: {0}")]
    BNotCoinvariant(String),
    #[error("map is not a total integral")]
    GammaNotTotalIntegral,
    #[error("extension is not Galois (rank {rank}, corank {corank})")]
    NotGalois { rank: usize, corank: usize },
    #[error("cleft data failed verification")]
    CleftVerificationFailed(CheckReport),
    #[error("normal basis data invalid: {0}")]
    NormalBasisInvalid(String),
    #[error("Galois map is not surjective")]
    CanNotSurjective,
    #[error("host is not a group algebra")]
    HostNotGroupAlgebra,
    #[error("invalid 3-cocycle: {0}")]
    CocycleInvalid(String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("quasi-associativity failed: {0}")]
    QuasiAssociativityFailed(String),
    #[error("parse error at {line}:{col}: {reason}")]
    ParseError { line: usize, col: usize, reason: String },
    #[error("axioms failed")]
    AxiomError(CheckReport),
    #[error("module is not two-sided: {0}")]
    ModuleNotTwoSided(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
}
