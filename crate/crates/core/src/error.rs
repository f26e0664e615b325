use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into three families: usage problems (parse errors,
/// mismatched descriptors, unsupported kinds), mathematical refusals
/// (`NotUnit`, `NotCoprime`, `NotStarEuclidean`, ...) and internal guards
/// (`PostconditionViolation`, `VerificationFailed`) that signal a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid ring parameters: {0}")]
    InvalidParameters(String),
    #[error("descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },
    #[error("element is not a unit")]
    NotUnit,
    #[error("element is not symmetric")]
    NotSymmetric,
    #[error("ring {0} is infinite")]
    InfiniteRing(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pair is not coprime")]
    NotCoprime,
    #[error("a*c is not symmetric")]
    SymmetryViolation,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("postcondition violated: {0}")]
    PostconditionViolation(String),
    #[error("base ring does not have characteristic 2")]
    WrongCharacteristic,
    #[error("not *-Euclidean: {0}")]
    NotStarEuclidean(String),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("a division step exists (s = {0}); refusing to certify")]
    StepExists(String),
    #[error("no block of the element is a unit")]
    NoUnitEntry,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("element is not in GL_*(2,A)")]
    NotGLStar,
    #[error("element is not in SL_*(2,A): {0}")]
    NotSLStar(String),
    #[error("cap of {0} elements exceeded")]
    CapExceeded(usize),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("integral tail could not be solved: {0}")]
    TailUnsolved(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
