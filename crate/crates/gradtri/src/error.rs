use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible series directions: {0}")]
    IncompatibleDirections(String),
    #[error("result window is empty")]
    EmptyWindow,
    #[error("window exceeds known coefficients: {0}")]
    WindowExceedsKnowledge(String),
    #[error("degree {0} outside the known window")]
    DegreeOutsideWindow(i64),
    #[error("characteristic {p} too small for an algebra of dimension {dim}")]
    CharacteristicTooSmall { p: u64, dim: usize },
    #[error("semisimple quotient is not split over the ground field")]
    NotSplit,
    #[error("product of degree {0} exceeds the cutoff")]
    CutoffExceeded(i64),
    #[error("not an upper set: {0}")]
    NotUpperSet(String),
    #[error("not a lower set: {0}")]
    NotLowerSet(String),
    #[error("weight {0} has no special objects")]
    EmptyFiber(String),
    #[error("cartan algebra of weight {0} has negative degrees")]
    NegativeDegreePresent(String),
    #[error("unknown block {0}")]
    UnknownBlock(String),
    #[error("unknown {kind} {name}")]
    Unknown { kind: &'static str, name: String },
    #[error("window exceeds cutoff: {0}")]
    WindowExceedsCutoff(String),
    #[error("module has weights below {0}")]
    WeightNotMinimal(String),
    #[error("not an anti-automorphism: {0}")]
    NotAntiAutomorphism(String),
    #[error("simple characters of weight {0} are linearly dependent")]
    AmbiguousCharacters(String),
    #[error("negative multiplicity while peeling characters: {0}")]
    NegativeCoefficient(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("no special object meets L({0})")]
    NoSpecialWitness(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared or inconsistent id `{0}`")]
    Integrity(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Integrity(_)
            | Error::Usage(_)
            | Error::NotLowerSet(_)
            | Error::NotUpperSet(_)
            | Error::UnknownBlock(_)
            | Error::Unknown { .. } => 2,
            Error::WindowExceedsKnowledge(_)
            | Error::WindowTooSmall(_)
            | Error::WindowExceedsCutoff(_)
            | Error::CutoffExceeded(_)
            | Error::DegreeOutsideWindow(_)
            | Error::EmptyWindow => 3,
            _ => 1,
        }
    }
}
