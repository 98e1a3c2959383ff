use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("value is not a root of unity: {0}")]
    NotARootOfUnity(String),

    #[error("cochain is not normalized at ({0}, {1})")]
    NotNormalized(usize, usize),

    #[error("not a 2-cocycle: identity fails at (s, t, u) = ({0}, {1}, {2})")]
    NotACocycle(usize, usize, usize),

    #[error("projective relation rho(s)rho(t) = c(s,t)rho(st) fails at (s, t) = ({0}, {1})")]
    MultiplierMismatch(usize, usize),

    #[error("splitting does not trivialize the multiplier at (s, t) = ({0}, {1})")]
    SplittingMismatch(usize, usize),

    #[error("parity violation: eta(-I) != (-1)^{e} I")]
    ParityViolation { e: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid Sato-Tate group data: {0}")]
    InvalidSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("singular curve (discriminant 0)")]
    SingularCurve,

    #[error("bad reduction at p = {0}")]
    BadReduction(u64),

    #[error("prime {0} divides the modulus")]
    BadPrime(u64),

    #[error("generator images do not define a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated at p = {p}: {msg}")]
    InvariantViolation { p: u64, msg: String },

    #[error("empty sample")]
    EmptySample,

    #[error("records lack component class labels required by a non-trivial component group")]
    MissingClassLabels,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
