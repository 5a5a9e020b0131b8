use thiserror::Error;

/// Residue classes of an odd prime modulo 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModClass {
    OneModFour,
    ThreeModFour,
}

impl std::fmt::Display for ModClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModClass::OneModFour => write!(f, "1 (mod 4)"),
            ModClass::ThreeModFour => write!(f, "3 (mod 4)"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound 2^20")]
    ModulusTooLarge(u64),
    #[error("q = {q} is {found}; this operation requires q ≡ {required}")]
    ModulusClass {
        q: u32,
        found: ModClass,
        required: ModClass,
    },
    #[error("operands live over different moduli ({0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("grid of size {q}^{d} is too large")]
    GridTooLarge { q: u32, d: usize },
    #[error("matrix is singular mod {0}")]
    Singular(u32),
    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} does not lie on the unit circle")]
    NotOnUnitCircle(String),
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("1 + k^2 = {0} is not a quadratic non-residue")]
    NotANonResidue(u32),
    #[error("a multiplicative tiling set must not contain the origin")]
    OriginInSet,
    #[error("cardinality mismatch: expected {expected}, found {found}")]
    Cardinality { expected: usize, found: usize },
    #[error("set is not the graph of a function over any basis")]
    NotAGraph,
    #[error("empty set")]
    EmptySet,
    #[error("spectrum search for a set of size {size} exceeds the budget {limit}")]
    SearchBudget { size: usize, limit: usize },
    #[error("coordinate {value} out of range for q = {q}")]
    CoordinateOutOfRange { value: u64, q: u32 },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
