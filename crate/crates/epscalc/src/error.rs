use thiserror::Error;

/// Errors shared by the computational modules.
///
/// Domain errors carry enough context to reproduce the offending call; the
/// CLI maps them to exit code 2, printing the variant name on stderr.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("DivergentLimit: monomial {monomial:?} has pole order {min_exponent}")]
    DivergentLimit {
        monomial: Vec<u32>,
        min_exponent: i64,
    },
    #[error("ArityMismatch: expected {expected} forms, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("CyclotomicOrderMismatch: {0} vs {1}")]
    CyclotomicOrderMismatch(u32, u32),
    #[error("NonRepresentableScale: no degree-{degree} root in Q(zeta_{order})")]
    NonRepresentableScale { degree: u32, order: u32 },
    #[error("ZeroForm: zero linear form supplied")]
    ZeroForm,
    #[error("ZeroAlpha: alpha must be nonzero")]
    ZeroAlpha,
    #[error("NotHomogeneousLimit: degree-{degree} part has nonzero limit {residue}")]
    NotHomogeneousLimit { degree: usize, residue: String },
    #[error("DegreeTooLow: degree {d} < rank {r} - 1")]
    DegreeTooLow { d: usize, r: usize },
    #[error("CongruenceViolation: e_{j}(a) != e_{j}(b) mod eps^{modulus}")]
    CongruenceViolation { j: usize, modulus: i64 },
    #[error("SpanningSetFailure: power map rank {rank} < dimension {dim}")]
    SpanningSetFailure { rank: usize, dim: usize },
    #[error("DuplicateNodes: interpolation nodes must be distinct")]
    DuplicateNodes,
    #[error("RankViolation: form family has rank {rank} > bound {bound}")]
    RankViolation { rank: usize, bound: usize },
    #[error("FactorMatchFailure: lowest-order factors do not match up to unit and permutation")]
    FactorMatchFailure,
    #[error("UnsupportedRank: classification defined for total rank 2 or 3, got {0}")]
    UnsupportedRank(usize),
    #[error("InvalidGad: {0}")]
    InvalidGad(String),
    #[error("SizeMismatch: partition sizes incompatible ({0})")]
    SizeMismatch(String),
    #[error("ConstraintViolation: {0}")]
    ConstraintViolation(String),
    #[error("MalformedCircuit: {0}")]
    MalformedCircuit(String),
    #[error("NonHomogeneous: polynomial is not homogeneous of the expected degree")]
    NonHomogeneous,
    #[error("DegreeMismatch: expected degree {expected}, got {got:?}")]
    DegreeMismatch {
        expected: usize,
        got: Option<usize>,
    },
    #[error("EnumerationBound: n = {n} exceeds exhaustive enumeration bound {bound}")]
    EnumerationBound { n: usize, bound: usize },
    #[error("ContentMismatch: tableau content is not n x d ({0})")]
    ContentMismatch(String),
    #[error("InvalidLatinSquare: {0}")]
    InvalidLatinSquare(String),
    #[error("UnknownRelation: {0}")]
    UnknownRelation(String),
    #[error("Json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
