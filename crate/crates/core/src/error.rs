use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no edge with label {0}")]
    UnknownLabel(usize),
    #[error("edge {0} is a looping edge and cannot be contracted")]
    ContractLoop(usize),
    #[error("edge {label} endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        label: usize,
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("duplicate edge label {0}")]
    DuplicateLabel(usize),
    #[error("edge labels must be below {max}, got {label}")]
    LabelTooLarge { label: usize, max: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointLength { expected: usize, got: usize },
    #[error("variable t{0} is not in the polynomial's variable set")]
    UnknownVariable(usize),
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("count needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("edge {label} is {kind}, expected a regular edge")]
    NotRegular { label: usize, kind: &'static str },
    #[error("polynomial is constant: there is no projective hypersurface")]
    NoProjectiveHypersurface,
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("interpolation needs at least {needed} distinct primes, got {got}")]
    InsufficientPrimes { needed: usize, got: usize },
    #[error("brute and fibered counts disagree for q={q}: {brute} vs {fibered}")]
    CountMismatch { q: u64, brute: u64, fibered: u64 },
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Family(String),
}

pub type Result<T> = std::result::Result<T, Error>;
