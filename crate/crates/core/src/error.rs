use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid system: {}", .0.join("; "))]
    InvalidSystem(Vec<String>),

    #[error("unknown builtin example `{0}`")]
    UnknownBuiltin(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("pair is not tame: R(phi^{n}, psi^{n}) is infinite")]
    NotTame { n: usize },

    #[error("sequence has an infinite entry at n = {n}")]
    InfiniteEntry { n: usize },

    #[error("sequence has {got} terms, at least {needed} are required")]
    SequenceTooShort { needed: usize, got: usize },

    #[error("no linear recurrence of order <= {max_order} within {window} terms")]
    NoRecurrence { max_order: usize, window: usize },

    #[error("minimal recurrence has non-integer coefficients")]
    NonIntegerRecurrence,

    #[error("recurrence denominator is not square-free")]
    NotSquareFree,

    #[error("exponent of factor {factor} is not an integer: {value}")]
    NonIntegerResidue { factor: String, value: String },

    #[error("zeta reconstruction does not reproduce the sequence at n = {n}")]
    RoundtripMismatch { n: usize },

    #[error("Nielsen numbers require finitely generated sections (section {section} has primes)")]
    NotFinitelyGenerated { section: usize },

    #[error("unsupported eigenvalue pairing in section {section}: {reason}")]
    UnsupportedPairing { section: usize, reason: String },

    #[error("growth hypothesis |xi| != |eta| violated in section {section}")]
    HypothesisViolated { section: usize },

    #[error("eigenvalue is a root of unity (cyclotomic factor Phi_{m})")]
    CyclotomicEigenvalue { m: u64 },

    #[error("numeric enclosures indeterminate at the precision ceiling ({bits} bits)")]
    Indeterminate { bits: u32 },

    #[error("{0}")]
    Invalid(String),
}
