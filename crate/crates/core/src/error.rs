use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed `.mlcp` input, with the 1-based line it was found on.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A net that violates a construction invariant (empty name, bad domain, ...).
    #[error("invalid net: {0}")]
    Invalid(String),

    /// The net parsed, but failed acyclicity or CPT partition checks.
    #[error("structural validation failed: {0}")]
    Structure(String),

    #[error("not a more-or-less CP-net: {0}")]
    NotMoreOrLess(String),

    #[error("outcome space of {outcomes} outcomes exceeds the budget of {cap}")]
    BudgetExceeded { outcomes: u128, cap: u64 },

    #[error("search exceeded the cap of {cap} node expansions")]
    ExpansionCap { cap: u64 },

    #[error("{count} representative maps exceed the cap of {cap}")]
    TooManyCombinations { count: u128, cap: u64 },

    #[error("invalid outcome: {0}")]
    Outcome(String),

    #[error("sequence is not an improving flipping sequence: {0}")]
    NotImproving(String),

    #[error("sequence is not irreducible: {0}")]
    NotIrreducible(String),

    #[error("representative map violates its constraints: {0}")]
    BadRepMap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Something that validation should have ruled out happened anyway.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
