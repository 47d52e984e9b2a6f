use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    ZeroDivision,
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("interval does not isolate a single root of the polynomial")]
    NotIsolating,
    #[error("leading coefficient is not positive")]
    NonPositiveLeadingCoeff,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not enough initial values to normalize the recurrence: need {needed}, got {given}")]
    InsufficientPrefix { needed: usize, given: usize },
    #[error("supplied value u_{index} contradicts the recurrence")]
    InconsistentPrefix { index: usize },
    #[error(
        "recurrence is not of Poincare type (an entry of A(n) has numerator degree above \
         denominator degree); rebalance it by a Newton polygon substitution first"
    )]
    NotPoincareType,
    #[error("denominator vanishes at n = {index}")]
    DenominatorZero { index: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("limit matrix has only zero eigenvalues")]
    ZeroSpectrum,
    #[error("no unique dominant eigenvalue")]
    NoUniqueDominant,
    #[error("dominant eigenvalue is not simple")]
    NotSimple,
    #[error("no power m <= {0} makes T A^m T^-1 positive")]
    PowerCapExceeded(u32),
    #[error("cone radius is infinite")]
    InfiniteRadius,
    #[error("matrix is not entrywise positive")]
    NotPositiveMatrix,
    #[error("matrix is singular")]
    Singular,
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}
