use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the kernel can report.
///
/// Variants are grouped by the layer that raises them; callers usually
/// only need to match on the handful relevant to the operation at hand.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // context
    #[error("characteristic {0} is not an odd prime")]
    InvalidCharacteristic(u32),
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("variable count {0} outside 1..={max}", max = crate::poly::MAX_VARS)]
    InvalidVariableCount(usize),
    #[error("operands live in different rings")]
    RingMismatch,

    // polynomial arithmetic
    #[error("division is not exact")]
    DivisionNotExact,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("not a p-th power")]
    NotAPthPower,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("exponent overflow")]
    ExponentOverflow,

    // forms and the Cartier operator
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("form is not closed")]
    NotClosed,
    #[error("closed form is not exact (its Cartier image is nonzero)")]
    NotExact,
    #[error("form is not fixed by the Cartier operator")]
    NotCartierFixed,
    #[error("no logarithmic witness on the chart")]
    NoWitnessOnChart,
    #[error("operation requires exactly one variable, ring has {0}")]
    RequiresOneVariable(usize),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("chart has {0} generators; the witness search is limited to {max}", max = crate::cartier::MAX_CHART_GENERATORS)]
    ChartTooLarge(usize),

    // connections
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("group is not abelian")]
    NotAbelian,

    // torsors
    #[error("group element is not a unit")]
    ZeroUnit,
    #[error("witnesses have different logarithmic differentials")]
    InconsistentWitnesses,
    #[error("supplied witness does not satisfy dlog(f) = omega")]
    InvalidWitness,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
