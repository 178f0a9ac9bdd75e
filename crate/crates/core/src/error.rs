use thiserror::Error;

/// Errors raised by the library. Precondition failures name the violated condition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("operation requires a finite abelian group domain, got {0}")]
    NotAGroup(String),
    #[error("interval signals can only be shifted inside an explicit cyclic embedding")]
    IntervalShift,
    #[error("work cap exceeded: {work:.3e} > {cap:.3e} elementary operations; use the recursive backend")]
    WorkCap { work: f64, cap: f64 },
    #[error("table is not a polynomial of degree {degree}: max difference defect {defect:.3e}")]
    NotPolynomial { degree: usize, defect: f64 },
    #[error("wraparound-dominated grid signal: boundary mass fraction {fraction:.3e}")]
    Wraparound { fraction: f64 },
    #[error("negative 2^k-th power sum {0:.3e}")]
    NegativePowerSum(f64),
    #[error("decode failed: shift {h} is not covered by the accepted set (accepted {accepted} of {total})")]
    Uncovered { h: i64, accepted: usize, total: usize },
    #[error("decode failed: cocycle constant for ({h}, {h2}) deviates by {deviation:.3e} (gate {gate:.3e})")]
    CocycleGate { h: i64, h2: i64, deviation: f64, gate: f64 },
    #[error("decode failed: phase certification defect {0:.3e}")]
    Certification(f64),
    #[error("sumset test failed: |K-K|/|K| = {ratio:.4} is not below 3/2")]
    SumsetRatio { ratio: f64 },
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),
    #[error("aliasing detected: spectral mass fraction {0:.3e} near the band edge")]
    Aliasing(f64),
}

impl Error {
    /// Failures that stem from bad arguments rather than from the computation itself.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Precondition(_)
                | Error::NotAGroup(_)
                | Error::IntervalShift
                | Error::WorkCap { .. }
                | Error::EnumerationCap(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
