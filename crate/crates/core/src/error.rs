use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    Pole(f64),
    #[error("argument {re} + {im}i lies on the branch cut of x^(z-1)")]
    BranchCut { re: f64, im: f64 },
    #[error("{what} did not converge")]
    NonConvergence { what: &'static str },
    #[error("{what}: tolerance not reached (estimated error {estimate:e})")]
    ToleranceNotReached { what: &'static str, estimate: f64 },
    #[error("parameter `{name}` out of range: {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("asymptotic regime violated: {0}")]
    RegimeViolation(&'static str),
    #[error("resonance condition violated: {0}")]
    ResonanceViolation(&'static str),
    #[error("Fock truncation nmax = {0} is too small")]
    TruncationTooSmall(usize),
    #[error("Fock truncation overflow: tail mass {0:e} exceeds tolerance")]
    TruncationOverflow(f64),
    #[error("no steady state: absorption must exceed emission")]
    NoSteadyState,
    #[error("squeezing coefficients put the generator in the gain regime")]
    GainRegime,
    #[error("state lost positivity: smallest eigenvalue {0:e}")]
    PositivityViolation(f64),
    #[error("singular linear system")]
    Singular,
}

pub type Result<T> = core::result::Result<T, Error>;
