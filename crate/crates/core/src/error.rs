use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("quadrature weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("equilibrium value {index} is not positive ({value})")]
    NonPositiveEquilibrium { index: usize, value: f64 },

    /// A state value fell below the clamp tolerance (hypothesis H2).
    #[error("nonnegativity violated{}: value {value:e} at index {index}", step_suffix(*.step))]
    Negativity {
        index: usize,
        value: f64,
        step: Option<usize>,
    },

    /// The wrapped scheme changed the total mass (hypothesis H1).
    #[error("mass conservation violated{}: relative drift {drift:e}", step_suffix(*.step))]
    MassDrift { drift: f64, step: Option<usize> },

    #[error("equilibrium mass {equilibrium} does not match state mass {state}")]
    MassMismatch { state: f64, equilibrium: f64 },

    #[error("reference vector has zero norm")]
    ZeroNorm,

    #[error("no root: target entropy {target} is below the minimum 0")]
    NoRoot { target: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

fn step_suffix(step: Option<usize>) -> String {
    match step {
        Some(n) => format!(" at step {n}"),
        None => String::new(),
    }
}

impl Error {
    /// Tags an H1/H2 guard failure with the step that produced it.
    pub fn at_step(self, n: usize) -> Self {
        match self {
            Error::Negativity { index, value, .. } => Error::Negativity {
                index,
                value,
                step: Some(n),
            },
            Error::MassDrift { drift, .. } => Error::MassDrift {
                drift,
                step: Some(n),
            },
            other => other,
        }
    }

    /// True for violations of the mass/nonnegativity hypotheses on the wrapped scheme.
    pub fn is_guard_violation(&self) -> bool {
        matches!(self, Error::Negativity { .. } | Error::MassDrift { .. })
    }
}
