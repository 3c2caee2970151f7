use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid truncation: n_max must be at least 1, got {0}")]
    InvalidTruncation(usize),

    #[error("unsupported atom count {0}: only one or two atoms are modelled")]
    InvalidAtomCount(usize),

    #[error("subsystem slot {slot} does not exist in a space with {n_atoms} atom(s)")]
    SlotOutOfRange { slot: String, n_atoms: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a two-atom space")]
    NotTwoAtom,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("steady state is not unique (Liouvillian null space has dimension > 1)")]
    DegenerateSteadyState,

    #[error("density matrix invariant violated: {0}")]
    InvalidState(String),

    #[error("integrator failure at t = {time}: {reason}")]
    IntegratorFailure { time: f64, reason: String },

    #[error("g2(0) undefined: mean photon number {mean_photons:e} is below threshold")]
    UndefinedStatistics { mean_photons: f64 },

    #[error("unknown state label {0:?}")]
    UnknownLabel(String),

    #[error("singular amplitude system: {0}")]
    SingularSystem(&'static str),

    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),

    #[error("conventional blockade condition is undefined for delta_c = 0")]
    UndefinedCondition,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
