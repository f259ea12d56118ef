use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state outside equation-of-state domain: {0}")]
    Domain(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("no future-pointing timelike completion for spatial velocity")]
    NoTimelikeCompletion,
    #[error("velocity not normalized: g(u,u) + 1 = {0:e}")]
    NotNormalized(f64),
    #[error("sound speed squared must be positive, got {0}")]
    DegenerateSoundSpeed(f64),
    #[error("grid too coarse: axis {axis} has {points} points, need at least {needed}")]
    GridTooCoarse { axis: usize, points: usize, needed: usize },
    #[error("equation of state does not supply a temperature")]
    MissingTemperature,
    #[error("degenerate direction: leading coefficient p(zeta) = {0:e}")]
    DegenerateDirection(f64),
    #[error("metric is not Lorentzian with signature (-,+,+,+): {0}")]
    BadMetric(String),
    #[error("index position mismatch: expected {expected}, found {found}")]
    IndexPosition { expected: &'static str, found: &'static str },
    #[error("shear constraint violated: {which} residual {residual:e} exceeds {tol:e}")]
    ConstraintViolation { which: &'static str, residual: f64, tol: f64 },
    #[error("eigen-decomposition residual {0:e} too large")]
    Internal(f64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("sufficient conditions pass while necessary condition {0} fails")]
    Consistency(String),
    #[error("schema error at row {row}: {message}")]
    Schema { row: usize, message: String },
    #[error("superluminal input velocity {0}")]
    SuperluminalInput(f64),
    #[error("conserved-to-primitive inversion failed in cell {cell}: {message}")]
    Con2PrimFailure { cell: usize, message: String },
    #[error("CFL number {0} exceeds 0.4")]
    CflViolation(f64),
    #[error("effective signal speed squared {value} exceeds 1 in cell {cell}")]
    CausalityBreach { cell: usize, value: f64 },
    #[error("negative density {0}")]
    NegativeDensity(f64),
    #[error("a0 = {0} is not positive")]
    LostPositivity(f64),
    #[error("closure not available: {0}")]
    MissingClosure(String),
    #[error("weight exponent sigma = {0} must exceed -1/2")]
    InadmissibleSigma(f64),
    #[error("need at least {needed} time levels, got {got}")]
    InsufficientTimeLevels { needed: usize, got: usize },
    #[error("grid of {points} points exceeds pairwise cap {cap}")]
    GridTooLarge { points: usize, cap: usize },
    #[error("kappa mismatch: {0} vs {1}")]
    KappaMismatch(f64, f64),
    #[error("unknown {family} strategy '{name}' (known: {known})")]
    UnknownStrategy { family: &'static str, name: String, known: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
            Error::NoTimelikeCompletion => "NoTimelikeCompletion",
            Error::NotNormalized(_) => "NotNormalized",
            Error::DegenerateSoundSpeed(_) => "DegenerateSoundSpeed",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::MissingTemperature => "MissingTemperature",
            Error::DegenerateDirection(_) => "DegenerateDirection",
            Error::BadMetric(_) => "BadMetric",
            Error::IndexPosition { .. } => "IndexPosition",
            Error::ConstraintViolation { .. } => "ConstraintViolation",
            Error::Internal(_) => "InternalError",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::Consistency(_) => "ConsistencyError",
            Error::Schema { .. } => "SchemaError",
            Error::SuperluminalInput(_) => "SuperluminalInput",
            Error::Con2PrimFailure { .. } => "Con2PrimFailure",
            Error::CflViolation(_) => "CFLViolation",
            Error::CausalityBreach { .. } => "CausalityBreach",
            Error::NegativeDensity(_) => "NegativeDensity",
            Error::LostPositivity(_) => "LostPositivity",
            Error::MissingClosure(_) => "MissingClosure",
            Error::InadmissibleSigma(_) => "InadmissibleSigma",
            Error::InsufficientTimeLevels { .. } => "InsufficientTimeLevels",
            Error::GridTooLarge { .. } => "GridTooLarge",
            Error::KappaMismatch(..) => "KappaMismatch",
            Error::UnknownStrategy { .. } => "ConfigError",
            Error::Config(_) => "ConfigError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
