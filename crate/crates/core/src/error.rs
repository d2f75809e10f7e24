use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite argument or result: {0}")]
    NonFinite(Complex64),
    #[error("gamma function pole at s = {0}")]
    PoleOfGamma(Complex64),
    #[error("zeta pole at s = {0}")]
    PoleOfZeta(Complex64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("unsupported discriminant -{0}; expected one of 3, 4, 7, 8")]
    UnsupportedDiscriminant(u32),
    #[error("pole of Delta5 at s = {0}")]
    PoleOfDelta5(Complex64),
    #[error("gamma-factor pole on path at s = {0}")]
    GammaPoleOnPath(Complex64),
    #[error("pole of Delta_-{q} at s = {s}")]
    PoleOfDeltaQ { q: u32, s: Complex64 },
    #[error("bracket factor of Delta_-{q} vanishes at s = {s}")]
    BracketZero { q: u32, s: Complex64 },
    #[error("pole of completed function at s = {0}")]
    PoleOfCompletedZeta(Complex64),
    #[error("scan step too coarse: several sign changes in [{lo}, {hi}]")]
    StepTooCoarse { lo: f64, hi: f64 },
    #[error("zero and pole coincide near t = {0}")]
    UnexpectedCoincidence(f64),
    #[error("sigma = {0} is not a tabulated pole of Delta5")]
    NotAPole(f64),
    #[error("sigma = {0} is not a tabulated zero of Delta5")]
    NotAZero(f64),
    #[error("trace stalled at sigma = {sigma}, t = {t}")]
    TraceStalled { sigma: f64, t: f64 },
    #[error("singularity too close to path at sigma = {sigma}, t = {t} (|Delta5| = {modulus:e})")]
    SingularityTooClose { sigma: f64, t: f64, modulus: f64 },
    #[error("no catalogued singular point within {radius} of t = {t}")]
    NoCatalogMatch { t: f64, radius: f64 },
    #[error("terminus t = {0} is not strictly between catalogued singular points")]
    TerminusNotBetweenSingularities(f64),
    #[error("edge refinement exhausted after {0} splits")]
    RefinementExhausted(usize),
    #[error("contour passes too close to a singular point at {0}")]
    SingularOnContour(Complex64),
    #[error("amplitude A = 1 gives a degenerate circle")]
    DegenerateCircle,
    #[error("catalog covers t <= {have}, need t <= {need}")]
    CatalogTooShort { have: f64, need: f64 },
    #[error("missing trace for phase line {0}")]
    MissingTrace(u32),
    #[error("catalog format version {found}, expected {expected}")]
    FormatVersionMismatch { found: u64, expected: u64 },
    #[error("corrupt catalog record at line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error("invalid portrait spec: {0}")]
    SpecInvalid(String),
    #[error("I/O failure: {0}")]
    IoFailure(String),
}

impl Error {
    /// Stable variant name, printed by the CLI on standard error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "NonFinite",
            Error::PoleOfGamma(_) => "PoleOfGamma",
            Error::PoleOfZeta(_) => "PoleOfZeta",
            Error::DomainError(_) => "DomainError",
            Error::UnsupportedDiscriminant(_) => "UnsupportedDiscriminant",
            Error::PoleOfDelta5(_) => "PoleOfDelta5",
            Error::GammaPoleOnPath(_) => "GammaPoleOnPath",
            Error::PoleOfDeltaQ { .. } => "PoleOfDeltaQ",
            Error::BracketZero { .. } => "BracketZero",
            Error::PoleOfCompletedZeta(_) => "PoleOfCompletedZeta",
            Error::StepTooCoarse { .. } => "StepTooCoarse",
            Error::UnexpectedCoincidence(_) => "UnexpectedCoincidence",
            Error::NotAPole(_) => "NotAPole",
            Error::NotAZero(_) => "NotAZero",
            Error::TraceStalled { .. } => "TraceStalled",
            Error::SingularityTooClose { .. } => "SingularityTooClose",
            Error::NoCatalogMatch { .. } => "NoCatalogMatch",
            Error::TerminusNotBetweenSingularities(_) => "TerminusNotBetweenSingularities",
            Error::RefinementExhausted(_) => "RefinementExhausted",
            Error::SingularOnContour(_) => "SingularOnContour",
            Error::DegenerateCircle => "DegenerateCircle",
            Error::CatalogTooShort { .. } => "CatalogTooShort",
            Error::MissingTrace(_) => "MissingTrace",
            Error::FormatVersionMismatch { .. } => "FormatVersionMismatch",
            Error::CorruptRecord { .. } => "CorruptRecord",
            Error::SpecInvalid(_) => "SpecInvalid",
            Error::IoFailure(_) => "IoFailure",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}
