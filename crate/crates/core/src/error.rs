use thiserror::Error;

/// Errors raised by the thermodynamic routines.
///
/// Variant names are part of the CLI contract: `ses` prints [`Error::name`]
/// as the first token of its one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("energy level {0} is not finite")]
    NonFiniteEnergy(f64),
    #[error("degeneracy {0} is not strictly positive")]
    NonPositiveDegeneracy(f64),
    #[error("spectrum has no levels")]
    EmptySpectrum,
    #[error("truncation tail bound {bound:e} exceeds {limit:e} at T_max = {t_max}")]
    TruncationTooCoarse { bound: f64, limit: f64, t_max: f64 },
    #[error("energy cutoff {cutoff} lies below the composite ground energy {ground}")]
    CutoffBelowGround { cutoff: f64, ground: f64 },
    #[error("probabilities sum to {0}, outside the renormalization band")]
    NotNormalized(f64),
    #[error("probability {value} at level {index} is negative")]
    NegativeProbability { index: usize, value: f64 },
    #[error("{found} probabilities given for {expected} levels")]
    LengthMismatch { expected: usize, found: usize },
    #[error("b = {0} requires a bounded spectrum")]
    NegativeBetaUnbounded(f64),
    #[error("energy {energy} outside the attainable range [{min}, {max}]")]
    EnergyOutOfRange { energy: f64, min: f64, max: f64 },
    #[error("entropy {entropy} outside the attainable range [{min}, {max}]")]
    EntropyOutOfRange { entropy: f64, min: f64, max: f64 },
    #[error("negative-temperature branch requires a bounded spectrum")]
    BranchUnavailable,
    #[error("(b, mu) = ({b}, {mu}) lies outside the declared operating box")]
    OperatingBoxExceeded { b: f64, mu: f64 },
    #[error("amount {0} is not attainable")]
    AmountOutOfRange(f64),
    #[error("reservoir kind {kind} requires field {field}")]
    KindFieldMissing { kind: &'static str, field: &'static str },
    #[error("reservoir kind {kind} does not allow exchange of {quantity}")]
    KindMismatch { kind: &'static str, quantity: &'static str },
    #[error("temperatures must satisfy T_A > T_B > 0 (got T_A = {t_a}, T_B = {t_b})")]
    TemperatureOrder { t_a: f64, t_b: f64 },
    #[error("temperature must be nonzero")]
    ZeroTemperature,
    #[error("temperatures must be positive (got {0})")]
    TemperatureSign(f64),
    #[error("temperature {0} is not positive")]
    NonPositiveTemperature(f64),
    #[error("{amount} particles cannot be split into {lambda} identical compartments")]
    IndivisibleScenario { amount: f64, lambda: f64 },
    #[error("negative-temperature branch requested for an unbounded spectrum")]
    NegativeBranchUnavailable,
    #[error("root bracket could not be established: {0}")]
    NoBracket(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFiniteEnergy(_) => "NonFiniteEnergy",
            Error::NonPositiveDegeneracy(_) => "NonPositiveDegeneracy",
            Error::EmptySpectrum => "EmptySpectrum",
            Error::TruncationTooCoarse { .. } => "TruncationTooCoarse",
            Error::CutoffBelowGround { .. } => "CutoffBelowGround",
            Error::NotNormalized(_) => "NotNormalized",
            Error::NegativeProbability { .. } => "NegativeProbability",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NegativeBetaUnbounded(_) => "NegativeBetaUnbounded",
            Error::EnergyOutOfRange { .. } => "EnergyOutOfRange",
            Error::EntropyOutOfRange { .. } => "EntropyOutOfRange",
            Error::BranchUnavailable => "BranchUnavailable",
            Error::OperatingBoxExceeded { .. } => "OperatingBoxExceeded",
            Error::AmountOutOfRange(_) => "AmountOutOfRange",
            Error::KindFieldMissing { .. } => "KindFieldMissing",
            Error::KindMismatch { .. } => "KindMismatch",
            Error::TemperatureOrder { .. } => "TemperatureOrder",
            Error::ZeroTemperature => "ZeroTemperature",
            Error::TemperatureSign(_) => "TemperatureSign",
            Error::NonPositiveTemperature(_) => "NonPositiveTemperature",
            Error::IndivisibleScenario { .. } => "IndivisibleScenario",
            Error::NegativeBranchUnavailable => "NegativeBranchUnavailable",
            Error::NoBracket(_) => "NoBracket",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
