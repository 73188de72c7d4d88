use thiserror::Error;

/// Every fallible operation in the crate reports one of these. The variant
/// name is part of the CLI contract (printed verbatim on stderr).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ConstraintViolation: {0}")]
    ConstraintViolation(String),
    #[error("RootBracketFailure: no sign change of the Rayleigh function for poisson = {poisson}")]
    RootBracketFailure { poisson: f64 },
    #[error("NotIntegrable: term x^{power} e^(-{rate} x) does not decay")]
    NotIntegrable { power: u32, rate: f64 },
    #[error("GridTooCoarse: {0}")]
    GridTooCoarse(String),
    #[error("DegenerateDenominator: |denominator| = {value:e} for poisson = {poisson}")]
    DegenerateDenominator { value: f64, poisson: f64 },
    #[error("AboveCutoff: omega^2 = {omega_sq} is not below the cutoff {cutoff}")]
    AboveCutoff { omega_sq: f64, cutoff: f64 },
    #[error("MeshGenFailure: {0}")]
    MeshGenFailure(String),
    #[error("AssemblyFailure: {0}")]
    AssemblyFailure(String),
    #[error("NoConvergence: {0}")]
    NoConvergence(String),
    #[error("NotTrapped: omega_hat^2 = {omega_hat_sq} vs cutoff {cutoff}")]
    NotTrapped { omega_hat_sq: f64, cutoff: f64 },
    #[error("TruncationSuspect: localization {localization} <= 0.99 (radius {radius})")]
    TruncationSuspect { localization: f64, radius: f64 },
    #[error("InsufficientData: {0}")]
    InsufficientData(String),
}

impl Error {
    /// Stable variant name, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::RootBracketFailure { .. } => "RootBracketFailure",
            Error::NotIntegrable { .. } => "NotIntegrable",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::AboveCutoff { .. } => "AboveCutoff",
            Error::MeshGenFailure(_) => "MeshGenFailure",
            Error::AssemblyFailure(_) => "AssemblyFailure",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NotTrapped { .. } => "NotTrapped",
            Error::TruncationSuspect { .. } => "TruncationSuspect",
            Error::InsufficientData(_) => "InsufficientData",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
