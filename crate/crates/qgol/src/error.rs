//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong while setting up or running a simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice needs at least {min} sites, got {got}")]
    LatticeTooSmall { got: usize, min: usize },

    #[error("flip site {site} outside the interior range 3..={max} of a {sites}-site chain")]
    FlipSiteOutOfRange { site: usize, max: usize, sites: usize },

    #[error("configuration holds {got} sites but the lattice expects {expected}")]
    ConfigLengthMismatch { got: usize, expected: usize },

    #[error("bit strings may contain only '0' and '1', found {0:?}")]
    InvalidBitChar(char),

    #[error("bit values must be 0 or 1, found {0}")]
    InvalidBitValue(u8),

    #[error(
        "state-vector backend supports at most {cap} sites, got {sites}; \
         use the tensor-network backend for larger chains"
    )]
    StateVectorCapacity { sites: usize, cap: usize },

    #[error("diagonalization reference supports at most {cap} sites, got {sites}")]
    ReferenceCapacity { sites: usize, cap: usize },

    #[error("injectivity scan enumerates at most {cap} sites, got {sites}")]
    ScanCapacity { sites: usize, cap: usize },

    #[error("state norm {norm} deviates from 1 by more than {tol}")]
    NormDrift { norm: f64, tol: f64 },

    #[error("amplitude vector has length {got}, expected 2^{sites} = {expected}")]
    AmplitudeLengthMismatch { got: usize, expected: usize, sites: usize },

    #[error("invalid evolution parameters: {0}")]
    InvalidParams(String),

    #[error("series of {got} samples is too short for an equilibrium estimate (need {min})")]
    SeriesTooShort { got: usize, min: usize },

    #[error("scaling fit needs at least {min} lattice sizes, got {got}")]
    TooFewSizes { got: usize, min: usize },

    #[error("scaling fit needs positive equilibrium diversity, got {value} at {sites} sites")]
    NonPositiveDiversity { value: f64, sites: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("fraction {0} outside (0, 1]")]
    InvalidFraction(f64),

    #[error("singular-value decomposition failed: {0}")]
    SvdFailure(String),

    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),

    #[error("could not write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("could not serialize output: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
