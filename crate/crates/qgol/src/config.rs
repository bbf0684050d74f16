//! Run configuration: defaults, an optional TOML file, and command-line
//! overrides, layered in that order.
//!
//! The TOML schema mirrors the subcommands: a `[run]` table for single
//! trajectories (quantum or classical), an `[ensemble]` table for ensembles,
//! scans, comparisons, and scaling studies, and an `[output]` table for where
//! results land. Unknown keys are rejected with the offending name so typos
//! fail loudly instead of silently falling back to defaults.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classical::Boundary;
use crate::ensemble::{EnsembleBackend, EnsembleSpec};
use crate::error::{Error, Result};
use crate::lattice::ClassicalConfig;
use crate::mps::{DEFAULT_BOND_CAP, DEFAULT_TRUNCATION_THRESHOLD};
use crate::observables::BackendKind;
use crate::splitting::{EvolutionParams, SplitOrder};

pub const DEFAULT_SITES: usize = 32;
pub const DEFAULT_DT: f64 = 1e-2;
pub const DEFAULT_T_FINAL: f64 = 10.0;
pub const DEFAULT_ENSEMBLE_T_FINAL: f64 = 100.0;
pub const DEFAULT_GENERATIONS: usize = 200;
pub const DEFAULT_REALIZATIONS: usize = 30;
pub const DEFAULT_FILL_FRACTION: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 1;

/// How the initial configuration is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// The six-site motif 110011 centred on the chain (needs 10+ sites).
    Blinker,
    /// A block of 24 contiguous live sites centred on the chain (needs 28+).
    FilledBlock,
    /// An explicit bit string, one character per site.
    Bits { bits: String },
    /// A uniformly drawn configuration with a prescribed live fraction.
    Random { fill_fraction: f64 },
}

impl InitialState {
    /// Resolves to a configuration; `seed` feeds the `Random` variant.
    pub fn realize(&self, sites: usize, seed: u64) -> Result<ClassicalConfig> {
        match self {
            Self::Blinker => blinker_preset(sites),
            Self::FilledBlock => filled_block_preset(sites),
            Self::Bits { bits } => {
                let config = ClassicalConfig::from_bit_string(bits)?;
                if config.len() != sites {
                    return Err(Error::ConfigLengthMismatch {
                        got: config.len(),
                        expected: sites,
                    });
                }
                Ok(config)
            }
            Self::Random { fill_fraction } => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                crate::ensemble::sample_initial_config(sites, *fill_fraction, &mut rng)
            }
        }
    }
}

/// Places a motif in the middle of an otherwise dead chain, entirely inside
/// the updating interior.
fn centered_motif(sites: usize, motif: &[u8], min_sites: usize) -> Result<ClassicalConfig> {
    if sites < min_sites {
        return Err(Error::InvalidConfig(format!(
            "this preset needs at least {min_sites} sites, got {sites}"
        )));
    }
    let offset = (sites - motif.len()) / 2;
    let mut bits = vec![0u8; sites];
    bits[offset..offset + motif.len()].copy_from_slice(motif);
    ClassicalConfig::from_bits(bits)
}

/// The six-site motif 110011 centred on the chain.
pub fn blinker_preset(sites: usize) -> Result<ClassicalConfig> {
    centered_motif(sites, &[1, 1, 0, 0, 1, 1], 10)
}

/// Twenty-four contiguous live sites centred on the chain.
pub fn filled_block_preset(sites: usize) -> Result<ClassicalConfig> {
    centered_motif(sites, &[1; 24], 28)
}

/// `[run]` table: single-trajectory settings. Every field is optional; the
/// resolver fills in defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub sites: Option<usize>,
    pub backend: Option<BackendKind>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub order: Option<u8>,
    pub sample_interval: Option<f64>,
    pub generation_time: Option<f64>,
    pub bond_cap: Option<usize>,
    pub truncation_threshold: Option<f64>,
    pub initial: Option<InitialState>,
    pub seed: Option<u64>,
    pub generations: Option<usize>,
    pub boundary: Option<Boundary>,
}

/// `[ensemble]` table: settings for ensembles, fill scans, quantum-classical
/// comparisons, and size scaling.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub sites: Option<usize>,
    pub backend: Option<BackendKind>,
    pub fill_fraction: Option<f64>,
    pub fill_fractions: Option<Vec<f64>>,
    pub sizes: Option<Vec<usize>>,
    pub realizations: Option<usize>,
    pub classical_realizations: Option<usize>,
    pub master_seed: Option<u64>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub order: Option<u8>,
    pub sample_interval: Option<f64>,
    pub generation_time: Option<f64>,
    pub bond_cap: Option<usize>,
    pub truncation_threshold: Option<f64>,
    pub generations: Option<usize>,
    pub boundary: Option<Boundary>,
}

/// `[output]` table.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<String>,
    pub tag: Option<String>,
}

/// Top-level TOML schema.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl FileConfig {
    /// Loads and parses a TOML config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| {
            Error::InvalidConfig(format!("{}: {e}", path.display()))
        })
    }

    /// Loads the file when a path is given, otherwise an empty layer.
    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }
}

/// Fully resolved settings for one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedRun {
    pub sites: usize,
    pub backend: BackendKind,
    pub params: EvolutionParams,
    pub bond_cap: usize,
    pub truncation_threshold: f64,
    pub initial: InitialState,
    pub seed: u64,
    pub generations: usize,
    pub boundary: Boundary,
}

impl ResolvedRun {
    /// Layers defaults under the `[run]` table; command-line overrides are
    /// applied by the caller through the public fields afterwards.
    pub fn from_section(section: &RunSection) -> Result<Self> {
        let dt = section.dt.unwrap_or(DEFAULT_DT);
        let order = match section.order {
            Some(raw) => SplitOrder::from_u8(raw)?,
            None => SplitOrder::Fourth,
        };
        let params = EvolutionParams {
            dt,
            t_final: section.t_final.unwrap_or(DEFAULT_T_FINAL),
            order,
            sample_interval: section.sample_interval.unwrap_or(5.0 * dt),
            generation_time: section.generation_time.unwrap_or(FRAC_PI_2),
        };
        Ok(Self {
            sites: section.sites.unwrap_or(DEFAULT_SITES),
            backend: section.backend.unwrap_or(BackendKind::TensorNetwork),
            params,
            bond_cap: section.bond_cap.unwrap_or(DEFAULT_BOND_CAP),
            truncation_threshold: section
                .truncation_threshold
                .unwrap_or(DEFAULT_TRUNCATION_THRESHOLD),
            initial: section.initial.clone().unwrap_or(InitialState::Blinker),
            seed: section.seed.unwrap_or(DEFAULT_SEED),
            generations: section.generations.unwrap_or(DEFAULT_GENERATIONS),
            boundary: section.boundary.unwrap_or(Boundary::Frozen),
        })
    }

    pub fn initial_config(&self) -> Result<ClassicalConfig> {
        self.initial.realize(self.sites, self.seed)
    }
}

/// Fully resolved settings for ensembles and the commands built on them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedEnsemble {
    pub sites: usize,
    pub backend: BackendKind,
    pub fill_fraction: f64,
    /// Fill-fraction grid for scans and comparisons.
    pub fill_fractions: Vec<f64>,
    /// Chain sizes for scaling studies.
    pub sizes: Vec<usize>,
    pub realizations: usize,
    /// Realization count for the classical side of comparisons (defaults to
    /// the full realization budget).
    pub classical_realizations: usize,
    pub master_seed: u64,
    pub params: EvolutionParams,
    pub bond_cap: usize,
    pub truncation_threshold: f64,
    pub generations: usize,
    pub boundary: Boundary,
}

impl ResolvedEnsemble {
    pub fn from_section(section: &EnsembleSection) -> Result<Self> {
        let dt = section.dt.unwrap_or(DEFAULT_DT);
        let order = match section.order {
            Some(raw) => SplitOrder::from_u8(raw)?,
            None => SplitOrder::Fourth,
        };
        let params = EvolutionParams {
            dt,
            t_final: section.t_final.unwrap_or(DEFAULT_ENSEMBLE_T_FINAL),
            order,
            sample_interval: section.sample_interval.unwrap_or(10.0 * dt),
            generation_time: section.generation_time.unwrap_or(FRAC_PI_2),
        };
        let realizations = section.realizations.unwrap_or(DEFAULT_REALIZATIONS);
        Ok(Self {
            sites: section.sites.unwrap_or(DEFAULT_SITES),
            backend: section.backend.unwrap_or(BackendKind::Classical),
            fill_fraction: section.fill_fraction.unwrap_or(DEFAULT_FILL_FRACTION),
            fill_fractions: section
                .fill_fractions
                .clone()
                .unwrap_or_else(|| vec![0.2, 0.35, 0.5, 0.65, 0.8]),
            sizes: section
                .sizes
                .clone()
                .unwrap_or_else(|| vec![32, 64, 128, 256, 512, 1024]),
            realizations,
            classical_realizations: section.classical_realizations.unwrap_or(realizations),
            master_seed: section.master_seed.unwrap_or(DEFAULT_SEED),
            bond_cap: section.bond_cap.unwrap_or(DEFAULT_BOND_CAP),
            truncation_threshold: section
                .truncation_threshold
                .unwrap_or(DEFAULT_TRUNCATION_THRESHOLD),
            generations: section.generations.unwrap_or(DEFAULT_GENERATIONS),
            boundary: section.boundary.unwrap_or(Boundary::Frozen),
            params,
        })
    }

    /// The backend description consumed by the ensemble runner.
    pub fn backend_for(&self, kind: BackendKind) -> EnsembleBackend {
        match kind {
            BackendKind::StateVector => EnsembleBackend::StateVector {
                params: self.params,
            },
            BackendKind::TensorNetwork => EnsembleBackend::TensorNetwork {
                params: self.params,
                bond_cap: self.bond_cap,
                threshold: self.truncation_threshold,
            },
            BackendKind::Classical => EnsembleBackend::Classical {
                generations: self.generations,
                boundary: self.boundary,
            },
        }
    }

    /// Ensemble description at one (size, fill) point.
    pub fn spec_at(&self, kind: BackendKind, sites: usize, fill: f64) -> EnsembleSpec {
        EnsembleSpec {
            sites,
            fill_fraction: fill,
            realizations: if kind == BackendKind::Classical {
                self.classical_realizations
            } else {
                self.realizations
            },
            master_seed: self.master_seed,
            backend: self.backend_for(kind),
        }
    }
}
