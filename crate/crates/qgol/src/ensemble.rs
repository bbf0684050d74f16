//! Ensembles of trajectories started from random classical configurations.
//!
//! A realization draws a configuration with a prescribed live fraction
//! (uniformly over the configurations with that many live sites), evolves it
//! with the chosen backend, and reduces the density and cluster-diversity
//! series to equilibrium estimates: the mean over the final quarter of the
//! run, with the difference between the last two quarter-means kept as an
//! equilibration diagnostic. Per-realization seeds derive from one master
//! seed, so a summary is reproducible bit for bit regardless of how the
//! realizations are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::{classical_record, Boundary};
use crate::dense;
use crate::error::{Error, Result};
use crate::lattice::{ClassicalConfig, LatticeSpec};
use crate::mps;
use crate::observables::{BackendKind, TrajectoryRecord};
use crate::splitting::EvolutionParams;

/// Shortest series the equilibrium estimator accepts.
pub const MIN_SERIES_LEN: usize = 8;
/// Fewest chain sizes the scaling fit accepts.
pub const MIN_SCALING_SIZES: usize = 3;

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream of per-realization seeds derived from a master seed.
pub fn derive_seed(master_seed: u64, realization: u64) -> u64 {
    splitmix64(splitmix64(master_seed).wrapping_add(splitmix64(realization)))
}

/// Draws a configuration with `round(fill_fraction * sites)` live sites,
/// uniformly over site subsets of that size.
pub fn sample_initial_config(
    sites: usize,
    fill_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ClassicalConfig> {
    LatticeSpec::new(sites)?;
    if !(0.0..=1.0).contains(&fill_fraction) {
        return Err(Error::InvalidFraction(fill_fraction));
    }
    let live = (fill_fraction * sites as f64).round() as usize;
    let mut bits = vec![0u8; sites];
    for idx in rand::seq::index::sample(rng, sites, live) {
        bits[idx] = 1;
    }
    ClassicalConfig::from_bits(bits)
}

/// Equilibrium mean and equilibration drift of one scalar series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumEstimate {
    /// Mean over the final quarter of the series.
    pub mean: f64,
    /// |mean over the final quarter - mean over the third quarter|; large
    /// values flag a run that has not equilibrated.
    pub drift: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Reduces a time series to its equilibrium estimate.
pub fn equilibrium_estimate(series: &[f64]) -> Result<EquilibriumEstimate> {
    let n = series.len();
    if n < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            got: n,
            min: MIN_SERIES_LEN,
        });
    }
    let half = n / 2;
    let three_quarters = (3 * n) / 4;
    let q3 = mean(&series[half..three_quarters]);
    let q4 = mean(&series[three_quarters..]);
    Ok(EquilibriumEstimate {
        mean: q4,
        drift: (q4 - q3).abs(),
    })
}

/// How one ensemble's trajectories are generated.
#[derive(Debug, Clone)]
pub enum EnsembleBackend {
    /// Dense state-vector integration (small chains).
    StateVector { params: EvolutionParams },
    /// Matrix-product-state integration.
    TensorNetwork {
        params: EvolutionParams,
        bond_cap: usize,
        threshold: f64,
    },
    /// The deterministic classical automaton.
    Classical {
        generations: usize,
        boundary: Boundary,
    },
}

impl EnsembleBackend {
    pub fn kind(&self) -> BackendKind {
        match self {
            Self::StateVector { .. } => BackendKind::StateVector,
            Self::TensorNetwork { .. } => BackendKind::TensorNetwork,
            Self::Classical { .. } => BackendKind::Classical,
        }
    }
}

/// Full description of one ensemble run.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub sites: usize,
    pub fill_fraction: f64,
    pub realizations: usize,
    pub master_seed: u64,
    pub backend: EnsembleBackend,
}

/// Per-realization reduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationOutcome {
    pub seed: u64,
    pub initial_bits: String,
    pub density: EquilibriumEstimate,
    pub diversity: EquilibriumEstimate,
    /// Final cumulative discarded weight (tensor-network backend only).
    pub discarded_weight: Option<f64>,
    /// Largest bond dimension reached (tensor-network backend only).
    pub max_bond: Option<usize>,
}

/// Ensemble-level reduction: time-resolved means plus equilibrium summaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub backend: BackendKind,
    pub sites: usize,
    pub fill_fraction: f64,
    pub realizations: usize,
    pub master_seed: u64,
    pub times: Vec<f64>,
    pub mean_density: Vec<f64>,
    pub mean_diversity: Vec<f64>,
    /// Mean over realizations of the per-realization equilibrium densities.
    pub density_eq: f64,
    /// Standard error of the mean equilibrium density.
    pub density_eq_stderr: f64,
    /// Mean equilibration drift of the density series.
    pub density_drift: f64,
    pub diversity_eq: f64,
    pub diversity_eq_stderr: f64,
    pub diversity_drift: f64,
    pub outcomes: Vec<RealizationOutcome>,
}

fn run_realization(spec: &EnsembleSpec, realization: usize) -> Result<(u64, TrajectoryRecord)> {
    let seed = derive_seed(spec.master_seed, realization as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = sample_initial_config(spec.sites, spec.fill_fraction, &mut rng)?;
    let record = match &spec.backend {
        EnsembleBackend::StateVector { params } => dense::evolve(&config, params)?,
        EnsembleBackend::TensorNetwork {
            params,
            bond_cap,
            threshold,
        } => mps::evolve(&config, params, *bond_cap, *threshold)?,
        EnsembleBackend::Classical {
            generations,
            boundary,
        } => classical_record(
            &config,
            *generations,
            *boundary,
            std::f64::consts::FRAC_PI_2,
        )?,
    };
    Ok((seed, record))
}

fn stderr_of_mean(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Runs all realizations (in parallel when a thread pool is available) and
/// reduces them. The result is independent of scheduling: realizations are
/// seeded independently and collected in index order.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleSummary> {
    if spec.realizations == 0 {
        return Err(Error::InvalidParams(
            "an ensemble needs at least one realization".into(),
        ));
    }
    let results: Vec<(u64, TrajectoryRecord)> = (0..spec.realizations)
        .into_par_iter()
        .map(|k| run_realization(spec, k))
        .collect::<Result<_>>()?;

    let times = results[0].1.times.clone();
    let samples = times.len();
    let mut mean_density = vec![0.0; samples];
    let mut mean_diversity = vec![0.0; samples];
    let mut outcomes = Vec::with_capacity(spec.realizations);
    for (seed, record) in &results {
        debug_assert_eq!(record.times.len(), samples);
        for (acc, v) in mean_density.iter_mut().zip(&record.density) {
            *acc += v / spec.realizations as f64;
        }
        for (acc, v) in mean_diversity.iter_mut().zip(&record.diversity) {
            *acc += *v as f64 / spec.realizations as f64;
        }
        let diversity_series: Vec<f64> = record.diversity.iter().map(|&d| d as f64).collect();
        let truncation = record.diagnostics.truncation.as_ref();
        outcomes.push(RealizationOutcome {
            seed: *seed,
            initial_bits: initial_bits(record),
            density: equilibrium_estimate(&record.density)?,
            diversity: equilibrium_estimate(&diversity_series)?,
            discarded_weight: truncation.map(|t| *t.cumulative_discarded.last().unwrap()),
            max_bond: truncation.map(|t| *t.max_bond.last().unwrap()),
        });
    }

    let density_eqs: Vec<f64> = outcomes.iter().map(|o| o.density.mean).collect();
    let diversity_eqs: Vec<f64> = outcomes.iter().map(|o| o.diversity.mean).collect();
    Ok(EnsembleSummary {
        backend: spec.backend.kind(),
        sites: spec.sites,
        fill_fraction: spec.fill_fraction,
        realizations: spec.realizations,
        master_seed: spec.master_seed,
        times,
        mean_density,
        mean_diversity,
        density_eq: mean(&density_eqs),
        density_eq_stderr: stderr_of_mean(&density_eqs),
        density_drift: mean(&outcomes.iter().map(|o| o.density.drift).collect::<Vec<_>>()),
        diversity_eq: mean(&diversity_eqs),
        diversity_eq_stderr: stderr_of_mean(&diversity_eqs),
        diversity_drift: mean(&outcomes.iter().map(|o| o.diversity.drift).collect::<Vec<_>>()),
        outcomes,
    })
}

/// Reconstructs the initial bit string from the first population sample.
fn initial_bits(record: &TrajectoryRecord) -> String {
    record.populations[0]
        .iter()
        .map(|&n| if n > 0.5 { '1' } else { '0' })
        .collect()
}

/// Power-law fit of equilibrium cluster diversity against chain size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub sizes: Vec<usize>,
    pub values: Vec<f64>,
    /// Slope of ln(value) against ln(size).
    pub exponent: f64,
    /// Standard error of the fitted exponent.
    pub exponent_stderr: f64,
    /// Intercept of the fit in log space.
    pub log_intercept: f64,
}

/// Least-squares power-law fit `value ~ size^exponent` in log-log space.
pub fn scaling_fit(sizes: &[usize], values: &[f64]) -> Result<ScalingFit> {
    if sizes.len() < MIN_SCALING_SIZES || sizes.len() != values.len() {
        return Err(Error::TooFewSizes {
            got: sizes.len().min(values.len()),
            min: MIN_SCALING_SIZES,
        });
    }
    for (&size, &value) in sizes.iter().zip(values) {
        if value <= 0.0 {
            return Err(Error::NonPositiveDiversity { value, sites: size });
        }
    }
    let xs: Vec<f64> = sizes.iter().map(|&l| (l as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|&v| v.ln()).collect();
    let n = xs.len() as f64;
    let x_mean = mean(&xs);
    let y_mean = mean(&ys);
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParams(
            "scaling fit needs at least two distinct sizes".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let dof = (n - 2.0).max(1.0);
    let stderr = (ssr / dof / sxx).sqrt();
    Ok(ScalingFit {
        sizes: sizes.to_vec(),
        values: values.to_vec(),
        exponent: slope,
        exponent_stderr: stderr,
        log_intercept: intercept,
    })
}
