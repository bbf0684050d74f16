//! Classical reversible cellular automaton obtained by replacing each
//! continuous flip with a conditional bit flip.
//!
//! One generation updates all interior sites synchronously:
//!
//! ```text
//! bit_i' = bit_i XOR [exactly 2 or 3 of sites i-2, i-1, i+1, i+2 alive]
//! ```
//!
//! for i in 3..=L-2, with the same frozen boundary as the quantum chain
//! (sites 1, 2, L-1, L never change). A periodic variant, where every site
//! updates and neighbours wrap around, is provided as a robustness check.
//!
//! The update is self-inverse on each gate-enabled component only when the
//! gates themselves are unchanged, which the synchronous update does not
//! guarantee — [`injectivity_scan`] enumerates small chains and reports
//! whether distinct configurations collide after one step (they do, for the
//! frozen boundary, from six sites up).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{is_active, ClassicalConfig, LatticeSpec};
use crate::observables::{BackendKind, Diagnostics, TrajectoryRecord};

/// Largest chain [`injectivity_scan`] will enumerate (2^16 configurations).
pub const MAX_SCAN_SITES: usize = 16;

/// Boundary handling for the classical automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Sites 1, 2, L-1, L never update (matches the quantum chain).
    Frozen,
    /// Every site updates; neighbour indices wrap around the chain.
    Periodic,
}

/// Advances `config` by one synchronous generation.
pub fn classical_step(config: &ClassicalConfig, boundary: Boundary) -> ClassicalConfig {
    let sites = config.len();
    let bits = config.bits();
    let mut next = bits.to_vec();
    match boundary {
        Boundary::Frozen => {
            for site in 3..=sites.saturating_sub(2) {
                if is_active(config, site) {
                    next[site - 1] ^= 1;
                }
            }
        }
        Boundary::Periodic => {
            for site in 1..=sites {
                let count: u8 = [-2i64, -1, 1, 2]
                    .into_iter()
                    .map(|d| {
                        let idx = (site as i64 - 1 + d).rem_euclid(sites as i64) as usize;
                        bits[idx]
                    })
                    .sum();
                if count == 2 || count == 3 {
                    next[site - 1] ^= 1;
                }
            }
        }
    }
    ClassicalConfig::from_bits(next).expect("xor of valid bits stays valid")
}

/// Runs `generations` steps and returns every configuration along the way,
/// the initial one included (`generations + 1` entries).
pub fn classical_evolve(
    initial: &ClassicalConfig,
    generations: usize,
    boundary: Boundary,
) -> Result<Vec<ClassicalConfig>> {
    LatticeSpec::new(initial.len())?;
    let mut configs = Vec::with_capacity(generations + 1);
    configs.push(initial.clone());
    for _ in 0..generations {
        let next = classical_step(configs.last().unwrap(), boundary);
        configs.push(next);
    }
    Ok(configs)
}

/// Wraps a classical run in the common trajectory record so the observable
/// pipeline (clusters, density, diversity) applies unchanged. Generation k
/// is reported at time `k * generation_time`; populations are the bits
/// themselves, so the visibility of a sample-aligned window is 0/1-valued.
pub fn classical_record(
    initial: &ClassicalConfig,
    generations: usize,
    boundary: Boundary,
    generation_time: f64,
) -> Result<TrajectoryRecord> {
    let configs = classical_evolve(initial, generations, boundary)?;
    let times = (0..configs.len())
        .map(|k| k as f64 * generation_time)
        .collect();
    let populations: Vec<Vec<f64>> = configs
        .iter()
        .map(|c| c.bits().iter().map(|&b| f64::from(b)).collect())
        .collect();
    let n = configs.len();
    let diagnostics = Diagnostics {
        norms: vec![1.0; n],
        energies: vec![0.0; n],
        truncation: None,
    };
    Ok(TrajectoryRecord::build(
        BackendKind::Classical,
        initial.len(),
        times,
        populations,
        diagnostics,
        generation_time,
    ))
}

/// Outcome of enumerating one step of the automaton on every configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub sites: usize,
    pub boundary: Boundary,
    /// Number of configurations enumerated (2^sites).
    pub configurations: u64,
    /// Number of distinct images.
    pub image_count: u64,
    pub injective: bool,
    /// Configurations whose image is shared with at least one other.
    pub colliding_preimages: u64,
    /// One witness `(a, b, image)` with `a != b`, as bit strings, if any.
    pub example_collision: Option<(String, String, String)>,
}

/// Enumerates one automaton step over all 2^L configurations and reports
/// whether the map is injective (capped at [`MAX_SCAN_SITES`] sites).
pub fn injectivity_scan(sites: usize, boundary: Boundary) -> Result<InjectivityReport> {
    LatticeSpec::new(sites)?;
    if sites > MAX_SCAN_SITES {
        return Err(Error::ScanCapacity {
            sites,
            cap: MAX_SCAN_SITES,
        });
    }
    let total = 1usize << sites;
    // image_of[s] = image index; first_preimage[img] = first s mapping there.
    let mut first_preimage: Vec<u32> = vec![u32::MAX; total];
    let mut colliding = 0u64;
    let mut distinct = 0u64;
    let mut example = None;
    for s in 0..total {
        let config = ClassicalConfig::from_basis_index(s, sites);
        let image = classical_step(&config, boundary).to_basis_index();
        if first_preimage[image] == u32::MAX {
            first_preimage[image] = s as u32;
            distinct += 1;
        } else {
            colliding += 1;
            if example.is_none() {
                let a = ClassicalConfig::from_basis_index(first_preimage[image] as usize, sites);
                example = Some((
                    a.to_bit_string(),
                    config.to_bit_string(),
                    ClassicalConfig::from_basis_index(image, sites).to_bit_string(),
                ));
            }
        }
    }
    Ok(InjectivityReport {
        sites,
        boundary,
        configurations: total as u64,
        image_count: distinct,
        injective: distinct == total as u64,
        colliding_preimages: colliding,
        example_collision: example,
    })
}
