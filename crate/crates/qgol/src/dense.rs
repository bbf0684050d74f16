//! Dense state-vector backend.
//!
//! Stores all 2^L amplitudes with site i mapped to bit i-1 (site 1 is the
//! least significant bit of the basis index). Each term exponential has the
//! closed form
//!
//! ```text
//! exp(-i theta X_i P) = (1 - P) + P (cos theta - i sin theta X_i)
//! ```
//!
//! with P the diagonal projector onto "two or three of the four neighbours
//! alive", so applying it touches only the amplitude pairs that differ in
//! bit i-1 and whose neighbourhood enables the flip. A full step is the
//! split-step composition from [`crate::splitting`] over the three commuting
//! term groups.
//!
//! [`ReferenceEvolver`] provides the exact propagator by diagonalizing the
//! full (real symmetric) Hamiltonian for small chains; it is the accuracy
//! reference the split-step integrator is validated against.

use faer::prelude::*;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{build_terms, sublattice_partition, ClassicalConfig, HamTerm, LatticeSpec};
use crate::observables::{BackendKind, Diagnostics, TrajectoryRecord};
use crate::splitting::{merged_schedule, EvolutionParams, Stage};

/// Memory cap for the dense backend (2^24 amplitudes = 256 MiB).
pub const MAX_STATE_VECTOR_SITES: usize = 24;
/// Size cap for full diagonalization.
pub const MAX_REFERENCE_SITES: usize = 10;
/// Largest norm drift tolerated when reading populations off a state.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// A normalized many-body state as a dense amplitude vector.
#[derive(Debug, Clone)]
pub struct DenseState {
    sites: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// The basis state for a classical configuration.
    pub fn from_config(config: &ClassicalConfig) -> Result<Self> {
        let lattice = LatticeSpec::new(config.len())?;
        let sites = lattice.sites();
        if sites > MAX_STATE_VECTOR_SITES {
            return Err(Error::StateVectorCapacity {
                sites,
                cap: MAX_STATE_VECTOR_SITES,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1usize << sites];
        amps[config.to_basis_index()] = Complex64::ONE;
        Ok(Self { sites, amps })
    }

    /// Wraps a raw amplitude vector (length must be 2^sites).
    pub fn from_amplitudes(sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        LatticeSpec::new(sites)?;
        if sites > MAX_STATE_VECTOR_SITES {
            return Err(Error::StateVectorCapacity {
                sites,
                cap: MAX_STATE_VECTOR_SITES,
            });
        }
        let expected = 1usize << sites;
        if amps.len() != expected {
            return Err(Error::AmplitudeLengthMismatch {
                got: amps.len(),
                expected,
                sites,
            });
        }
        Ok(Self { sites, amps })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.sites, other.sites);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest amplitude difference to `other` (a global-phase-sensitive
    /// distance; the integrators share phase conventions with the reference).
    pub fn max_amplitude_deviation(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.sites, other.sites);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Per-site occupation probabilities, erroring if the norm has drifted
    /// more than [`NORM_TOLERANCE`] away from 1.
    pub fn populations(&self) -> Result<Vec<f64>> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NormDrift {
                norm,
                tol: NORM_TOLERANCE,
            });
        }
        Ok(self.populations_unchecked())
    }

    fn populations_unchecked(&self) -> Vec<f64> {
        let mut pops = vec![0.0; self.sites];
        for (idx, amp) in self.amps.iter().enumerate() {
            let w = amp.norm_sqr();
            if w == 0.0 {
                continue;
            }
            let mut bits = idx;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                pops[b] += w;
                bits &= bits - 1;
            }
        }
        pops
    }

    /// Energy expectation: for each term, twice the real part of the overlap
    /// between the two flip partners on gate-enabled components.
    pub fn energy(&self, terms: &[HamTerm]) -> f64 {
        let mut total = 0.0;
        for term in terms {
            let bit = term.flip_site() - 1;
            let mask = neighbor_mask(term);
            let half = 1usize << (self.sites - 1);
            let low_mask = (1usize << bit) - 1;
            let mut term_sum = 0.0;
            for base in 0..half {
                let idx = ((base & !low_mask) << 1) | (base & low_mask);
                let count = (idx & mask).count_ones();
                if count == 2 || count == 3 {
                    let j = idx | (1 << bit);
                    term_sum += (self.amps[idx].conj() * self.amps[j]).re;
                }
            }
            total += 2.0 * term_sum;
        }
        total
    }

    /// Mirror image of the state: site i maps to site L+1-i, i.e. basis
    /// indices are bit-reversed within L bits.
    pub fn reflected(&self) -> Self {
        let sites = self.sites;
        let mut amps = vec![Complex64::ZERO; self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let rev = idx.reverse_bits() >> (usize::BITS as usize - sites);
            amps[rev] = a;
        }
        Self { sites, amps }
    }
}

fn neighbor_mask(term: &HamTerm) -> usize {
    term.neighbors()
        .into_iter()
        .map(|site| 1usize << (site - 1))
        .sum()
}

/// Applies exp(-i theta h) for one flip term in place.
pub fn apply_flip_rotation(state: &mut DenseState, term: &HamTerm, theta: f64) {
    let bit = term.flip_site() - 1;
    debug_assert!(term.flip_site() + 2 <= state.sites);
    let mask = neighbor_mask(term);
    let cos = theta.cos();
    let misin = Complex64::new(0.0, -theta.sin());
    let half = 1usize << (state.sites - 1);
    let low_mask = (1usize << bit) - 1;
    let flip = 1usize << bit;
    for base in 0..half {
        let idx = ((base & !low_mask) << 1) | (base & low_mask);
        let count = (idx & mask).count_ones();
        if count == 2 || count == 3 {
            let j = idx | flip;
            let a0 = state.amps[idx];
            let a1 = state.amps[j];
            state.amps[idx] = cos * a0 + misin * a1;
            state.amps[j] = misin * a0 + cos * a1;
        }
    }
}

/// Applies one group exponential: every term in the group rotated by `theta`.
/// Terms within a group commute, so the order is immaterial; ascending site
/// order is used for determinism.
pub fn apply_group(state: &mut DenseState, group: &[HamTerm], theta: f64) {
    for term in group {
        apply_flip_rotation(state, term, theta);
    }
}

/// Applies a merged stage schedule (weights in units of dt).
pub fn apply_schedule(
    state: &mut DenseState,
    groups: &[Vec<HamTerm>; 3],
    schedule: &[Stage],
    dt: f64,
) {
    for stage in schedule {
        apply_group(state, &groups[stage.group], stage.weight * dt);
    }
}

/// Split-step evolution of a classical initial configuration, sampling
/// populations, norm, and energy on the uniform grid from `params`.
pub fn evolve(initial: &ClassicalConfig, params: &EvolutionParams) -> Result<TrajectoryRecord> {
    params.validate()?;
    let mut state = DenseState::from_config(initial)?;
    let lattice = LatticeSpec::new(initial.len())?;
    let terms = build_terms(lattice);
    let groups = sublattice_partition(&terms);
    let (steps_per_sample, blocks) = params.sampling_grid();
    let schedule = merged_schedule(params.order, steps_per_sample);
    let block_time = steps_per_sample as f64 * params.dt;

    let mut times = Vec::with_capacity(blocks + 1);
    let mut populations = Vec::with_capacity(blocks + 1);
    let mut norms = Vec::with_capacity(blocks + 1);
    let mut energies = Vec::with_capacity(blocks + 1);
    let mut sample = |state: &DenseState, t: f64| -> Result<()> {
        times.push(t);
        populations.push(state.populations()?);
        norms.push(state.norm());
        energies.push(state.energy(&terms));
        Ok(())
    };

    sample(&state, 0.0)?;
    for block in 1..=blocks {
        apply_schedule(&mut state, &groups, &schedule, params.dt);
        sample(&state, block as f64 * block_time)?;
    }

    let diagnostics = Diagnostics {
        norms,
        energies,
        truncation: None,
    };
    Ok(TrajectoryRecord::build(
        BackendKind::StateVector,
        lattice.sites(),
        times,
        populations,
        diagnostics,
        params.generation_time,
    ))
}

/// Exact propagator for small chains via full diagonalization of the real
/// symmetric Hamiltonian. Diagonalizes once per lattice; evolving to any time
/// is then two dense matrix-vector products.
pub struct ReferenceEvolver {
    sites: usize,
    /// Eigenbasis as a complex matrix (columns are eigenvectors).
    basis: Mat<c64>,
    energies: Vec<f64>,
}

impl ReferenceEvolver {
    pub fn new(lattice: LatticeSpec) -> Result<Self> {
        let sites = lattice.sites();
        if sites > MAX_REFERENCE_SITES {
            return Err(Error::ReferenceCapacity {
                sites,
                cap: MAX_REFERENCE_SITES,
            });
        }
        let dim = 1usize << sites;
        let mut h = Mat::<f64>::zeros(dim, dim);
        for term in build_terms(lattice) {
            let bit = term.flip_site() - 1;
            let mask = neighbor_mask(&term);
            let low_mask = (1usize << bit) - 1;
            for base in 0..(dim >> 1) {
                let idx = ((base & !low_mask) << 1) | (base & low_mask);
                let count = (idx & mask).count_ones();
                if count == 2 || count == 3 {
                    let j = idx | (1 << bit);
                    h[(idx, j)] += 1.0;
                    h[(j, idx)] += 1.0;
                }
            }
        }
        let eig = h
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::EigFailure(format!("{e:?}")))?;
        let u = eig.U();
        let basis = Mat::from_fn(dim, dim, |i, j| c64::new(u[(i, j)], 0.0));
        let energies = (0..dim).map(|k| eig.S()[k]).collect();
        Ok(Self {
            sites,
            basis,
            energies,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// exp(-i H t) applied to an arbitrary state.
    pub fn evolve_state(&self, state: &DenseState, t: f64) -> Result<DenseState> {
        let dim = 1usize << self.sites;
        if state.sites != self.sites {
            return Err(Error::AmplitudeLengthMismatch {
                got: state.amps.len(),
                expected: dim,
                sites: self.sites,
            });
        }
        let psi = Mat::from_fn(dim, 1, |i, _| state.amps[i]);
        // Into the eigenbasis (the basis is real, so transpose = adjoint),
        // phase rotation, and back.
        let mut coeffs = self.basis.transpose() * psi;
        for k in 0..dim {
            let phase = Complex64::from_polar(1.0, -self.energies[k] * t);
            coeffs[(k, 0)] *= phase;
        }
        let evolved = &self.basis * coeffs;
        let amps = (0..dim).map(|i| evolved[(i, 0)]).collect();
        DenseState::from_amplitudes(self.sites, amps)
    }

    /// exp(-i H t) applied to a classical basis state.
    pub fn evolve_config(&self, config: &ClassicalConfig, t: f64) -> Result<DenseState> {
        self.evolve_state(&DenseState::from_config(config)?, t)
    }
}
