//! Site populations and the derived coarse observables.
//!
//! A trajectory is sampled on a uniform time grid. From the populations
//! n_i(t) this module derives:
//!
//! * visibility v_i(t): max minus min of n_i over a window of one generation
//!   centred on t (samples near the ends of the run, where the window is
//!   truncated, are flagged);
//! * the discretized pattern D_i(t) = 1 iff n_i(t) > 1/2 (exactly 1/2 counts
//!   as dead);
//! * the cluster function C(l, t): how many maximal runs of l consecutive
//!   live sites the pattern holds;
//! * density rho(t): live fraction of D(t);
//! * diversity Delta(t): the number of distinct cluster sizes present. The
//!   total number of clusters (the sum of C over l) is emitted alongside it.

use serde::{Deserialize, Serialize};

/// Which engine produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Dense state-vector integrator.
    StateVector,
    /// Matrix-product (tensor-network) integrator.
    TensorNetwork,
    /// Classical reversible automaton.
    Classical,
}

impl std::fmt::Display for BackendKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BackendKind::StateVector => "state_vector",
            BackendKind::TensorNetwork => "tensor_network",
            BackendKind::Classical => "classical",
        };
        f.write_str(name)
    }
}

/// Truncation bookkeeping recorded by the tensor-network backend.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TruncationSeries {
    /// Cumulative discarded squared Schmidt weight up to each sample.
    pub cumulative_discarded: Vec<f64>,
    /// Largest bond dimension seen up to each sample.
    pub max_bond: Vec<usize>,
}

/// Per-sample integrator diagnostics.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// State norm at each sample (after any renormalization policy applied).
    pub norms: Vec<f64>,
    /// Energy expectation at each sample.
    pub energies: Vec<f64>,
    /// Present for the tensor-network backend only.
    pub truncation: Option<TruncationSeries>,
}

/// A sampled trajectory with every derived observable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub backend: BackendKind,
    pub sites: usize,
    /// Window width used for visibility (one generation).
    pub generation_time: f64,
    pub times: Vec<f64>,
    /// `populations[k][i]` = n_{i+1} at sample k.
    pub populations: Vec<Vec<f64>>,
    /// `visibility[k][i]` = v_{i+1} at sample k.
    pub visibility: Vec<Vec<f64>>,
    /// Sample index range (inclusive) whose visibility windows fit entirely
    /// inside the run; `None` when the run is shorter than one window.
    pub full_visibility_range: Option<(usize, usize)>,
    /// `discretized[k][i]` = D_{i+1} at sample k.
    pub discretized: Vec<Vec<u8>>,
    /// `clusters[k][l-1]` = C(l) at sample k.
    pub clusters: Vec<Vec<u64>>,
    /// Live fraction of the discretized pattern.
    pub density: Vec<f64>,
    /// Number of distinct cluster sizes present.
    pub diversity: Vec<u64>,
    /// Total number of clusters (the cluster function summed over sizes).
    pub cluster_total: Vec<u64>,
    pub diagnostics: Diagnostics,
}

impl TrajectoryRecord {
    /// Derives every observable from raw populations.
    ///
    /// `populations[k]` must hold one value per site at sample `times[k]`.
    pub fn build(
        backend: BackendKind,
        sites: usize,
        times: Vec<f64>,
        populations: Vec<Vec<f64>>,
        diagnostics: Diagnostics,
        generation_time: f64,
    ) -> Self {
        assert_eq!(times.len(), populations.len());
        for row in &populations {
            assert_eq!(row.len(), sites);
        }
        let (visibility, full_visibility_range) =
            visibility_series(&times, &populations, generation_time);
        let discretized: Vec<Vec<u8>> = populations.iter().map(|row| discretize(row)).collect();
        let clusters: Vec<Vec<u64>> = discretized.iter().map(|row| cluster_counts(row)).collect();
        let density = discretized.iter().map(|row| density(row)).collect();
        let diversity = clusters.iter().map(|c| distinct_cluster_sizes(c)).collect();
        let cluster_total = clusters.iter().map(|c| total_clusters(c)).collect();
        Self {
            backend,
            sites,
            generation_time,
            times,
            populations,
            visibility,
            full_visibility_range,
            discretized,
            clusters,
            density,
            diversity,
            cluster_total,
            diagnostics,
        }
    }
}

/// D_i = 1 iff n_i > 1/2; exactly 1/2 maps to dead.
pub fn discretize(populations: &[f64]) -> Vec<u8> {
    populations.iter().map(|&n| u8::from(n > 0.5)).collect()
}

/// Cluster function: `counts[l-1]` is the number of maximal runs of exactly
/// `l` consecutive live sites. The returned vector always has one slot per
/// site, so every possible size is addressable.
pub fn cluster_counts(bits: &[u8]) -> Vec<u64> {
    let mut counts = vec![0u64; bits.len()];
    let mut run = 0usize;
    for &b in bits {
        if b > 0 {
            run += 1;
        } else if run > 0 {
            counts[run - 1] += 1;
            run = 0;
        }
    }
    if run > 0 {
        counts[run - 1] += 1;
    }
    debug_assert_eq!(
        counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum::<u64>(),
        bits.iter().map(|&b| u64::from(b)).sum::<u64>(),
        "cluster sizes must add up to the number of live sites"
    );
    counts
}

/// Live fraction of a discretized pattern.
pub fn density(bits: &[u8]) -> f64 {
    if bits.is_empty() {
        return 0.0;
    }
    bits.iter().map(|&b| f64::from(b)).sum::<f64>() / bits.len() as f64
}

/// Number of distinct cluster sizes present.
pub fn distinct_cluster_sizes(counts: &[u64]) -> u64 {
    counts.iter().filter(|&&c| c > 0).count() as u64
}

/// Total number of clusters: the cluster function summed over sizes.
pub fn total_clusters(counts: &[u64]) -> u64 {
    counts.iter().sum()
}

/// Visibility of every site at every sample: max minus min of the population
/// over a window of width `window` centred on the sample time.
///
/// Returns the series and the inclusive sample range whose windows fit
/// entirely inside the run (`None` if no window does). The time grid must be
/// uniform, which the integrators guarantee.
pub fn visibility_series(
    times: &[f64],
    populations: &[Vec<f64>],
    window: f64,
) -> (Vec<Vec<f64>>, Option<(usize, usize)>) {
    let n = times.len();
    if n == 0 {
        return (Vec::new(), None);
    }
    let sites = populations[0].len();
    if n == 1 {
        return (vec![vec![0.0; sites]], Some((0, 0)));
    }
    let dt = times[1] - times[0];
    debug_assert!(
        times.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() < 1e-9),
        "visibility expects a uniform sample grid"
    );
    // Half-width in samples; a tiny slack absorbs rounding in window / dt.
    let half_span = ((window / 2.0) / dt + 1e-9).floor() as usize;
    let mut visibility = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(half_span);
        let hi = (k + half_span).min(n - 1);
        let mut row = Vec::with_capacity(sites);
        for i in 0..sites {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for sample in &populations[lo..=hi] {
                let v = sample[i];
                min = min.min(v);
                max = max.max(v);
            }
            row.push(max - min);
        }
        visibility.push(row);
    }
    let full = if n > 2 * half_span {
        Some((half_span, n - 1 - half_span))
    } else {
        None
    };
    (visibility, full)
}
