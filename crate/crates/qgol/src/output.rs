//! Result files: long-format CSV for site-resolved series, a cluster-count
//! CSV, and JSON summaries.
//!
//! Every file opens with `#`-prefixed metadata lines (or a `metadata` object
//! in JSON) recording the backend, integration settings, seed, the
//! site-to-bit convention, the crate version, and a hash of the resolved
//! configuration, so any result can be traced back to the exact settings
//! that produced it. Floating-point values are written with Rust's default
//! shortest-round-trip formatting.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ensemble::EnsembleSummary;
use crate::error::{Error, Result};
use crate::observables::TrajectoryRecord;

/// Statement of the basis-index convention, recorded in every output file.
pub const BIT_CONVENTION: &str = "site i is bit i-1 of the basis index (site 1 is least significant)";

/// Hash of a resolved configuration: SHA-256 over its canonical JSON,
/// truncated to 16 hex digits.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let canonical = serde_json::to_string(config)?;
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(16);
    for byte in &digest[..8] {
        write!(hex, "{byte:02x}").expect("writing to a string cannot fail");
    }
    Ok(hex)
}

/// Provenance block shared by all output files of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub program: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_hash: String,
    pub bit_convention: &'static str,
}

impl Metadata {
    /// Builds the provenance block for `command` from the resolved settings.
    pub fn new<T: Serialize>(command: &str, resolved: &T) -> Result<Self> {
        Ok(Self {
            program: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config_hash: config_hash(resolved)?,
            bit_convention: BIT_CONVENTION,
        })
    }

    fn comment_lines(&self, out: &mut String) {
        let _ = writeln!(out, "# program: {} {}", self.program, self.version);
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# config_hash: {}", self.config_hash);
        let _ = writeln!(out, "# bit_convention: {}", self.bit_convention);
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes `value` as pretty JSON with a `metadata` object alongside the
/// payload.
pub fn write_json<T: Serialize>(path: &Path, metadata: &Metadata, value: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        metadata: &'a Metadata,
        #[serde(flatten)]
        payload: &'a T,
    }
    let text = serde_json::to_string_pretty(&Document {
        metadata,
        payload: value,
    })?;
    write_text(path, &(text + "\n"))
}

/// Long-format site series: one row per (sample, site) with the population,
/// the visibility, and the discretized occupation.
pub fn write_trajectory_csv(
    path: &Path,
    metadata: &Metadata,
    record: &TrajectoryRecord,
) -> Result<()> {
    let mut out = String::new();
    metadata.comment_lines(&mut out);
    let _ = writeln!(out, "# backend: {}", record.backend);
    let _ = writeln!(out, "# sites: {}", record.sites);
    let _ = writeln!(out, "# generation_time: {}", record.generation_time);
    if let Some((lo, hi)) = record.full_visibility_range {
        let _ = writeln!(
            out,
            "# full_visibility_samples: {lo}..={hi} (visibility windows are clipped outside)"
        );
    } else {
        let _ = writeln!(
            out,
            "# full_visibility_samples: none (run shorter than one visibility window)"
        );
    }
    out.push_str("t,site,n,v,d\n");
    for (k, &t) in record.times.iter().enumerate() {
        for site in 1..=record.sites {
            let _ = writeln!(
                out,
                "{t},{site},{},{},{}",
                record.populations[k][site - 1],
                record.visibility[k][site - 1],
                record.discretized[k][site - 1],
            );
        }
    }
    write_text(path, &out)
}

/// Cluster-size counts: one row per (sample, size) with a nonzero count.
pub fn write_cluster_csv(
    path: &Path,
    metadata: &Metadata,
    record: &TrajectoryRecord,
) -> Result<()> {
    let mut out = String::new();
    metadata.comment_lines(&mut out);
    let _ = writeln!(out, "# backend: {}", record.backend);
    let _ = writeln!(out, "# sites: {}", record.sites);
    out.push_str("t,size,count\n");
    for (k, &t) in record.times.iter().enumerate() {
        for (size_idx, &count) in record.clusters[k].iter().enumerate() {
            if count > 0 {
                let _ = writeln!(out, "{t},{},{count}", size_idx + 1);
            }
        }
    }
    write_text(path, &out)
}

/// Scalar summary of one trajectory: density, cluster diversity, cluster
/// totals, and the integration diagnostics.
#[derive(Serialize)]
pub struct RunSummary<'a> {
    pub backend: crate::observables::BackendKind,
    pub sites: usize,
    pub initial_bits: &'a str,
    pub times: &'a [f64],
    pub density: &'a [f64],
    pub diversity: &'a [u64],
    pub cluster_total: &'a [u64],
    pub full_visibility_range: Option<(usize, usize)>,
    pub diagnostics: &'a crate::observables::Diagnostics,
}

impl<'a> RunSummary<'a> {
    pub fn new(record: &'a TrajectoryRecord, initial_bits: &'a str) -> Self {
        Self {
            backend: record.backend,
            sites: record.sites,
            initial_bits,
            times: &record.times,
            density: &record.density,
            diversity: &record.diversity,
            cluster_total: &record.cluster_total,
            full_visibility_range: record.full_visibility_range,
            diagnostics: &record.diagnostics,
        }
    }
}

/// Time-resolved ensemble means: one row per sample.
pub fn write_ensemble_series_csv(
    path: &Path,
    metadata: &Metadata,
    summary: &EnsembleSummary,
) -> Result<()> {
    let mut out = String::new();
    metadata.comment_lines(&mut out);
    let _ = writeln!(out, "# backend: {}", summary.backend);
    let _ = writeln!(out, "# sites: {}", summary.sites);
    let _ = writeln!(out, "# fill_fraction: {}", summary.fill_fraction);
    let _ = writeln!(out, "# realizations: {}", summary.realizations);
    out.push_str("t,mean_density,mean_diversity\n");
    for (k, &t) in summary.times.iter().enumerate() {
        let _ = writeln!(
            out,
            "{t},{},{}",
            summary.mean_density[k], summary.mean_diversity[k]
        );
    }
    write_text(path, &out)
}

/// One row of equilibrium statistics per ensemble, keyed by a caller-chosen
/// leading column (fill fraction for scans, chain size for scaling studies).
pub fn write_equilibrium_csv(
    path: &Path,
    metadata: &Metadata,
    key_column: &str,
    rows: &[(String, &EnsembleSummary)],
) -> Result<()> {
    let mut out = String::new();
    metadata.comment_lines(&mut out);
    let _ = writeln!(
        out,
        "{key_column},backend,density_eq,density_eq_stderr,density_drift,diversity_eq,diversity_eq_stderr,diversity_drift"
    );
    for (key, summary) in rows {
        let _ = writeln!(
            out,
            "{key},{},{},{},{},{},{},{}",
            summary.backend,
            summary.density_eq,
            summary.density_eq_stderr,
            summary.density_drift,
            summary.diversity_eq,
            summary.diversity_eq_stderr,
            summary.diversity_drift,
        );
    }
    write_text(path, &out)
}

/// JSON payload of a fill-fraction scan.
#[derive(Serialize)]
pub struct ScanDocument<'a> {
    pub points: &'a [EnsembleSummary],
}

/// One fill-fraction point of a quantum-classical comparison.
#[derive(Serialize)]
pub struct ComparePoint {
    pub fill_fraction: f64,
    pub quantum: EnsembleSummary,
    pub classical: EnsembleSummary,
}

/// JSON payload of a quantum-classical comparison over a fill grid.
#[derive(Serialize)]
pub struct CompareDocument<'a> {
    pub points: &'a [ComparePoint],
    /// Largest quantum equilibrium cluster diversity over the grid.
    pub quantum_peak_diversity: f64,
    /// Largest classical equilibrium cluster diversity over the grid.
    pub classical_peak_diversity: f64,
    /// Ratio of the two peaks.
    pub peak_diversity_ratio: f64,
}

/// JSON payload of a size-scaling study.
#[derive(Serialize)]
pub struct ScalingDocument<'a> {
    pub points: &'a [EnsembleSummary],
    pub fit: &'a crate::ensemble::ScalingFit,
}
