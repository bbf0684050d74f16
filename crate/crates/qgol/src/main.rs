//! Command-line driver: single trajectories, classical runs, ensembles,
//! fill-fraction scans, quantum-classical comparisons, and size-scaling
//! studies. Settings layer in the order defaults < TOML config file <
//! command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qgol::classical::{classical_record, Boundary};
use qgol::config::{
    FileConfig, InitialState, OutputSection, ResolvedEnsemble, ResolvedRun,
};
use qgol::ensemble::{run_ensemble, scaling_fit, EnsembleSummary};
use qgol::error::Error;
use qgol::observables::{BackendKind, TrajectoryRecord};
use qgol::output::{
    self, CompareDocument, ComparePoint, Metadata, RunSummary, ScalingDocument, ScanDocument,
};
use qgol::splitting::SplitOrder;
use qgol::{dense, mps, Result};

#[derive(Parser)]
#[command(
    name = "qgol",
    version,
    about = "One-dimensional quantum Game of Life: neighbour-gated spin-flip dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one quantum trajectory and write site-resolved results.
    Run(RunArgs),
    /// Evolve the deterministic classical automaton from one configuration.
    Classical(ClassicalArgs),
    /// Average an ensemble of random initial configurations at one fill fraction.
    Ensemble(EnsembleArgs),
    /// Sweep ensembles over a grid of fill fractions.
    Scan(ScanArgs),
    /// Compare quantum and classical equilibria over a fill-fraction grid.
    Compare(CompareArgs),
    /// Fit how classical equilibrium cluster diversity scales with chain size.
    Scaling(ScalingArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    StateVector,
    TensorNetwork,
    Classical,
}

impl From<BackendArg> for BackendKind {
    fn from(arg: BackendArg) -> Self {
        match arg {
            BackendArg::StateVector => Self::StateVector,
            BackendArg::TensorNetwork => Self::TensorNetwork,
            BackendArg::Classical => Self::Classical,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum BoundaryArg {
    Frozen,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(arg: BoundaryArg) -> Self {
        match arg {
            BoundaryArg::Frozen => Self::Frozen,
            BoundaryArg::Periodic => Self::Periodic,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum PresetArg {
    /// Six-site motif 110011, centred.
    Blinker,
    /// Twenty-four contiguous live sites, centred.
    FilledBlock,
}

/// Where result files land.
#[derive(Args)]
struct OutputArgs {
    /// Directory for result files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Base name for result files.
    #[arg(long)]
    tag: Option<String>,
}

impl OutputArgs {
    fn resolve(&self, section: &OutputSection, default_tag: &str) -> (PathBuf, String) {
        let dir = self
            .out_dir
            .clone()
            .or_else(|| section.directory.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        let tag = self
            .tag
            .clone()
            .or_else(|| section.tag.clone())
            .unwrap_or_else(|| default_tag.to_string());
        (dir, tag)
    }
}

/// Initial-state choice shared by `run` and `classical`.
#[derive(Args)]
#[group(multiple = false)]
struct InitialArgs {
    /// Start from a named motif.
    #[arg(long)]
    preset: Option<PresetArg>,
    /// Start from an explicit bit string (one character per site).
    #[arg(long)]
    bits: Option<String>,
    /// Start from a random configuration with this live fraction.
    #[arg(long)]
    random_fill: Option<f64>,
}

impl InitialArgs {
    fn as_initial_state(&self) -> Option<InitialState> {
        if let Some(preset) = self.preset {
            Some(match preset {
                PresetArg::Blinker => InitialState::Blinker,
                PresetArg::FilledBlock => InitialState::FilledBlock,
            })
        } else if let Some(bits) = &self.bits {
            Some(InitialState::Bits { bits: bits.clone() })
        } else {
            self.random_fill
                .map(|fill_fraction| InitialState::Random { fill_fraction })
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sites: Option<usize>,
    /// Integration backend (state-vector or tensor-network).
    #[arg(long)]
    backend: Option<BackendArg>,
    /// Split-step size.
    #[arg(long)]
    dt: Option<f64>,
    /// Evolution time.
    #[arg(long)]
    t_final: Option<f64>,
    /// Splitting order: 1, 2, or 4.
    #[arg(long)]
    order: Option<u8>,
    /// Spacing of observable samples.
    #[arg(long)]
    sample_interval: Option<f64>,
    /// Window length for the visibility observable.
    #[arg(long)]
    generation_time: Option<f64>,
    /// Bond-dimension cap (tensor-network backend).
    #[arg(long)]
    bond_cap: Option<usize>,
    /// Relative singular-value cutoff (tensor-network backend).
    #[arg(long)]
    truncation_threshold: Option<f64>,
    /// Seed for random initial states.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    initial: InitialArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassicalArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sites: Option<usize>,
    /// Number of update generations.
    #[arg(long)]
    generations: Option<usize>,
    /// Boundary handling for the automaton.
    #[arg(long)]
    boundary: Option<BoundaryArg>,
    /// Seed for random initial states.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    initial: InitialArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// Ensemble settings shared by `ensemble`, `scan`, `compare`, and `scaling`.
#[derive(Args)]
struct EnsembleCommonArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sites: Option<usize>,
    /// Realizations per ensemble point.
    #[arg(long)]
    realizations: Option<usize>,
    /// Master seed; per-realization seeds derive from it.
    #[arg(long)]
    master_seed: Option<u64>,
    /// Split-step size (quantum backends).
    #[arg(long)]
    dt: Option<f64>,
    /// Evolution time (quantum backends).
    #[arg(long)]
    t_final: Option<f64>,
    /// Splitting order: 1, 2, or 4.
    #[arg(long)]
    order: Option<u8>,
    /// Spacing of observable samples.
    #[arg(long)]
    sample_interval: Option<f64>,
    /// Bond-dimension cap (tensor-network backend).
    #[arg(long)]
    bond_cap: Option<usize>,
    /// Relative singular-value cutoff (tensor-network backend).
    #[arg(long)]
    truncation_threshold: Option<f64>,
    /// Update generations (classical backend).
    #[arg(long)]
    generations: Option<usize>,
    /// Boundary handling (classical backend).
    #[arg(long)]
    boundary: Option<BoundaryArg>,
    #[command(flatten)]
    output: OutputArgs,
}

impl EnsembleCommonArgs {
    /// Layers the config file and these flags into resolved settings.
    fn resolve(&self) -> Result<(ResolvedEnsemble, OutputSection)> {
        let file = FileConfig::load_optional(self.config.as_deref())?;
        let mut ens = ResolvedEnsemble::from_section(&file.ensemble)?;
        if let Some(v) = self.sites {
            ens.sites = v;
        }
        if let Some(v) = self.realizations {
            ens.realizations = v;
            ens.classical_realizations = file
                .ensemble
                .classical_realizations
                .unwrap_or(v);
        }
        if let Some(v) = self.master_seed {
            ens.master_seed = v;
        }
        if let Some(v) = self.dt {
            ens.params.dt = v;
        }
        if let Some(v) = self.t_final {
            ens.params.t_final = v;
        }
        if let Some(v) = self.order {
            ens.params.order = SplitOrder::from_u8(v)?;
        }
        if let Some(v) = self.sample_interval {
            ens.params.sample_interval = v;
        }
        if let Some(v) = self.bond_cap {
            ens.bond_cap = v;
        }
        if let Some(v) = self.truncation_threshold {
            ens.truncation_threshold = v;
        }
        if let Some(v) = self.generations {
            ens.generations = v;
        }
        if let Some(v) = self.boundary {
            ens.boundary = v.into();
        }
        Ok((ens, file.output))
    }
}

#[derive(Args)]
struct EnsembleArgs {
    #[command(flatten)]
    common: EnsembleCommonArgs,
    /// Trajectory backend.
    #[arg(long)]
    backend: Option<BackendArg>,
    /// Live fraction of the random initial configurations.
    #[arg(long)]
    fill: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: EnsembleCommonArgs,
    /// Trajectory backend.
    #[arg(long)]
    backend: Option<BackendArg>,
    /// Comma-separated fill fractions to sweep.
    #[arg(long, value_delimiter = ',')]
    fills: Option<Vec<f64>>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: EnsembleCommonArgs,
    /// Comma-separated fill fractions to compare at.
    #[arg(long, value_delimiter = ',')]
    fills: Option<Vec<f64>>,
    /// Realizations for the classical side (defaults to --realizations).
    #[arg(long)]
    classical_realizations: Option<usize>,
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    common: EnsembleCommonArgs,
    /// Comma-separated chain sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Live fraction of the random initial configurations.
    #[arg(long)]
    fill: Option<f64>,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Classical(args) => cmd_classical(args),
        Command::Ensemble(args) => cmd_ensemble(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Scaling(args) => cmd_scaling(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

/// Writes the three per-trajectory files and prints a short report.
fn emit_trajectory(
    record: &TrajectoryRecord,
    initial_bits: &str,
    metadata: &Metadata,
    dir: &Path,
    tag: &str,
) -> Result<()> {
    let trajectory = dir.join(format!("{tag}_trajectory.csv"));
    let clusters = dir.join(format!("{tag}_clusters.csv"));
    let summary = dir.join(format!("{tag}_summary.json"));
    output::write_trajectory_csv(&trajectory, metadata, record)?;
    output::write_cluster_csv(&clusters, metadata, record)?;
    output::write_json(&summary, metadata, &RunSummary::new(record, initial_bits))?;
    let last = record.times.len() - 1;
    println!(
        "final t={}: density {:.6}, cluster diversity {}, clusters {}",
        record.times[last],
        record.density[last],
        record.diversity[last],
        record.cluster_total[last],
    );
    if let Some(trunc) = &record.diagnostics.truncation {
        println!(
            "max bond {}, cumulative discarded weight {:.3e}",
            trunc.max_bond.last().unwrap(),
            trunc.cumulative_discarded.last().unwrap(),
        );
    }
    for path in [&trajectory, &clusters, &summary] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let file = FileConfig::load_optional(args.config.as_deref())?;
    let mut run = ResolvedRun::from_section(&file.run)?;
    if let Some(v) = args.sites {
        run.sites = v;
    }
    if let Some(v) = args.backend {
        run.backend = v.into();
    }
    if let Some(v) = args.dt {
        run.params.dt = v;
    }
    if let Some(v) = args.t_final {
        run.params.t_final = v;
    }
    if let Some(v) = args.order {
        run.params.order = SplitOrder::from_u8(v)?;
    }
    if let Some(v) = args.sample_interval {
        run.params.sample_interval = v;
    }
    if let Some(v) = args.generation_time {
        run.params.generation_time = v;
    }
    if let Some(v) = args.bond_cap {
        run.bond_cap = v;
    }
    if let Some(v) = args.truncation_threshold {
        run.truncation_threshold = v;
    }
    if let Some(v) = args.seed {
        run.seed = v;
    }
    if let Some(initial) = args.initial.as_initial_state() {
        run.initial = initial;
    }

    let initial = run.initial_config()?;
    println!(
        "run: backend {}, {} sites, dt {}, order {}, t_final {}",
        run.backend,
        run.sites,
        run.params.dt,
        run.params.order.as_u8(),
        run.params.t_final
    );
    println!("initial configuration {}", initial.to_bit_string());
    let record = match run.backend {
        BackendKind::StateVector => dense::evolve(&initial, &run.params)?,
        BackendKind::TensorNetwork => mps::evolve(
            &initial,
            &run.params,
            run.bond_cap,
            run.truncation_threshold,
        )?,
        BackendKind::Classical => {
            return Err(Error::InvalidConfig(
                "`run` drives the quantum backends; use the `classical` subcommand".into(),
            ))
        }
    };
    let metadata = Metadata::new("run", &run)?;
    let (dir, tag) = args.output.resolve(&file.output, "run");
    emit_trajectory(&record, &initial.to_bit_string(), &metadata, &dir, &tag)
}

fn cmd_classical(args: ClassicalArgs) -> Result<()> {
    let file = FileConfig::load_optional(args.config.as_deref())?;
    let mut run = ResolvedRun::from_section(&file.run)?;
    run.backend = BackendKind::Classical;
    if let Some(v) = args.sites {
        run.sites = v;
    }
    if let Some(v) = args.generations {
        run.generations = v;
    }
    if let Some(v) = args.boundary {
        run.boundary = v.into();
    }
    if let Some(v) = args.seed {
        run.seed = v;
    }
    if let Some(initial) = args.initial.as_initial_state() {
        run.initial = initial;
    }

    let initial = run.initial_config()?;
    println!(
        "classical: {} sites, {} generations, {:?} boundary",
        run.sites, run.generations, run.boundary
    );
    println!("initial configuration {}", initial.to_bit_string());
    let record = classical_record(
        &initial,
        run.generations,
        run.boundary,
        run.params.generation_time,
    )?;
    let metadata = Metadata::new("classical", &run)?;
    let (dir, tag) = args.output.resolve(&file.output, "classical");
    emit_trajectory(&record, &initial.to_bit_string(), &metadata, &dir, &tag)
}

fn print_ensemble_line(summary: &EnsembleSummary, label: &str) {
    println!(
        "{label}: density_eq {:.6} +- {:.6} (drift {:.2e}), diversity_eq {:.4} +- {:.4}",
        summary.density_eq,
        summary.density_eq_stderr,
        summary.density_drift,
        summary.diversity_eq,
        summary.diversity_eq_stderr,
    );
}

fn cmd_ensemble(args: EnsembleArgs) -> Result<()> {
    let (mut ens, out_section) = args.common.resolve()?;
    if let Some(v) = args.backend {
        ens.backend = v.into();
    }
    if let Some(v) = args.fill {
        ens.fill_fraction = v;
    }
    println!(
        "ensemble: backend {}, {} sites, fill {}, {} realizations",
        ens.backend, ens.sites, ens.fill_fraction, ens.realizations
    );
    let spec = ens.spec_at(ens.backend, ens.sites, ens.fill_fraction);
    let summary = run_ensemble(&spec)?;
    print_ensemble_line(&summary, "equilibrium");

    let metadata = Metadata::new("ensemble", &ens)?;
    let (dir, tag) = args.common.output.resolve(&out_section, "ensemble");
    let series = dir.join(format!("{tag}_series.csv"));
    let json = dir.join(format!("{tag}_summary.json"));
    output::write_ensemble_series_csv(&series, &metadata, &summary)?;
    output::write_json(&json, &metadata, &summary)?;
    for path in [&series, &json] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let (mut ens, out_section) = args.common.resolve()?;
    if let Some(v) = args.backend {
        ens.backend = v.into();
    }
    if let Some(v) = args.fills {
        ens.fill_fractions = v;
    }
    println!(
        "scan: backend {}, {} sites, fills {:?}, {} realizations each",
        ens.backend, ens.sites, ens.fill_fractions, ens.realizations
    );
    let mut points = Vec::with_capacity(ens.fill_fractions.len());
    for &fill in &ens.fill_fractions {
        let summary = run_ensemble(&ens.spec_at(ens.backend, ens.sites, fill))?;
        print_ensemble_line(&summary, &format!("fill {fill}"));
        points.push(summary);
    }

    let metadata = Metadata::new("scan", &ens)?;
    let (dir, tag) = args.common.output.resolve(&out_section, "scan");
    let csv = dir.join(format!("{tag}_points.csv"));
    let json = dir.join(format!("{tag}_summary.json"));
    let rows: Vec<(String, &EnsembleSummary)> = points
        .iter()
        .map(|p| (p.fill_fraction.to_string(), p))
        .collect();
    output::write_equilibrium_csv(&csv, &metadata, "fill_fraction", &rows)?;
    output::write_json(&json, &metadata, &ScanDocument { points: &points })?;
    for path in [&csv, &json] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let (mut ens, out_section) = args.common.resolve()?;
    if let Some(v) = args.fills {
        ens.fill_fractions = v;
    }
    if let Some(v) = args.classical_realizations {
        ens.classical_realizations = v;
    }
    println!(
        "compare: {} sites, fills {:?}, {} quantum / {} classical realizations",
        ens.sites, ens.fill_fractions, ens.realizations, ens.classical_realizations
    );
    let mut points = Vec::with_capacity(ens.fill_fractions.len());
    for &fill in &ens.fill_fractions {
        let quantum = run_ensemble(&ens.spec_at(BackendKind::TensorNetwork, ens.sites, fill))?;
        let classical = run_ensemble(&ens.spec_at(BackendKind::Classical, ens.sites, fill))?;
        print_ensemble_line(&quantum, &format!("fill {fill} quantum"));
        print_ensemble_line(&classical, &format!("fill {fill} classical"));
        points.push(ComparePoint {
            fill_fraction: fill,
            quantum,
            classical,
        });
    }
    let quantum_peak = points
        .iter()
        .map(|p| p.quantum.diversity_eq)
        .fold(f64::NEG_INFINITY, f64::max);
    let classical_peak = points
        .iter()
        .map(|p| p.classical.diversity_eq)
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "peak diversity: quantum {quantum_peak:.4}, classical {classical_peak:.4}, ratio {:.4}",
        quantum_peak / classical_peak
    );

    let metadata = Metadata::new("compare", &ens)?;
    let (dir, tag) = args.common.output.resolve(&out_section, "compare");
    let csv = dir.join(format!("{tag}_points.csv"));
    let json = dir.join(format!("{tag}_summary.json"));
    let mut rows: Vec<(String, &EnsembleSummary)> = Vec::new();
    for point in &points {
        rows.push((point.fill_fraction.to_string(), &point.quantum));
        rows.push((point.fill_fraction.to_string(), &point.classical));
    }
    output::write_equilibrium_csv(&csv, &metadata, "fill_fraction", &rows)?;
    output::write_json(
        &json,
        &metadata,
        &CompareDocument {
            points: &points,
            quantum_peak_diversity: quantum_peak,
            classical_peak_diversity: classical_peak,
            peak_diversity_ratio: quantum_peak / classical_peak,
        },
    )?;
    for path in [&csv, &json] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_scaling(args: ScalingArgs) -> Result<()> {
    let (mut ens, out_section) = args.common.resolve()?;
    ens.backend = BackendKind::Classical;
    if let Some(v) = args.sizes {
        ens.sizes = v;
    }
    if let Some(v) = args.fill {
        ens.fill_fraction = v;
    }
    println!(
        "scaling: sizes {:?}, fill {}, {} realizations each",
        ens.sizes, ens.fill_fraction, ens.realizations
    );
    let mut points = Vec::with_capacity(ens.sizes.len());
    for &sites in &ens.sizes {
        let summary = run_ensemble(&ens.spec_at(BackendKind::Classical, sites, ens.fill_fraction))?;
        print_ensemble_line(&summary, &format!("{sites} sites"));
        points.push(summary);
    }
    let sizes: Vec<usize> = points.iter().map(|p| p.sites).collect();
    let values: Vec<f64> = points.iter().map(|p| p.diversity_eq).collect();
    let fit = scaling_fit(&sizes, &values)?;
    println!(
        "diversity scaling exponent {:.4} +- {:.4}",
        fit.exponent, fit.exponent_stderr
    );

    let metadata = Metadata::new("scaling", &ens)?;
    let (dir, tag) = args.common.output.resolve(&out_section, "scaling");
    let csv = dir.join(format!("{tag}_points.csv"));
    let json = dir.join(format!("{tag}_summary.json"));
    let rows: Vec<(String, &EnsembleSummary)> = points
        .iter()
        .map(|p| (p.sites.to_string(), p))
        .collect();
    output::write_equilibrium_csv(&csv, &metadata, "sites", &rows)?;
    output::write_json(
        &json,
        &metadata,
        &ScalingDocument {
            points: &points,
            fit: &fit,
        },
    )?;
    for path in [&csv, &json] {
        println!("wrote {}", path.display());
    }
    Ok(())
}
