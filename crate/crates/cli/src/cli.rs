//! Command-line parsing and dispatch.

use std::path::{Path, PathBuf};

use allometry_core::rng::DEFAULT_SEED;
use allometry_core::scaling::fit_loglog;
use allometry_core::sweeps::{self, SweepConfig};
use allometry_core::{
    DistributionSpec, Estimator, Family, Placement, PopulationGrid, RescaleMode, ScalingFit,
    SeedSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{check_scale, ConfigFile};
use crate::error::Result;
use crate::io::{self, RowDiagnostic};
use crate::manifest::{unix_now, RunManifest};
use crate::parallel::Parallel;
use crate::svg::{render_scatter_svg, sig4};

/// Entropy value the fitted threshold is compared against in summaries.
pub const REFERENCE_H_THRESHOLD: f64 = 0.586;

#[derive(Debug, Parser)]
#[command(
    name = "allometry",
    version,
    about = "Simulate and analyse allometric growth T ~ P^γ"
)]
pub struct Cli {
    /// Suppress summary output.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one (P, T) scatter for a single activity distribution.
    Simulate(SimulateArgs),
    /// Fit T = a·P^γ to a scatter CSV.
    Fit(FitArgs),
    /// Growth-exponent statistics per distribution family.
    Table1(SweepArgs),
    /// Entropy of power-law activity over a (C, β) grid.
    Fig2(Fig2Args),
    /// Joint (H, γ) dataset for the heavy-tailed families.
    Hgamma(HGammaArgs),
    /// Fit the entropy model to a fig2 surface.
    Threshold(ThresholdArgs),
    /// Render a scatter CSV as a log-log SVG with its fitted line.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    Random,
    Spaced,
}

impl From<PlacementArg> for Placement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::Random => Placement::LogUniformRandom,
            PlacementArg::Spaced => Placement::LogSpaced,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long, allow_negative_numbers = true)]
    pub p1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub max_activity: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub pmin: u64,
    #[arg(long, default_value_t = 10_000)]
    pub pmax: u64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = PlacementArg::Random)]
    pub placement: PlacementArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Scatter CSV (`point_id,P,T`).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Scatter CSV with header `point_id,P,T` or `P,T`.
    #[arg(long)]
    pub input: PathBuf,
    /// Fit record (JSON).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML config, or a previous run's manifest.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Multiply every parameter-axis step count by this factor.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per CPU.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub estimator: Option<Estimator>,
    #[arg(long)]
    pub mode: Option<RescaleMode>,
    /// System size N used for rescaling and share sampling.
    #[arg(long)]
    pub n_users: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub entropy: EntropyArgs,
    #[arg(long)]
    pub c_steps: Option<usize>,
    #[arg(long)]
    pub beta_steps: Option<usize>,
    /// Also write `C,beta,N,h1,h_rescaled,mode` to this path.
    #[arg(long)]
    pub detail: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HGammaArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub entropy: EntropyArgs,
    /// Sweep all seven families instead of LogNormal and Pareto-1.
    #[arg(long)]
    pub all_families: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Surface CSV (`C,beta,H`).
    #[arg(long)]
    pub input: PathBuf,
    /// Model record (JSON).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "")]
    pub title: String,
}

/// Runs a parsed command. Summary lines go to stdout.
pub fn run(cli: Cli) -> Result<()> {
    let out = Summary { quiet: cli.quiet };
    match cli.command {
        Command::Simulate(a) => simulate(a, out),
        Command::Fit(a) => fit(a, out),
        Command::Table1(a) => table1(a, out),
        Command::Fig2(a) => fig2(a, out),
        Command::Hgamma(a) => hgamma(a, out),
        Command::Threshold(a) => threshold(a, out),
        Command::Render(a) => render(a, out),
    }
}

#[derive(Debug, Clone, Copy)]
struct Summary {
    quiet: bool,
}

impl Summary {
    fn line(self, text: impl std::fmt::Display) {
        if !self.quiet {
            println!("{text}");
        }
    }
}

fn finish<C: Serialize>(
    command: &str,
    config: &C,
    seed: u64,
    started: u64,
    outputs: &[&Path],
) -> Result<()> {
    let mut manifest = RunManifest::new(command, config, seed, started)?;
    for path in outputs {
        manifest.record_output(path)?;
    }
    manifest.finish(outputs[0])?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SimulateConfig {
    spec: DistributionSpec,
    grid: PopulationGrid,
    seed: u64,
}

fn simulate(a: SimulateArgs, out: Summary) -> Result<()> {
    let started = unix_now();
    let mut spec = DistributionSpec::new(a.family, a.p1, a.p2);
    spec.max_activity = a.max_activity;
    let grid = PopulationGrid {
        p_min: a.pmin,
        p_max: a.pmax,
        n_points: a.points,
        placement: a.placement.into(),
    };
    let samples = allometry_core::growth::generate_scatter(&spec, &grid, SeedSpec::new(a.seed, 0))?;
    io::write_scatter_csv(&a.out, &samples)?;
    out.line(format_args!(
        "{} points written to {}",
        samples.len(),
        a.out.display()
    ));
    finish(
        "simulate",
        &SimulateConfig {
            spec,
            grid,
            seed: a.seed,
        },
        a.seed,
        started,
        &[&a.out],
    )
}

#[derive(Debug, Serialize)]
struct FitRecord<'a> {
    input: &'a Path,
    fit: ScalingFit,
    rejected_rows: &'a [Diagnostic],
}

#[derive(Debug, Serialize)]
struct Diagnostic {
    line: u64,
    reason: String,
}

impl From<&RowDiagnostic> for Diagnostic {
    fn from(d: &RowDiagnostic) -> Self {
        Self {
            line: d.line,
            reason: d.reason.clone(),
        }
    }
}

fn print_fit(fit: &ScalingFit, out: Summary) {
    out.line(format_args!(
        "gamma = {} ± {}, R² = {}, n = {}",
        sig4(fit.gamma),
        sig4(fit.stderr_gamma),
        sig4(fit.r_squared),
        fit.n_points
    ));
}

fn fit(a: FitArgs, out: Summary) -> Result<()> {
    let started = unix_now();
    let data = io::read_scatter_csv(&a.input)?;
    for d in &data.rejected {
        eprintln!(
            "{}, line {}: skipped, {}",
            a.input.display(),
            d.line,
            d.reason
        );
    }
    let fit = fit_loglog(&data.samples)?;
    let rejected: Vec<Diagnostic> = data.rejected.iter().map(Diagnostic::from).collect();
    io::write_json(
        &a.out,
        &FitRecord {
            input: &a.input,
            fit,
            rejected_rows: &rejected,
        },
    )?;
    print_fit(&fit, out);
    #[derive(Serialize)]
    struct FitConfig<'a> {
        input: &'a Path,
    }
    finish("fit", &FitConfig { input: &a.input }, 0, started, &[&a.out])
}

fn sweep_config(base: SweepConfig, a: &SweepArgs) -> Result<SweepConfig> {
    let file = match &a.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut cfg = file.apply(base);
    if let Some(scale) = a.scale.or(file.scale) {
        cfg = cfg.scaled(check_scale(scale)?);
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn apply_entropy(cfg: &mut SweepConfig, e: &EntropyArgs) {
    if let Some(v) = e.estimator {
        cfg.estimator = v;
    }
    if let Some(v) = e.mode {
        cfg.entropy_mode = v;
    }
    if let Some(v) = e.n_users {
        cfg.entropy_users = v;
    }
}

fn table1(a: SweepArgs, out: Summary) -> Result<()> {
    let started = unix_now();
    let cfg = sweep_config(SweepConfig::table1(), &a)?;
    cfg.validate()?;
    let rows = sweeps::run_table1(&cfg, &Parallel::new(a.threads)?)?;
    io::write_table1_csv(&a.out, &rows)?;
    out.line(format_args!(
        "{:<10} {:>6} {:>10} {:>10}",
        "family", "n_sims", "mean_gamma", "sd_gamma"
    ));
    for r in &rows {
        out.line(format_args!(
            "{:<10} {:>6} {:>10} {:>10}",
            r.family.label(),
            r.n_sims,
            sig4(r.mean_gamma),
            sig4(r.sd_gamma)
        ));
    }
    finish("table1", &cfg, cfg.seed, started, &[&a.out])
}

fn fig2(a: Fig2Args, out: Summary) -> Result<()> {
    let started = unix_now();
    let mut cfg = sweep_config(SweepConfig::table1(), &a.sweep)?;
    apply_entropy(&mut cfg, &a.entropy);
    if let Some(v) = a.c_steps {
        cfg.fig2.c_steps = v;
    }
    if let Some(v) = a.beta_steps {
        cfg.fig2.beta_steps = v;
    }
    let rows = sweeps::fig2_dataset(&cfg, &Parallel::new(a.sweep.threads)?)?;
    io::write_fig2_csv(&a.sweep.out, &rows)?;
    let mut outputs = vec![a.sweep.out.as_path()];
    if let Some(detail) = &a.detail {
        io::write_entropy_csv(detail, &rows)?;
        outputs.push(detail);
    }
    let (lo, hi) = rows
        .iter()
        .map(|r| r.entropy.h_rescaled)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), h| {
            (lo.min(h), hi.max(h))
        });
    out.line(format_args!(
        "{} grid points, H in [{}, {}] ({} estimator, {} rescaling)",
        rows.len(),
        sig4(lo),
        sig4(hi),
        cfg.estimator,
        cfg.entropy_mode
    ));
    finish("fig2", &cfg, cfg.seed, started, &outputs)
}

fn hgamma(a: HGammaArgs, out: Summary) -> Result<()> {
    let started = unix_now();
    let base = if a.all_families {
        SweepConfig::table1()
    } else {
        SweepConfig::h_gamma()
    };
    let mut cfg = sweep_config(base, &a.sweep)?;
    apply_entropy(&mut cfg, &a.entropy);
    cfg.validate()?;
    let points = sweeps::run_h_gamma(&cfg, &Parallel::new(a.sweep.threads)?)?;
    io::write_hgamma_csv(&a.sweep.out, &points)?;
    let sep = sweeps::threshold_separation(&points);
    out.line(format_args!(
        "{} points; {} with gamma > {}: min H = {}; {} light: max H = {}; separated: {}",
        points.len(),
        sep.n_accelerating,
        sweeps::ACCELERATING_GAMMA,
        extreme(sep.n_accelerating, sep.min_h_accelerating),
        sep.n_light,
        extreme(sep.n_light, sep.max_h_light),
        if sep.holds() { "yes" } else { "no" }
    ));
    finish("hgamma", &cfg, cfg.seed, started, &[&a.sweep.out])
}

/// A group minimum or maximum, or "n/a" for an empty group.
fn extreme(count: usize, value: f64) -> String {
    if count == 0 {
        "n/a".into()
    } else {
        sig4(value)
    }
}

fn threshold(a: ThresholdArgs, out: Summary) -> Result<()> {
    let started = unix_now();
    let points = io::read_fig2_csv(&a.input)?;
    let model = allometry_core::entropy::fit_eq3(&points)?;
    io::write_json(&a.out, &model)?;
    out.line(format_args!(
        "k1 = {}, k2 = {}, k3 = {}, rms = {}",
        sig4(model.k1),
        sig4(model.k2),
        sig4(model.k3),
        sig4(model.rms_residual)
    ));
    out.line(format_args!(
        "h_threshold = {} (reference {REFERENCE_H_THRESHOLD})",
        sig4(model.h_threshold)
    ));
    #[derive(Serialize)]
    struct ThresholdConfig<'a> {
        input: &'a Path,
    }
    finish(
        "threshold",
        &ThresholdConfig { input: &a.input },
        0,
        started,
        &[&a.out],
    )
}

fn render(a: RenderArgs, out: Summary) -> Result<()> {
    let started = unix_now();
    let data = io::read_scatter_csv(&a.input)?;
    let fit = fit_loglog(&data.samples)?;
    render_scatter_svg(&data.samples, Some(&fit), &a.title, &a.out)?;
    print_fit(&fit, out);
    #[derive(Serialize)]
    struct RenderConfig<'a> {
        input: &'a Path,
        title: &'a str,
    }
    finish(
        "render",
        &RenderConfig {
            input: &a.input,
            title: &a.title,
        },
        0,
        started,
        &[&a.out],
    )
}
