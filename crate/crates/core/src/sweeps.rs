//! Parameter sweeps: growth exponents across the six families, the entropy
//! surface over `(C, β)`, and the joint `(H, γ)` dataset.
//!
//! A sweep is a flat list of independent jobs. Each job owns a stream
//! derived from `(seed, task_id)` and results are gathered in job order, so
//! output does not depend on how an [`Executor`] schedules the work.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::distributions::{sample_activities, DistributionSpec, Family};
use crate::entropy::{
    self, EntropyEstimate, EntropyModelFit, EntropyPoint, Estimator, RescaleMode,
};
use crate::error::{Error, Result};
use crate::growth::{generate_scatter, PopulationGrid};
use crate::rng::{SeedSpec, DEFAULT_SEED};
use crate::scaling::{fit_loglog, ScalingFit};

/// Runs `n` independent jobs and returns their results in index order.
pub trait Executor {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Column labels of the growth-exponent table. Pareto appears twice, split
/// at tail index 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SweepFamily {
    Normal,
    Weibull,
    Poisson,
    Gamma,
    LogNormal,
    #[cfg_attr(feature = "serde", serde(rename = "Pareto-1"))]
    Pareto1,
    #[cfg_attr(feature = "serde", serde(rename = "Pareto-2"))]
    Pareto2,
}

impl SweepFamily {
    pub const ALL: [SweepFamily; 7] = [
        SweepFamily::Normal,
        SweepFamily::Weibull,
        SweepFamily::Poisson,
        SweepFamily::Gamma,
        SweepFamily::LogNormal,
        SweepFamily::Pareto1,
        SweepFamily::Pareto2,
    ];

    pub fn family(self) -> Family {
        match self {
            SweepFamily::Normal => Family::Normal,
            SweepFamily::Weibull => Family::Weibull,
            SweepFamily::Poisson => Family::Poisson,
            SweepFamily::Gamma => Family::Gamma,
            SweepFamily::LogNormal => Family::LogNormal,
            SweepFamily::Pareto1 | SweepFamily::Pareto2 => Family::Pareto,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SweepFamily::Pareto1 => "Pareto-1",
            SweepFamily::Pareto2 => "Pareto-2",
            other => other.family().name(),
        }
    }

    /// Every column except LogNormal (subexponential tail) and Pareto-1
    /// (infinite mean).
    pub fn is_light_tailed(self) -> bool {
        !matches!(self, SweepFamily::LogNormal | SweepFamily::Pareto1)
    }

    /// Parameter ranges and grid sizes of the growth-exponent table.
    pub fn table1_cell(self) -> SweepCell {
        let r = ParamRange::new;
        let (p1, p2) = match self {
            SweepFamily::Normal => (r(1.0, 10.0, 20), Some(r(0.1, 10.0, 20))),
            SweepFamily::Weibull => (r(1.0, 10.0, 20), Some(r(0.1, 10.0, 20))),
            SweepFamily::Poisson => (r(0.1, 10.0, 40), None),
            SweepFamily::Gamma => (r(1.0, 10.0, 20), Some(r(0.1, 10.0, 20))),
            SweepFamily::LogNormal => (r(1.0, 10.0, 20), Some(r(0.1, 10.0, 20))),
            SweepFamily::Pareto1 => (r(1.0, 10.0, 20), Some(r(0.1, 1.0, 10))),
            SweepFamily::Pareto2 => (r(1.0, 10.0, 20), Some(r(1.0, 10.0, 10))),
        };
        SweepCell {
            family: self,
            p1,
            p2,
        }
    }
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SweepFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        Ok(match norm.as_str() {
            "pareto-1" | "pareto1" => SweepFamily::Pareto1,
            "pareto-2" | "pareto2" => SweepFamily::Pareto2,
            other => match other.parse::<Family>()? {
                Family::Normal => SweepFamily::Normal,
                Family::Weibull => SweepFamily::Weibull,
                Family::Poisson => SweepFamily::Poisson,
                Family::Gamma => SweepFamily::Gamma,
                Family::LogNormal => SweepFamily::LogNormal,
                Family::Pareto => {
                    return Err(Error::InvalidParameters(
                        "use Pareto-1 or Pareto-2 in sweeps",
                    ))
                }
            },
        })
    }
}

/// `steps` cell midpoints over the open interval `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl ParamRange {
    pub const fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + (i as f64 + 0.5) * (self.max - self.min) / self.steps as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0
            || !(self.min.is_finite() && self.max.is_finite())
            || self.min >= self.max
        {
            return Err(Error::InvalidParameters(
                "parameter range needs min < max and steps >= 1",
            ));
        }
        Ok(())
    }

    fn scaled(&self, factor: f64) -> Self {
        let steps = libm::round(self.steps as f64 * factor).max(1.0) as usize;
        Self { steps, ..*self }
    }
}

/// One family swept over a uniform parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepCell {
    pub family: SweepFamily,
    pub p1: ParamRange,
    #[cfg_attr(feature = "serde", serde(default))]
    pub p2: Option<ParamRange>,
}

impl SweepCell {
    pub fn n_sims(&self) -> usize {
        self.p1.steps * self.p2.map_or(1, |r| r.steps)
    }

    /// Distribution of simulation `i`, with `p2` varying fastest.
    pub fn spec(&self, i: usize) -> DistributionSpec {
        let n2 = self.p2.map_or(1, |r| r.steps);
        let p1 = self.p1.value(i / n2);
        let p2 = self.p2.map(|r| r.value(i % n2));
        DistributionSpec::new(self.family.family(), p1, p2)
    }

    pub fn validate(&self) -> Result<()> {
        self.p1.validate()?;
        match (self.family.family().has_p2(), &self.p2) {
            (true, Some(r)) => r.validate()?,
            (false, None) => {}
            _ => return Err(Error::InvalidParameters("p2 range does not match family")),
        }
        for i in 0..self.n_sims() {
            self.spec(i).validate()?;
        }
        Ok(())
    }
}

/// `(C, β)` grid of the entropy surface: `C` evenly spaced on
/// `[c_min, c_max]` inclusive, `β = 1 + (beta_max − 1)(j + 1)/beta_steps`
/// so the grid covers `(1, beta_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fig2Grid {
    pub c_min: f64,
    pub c_max: f64,
    pub c_steps: usize,
    pub beta_max: f64,
    pub beta_steps: usize,
}

impl Default for Fig2Grid {
    fn default() -> Self {
        Self {
            c_min: 1.0,
            c_max: 10.0,
            c_steps: 10,
            beta_max: 10.0,
            beta_steps: 10,
        }
    }
}

impl Fig2Grid {
    pub fn c(&self, i: usize) -> f64 {
        if self.c_steps == 1 {
            return self.c_min;
        }
        self.c_min + (self.c_max - self.c_min) * i as f64 / (self.c_steps - 1) as f64
    }

    pub fn beta(&self, j: usize) -> f64 {
        1.0 + (self.beta_max - 1.0) * (j + 1) as f64 / self.beta_steps as f64
    }

    pub fn len(&self) -> usize {
        self.c_steps * self.beta_steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_steps == 0 || self.beta_steps == 0 {
            return Err(Error::InvalidParameters(
                "entropy grid needs at least one step per axis",
            ));
        }
        if !(self.c_min > 0.0 && self.c_max >= self.c_min && self.c_max.is_finite()) {
            return Err(Error::InvalidParameters(
                "entropy grid needs 0 < c_min <= c_max",
            ));
        }
        if !(self.beta_max > 1.0 && self.beta_max.is_finite()) {
            return Err(Error::InvalidParameters("entropy grid needs beta_max > 1"));
        }
        Ok(())
    }
}

/// Everything a sweep needs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SweepConfig {
    pub cells: Vec<SweepCell>,
    pub grid: PopulationGrid,
    pub seed: u64,
    pub entropy_mode: RescaleMode,
    pub estimator: Estimator,
    /// System size `N` for rescaling, and the sample size of the share
    /// estimator.
    pub entropy_users: u64,
    pub fig2: Fig2Grid,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self::table1()
    }
}

impl SweepConfig {
    fn with_cells(families: &[SweepFamily]) -> Self {
        Self {
            cells: families.iter().map(|f| f.table1_cell()).collect(),
            grid: PopulationGrid::default(),
            seed: DEFAULT_SEED,
            entropy_mode: RescaleMode::Paper,
            estimator: Estimator::Analytic,
            entropy_users: 10_000,
            fig2: Fig2Grid::default(),
        }
    }

    /// All seven table columns at full size.
    pub fn table1() -> Self {
        Self::with_cells(&SweepFamily::ALL)
    }

    /// The accelerating-growth families only.
    pub fn h_gamma() -> Self {
        Self::with_cells(&[SweepFamily::Pareto1, SweepFamily::LogNormal])
    }

    /// Multiplies every parameter-axis step count by `factor` (at least one
    /// step is kept per axis).
    pub fn scaled(mut self, factor: f64) -> Self {
        for cell in &mut self.cells {
            cell.p1 = cell.p1.scaled(factor);
            cell.p2 = cell.p2.map(|r| r.scaled(factor));
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.fig2.validate()?;
        if self.cells.is_empty() {
            return Err(Error::InvalidParameters("sweep has no cells"));
        }
        for cell in &self.cells {
            cell.validate()?;
        }
        if self.entropy_users < 2 && self.entropy_mode != RescaleMode::None {
            return Err(Error::TooFewUsers);
        }
        if self.entropy_users < 1 {
            return Err(Error::TooFewUsers);
        }
        Ok(())
    }

    fn jobs(&self) -> Vec<Job> {
        let mut jobs = Vec::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for i in 0..cell.n_sims() {
                jobs.push(Job {
                    family: cell.family,
                    spec: cell.spec(i),
                    seed: SeedSpec::new(self.seed, ((ci as u64) << 32) | i as u64),
                });
            }
        }
        jobs
    }
}

#[derive(Debug, Clone, Copy)]
struct Job {
    family: SweepFamily,
    spec: DistributionSpec,
    seed: SeedSpec,
}

/// Sub-task id reserved for the share-estimator sample inside a job.
const SHARE_SAMPLE_TASK: u64 = 1 << 63;

impl Job {
    fn scatter_fit(&self, grid: &PopulationGrid) -> Result<ScalingFit> {
        let scatter = generate_scatter(&self.spec, grid, self.seed.child(0))?;
        fit_loglog(&scatter)
    }
}

/// Raw entropy of `spec` per `estimator`, rescaled by `mode` at size
/// `n_users`. The share estimator samples `n_users` activities from the
/// stream of `seed`.
pub fn estimate_entropy(
    spec: &DistributionSpec,
    estimator: Estimator,
    mode: RescaleMode,
    n_users: u64,
    seed: SeedSpec,
) -> Result<EntropyEstimate> {
    let h1 = match estimator {
        Estimator::Analytic => spec.analytic_entropy()?,
        Estimator::Share => {
            let mut rng = seed.stream();
            let acts = sample_activities(spec, n_users as usize, &mut rng)?;
            entropy::share_entropy(&acts)
        }
    };
    entropy::rescale(h1, n_users, mode)
}

/// Fitted exponent of one sweep simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellFit {
    pub family: SweepFamily,
    pub spec: DistributionSpec,
    pub fit: ScalingFit,
}

/// One row of the growth-exponent table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub family: SweepFamily,
    pub n_sims: usize,
    pub mean_gamma: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for a single run.
    pub sd_gamma: f64,
}

/// Every simulation of every cell: one scatter and one log-log fit each.
pub fn run_cell_fits<E: Executor>(config: &SweepConfig, exec: &E) -> Result<Vec<CellFit>> {
    config.validate()?;
    let jobs = config.jobs();
    let grid = config.grid;
    exec.map_indexed(jobs.len(), |k| {
        let job = &jobs[k];
        job.scatter_fit(&grid).map(|fit| CellFit {
            family: job.family,
            spec: job.spec,
            fit,
        })
    })
    .into_iter()
    .collect()
}

/// Mean and standard deviation of fitted γ per cell.
pub fn run_table1<E: Executor>(config: &SweepConfig, exec: &E) -> Result<Vec<SweepRow>> {
    let fits = run_cell_fits(config, exec)?;
    let mut rows = Vec::with_capacity(config.cells.len());
    let mut offset = 0;
    for cell in &config.cells {
        let n = cell.n_sims();
        let gammas: Vec<f64> = fits[offset..offset + n]
            .iter()
            .map(|c| c.fit.gamma)
            .collect();
        offset += n;
        let (mean_gamma, sd_gamma) = mean_sd(&gammas);
        rows.push(SweepRow {
            family: cell.family,
            n_sims: n,
            mean_gamma,
            sd_gamma,
        });
    }
    Ok(rows)
}

/// Mean and sample standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

/// One simulation of the `(H, γ)` dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGammaPoint {
    pub family: SweepFamily,
    pub spec: DistributionSpec,
    pub entropy: EntropyEstimate,
    pub gamma: f64,
}

impl HGammaPoint {
    /// Rescaled entropy.
    pub fn h(&self) -> f64 {
        self.entropy.h_rescaled
    }
}

/// Fitted γ and entropy for every simulation of every cell.
pub fn run_h_gamma<E: Executor>(config: &SweepConfig, exec: &E) -> Result<Vec<HGammaPoint>> {
    config.validate()?;
    let jobs = config.jobs();
    let grid = config.grid;
    exec.map_indexed(jobs.len(), |k| {
        let job = &jobs[k];
        let fit = job.scatter_fit(&grid)?;
        let entropy = estimate_entropy(
            &job.spec,
            config.estimator,
            config.entropy_mode,
            config.entropy_users,
            job.seed.child(SHARE_SAMPLE_TASK),
        )?;
        if !entropy.h_rescaled.is_finite() {
            return Err(Error::NonFinite("rescaled entropy"));
        }
        Ok(HGammaPoint {
            family: job.family,
            spec: job.spec,
            entropy,
            gamma: fit.gamma,
        })
    })
    .into_iter()
    .collect()
}

/// One point of the entropy surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Row {
    pub c: f64,
    pub beta: f64,
    pub entropy: EntropyEstimate,
}

impl Fig2Row {
    pub fn point(&self) -> EntropyPoint {
        EntropyPoint {
            c: self.c,
            beta: self.beta,
            h: self.entropy.h_rescaled,
        }
    }
}

const FIG2_TASK_BASE: u64 = 0xF2 << 56;

/// Entropy of power-law activity over the `(C, β)` grid, `β` varying
/// fastest.
pub fn fig2_dataset<E: Executor>(config: &SweepConfig, exec: &E) -> Result<Vec<Fig2Row>> {
    config.fig2.validate()?;
    if config.entropy_users < 2 && config.entropy_mode != RescaleMode::None {
        return Err(Error::TooFewUsers);
    }
    let g = config.fig2;
    exec.map_indexed(g.len(), |k| {
        let c = g.c(k / g.beta_steps);
        let beta = g.beta(k % g.beta_steps);
        let spec = entropy::power_law_spec(c, beta);
        let entropy = estimate_entropy(
            &spec,
            config.estimator,
            config.entropy_mode,
            config.entropy_users,
            SeedSpec::new(config.seed, FIG2_TASK_BASE | k as u64),
        )?;
        Ok(Fig2Row { c, beta, entropy })
    })
    .into_iter()
    .collect()
}

/// Fits the entropy model to an entropy surface.
pub fn threshold(rows: &[Fig2Row]) -> Result<EntropyModelFit> {
    let points: Vec<EntropyPoint> = rows.iter().map(Fig2Row::point).collect();
    entropy::fit_eq3(&points)
}

/// Fitted γ above which growth counts as accelerating.
pub const ACCELERATING_GAMMA: f64 = 1.1;
/// Half-width of the band `|γ − 1|` treated as linear growth.
pub const LINEAR_GAMMA_BAND: f64 = 0.05;

/// Whether accelerating points sit strictly above non-accelerating ones in
/// entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSeparation {
    pub n_accelerating: usize,
    pub n_light: usize,
    /// Smallest `H` among points with `γ > 1.1`.
    pub min_h_accelerating: f64,
    /// Largest `H` among light points: light-tailed families, or any point
    /// with `|γ − 1| ≤ 0.05`.
    pub max_h_light: f64,
}

impl ThresholdSeparation {
    pub fn holds(&self) -> bool {
        self.n_accelerating > 0 && self.n_light > 0 && self.min_h_accelerating > self.max_h_light
    }
}

pub fn threshold_separation(points: &[HGammaPoint]) -> ThresholdSeparation {
    let mut sep = ThresholdSeparation {
        n_accelerating: 0,
        n_light: 0,
        min_h_accelerating: f64::INFINITY,
        max_h_light: f64::NEG_INFINITY,
    };
    for p in points {
        if p.gamma > ACCELERATING_GAMMA {
            sep.n_accelerating += 1;
            sep.min_h_accelerating = sep.min_h_accelerating.min(p.h());
        } else if p.family.is_light_tailed() || libm::fabs(p.gamma - 1.0) <= LINEAR_GAMMA_BAND {
            sep.n_light += 1;
            sep.max_h_light = sep.max_h_light.max(p.h());
        }
    }
    sep
}
