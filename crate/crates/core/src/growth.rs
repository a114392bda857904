//! Simulated system "days": a population of `P` active users draws activity
//! from a fixed distribution and the day's new-tag count `T` is the sum.

use alloc::vec::Vec;

use crate::distributions::{DistributionSpec, Sampler};
use crate::error::{Error, Result};
use crate::rng::{SeedSpec, UniformSource};

/// One simulated day.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemSample {
    /// Active population `P`.
    pub population: u64,
    /// Total new tags `T`.
    pub new_tags: f64,
    /// Task id of the stream that produced the sample.
    pub task_id: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Placement {
    /// Each point draws `ln P` uniformly on `[ln p_min, ln p_max]`.
    #[default]
    LogUniformRandom,
    /// `P_j = p_min · (p_max/p_min)^(j/(n−1))`, rounded.
    LogSpaced,
}

/// Populations at which a scatter is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PopulationGrid {
    pub p_min: u64,
    pub p_max: u64,
    pub n_points: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub placement: Placement,
}

impl Default for PopulationGrid {
    fn default() -> Self {
        Self {
            p_min: 10,
            p_max: 10_000,
            n_points: 100,
            placement: Placement::LogUniformRandom,
        }
    }
}

impl PopulationGrid {
    pub const MIN_POINTS: usize = 10;

    pub fn validate(&self) -> Result<()> {
        if self.p_min < 1 || self.p_min >= self.p_max {
            return Err(Error::InvalidParameters("grid requires 1 <= p_min < p_max"));
        }
        if self.n_points < Self::MIN_POINTS {
            return Err(Error::InvalidParameters("grid requires at least 10 points"));
        }
        Ok(())
    }

    fn log_bounds(&self) -> (f64, f64) {
        (libm::log(self.p_min as f64), libm::log(self.p_max as f64))
    }

    fn round_into_range(&self, x: f64) -> u64 {
        (libm::round(x) as u64).clamp(self.p_min, self.p_max)
    }

    /// Deterministic population of a log-spaced point.
    pub fn log_spaced(&self, index: usize) -> u64 {
        let (lo, hi) = self.log_bounds();
        let frac = index as f64 / (self.n_points - 1) as f64;
        self.round_into_range(libm::exp(lo + (hi - lo) * frac))
    }

    /// Population of point `index`, drawing from `rng` when placement is
    /// random.
    pub fn population<U: UniformSource + ?Sized>(&self, index: usize, rng: &mut U) -> u64 {
        match self.placement {
            Placement::LogSpaced => self.log_spaced(index),
            Placement::LogUniformRandom => {
                let (lo, hi) = self.log_bounds();
                self.round_into_range(libm::exp(lo + (hi - lo) * rng.next_f64()))
            }
        }
    }
}

/// Sums `population` accepted draws.
fn total_activity<U: UniformSource + ?Sized>(
    sampler: &Sampler,
    population: u64,
    rng: &mut U,
) -> f64 {
    let mut total = 0.0;
    for _ in 0..population {
        total += sampler.sample(rng);
    }
    total
}

/// One day with `population` users. `T` is the sum of the activities that
/// `sample_activities` would produce from the same stream.
pub fn simulate_system<U: UniformSource + ?Sized>(
    spec: &DistributionSpec,
    population: u64,
    rng: &mut U,
    task_id: u64,
) -> Result<SystemSample> {
    if population < 1 {
        return Err(Error::InvalidParameters("population must be >= 1"));
    }
    let sampler = spec.sampler()?;
    let new_tags = total_activity(&sampler, population, rng);
    if !(new_tags.is_finite() && new_tags > 0.0) {
        return Err(Error::NonFinite("total activity"));
    }
    Ok(SystemSample {
        population,
        new_tags,
        task_id,
    })
}

/// One sample per grid point. Point `j` uses the stream of
/// `SeedSpec { master_seed: seed.master_seed, task_id: j }` both for its
/// population (when random) and its activities.
pub fn generate_scatter(
    spec: &DistributionSpec,
    grid: &PopulationGrid,
    seed: SeedSpec,
) -> Result<Vec<SystemSample>> {
    grid.validate()?;
    let sampler = spec.sampler()?;
    (0..grid.n_points)
        .map(|j| {
            let task_id = j as u64;
            let mut rng = SeedSpec::new(seed.master_seed, task_id).stream();
            let population = grid.population(j, &mut rng);
            let new_tags = total_activity(&sampler, population, &mut rng);
            if !(new_tags.is_finite() && new_tags > 0.0) {
                return Err(Error::NonFinite("total activity"));
            }
            Ok(SystemSample {
                population,
                new_tags,
                task_id,
            })
        })
        .collect()
}

/// Growth exponent predicted from the power-law activity exponent β:
/// `2/β` for `1 < β < 2`, and 1 for `β ≥ 2`.
pub fn eq2_gamma(beta: f64) -> Result<f64> {
    if !(beta > 1.0) || beta.is_nan() {
        return Err(Error::OutOfDomain("power-law exponent must exceed 1"));
    }
    Ok(if beta < 2.0 { 2.0 / beta } else { 1.0 })
}

/// Asymptotic growth exponent of a sum of iid Pareto activities with tail
/// index α: `1/α` when `α < 1`, otherwise 1.
pub fn sum_aggregation_gamma(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::OutOfDomain("tail index must be positive"));
    }
    Ok(if alpha < 1.0 { 1.0 / alpha } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq2_values() {
        assert_eq!(eq2_gamma(1.5).unwrap(), 4.0 / 3.0);
        assert_eq!(eq2_gamma(2.0).unwrap(), 1.0);
        assert_eq!(eq2_gamma(7.0).unwrap(), 1.0);
        assert!(eq2_gamma(1.0).is_err());
        assert!(eq2_gamma(0.3).is_err());
        assert!(eq2_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_spaced_grid() {
        let grid = PopulationGrid {
            p_min: 10,
            p_max: 10_000,
            n_points: 100,
            placement: Placement::LogSpaced,
        };
        for j in 0..100 {
            let want = libm::round(libm::pow(10.0, 1.0 + 3.0 * j as f64 / 99.0)) as u64;
            assert_eq!(grid.log_spaced(j), want, "j={j}");
        }
        assert_eq!(grid.log_spaced(0), 10);
        assert_eq!(grid.log_spaced(99), 10_000);
    }

    #[test]
    fn grid_validation() {
        let mut g = PopulationGrid::default();
        assert!(g.validate().is_ok());
        g.n_points = 9;
        assert!(g.validate().is_err());
        let g = PopulationGrid {
            p_min: 0,
            ..Default::default()
        };
        assert!(g.validate().is_err());
        let g = PopulationGrid {
            p_min: 50,
            p_max: 50,
            ..Default::default()
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn constant_activity_sums_exactly() {
        // Pareto with an astronomically large tail index is the constant k.
        let spec = DistributionSpec::pareto(1.0, 1e300).with_max_activity(1.0 + 1e-9);
        let mut rng = SeedSpec::new(5, 5).stream();
        for p in [1u64, 17, 1000, 12345] {
            let s = simulate_system(&spec, p, &mut rng, 0).unwrap();
            assert_eq!(s.new_tags, p as f64);
        }
    }

    #[test]
    fn zero_population_rejected() {
        let mut rng = SeedSpec::new(5, 5).stream();
        assert!(simulate_system(&DistributionSpec::poisson(2.0), 0, &mut rng, 0).is_err());
    }

    #[test]
    fn scatter_task_ids_are_indices() {
        let grid = PopulationGrid {
            n_points: 12,
            ..Default::default()
        };
        let s = generate_scatter(
            &DistributionSpec::gamma(2.0, 1.0),
            &grid,
            SeedSpec::new(1, 0),
        )
        .unwrap();
        assert_eq!(s.len(), 12);
        assert!(s.iter().enumerate().all(|(j, x)| x.task_id == j as u64));
        assert!(s.iter().all(|x| (10..=10_000).contains(&x.population)));
    }
}
