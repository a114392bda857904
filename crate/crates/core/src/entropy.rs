//! Entropy of activity configurations, size rescaling, and the three-term
//! entropy model `H = k1·ln(C/(β−1)) + k2/(β−1) + k3` for power-law activity
//! with scale `C` and density exponent `β` (Pareto tail index `β − 1`).
//!
//! All logarithms are natural; entropies are in nats.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::distributions::{ActivityVector, DistributionSpec};
use crate::error::{Error, Result};
use crate::linalg;

/// Size normalizer applied to a raw entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RescaleMode {
    /// Divide by `N·ln N`.
    #[default]
    Paper,
    /// Divide by `ln N`, the maximum entropy over `N` outcomes.
    Standard,
    /// No rescaling.
    None,
}

impl RescaleMode {
    pub fn name(self) -> &'static str {
        match self {
            RescaleMode::Paper => "paper",
            RescaleMode::Standard => "standard",
            RescaleMode::None => "none",
        }
    }

    fn denominator(self, n_users: u64) -> Result<f64> {
        if self == RescaleMode::None {
            return Ok(1.0);
        }
        if n_users < 2 {
            return Err(Error::TooFewUsers);
        }
        let n = n_users as f64;
        Ok(match self {
            RescaleMode::Paper => n * libm::log(n),
            RescaleMode::Standard => libm::log(n),
            RescaleMode::None => unreachable!(),
        })
    }
}

impl fmt::Display for RescaleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RescaleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(RescaleMode::Paper),
            "standard" => Ok(RescaleMode::Standard),
            "none" => Ok(RescaleMode::None),
            _ => Err(Error::InvalidParameters(
                "rescale mode must be paper, standard or none",
            )),
        }
    }
}

/// How a configuration's raw entropy is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Estimator {
    /// Closed-form differential entropy of the generating distribution.
    #[default]
    Analytic,
    /// Plug-in entropy of activity shares from a sampled population.
    Share,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Analytic => "analytic",
            Estimator::Share => "share",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Estimator::Analytic),
            "share" => Ok(Estimator::Share),
            _ => Err(Error::InvalidParameters(
                "estimator must be analytic or share",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyEstimate {
    /// Raw entropy in nats.
    pub h1: f64,
    /// System size used by the normalizer.
    pub n_users: u64,
    pub h_rescaled: f64,
    pub mode: RescaleMode,
}

pub fn rescale(h1: f64, n_users: u64, mode: RescaleMode) -> Result<EntropyEstimate> {
    let h_rescaled = h1 / mode.denominator(n_users)?;
    Ok(EntropyEstimate {
        h1,
        n_users,
        h_rescaled,
        mode,
    })
}

/// Plug-in Shannon entropy of the shares `t_i / Σ t`.
pub fn share_entropy(activities: &ActivityVector) -> f64 {
    share_entropy_of(activities.as_slice()).expect("ActivityVector is non-empty and positive")
}

/// [`share_entropy`] over a raw slice.
///
/// Activities are normalized by their maximum first, which keeps large
/// heavy-tailed values in range and makes equal activities give exactly
/// `ln N`.
pub fn share_entropy_of(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameters(
            "activities must be finite and > 0",
        ));
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let (mut total, mut weighted) = (0.0, 0.0);
    for &v in values {
        let s = v / max;
        total += s;
        weighted += s * libm::log(s);
    }
    // H = ln S − (Σ s ln s)/S with s = t / max(t)
    let h = libm::log(total) - weighted / total;
    Ok(h.max(0.0))
}

/// Evaluates the three-term entropy model at scale `c` and exponent `beta`.
pub fn eq3_eval(c: f64, beta: f64, k1: f64, k2: f64, k3: f64) -> Result<f64> {
    let (x1, x2) = eq3_features(c, beta)?;
    Ok(k1 * x1 + k2 * x2 + k3)
}

fn eq3_features(c: f64, beta: f64) -> Result<(f64, f64)> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::OutOfDomain("entropy model requires beta > 1"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::OutOfDomain("entropy model requires C > 0"));
    }
    let tail = beta - 1.0;
    Ok((libm::log(c / tail), 1.0 / tail))
}

/// Power-law activity with scale `c` and density exponent `beta`, i.e.
/// Pareto with scale `c` and tail index `beta − 1`.
pub fn power_law_spec(c: f64, beta: f64) -> DistributionSpec {
    DistributionSpec::pareto(c, beta - 1.0)
}

/// Least-squares coefficients of the entropy model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyModelFit {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub rms_residual: f64,
    /// Model value at `C = 1, β = 2`, where both features reduce to 0 and 1.
    pub h_threshold: f64,
}

impl EntropyModelFit {
    pub fn eval(&self, c: f64, beta: f64) -> Result<f64> {
        eq3_eval(c, beta, self.k1, self.k2, self.k3)
    }

    /// Model value at `β = 2` for scale `c`: the threshold curve over `C`.
    pub fn threshold_at(&self, c: f64) -> Result<f64> {
        self.eval(c, 2.0)
    }
}

/// One observation for [`fit_eq3`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyPoint {
    pub c: f64,
    pub beta: f64,
    pub h: f64,
}

/// Ordinary least squares on `[ln(C/(β−1)), 1/(β−1), 1]`.
pub fn fit_eq3(points: &[EntropyPoint]) -> Result<EntropyModelFit> {
    if points.len() < 4 {
        return Err(Error::DegenerateFeatures);
    }
    let mut design = Vec::with_capacity(points.len() * 3);
    let mut response = Vec::with_capacity(points.len());
    for p in points {
        let (x1, x2) = eq3_features(p.c, p.beta)?;
        if !p.h.is_finite() {
            return Err(Error::NonFinite("entropy observation"));
        }
        design.extend_from_slice(&[x1, x2, 1.0]);
        response.push(p.h);
    }
    let coef = linalg::least_squares(&design, &response, points.len(), 3)?;
    let (k1, k2, k3) = (coef[0], coef[1], coef[2]);
    let sse: f64 = design
        .chunks_exact(3)
        .zip(&response)
        .map(|(row, &y)| {
            let r = y - (k1 * row[0] + k2 * row[1] + k3);
            r * r
        })
        .sum();
    let rms_residual = libm::sqrt(sse / points.len() as f64);
    Ok(EntropyModelFit {
        k1,
        k2,
        k3,
        rms_residual,
        h_threshold: k2 + k3,
    })
}
