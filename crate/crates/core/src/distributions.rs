//! Activity distributions: parameter records, samplers, and closed-form
//! entropies for the six families.
//!
//! Parameter roles:
//!
//! | family    | `p1`          | `p2`          |
//! |-----------|---------------|---------------|
//! | Normal    | mean μ        | std dev σ     |
//! | Weibull   | shape         | scale         |
//! | Poisson   | mean μ        | (absent)      |
//! | Gamma     | shape         | scale         |
//! | LogNormal | log-mean μ    | log-std σ     |
//! | Pareto    | scale `k`     | shape α       |
//!
//! Samples are always strictly positive: draws `≤ 0` (Normal) or `= 0`
//! (Poisson) are rejected and redrawn, as are draws above `max_activity`.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::UniformSource;
use crate::special::{self, EULER_GAMMA};

/// Smallest rejection acceptance probability a sampler will run with.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    Normal,
    Weibull,
    Poisson,
    Gamma,
    LogNormal,
    Pareto,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Normal,
        Family::Weibull,
        Family::Poisson,
        Family::Gamma,
        Family::LogNormal,
        Family::Pareto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "Normal",
            Family::Weibull => "Weibull",
            Family::Poisson => "Poisson",
            Family::Gamma => "Gamma",
            Family::LogNormal => "LogNormal",
            Family::Pareto => "Pareto",
        }
    }

    /// Whether the family takes a second parameter.
    pub fn has_p2(self) -> bool {
        !matches!(self, Family::Poisson)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "normal" => Family::Normal,
            "weibull" => Family::Weibull,
            "poisson" => Family::Poisson,
            "gamma" => Family::Gamma,
            "lognormal" | "log-normal" | "log_normal" => Family::LogNormal,
            "pareto" => Family::Pareto,
            _ => return Err(Error::InvalidParameters("unknown distribution family")),
        })
    }
}

/// One activity distribution with its parameters and optional upper cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistributionSpec {
    pub family: Family,
    pub p1: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub p2: Option<f64>,
    /// Upper cutoff on a single user's activity; `None` is unbounded.
    #[cfg_attr(feature = "serde", serde(default))]
    pub max_activity: Option<f64>,
}

impl DistributionSpec {
    pub fn new(family: Family, p1: f64, p2: Option<f64>) -> Self {
        Self {
            family,
            p1,
            p2,
            max_activity: None,
        }
    }

    pub fn normal(mean: f64, sd: f64) -> Self {
        Self::new(Family::Normal, mean, Some(sd))
    }

    pub fn weibull(shape: f64, scale: f64) -> Self {
        Self::new(Family::Weibull, shape, Some(scale))
    }

    pub fn poisson(mean: f64) -> Self {
        Self::new(Family::Poisson, mean, None)
    }

    pub fn gamma(shape: f64, scale: f64) -> Self {
        Self::new(Family::Gamma, shape, Some(scale))
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Self {
        Self::new(Family::LogNormal, mu, Some(sigma))
    }

    /// Pareto on `[scale, ∞)` with tail index `shape`.
    pub fn pareto(scale: f64, shape: f64) -> Self {
        Self::new(Family::Pareto, scale, Some(shape))
    }

    pub fn with_max_activity(mut self, max_activity: f64) -> Self {
        self.max_activity = Some(max_activity);
        self
    }

    fn p2_or_nan(&self) -> f64 {
        self.p2.unwrap_or(f64::NAN)
    }

    fn cutoff(&self) -> Option<f64> {
        self.max_activity.filter(|m| m.is_finite())
    }

    pub fn is_truncated(&self) -> bool {
        self.cutoff().is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let p1 = self.p1;
        if !p1.is_finite() {
            return Err(Error::InvalidParameters("p1 must be finite"));
        }
        match (self.family.has_p2(), self.p2) {
            (true, None) => return Err(Error::InvalidParameters("family requires p2")),
            (false, Some(_)) => return Err(Error::InvalidParameters("Poisson takes no p2")),
            (true, Some(p2)) if !(p2.is_finite() && p2 > 0.0) => {
                return Err(Error::InvalidParameters("p2 must be finite and > 0"))
            }
            _ => {}
        }
        let p1_ok = match self.family {
            Family::Normal | Family::LogNormal => true,
            Family::Weibull | Family::Gamma | Family::Poisson => p1 > 0.0,
            Family::Pareto => p1 >= f64::MIN_POSITIVE,
        };
        if !p1_ok {
            return Err(Error::InvalidParameters("p1 must be > 0 for this family"));
        }
        if let Some(m) = self.max_activity {
            if !(m > 0.0) {
                return Err(Error::InvalidParameters("max_activity must be > 0"));
            }
        }
        Ok(())
    }

    /// CDF of the untruncated family.
    pub fn base_cdf(&self, x: f64) -> f64 {
        let p2 = self.p2_or_nan();
        match self.family {
            Family::Normal => special::std_normal_cdf((x - self.p1) / p2),
            Family::Weibull => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-libm::pow(x / p2, self.p1))
                }
            }
            Family::Poisson => {
                if x < 0.0 {
                    0.0
                } else {
                    special::poisson_cdf(self.p1, libm::floor(x) as u64)
                }
            }
            Family::Gamma => special::gamma_p(self.p1, x / p2),
            Family::LogNormal => {
                if x <= 0.0 {
                    0.0
                } else {
                    special::std_normal_cdf((libm::log(x) - self.p1) / p2)
                }
            }
            Family::Pareto => {
                if x <= self.p1 {
                    0.0
                } else {
                    -libm::expm1(p2 * libm::log(self.p1 / x))
                }
            }
        }
    }

    /// Probability that a raw draw survives the positivity and cutoff
    /// rejection steps.
    pub fn acceptance_probability(&self) -> f64 {
        // Mass at or below zero that is rejected.
        let below = match self.family {
            Family::Normal => self.base_cdf(0.0),
            Family::Poisson => libm::exp(-self.p1),
            _ => 0.0,
        };
        let upper = match self.cutoff() {
            Some(m) => self.base_cdf(m),
            None => 1.0,
        };
        (upper - below).max(0.0)
    }

    pub fn sampler(&self) -> Result<Sampler> {
        Sampler::new(*self)
    }

    /// Differential entropy in nats (Shannon entropy for Poisson) of the
    /// untruncated family. Normal is treated as the full Gaussian even though
    /// the sampler discards non-positive draws.
    pub fn analytic_entropy(&self) -> Result<f64> {
        self.validate()?;
        if self.is_truncated() {
            return Err(Error::AnalyticUnavailable);
        }
        let p1 = self.p1;
        let p2 = self.p2_or_nan();
        let h = match self.family {
            Family::Normal => 0.5 * libm::log(2.0 * PI * E * p2 * p2),
            Family::LogNormal => p1 + 0.5 * libm::log(2.0 * PI * E * p2 * p2),
            Family::Weibull => EULER_GAMMA * (1.0 - 1.0 / p1) + libm::log(p2 / p1) + 1.0,
            Family::Gamma => {
                p1 + libm::log(p2) + special::ln_gamma(p1) + (1.0 - p1) * special::digamma(p1)
            }
            Family::Pareto => libm::log(p1 / p2) + 1.0 / p2 + 1.0,
            Family::Poisson => poisson_entropy(p1),
        };
        if h.is_finite() {
            Ok(h)
        } else {
            Err(Error::NonFinite("analytic entropy"))
        }
    }
}

/// Shannon entropy of Poisson(mean), summed over a window wide enough that
/// the neglected mass is far below 1e-12.
fn poisson_entropy(mean: f64) -> f64 {
    let sd = libm::sqrt(mean);
    let lo = libm::floor(mean - 40.0 * sd - 40.0).max(0.0) as u64;
    let hi = libm::ceil(mean + 40.0 * sd + 60.0) as u64;
    let mut h = 0.0;
    for k in lo..=hi {
        let lp = special::poisson_ln_pmf(mean, k);
        let p = libm::exp(lp);
        if p > 0.0 {
            h -= p * lp;
        }
    }
    h
}

/// Activities of one population, every value strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityVector(Vec<f64>);

impl ActivityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameters(
                "activities must be finite and > 0",
            ));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Normal { mean: f64, sd: f64 },
    Weibull { inv_shape: f64, scale: f64 },
    PoissonInversion { exp_neg_mean: f64, mean: f64 },
    PoissonPtrs(Ptrs),
    Gamma { shape: f64, scale: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Pareto { scale: f64, inv_shape: f64 },
}

/// Constants of Hörmann's transformed rejection with squeeze (PTRS).
#[derive(Debug, Clone, Copy)]
struct Ptrs {
    mean: f64,
    ln_mean: f64,
    a: f64,
    b: f64,
    inv_alpha: f64,
    v_r: f64,
}

/// A validated sampler for one [`DistributionSpec`].
#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    kind: Kind,
    upper: f64,
}

const POISSON_INVERSION_LIMIT: f64 = 10.0;

impl Sampler {
    pub fn new(spec: DistributionSpec) -> Result<Self> {
        spec.validate()?;
        let acceptance = spec.acceptance_probability();
        if !(acceptance >= MIN_ACCEPTANCE) {
            return Err(Error::DegenerateTruncation { acceptance });
        }
        let p1 = spec.p1;
        let p2 = spec.p2_or_nan();
        let kind = match spec.family {
            Family::Normal => Kind::Normal { mean: p1, sd: p2 },
            Family::Weibull => Kind::Weibull {
                inv_shape: 1.0 / p1,
                scale: p2,
            },
            Family::Poisson if p1 < POISSON_INVERSION_LIMIT => Kind::PoissonInversion {
                exp_neg_mean: libm::exp(-p1),
                mean: p1,
            },
            Family::Poisson => {
                let b = 0.931 + 2.53 * libm::sqrt(p1);
                Kind::PoissonPtrs(Ptrs {
                    mean: p1,
                    ln_mean: libm::log(p1),
                    a: -0.059 + 0.02483 * b,
                    b,
                    inv_alpha: 1.1239 + 1.1328 / (b - 3.4),
                    v_r: 0.9277 - 3.6224 / (b - 2.0),
                })
            }
            Family::Gamma => Kind::Gamma {
                shape: p1,
                scale: p2,
            },
            Family::LogNormal => Kind::LogNormal { mu: p1, sigma: p2 },
            Family::Pareto => Kind::Pareto {
                scale: p1,
                inv_shape: 1.0 / p2,
            },
        };
        Ok(Self {
            kind,
            upper: spec.cutoff().unwrap_or(f64::INFINITY),
        })
    }

    /// One accepted draw: finite, `> 0`, and `≤ max_activity`.
    #[inline]
    pub fn sample<U: UniformSource + ?Sized>(&self, rng: &mut U) -> f64 {
        loop {
            let x = self.raw(rng);
            if x > 0.0 && x <= self.upper && x.is_finite() {
                return x;
            }
        }
    }

    #[inline]
    fn raw<U: UniformSource + ?Sized>(&self, rng: &mut U) -> f64 {
        match self.kind {
            Kind::Normal { mean, sd } => mean + sd * standard_normal(rng),
            Kind::Weibull { inv_shape, scale } => {
                scale * libm::pow(-libm::log(rng.next_open01()), inv_shape)
            }
            Kind::PoissonInversion { exp_neg_mean, mean } => {
                poisson_inversion(rng, exp_neg_mean, mean)
            }
            Kind::PoissonPtrs(c) => poisson_ptrs(rng, &c),
            Kind::Gamma { shape, scale } => scale * standard_gamma(rng, shape),
            Kind::LogNormal { mu, sigma } => libm::exp(mu + sigma * standard_normal(rng)),
            Kind::Pareto { scale, inv_shape } => scale * libm::pow(rng.next_open01(), -inv_shape),
        }
    }
}

/// `n` independent accepted draws from `spec`.
pub fn sample_activities<U: UniformSource + ?Sized>(
    spec: &DistributionSpec,
    n: usize,
    rng: &mut U,
) -> Result<ActivityVector> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let sampler = spec.sampler()?;
    let values = (0..n).map(|_| sampler.sample(rng)).collect();
    Ok(ActivityVector(values))
}

/// Marsaglia polar method; the second variate of each pair is discarded.
#[inline]
fn standard_normal<U: UniformSource + ?Sized>(rng: &mut U) -> f64 {
    loop {
        let u = 2.0 * rng.next_f64() - 1.0;
        let v = 2.0 * rng.next_f64() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * libm::sqrt(-2.0 * libm::log(s) / s);
        }
    }
}

/// Marsaglia–Tsang squeeze method, with the `u^(1/a)` boost for `a < 1`.
fn standard_gamma<U: UniformSource + ?Sized>(rng: &mut U, shape: f64) -> f64 {
    if shape < 1.0 {
        let boost = libm::pow(rng.next_open01(), 1.0 / shape);
        return standard_gamma(rng, shape + 1.0) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / libm::sqrt(9.0 * d);
    loop {
        let x = standard_normal(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.next_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
            return d * v;
        }
    }
}

/// Sequential-search inversion; used for small means.
fn poisson_inversion<U: UniformSource + ?Sized>(rng: &mut U, exp_neg_mean: f64, mean: f64) -> f64 {
    let u = rng.next_f64();
    let mut k = 0u32;
    let mut p = exp_neg_mean;
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p == 0.0 && cdf < u {
            // Rounding left the CDF short of u; the remaining mass is nil.
            break;
        }
    }
    k as f64
}

fn poisson_ptrs<U: UniformSource + ?Sized>(rng: &mut U, c: &Ptrs) -> f64 {
    loop {
        let u = rng.next_f64() - 0.5;
        let v = rng.next_f64();
        let us = 0.5 - libm::fabs(u);
        let k = libm::floor((2.0 * c.a / us + c.b) * u + c.mean + 0.43);
        if us >= 0.07 && v <= c.v_r {
            return k;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = libm::log(v) + libm::log(c.inv_alpha) - libm::log(c.a / (us * us) + c.b);
        let rhs = -c.mean + k * c.ln_mean - special::ln_gamma(k + 1.0);
        if lhs <= rhs {
            return k;
        }
    }
}
