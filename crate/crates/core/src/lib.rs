//! Simulation and estimation kernels for allometric growth `T ~ P^γ` in
//! populations with heterogeneous individual activity.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. It covers:
//!
//! - [`rng`]: seedable, splittable deterministic random streams.
//! - [`distributions`]: samplers and closed-form entropies for the six
//!   activity families (Normal, Weibull, Poisson, Gamma, LogNormal, Pareto).
//! - [`growth`]: simulated system "days" `(P, T)` and log-grid scatters.
//! - [`scaling`]: log-log OLS estimation of the growth exponent.
//! - [`entropy`]: share entropy, rescaling, and the entropy-model fit.
//! - [`sweeps`]: the parameter sweeps that tie the above together.
//!
//! File formats, the command line, and parallel execution live in the
//! `allometry` companion crate.

#![no_std]
#![deny(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod distributions;
pub mod entropy;
mod error;
pub mod growth;
mod linalg;
pub mod rng;
pub mod scaling;
pub mod special;
pub mod sweeps;

pub use distributions::{ActivityVector, DistributionSpec, Family};
pub use entropy::{EntropyEstimate, EntropyModelFit, EntropyPoint, Estimator, RescaleMode};
pub use error::{Error, Result};
pub use growth::{Placement, PopulationGrid, SystemSample};
pub use rng::{RandomStream, SeedSpec, UniformSource};
pub use scaling::ScalingFit;
