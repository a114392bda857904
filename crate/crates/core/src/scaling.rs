//! Log-log OLS estimation of the allometric exponent.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::growth::SystemSample;

/// Result of regressing `ln T` on `ln P`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingFit {
    pub gamma: f64,
    /// Intercept of the natural-log regression.
    pub log_intercept: f64,
    pub stderr_gamma: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl ScalingFit {
    /// Fitted `T` at population `p`.
    pub fn predict(&self, p: u64) -> f64 {
        libm::exp(self.log_intercept + self.gamma * libm::log(p as f64))
    }
}

/// Fits `ln T = a + γ ln P` by ordinary least squares.
///
/// Points are sorted before summation, so the result does not depend on the
/// input order.
pub fn fit_loglog(samples: &[SystemSample]) -> Result<ScalingFit> {
    let pairs = samples.iter().map(|s| (s.population as f64, s.new_tags));
    fit_loglog_pairs(pairs)
}

/// [`fit_loglog`] over raw `(P, T)` pairs.
pub fn fit_loglog_pairs<I>(pairs: I) -> Result<ScalingFit>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (p, t) in pairs {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameters("population must be >= 1"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::NonpositiveResponse);
        }
        pts.push((libm::log(p), libm::log(t)));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let distinct = {
        let mut d = 0usize;
        let mut last = None;
        for &(x, _) in &pts {
            if last != Some(x) {
                d += 1;
                last = Some(x);
            }
        }
        d
    };
    if distinct < 3 {
        return Err(Error::DegenerateDesign);
    }

    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let gamma = sxy / sxx;
    let log_intercept = mean_y - gamma * mean_x;
    let ssr: f64 = pts
        .iter()
        .map(|&(x, y)| {
            let r = y - (log_intercept + gamma * x);
            r * r
        })
        .sum();
    let stderr_gamma = libm::sqrt(ssr / (n - 2.0) / sxx);
    let r_squared = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    if !(gamma.is_finite() && log_intercept.is_finite() && stderr_gamma.is_finite()) {
        return Err(Error::NonFinite("log-log fit"));
    }
    Ok(ScalingFit {
        gamma,
        log_intercept,
        stderr_gamma,
        r_squared,
        n_points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn samples(points: &[(u64, f64)]) -> Vec<SystemSample> {
        points
            .iter()
            .enumerate()
            .map(|(i, &(p, t))| SystemSample {
                population: p,
                new_tags: t,
                task_id: i as u64,
            })
            .collect()
    }

    #[test]
    fn exact_square_law() {
        let fit = fit_loglog(&samples(&[(10, 100.0), (100, 1e4), (1000, 1e6)])).unwrap();
        assert!((fit.gamma - 2.0).abs() < 1e-12);
        assert_eq!(fit.r_squared, 1.0);
        assert_eq!(fit.n_points, 3);
    }

    #[test]
    fn exact_linear_law() {
        let fit = fit_loglog(&samples(&[
            (3, 21.0),
            (30, 210.0),
            (300, 2100.0),
            (7, 49.0),
        ]))
        .unwrap();
        assert!((fit.gamma - 1.0).abs() < 1e-12);
        assert!((fit.log_intercept - libm::log(7.0)).abs() < 1e-12);
    }

    #[test]
    fn predict_values() {
        let fit = ScalingFit {
            gamma: 2.0,
            log_intercept: 0.0,
            stderr_gamma: 0.0,
            r_squared: 1.0,
            n_points: 3,
        };
        assert!((fit.predict(10) - 100.0).abs() < 1e-12);
        let fit = ScalingFit {
            gamma: 1.0,
            log_intercept: libm::log(7.0),
            ..fit
        };
        assert!((fit.predict(3) - 21.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let two = samples(&[(10, 1.0), (10, 2.0), (20, 3.0), (20, 4.0)]);
        assert_eq!(fit_loglog(&two), Err(Error::DegenerateDesign));
        let neg = samples(&[(10, 1.0), (20, 0.0), (30, 3.0)]);
        assert_eq!(fit_loglog(&neg), Err(Error::NonpositiveResponse));
        assert_eq!(fit_loglog(&[]), Err(Error::DegenerateDesign));
        let zero_p = samples(&[(0, 1.0), (20, 2.0), (30, 3.0)]);
        assert!(fit_loglog(&zero_p).is_err());
    }

    #[test]
    fn stderr_matches_hand_computation() {
        // x = ln P ∈ {0, ln 2, ln 4}; y = x + (0, 0.1, 0)
        let l2 = libm::log(2.0);
        let pts = vec![(1.0, 1.0), (2.0, libm::exp(l2 + 0.1)), (4.0, 4.0)];
        let fit = fit_loglog_pairs(pts).unwrap();
        // Residuals of an exact 3-point fit are (−r, 2r, −r)·…; check via formula.
        let xs = [0.0, l2, 2.0 * l2];
        let ys = [0.0, l2 + 0.1, 2.0 * l2];
        let mx = xs.iter().sum::<f64>() / 3.0;
        let my = ys.iter().sum::<f64>() / 3.0;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let b = sxy / sxx;
        let a = my - b * mx;
        let ssr: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - a - b * x) * (y - a - b * x))
            .sum();
        assert!((fit.gamma - b).abs() < 1e-14);
        assert!((fit.stderr_gamma - libm::sqrt(ssr / sxx)).abs() < 1e-14);
    }
}
