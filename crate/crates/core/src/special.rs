//! Special functions needed by the closed-form descriptors.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Digamma ψ(x) for x > 0.
///
/// Shifts the argument above 10 with ψ(x) = ψ(x+1) − 1/x, then applies the
/// asymptotic series.
pub fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let z = inv * inv;
    // Σ B_2n / (2n x^2n), n = 1..6
    let series = z
        * (1.0 / 12.0
            - z * (1.0 / 120.0
                - z * (1.0 / 252.0
                    - z * (1.0 / 240.0 - z * (1.0 / 132.0 - z * (691.0 / 32760.0))))));
    acc + libm::log(x) - 0.5 * inv - series
}

/// Standard normal CDF Φ(z).
#[inline]
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density φ(z).
#[inline]
pub fn std_normal_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) / libm::sqrt(2.0 * PI)
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return 1.0;
    }
    let log_prefix = a * libm::log(x) - x - ln_gamma(a);
    if x < a + 1.0 {
        // Series.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..10_000 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if libm::fabs(term) < libm::fabs(sum) * 1e-16 {
                break;
            }
        }
        (sum * libm::exp(log_prefix)).clamp(0.0, 1.0)
    } else {
        // Continued fraction for Q(a, x), modified Lentz.
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if libm::fabs(d) < TINY {
                d = TINY;
            }
            c = b + an / c;
            if libm::fabs(c) < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if libm::fabs(delta - 1.0) < 1e-16 {
                break;
            }
        }
        (1.0 - libm::exp(log_prefix) * h).clamp(0.0, 1.0)
    }
}

/// ln of the Poisson probability mass at `k`.
#[inline]
pub fn poisson_ln_pmf(mean: f64, k: u64) -> f64 {
    let kf = k as f64;
    kf * libm::log(mean) - mean - ln_gamma(kf + 1.0)
}

/// Poisson CDF P(X ≤ k).
pub fn poisson_cdf(mean: f64, k: u64) -> f64 {
    // P(X ≤ k) = Q(k + 1, mean)
    1.0 - gamma_p(k as f64 + 1.0, mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_known_values() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        // ψ(1/2) = −γ − 2 ln 2
        let half = -EULER_GAMMA - 2.0 * core::f64::consts::LN_2;
        assert!((digamma(0.5) - half).abs() < 1e-13);
        // ψ(n+1) = H_n − γ
        let h10: f64 = (1..=10).map(|k| 1.0 / k as f64).sum();
        assert!((digamma(11.0) - (h10 - EULER_GAMMA)).abs() < 1e-14);
    }

    #[test]
    fn gamma_p_exponential_case() {
        // a = 1 reduces to 1 − e^{−x}
        for &x in &[0.01, 0.5, 1.0, 2.0, 5.0, 30.0] {
            let want = 1.0 - libm::exp(-x);
            assert!((gamma_p(1.0, x) - want).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn poisson_cdf_small_mean() {
        let m: f64 = 2.5;
        let mut acc = 0.0;
        for k in 0..20u64 {
            acc += libm::exp(poisson_ln_pmf(m, k));
            assert!((poisson_cdf(m, k) - acc).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn normal_cdf_symmetry() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        for &z in &[0.3, 1.0, 2.5] {
            assert!((std_normal_cdf(z) + std_normal_cdf(-z) - 1.0).abs() < 1e-15);
        }
    }
}
