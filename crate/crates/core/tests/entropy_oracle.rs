//! Closed-form entropies against numerical integration of −∫ f ln f, and
//! the entropy-model identities that follow from them.

mod common;

use allometry_core::distributions::sample_activities;
use allometry_core::entropy::{eq3_eval, fit_eq3, power_law_spec, share_entropy, EntropyPoint};
use allometry_core::{DistributionSpec, SeedSpec};
use common::{integrate, neg_f_ln_f};
use statrs::distribution::{
    Continuous, Discrete, Gamma, LogNormal, Normal, Pareto, Poisson, Weibull,
};

const TOL: f64 = 1e-6;

/// −∫ f ln f over `x = e^y`, `y ∈ [lo, hi]`.
fn log_domain_entropy<F: Fn(f64) -> f64>(pdf: F, lo: f64, hi: f64) -> f64 {
    integrate(
        &|y: f64| {
            let x = y.exp();
            neg_f_ln_f(pdf(x)) * x
        },
        lo,
        hi,
        1e-11,
    )
}

fn check(label: &str, analytic: f64, numeric: f64) {
    assert!(
        (analytic - numeric).abs() < TOL,
        "{label}: analytic {analytic} vs numeric {numeric}"
    );
}

#[test]
fn normal_entropy() {
    for (mu, sd) in [(1.0, 1.0), (5.0, 0.3), (2.0, 10.0)] {
        let d = Normal::new(mu, sd).unwrap();
        let num = integrate(
            &|x| neg_f_ln_f(d.pdf(x)),
            mu - 40.0 * sd,
            mu + 40.0 * sd,
            1e-11,
        );
        let h = DistributionSpec::normal(mu, sd).analytic_entropy().unwrap();
        check(&format!("Normal({mu},{sd})"), h, num);
    }
}

#[test]
fn lognormal_entropy() {
    for (mu, sigma) in [(0.0, 1.0), (2.0, 0.25), (1.0, 3.0)] {
        let d = LogNormal::new(mu, sigma).unwrap();
        let num = log_domain_entropy(|x| d.pdf(x), mu - 40.0 * sigma, mu + 40.0 * sigma);
        let h = DistributionSpec::lognormal(mu, sigma)
            .analytic_entropy()
            .unwrap();
        check(&format!("LogNormal({mu},{sigma})"), h, num);
    }
}

#[test]
fn weibull_entropy() {
    for (shape, scale) in [(1.5, 2.0), (5.0, 0.5), (1.0, 8.0)] {
        let d = Weibull::new(shape, scale).unwrap();
        let lo = scale.ln() - 60.0 / shape;
        let hi = scale.ln() + 5.0;
        let num = log_domain_entropy(|x| d.pdf(x), lo, hi);
        let h = DistributionSpec::weibull(shape, scale)
            .analytic_entropy()
            .unwrap();
        check(&format!("Weibull({shape},{scale})"), h, num);
    }
}

#[test]
fn gamma_entropy() {
    for (shape, scale) in [(1.0, 2.0), (2.5, 0.4), (9.5, 3.0)] {
        let d = Gamma::new(shape, 1.0 / scale).unwrap();
        let lo = scale.ln() - 60.0 / shape;
        let hi = (scale * (shape + 60.0 * shape.sqrt() + 60.0)).ln();
        let num = log_domain_entropy(|x| d.pdf(x), lo, hi);
        let h = DistributionSpec::gamma(shape, scale)
            .analytic_entropy()
            .unwrap();
        check(&format!("Gamma({shape},{scale})"), h, num);
    }
}

#[test]
fn pareto_entropy() {
    for (k, alpha) in [(1.0, 1.0), (2.0, 0.5), (5.0, 3.0)] {
        let d = Pareto::new(k, alpha).unwrap();
        let lo = k.ln();
        let num = log_domain_entropy(
            |x| if x < k { 0.0 } else { d.pdf(x) },
            lo,
            lo + 80.0 / alpha,
        );
        let h = DistributionSpec::pareto(k, alpha)
            .analytic_entropy()
            .unwrap();
        check(&format!("Pareto({k},{alpha})"), h, num);
    }
}

#[test]
fn pareto_unit_entropy_is_two_nats() {
    let d = Pareto::new(1.0, 1.0).unwrap();
    let num = log_domain_entropy(|x| if x < 1.0 { 0.0 } else { d.pdf(x) }, 0.0, 80.0);
    assert!((num - 2.0).abs() < TOL);
    // The unit-coefficient model at C = 1, β = 2 is the same number.
    assert_eq!(eq3_eval(1.0, 2.0, 1.0, 1.0, 1.0).unwrap(), 2.0);
    let d = Pareto::new(std::f64::consts::E, 1.0).unwrap();
    let e = std::f64::consts::E;
    let num = log_domain_entropy(|x| if x < e { 0.0 } else { d.pdf(x) }, 1.0, 81.0);
    assert!((num - eq3_eval(e, 2.0, 1.0, 1.0, 1.0).unwrap()).abs() < TOL);
}

#[test]
fn poisson_entropy() {
    for mu in [0.5, 4.0, 60.0] {
        let d = Poisson::new(mu).unwrap();
        let num: f64 = (0..2000u64).map(|k| neg_f_ln_f(d.pmf(k))).sum();
        let h = DistributionSpec::poisson(mu).analytic_entropy().unwrap();
        check(&format!("Poisson({mu})"), h, num);
    }
}

#[test]
fn location_invariance() {
    let a = DistributionSpec::normal(1.0, 1.0)
        .analytic_entropy()
        .unwrap();
    for mu in [-100.0, 0.0, 3.5, 1e6] {
        assert_eq!(
            DistributionSpec::normal(mu, 1.0)
                .analytic_entropy()
                .unwrap(),
            a
        );
    }
}

#[test]
fn pareto_entropy_monotone_on_grid() {
    let n = 20;
    let cs: Vec<f64> = (0..n)
        .map(|i| 1.0 + 9.0 * i as f64 / (n - 1) as f64)
        .collect();
    let betas: Vec<f64> = (0..n)
        .map(|j| 1.05 + 8.95 * j as f64 / (n - 1) as f64)
        .collect();
    let h = |c: f64, b: f64| power_law_spec(c, b).analytic_entropy().unwrap();
    for &b in &betas {
        for w in cs.windows(2) {
            assert!(h(w[1], b) > h(w[0], b), "not increasing in C at beta={b}");
        }
    }
    for &c in &cs {
        for w in betas.windows(2) {
            assert!(h(c, w[1]) < h(c, w[0]), "not decreasing in beta at C={c}");
        }
    }
}

#[test]
fn model_fit_on_analytic_surface_is_identity() {
    let mut pts = Vec::new();
    for i in 0..10 {
        for j in 0..10 {
            let c = 1.0 + i as f64;
            let beta = 1.0 + 0.9 * (j + 1) as f64;
            let h = power_law_spec(c, beta).analytic_entropy().unwrap();
            pts.push(EntropyPoint { c, beta, h });
        }
    }
    let fit = fit_eq3(&pts).unwrap();
    for (got, name) in [(fit.k1, "k1"), (fit.k2, "k2"), (fit.k3, "k3")] {
        assert!((got - 1.0).abs() < 1e-10, "{name} = {got}");
    }
    assert!((fit.h_threshold - 2.0).abs() < 1e-10);
}

#[test]
fn share_entropy_bounds() {
    let specs = [
        DistributionSpec::gamma(2.0, 1.0),
        DistributionSpec::pareto(1.0, 0.3),
        DistributionSpec::lognormal(1.0, 4.0),
    ];
    for (i, spec) in specs.iter().enumerate() {
        let mut rng = SeedSpec::new(11, i as u64).stream();
        let v = sample_activities(spec, 5000, &mut rng).unwrap();
        let h = share_entropy(&v);
        assert!(h >= 0.0 && h < (5000f64).ln(), "{spec:?}: {h}");
    }
}
