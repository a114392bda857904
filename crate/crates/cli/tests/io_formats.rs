use std::fs;

use allometry::io::{read_fig2_csv, read_scatter_csv, write_fig2_csv, write_scatter_csv};
use allometry::{CliError, EXIT_BAD_INPUT};
use allometry_core::scaling::fit_loglog;
use allometry_core::sweeps::{fig2_dataset, Fig2Grid, Sequential, SweepConfig};
use allometry_core::SystemSample;
use proptest::prelude::*;

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn exact_power_law_file_recovers_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("P,T\n");
    for p in [10u64, 30, 100, 300, 1000, 3000, 10_000] {
        text.push_str(&format!("{p},{:?}\n", 2.0 * (p as f64).powf(1.3)));
    }
    let data = read_scatter_csv(&write(&dir, "exact.csv", &text)).unwrap();
    assert_eq!(data.samples.len(), 7);
    let fit = fit_loglog(&data.samples).unwrap();
    assert!((fit.gamma - 1.3).abs() < 1e-9, "gamma {}", fit.gamma);
    assert!((fit.log_intercept - 2f64.ln()).abs() < 1e-9);
}

#[test]
fn three_row_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "three.csv",
        "point_id,P,T\n0,10,20\n1,100,400\n2,1000,8000\n",
    );
    let data = read_scatter_csv(&path).unwrap();
    assert_eq!(data.samples.len(), 3);
    assert_eq!(
        data.samples[2],
        SystemSample {
            population: 1000,
            new_tags: 8000.0,
            task_id: 2
        }
    );
    let fit = fit_loglog(&data.samples).unwrap();
    assert!((fit.gamma - 1.30).abs() < 0.005);
}

#[test]
fn empty_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let err = read_scatter_csv(&write(&dir, "empty.csv", "")).unwrap_err();
    assert!(err.to_string().contains("fewer than 3 valid rows"), "{err}");
    assert_eq!(err.exit_code(), EXIT_BAD_INPUT);
}

#[test]
fn malformed_row_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let err = read_scatter_csv(&write(&dir, "bad.csv", "P,T\nabc,5\n10,20\n")).unwrap_err();
    match &err {
        CliError::Row { line, .. } => assert_eq!(*line, 2),
        other => panic!("unexpected error {other:?}"),
    }
    assert!(err.to_string().contains("line 2"));
}

#[test]
fn out_of_domain_rows_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let text = "P,T\n10,20\n0,5\n100,400\n50,-1\n1000,8000\n2.5,3\n";
    let data = read_scatter_csv(&write(&dir, "mixed.csv", text)).unwrap();
    assert_eq!(data.samples.len(), 3);
    let lines: Vec<u64> = data.rejected.iter().map(|d| d.line).collect();
    assert_eq!(lines, [3, 5, 7]);
}

#[test]
fn too_few_valid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let err = read_scatter_csv(&write(&dir, "few.csv", "P,T\n10,20\n0,1\n100,400\n")).unwrap_err();
    assert!(err.to_string().contains("fewer than 3 valid rows"));
}

#[test]
fn missing_file_and_bad_header() {
    let dir = tempfile::tempdir().unwrap();
    let err = read_scatter_csv(&dir.path().join("absent.csv")).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
    let err = read_scatter_csv(&write(&dir, "hdr.csv", "x,y\n1,2\n")).unwrap_err();
    assert!(matches!(err, CliError::Row { line: 1, .. }));
}

#[test]
fn fig2_surface_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = SweepConfig::table1();
    cfg.fig2 = Fig2Grid {
        c_steps: 4,
        beta_steps: 5,
        ..Fig2Grid::default()
    };
    let rows = fig2_dataset(&cfg, &Sequential).unwrap();
    let path = dir.path().join("f2.csv");
    write_fig2_csv(&path, &rows).unwrap();
    let back = read_fig2_csv(&path).unwrap();
    assert_eq!(back.len(), rows.len());
    for (r, p) in rows.iter().zip(&back) {
        assert_eq!(r.point(), *p);
    }
}

fn arb_samples() -> impl Strategy<Value = Vec<SystemSample>> {
    prop::collection::vec(
        (
            1u64..u64::MAX / 2,
            any::<f64>().prop_filter("positive finite", |t| *t > 0.0 && t.is_finite()),
            any::<u64>(),
        ),
        0..60,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .map(|(population, new_tags, task_id)| SystemSample {
                population,
                new_tags,
                task_id,
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scatter_round_trip_is_exact(samples in arb_samples()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_scatter_csv(&path, &samples).unwrap();
        match read_scatter_csv(&path) {
            Ok(data) => {
                prop_assert!(data.rejected.is_empty());
                prop_assert_eq!(data.samples.len(), samples.len());
                for (a, b) in samples.iter().zip(&data.samples) {
                    prop_assert_eq!(a.population, b.population);
                    prop_assert_eq!(a.new_tags.to_bits(), b.new_tags.to_bits());
                    prop_assert_eq!(a.task_id, b.task_id);
                }
            }
            Err(_) => prop_assert!(samples.len() < 3),
        }
    }
}
