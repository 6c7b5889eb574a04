use std::path::PathBuf;

use boltz_spectral::cli::{self, resolve, CliError, CommonArgs, FileConfig, RunManifest};
use boltz_spectral::dynamics::{ExperimentConfig, Projection, TrajectoryTable};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boltz-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_codes() {
    assert_eq!(cli::run(["boltz", "bkw", "--N", "0"]), 1);
    assert_eq!(cli::run(["boltz", "moments", "--kernel", "bogus"]), 1);
    assert_eq!(cli::run(["boltz", "frobnicate"]), 1);
    assert_eq!(cli::run(["boltz", "--help"]), 0);
    assert_eq!(cli::run(["boltz", "bkw", "--kernel", "hardsphere"]), 1);
    let missing = scratch("missing").join("nope.cfg");
    assert_eq!(cli::run(["boltz", "bkw", "--config", missing.to_str().unwrap()]), 3);
    let blocked = scratch("blocked");
    std::fs::write(blocked.join("file"), "").unwrap();
    let out = blocked.join("file").join("x.csv");
    let code = cli::run(["boltz", "bkw", "--N", "3", "--tend", "5.6", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn error_kinds_map_to_codes() {
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    assert_eq!(CliError::Verify(2).exit_code(), 2);
    let numerical = boltz_spectral::Error::Numerical {
        time: 1.0,
        step: 3,
        message: "overflow".into(),
    };
    assert_eq!(CliError::Lib(numerical).exit_code(), 2);
}

#[test]
fn config_precedence() {
    let dir = scratch("precedence");
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# comment\nN = 6\ndt=0.05\nkernel=maxwell\nprojection=collocation\nthreads=1\n").unwrap();
    let args = CommonArgs {
        config: Some(path.clone()),
        dt: Some(0.2),
        ..Default::default()
    };
    let (config, options) = resolve(&args, None, ExperimentConfig::bkw()).unwrap();
    assert_eq!(config.n, 6);
    assert_eq!(config.n_ip, 6);
    assert_eq!(config.dt, 0.2);
    assert_eq!(config.t0, 5.5);
    assert_eq!(config.projection, Projection::Collocation);
    assert_eq!(options.threads, 1);

    std::fs::write(&path, r#"{"N": 5, "nip": 4, "tend": 7.0, "seed": 11}"#).unwrap();
    let args = CommonArgs {
        config: Some(path),
        ..Default::default()
    };
    let (config, options) = resolve(&args, None, ExperimentConfig::bkw()).unwrap();
    assert_eq!((config.n, config.n_ip, config.t_end), (5, 4, 7.0));
    assert_eq!(options.seed, 11);
    assert!(FileConfig::parse("bogus=1").is_err());
    assert!(FileConfig::parse("no equals sign").is_err());
}

#[test]
fn bkw_writes_reproducible_csv_and_manifest() {
    let dir = scratch("bkw");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for p in [&a, &b] {
        let code = cli::run(["boltz", "bkw", "--N", "4", "--tend", "6.0", "--threads", "1", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let table = TrajectoryTable::read(&a).unwrap();
    assert_eq!(table.extra_columns, ["err_L2", "err_Linf"]);
    assert_eq!(table.rows.len(), 6);
    let first = table.rows[0].0;
    for (m, _) in &table.rows {
        assert!((m.rho - first.rho).abs() <= 1e-8);
        assert!((m.energy - first.energy).abs() <= 1e-8 * first.energy);
    }
    let manifest: RunManifest = serde_json::from_str(&std::fs::read_to_string(RunManifest::path_for(&a)).unwrap()).unwrap();
    assert_eq!(manifest.command, "bkw");
    assert_eq!(manifest.threads, 1);
    assert_eq!(manifest.config["n"], 4);
}

#[test]
fn moments_against_closed_forms_and_reference() {
    let dir = scratch("moments");
    let reference = dir.join("ref.csv");
    let args = CommonArgs {
        n: Some(6),
        tend: Some(0.5),
        dt: Some(0.05),
        kernel: Some("hardsphere".into()),
        out: Some(reference.clone()),
        threads: Some(1),
        ..Default::default()
    };
    let summary = cli::cmd_moments(&args, None).unwrap();
    assert!(summary.analytic_error.is_none());
    let coarse = CommonArgs {
        n: Some(4),
        out: Some(dir.join("coarse.csv")),
        ..args
    };
    let summary = cli::cmd_moments(&coarse, Some(reference)).unwrap();
    assert!(summary.reference_error.unwrap() > 0.0);

    let args = CommonArgs {
        tend: Some(1.0),
        out: Some(dir.join("maxwell.csv")),
        threads: Some(1),
        ..Default::default()
    };
    let summary = cli::cmd_moments(&args, None).unwrap();
    assert!(summary.analytic_error.unwrap() < 5e-4);
    let table = TrajectoryTable::read(&dir.join("maxwell.csv")).unwrap();
    assert_eq!(table.extra_columns.len(), 6);
}

#[test]
fn bench_reports_rows_and_slope_input() {
    let dir = scratch("bench");
    let args = CommonArgs {
        out: Some(dir.join("bench.csv")),
        ..Default::default()
    };
    let rows = cli::cmd_bench(&args, &[3, 4], &[1], 1).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.apply_seconds > 0.0 && r.storage_bytes > 0));
    assert!((cli::loglog_slope(&[1.0, 2.0, 4.0], &[3.0, 24.0, 192.0]) - 3.0).abs() < 1e-12);
}
