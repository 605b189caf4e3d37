mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn actinwire(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_actinwire"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Data rows of a CSV written by the tool, without the provenance line and
/// the column header.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn every_csv_carries_the_provenance_line() {
    let dir = TempDir::new().unwrap();
    for cmd in ["derive-components", "sweep", "throughput", "compare-fret"] {
        let o = actinwire(&[cmd], dir.path());
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
    }
    let mut n = 0;
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            let text = fs::read_to_string(&path).unwrap();
            let first = text.lines().next().unwrap();
            assert!(
                first.starts_with("# actinwire 0.1.0 config-hash="),
                "{first}"
            );
            assert_eq!(first.len(), "# actinwire 0.1.0 config-hash=".len() + 16);
            n += 1;
        }
    }
    // components, five sweeps, throughput, comparison
    assert_eq!(n, 8);
}

#[test]
fn sweep_files_have_the_documented_shape() {
    let dir = TempDir::new().unwrap();
    let o = actinwire(&["sweep"], dir.path());
    assert!(o.status.success());
    for d in [10, 20, 30, 40, 50] {
        let text = read(dir.path(), &format!("sweep_d{d}um.csv"));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "freq_hz,omega_rad_s,atten_db,phase_deg,delay_s"
        );
        let r = rows(&text);
        assert_eq!(r.len(), 901);
        assert_eq!(r[0][0], "0");
        assert_eq!(r[900][0], "900");
    }
    let o = actinwire(&["sweep", "--phase-mode", "both"], dir.path());
    assert!(o.status.success());
    assert!(dir.path().join("sweep_d10um_literal.csv").exists());
    assert!(dir.path().join("sweep_d10um_standard.csv").exists());
    let lit = rows(&read(dir.path(), "sweep_d10um_literal.csv"));
    let phase0: f64 = lit[0][3].parse().unwrap();
    assert!((phase0 - 45.0).abs() < 1e-9);
}

#[test]
fn throughput_and_fret_comparison_values() {
    let dir = TempDir::new().unwrap();
    assert!(actinwire(&["compare-fret"], dir.path()).status.success());
    let r = rows(&read(dir.path(), "compare_fret.csv"));
    assert_eq!(r.len(), 2 * 601);
    let wannet0: Vec<f64> = r[0][2..].iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(r[0][1], "wannet");
    assert!((wannet0[0] - 44_409_492.72).abs() < 1e-4);
    assert!((wannet0[1] - 7.6474).abs() < 0.01);
    assert!((wannet0[2] - 44_409_492.72 / 5.5e3).abs() < 1e-8);
    assert!(r
        .iter()
        .filter(|row| row[1] == "fret_mamnet")
        .all(|row| row[2] == "5500"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let cfg = common::repo_path("configs/thirteen_node.toml");
    let cfg = cfg.to_str().unwrap();
    for dir in [&a, &b] {
        let o = actinwire(&["simulate", "--config", cfg, "--seeds", "50"], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(actinwire(&["sweep", "--config", cfg], dir.path())
            .status
            .success());
    }
    for name in [
        "metrics.csv",
        "timeline.csv",
        "summary.csv",
        "sweep_d30um.csv",
    ] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let cfg = common::repo_path("configs/thirteen_node.toml");
    let run = |dir: &TempDir, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_actinwire"))
            .args(["simulate", "--seeds", "40", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path())
            .env("ACTINWIRE_THREADS", threads)
            .output()
            .unwrap()
    };
    assert!(run(&a, "1").status.success());
    assert!(run(&b, "4").status.success());
    assert_eq!(read(a.path(), "metrics.csv"), read(b.path(), "metrics.csv"));
    let bad = run(&a, "zero");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn effective_config_round_trips() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let o = actinwire(
        &[
            "derive-components",
            "--overrides",
            "rho_ohm_m=0.9",
            "transport.mu1=4",
            "t_stop_s=none",
            "--mode",
            "derived",
        ],
        a.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let echoed = a.path().join("effective_config.toml");
    let text = read(a.path(), "effective_config.toml");
    assert!(text.contains("rho_ohm_m = 0.9"));
    assert!(text.contains("t_stop_s = \"none\""));
    assert!(text.contains("circuit_mode = \"derived\""));
    let o = actinwire(
        &["derive-components", "--config", echoed.to_str().unwrap()],
        b.path(),
    );
    assert!(o.status.success());
    assert_eq!(
        read(a.path(), "components.csv"),
        read(b.path(), "components.csv")
    );
    assert_eq!(text, read(b.path(), "effective_config.toml"));
}

#[test]
fn components_report_deviation_from_quoted_values() {
    let dir = TempDir::new().unwrap();
    assert!(actinwire(&["derive-components"], dir.path())
        .status
        .success());
    let r = rows(&read(dir.path(), "components.csv"));
    let monomer: Vec<&Vec<String>> = r.iter().filter(|row| row[1] == "monomer").collect();
    assert_eq!(monomer.len(), 3);
    for row in monomer {
        let dev: f64 = row[4].parse().unwrap();
        assert!(dev.abs() < 2.0, "{row:?}");
    }
}

#[test]
fn config_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["sweep", "--overrides", "no_such_key=1"],
        &["sweep", "--overrides", "n_points=3"],
        &["sweep", "--overrides", "rho_ohm_m"],
        &["sweep", "--config", "/nonexistent/actinwire.toml"],
        &["sweep", "--overrides", "rho_ohm_m=-1", "--mode", "derived"],
        &["simulate"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = actinwire(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        let err = stderr(&o);
        if args[0] != "frobnicate" {
            assert!(err.starts_with("actinwire: error[config]: "), "{err}");
            assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        }
    }
}

#[test]
fn model_errors_exit_with_3() {
    let dir = TempDir::new().unwrap();
    // a nearly lossless filament rings instead of being overdamped
    let o = actinwire(
        &[
            "sweep",
            "--mode",
            "derived",
            "--overrides",
            "rho_ohm_m=1e-12",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("actinwire: error[model]: "));
}

#[test]
fn unreachable_gateway_rows_are_written_with_exit_0() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("far.toml");
    fs::write(
        &cfg,
        r#"
[scenario]
seeds = 3
max_sim_time_s = 1000.0

[[nodes]]
id = 1
x_um = 0.0
y_um = 0.0
radius_um = 1.0
initial_detector = true

[[nodes]]
id = 2
x_um = 90.0
y_um = 0.0
radius_um = 1.0
gateway = true
"#,
    )
    .unwrap();
    let o = actinwire(&["simulate", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&read(dir.path(), "metrics.csv"));
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|row| row[1] == "false" && row[2].is_empty()));
}
