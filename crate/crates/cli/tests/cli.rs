use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rqcd_cli::output::{aggregate_dir, csv_files, read_summary, SUMMARY_FILE};
use rqcd_cli::{read_trace, write_trace, CSV_COLUMNS};
use rqcd_core::{run, Algorithm, OptimizerConfig};

fn rqcd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rqcd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rqcd_in(dir: &Path, args: &[&str]) -> Output {
    let mut full = args.to_vec();
    full.extend(["--out", dir.to_str().unwrap()]);
    rqcd(&full)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ground_energy_of_two_site_chain() {
    let o = rqcd(&["ground-energy", "--n", "2", "--delta", "0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-5.0");
}

#[test]
fn repeated_run_writes_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = [
        "run",
        "--algo",
        "rrsn",
        "--n",
        "3",
        "--d",
        "20",
        "--seed",
        "7",
        "--max-iters",
        "4",
    ];
    assert!(rqcd_in(a.path(), &args).status.success());
    assert!(rqcd_in(b.path(), &args).status.success());
    let file = "rrsn_n3_d20_s7.csv";
    let x = fs::read(a.path().join(file)).unwrap();
    assert_eq!(x, fs::read(b.path().join(file)).unwrap());
    assert_eq!(
        fs::read(a.path().join(SUMMARY_FILE)).unwrap(),
        fs::read(b.path().join(SUMMARY_FILE)).unwrap()
    );
}

#[test]
fn scan_d_writes_one_file_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = rqcd_in(
        dir.path(),
        &[
            "scan-d",
            "--n",
            "4",
            "--max-iters",
            "1",
            "--warm-start-vqa",
            "2",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files = csv_files(dir.path()).unwrap();
    assert_eq!(files.len(), 160);
    let summary = read_summary(&dir.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(summary.tag, "fig5");
    assert_eq!(summary.runs.len(), 160);
    assert_eq!(summary.aggregates.len(), 8);
    let ds: Vec<_> = summary.aggregates.iter().map(|g| g.d.unwrap()).collect();
    assert_eq!(ds, [1, 4, 8, 16, 32, 64, 128, 255]);
    assert!(summary.aggregates.iter().all(|g| g.runs == 20));
    let seeds: Vec<u64> = summary
        .runs
        .iter()
        .filter(|r| r.d == Some(1))
        .map(|r| r.seed)
        .collect();
    assert_eq!(seeds, (0..20).collect::<Vec<_>>());
}

#[test]
fn summary_is_reproducible_from_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let o = rqcd_in(
        dir.path(),
        &[
            "compare-d1",
            "--n",
            "2,3",
            "--runs",
            "3",
            "--seed",
            "4",
            "--max-iters",
            "40",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read_summary(&dir.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(summary.runs.len(), 2 * 3 * 3);
    assert_eq!(summary.aggregates, aggregate_dir(dir.path()).unwrap());
}

#[test]
fn energy_error_column_is_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let o = rqcd_in(
        dir.path(),
        &[
            "run",
            "--algo",
            "rrsgp-exact",
            "--n",
            "3",
            "--d",
            "6",
            "--max-iters",
            "10",
        ],
    );
    assert!(o.status.success());
    let f_ground: f64 = stdout(&rqcd(&["ground-energy", "--n", "3"]))
        .trim()
        .parse()
        .unwrap();
    let rows = read_trace(&dir.path().join("rrsgp-exact_n3_d6_s0.csv")).unwrap();
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert!((r.energy_error - (r.energy - f_ground).abs()).abs() < 1e-12);
        assert_eq!(r.wall_ms, 0);
    }
}

#[test]
fn one_iteration_rrsgp_trace() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = OptimizerConfig::new(Algorithm::RrsgpFixed, 3, 9);
    cfg.max_iters = 1;
    let trace = run(&cfg).unwrap();
    let path = dir.path().join("t.csv");
    write_trace(&trace, false, &path).unwrap();
    let rows = read_trace(&path).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].iter, rows[1].iter), (0, 1));
    assert_eq!(rows[1].cumulative_gates, 9);
    assert_eq!(rows[1].d, Some(9));
    assert_eq!(rows[1].step_size, Some(0.1));
    assert_eq!(rows[0].step_size, None);
}

#[test]
fn empty_trace_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut trace = run(&OptimizerConfig::new(Algorithm::Rrsn, 2, 3)).unwrap();
    trace.records.clear();
    let path = dir.path().join("empty.csv");
    write_trace(&trace, false, &path).unwrap();
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        CSV_COLUMNS.join(",") + "\n"
    );
    assert!(read_trace(&path).unwrap().is_empty());
}

#[test]
fn vqa_rows_leave_d_empty() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rqcd_in(
        dir.path(),
        &["run", "--algo", "vqa", "--n", "2", "--max-iters", "2"]
    )
    .status
    .success());
    let text = fs::read_to_string(dir.path().join("vqa_n2_s0.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("vqa_n2_s0,0,vqa,2,0.5,,0,"), "{row}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    let out = dir.path().join("out");
    fs::write(
        &config,
        format!(
            r#"{{"algo": "rrsgp-fixed", "n": 2, "d": 5, "seed": 5, "runs": 3, "max_iters": 2, "out": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = rqcd(&["run", "--config", config.to_str().unwrap(), "--runs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let names: Vec<String> = csv_files(&out)
        .unwrap()
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        ["rrsgp-fixed_n2_d5_s5.csv", "rrsgp-fixed_n2_d5_s6.csv"]
    );
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = dir.path().join("bad.json");
    fs::write(&bad_key, r#"{"seeds": 4}"#).unwrap();
    let missing = dir.path().join("missing.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--algo", "newton"],
        vec!["run", "--n", "2", "--d", "17"],
        vec!["run", "--runs", "0"],
        vec!["run", "--n", "2", "--d", "1,2"],
        vec!["run", "--config", bad_key.to_str().unwrap()],
        vec!["run", "--config", missing.to_str().unwrap()],
        vec!["scan-d", "--algo", "vqa"],
        vec!["frobnicate"],
        vec!["ground-energy", "--n", "1"],
    ];
    for args in cases {
        let o = rqcd(&args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = rqcd(&[
        "run",
        "--n",
        "2",
        "--max-iters",
        "1",
        "--out",
        blocker.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn worker_cap_is_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_rqcd"))
        .args(["run", "--n", "2", "--max-iters", "1", "--out"])
        .arg(tempfile::tempdir().unwrap().path())
        .env("RQCD_WORKERS", "1")
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_rqcd"))
        .args(["run", "--n", "2", "--max-iters", "1"])
        .env("RQCD_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
