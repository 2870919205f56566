use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use leachsim::config::parse_config;
use leachsim::experiment::{load_experiment, run_experiment_with, ROUND_CSV_HEADER};
use tempfile::TempDir;

const QUICK: [&str; 6] = [
    "--set",
    "nodes=30",
    "--set",
    "radio.e_init=0.02",
    "--set",
    "max_rounds=400",
];

fn leachsim(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leachsim"))
        .args(args)
        .env("LEACHSIM_WORKERS", workers)
        .output()
        .expect("binary runs")
}

fn simulate(out: &Path, workers: &str) -> Output {
    let mut args = vec![
        "simulate",
        "--protocol",
        "leach",
        "--protocol",
        "leach_modified",
        "--seeds",
        "0..2",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(QUICK);
    leachsim(&args, workers)
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut m = BTreeMap::new();
    for sub in [dir.to_path_buf(), dir.join("runs")] {
        for e in fs::read_dir(&sub).unwrap() {
            let p = e.unwrap().path();
            if p.is_file() {
                m.insert(
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    m
}

#[test]
fn simulate_writes_one_csv_per_run_plus_comparison() {
    let tmp = TempDir::new().unwrap();
    let out = simulate(tmp.path(), "1");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("leach_modified"), "{stdout}");

    let mut runs: Vec<_> = fs::read_dir(tmp.path().join("runs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    runs.sort();
    assert_eq!(
        runs,
        [
            "leach_modified_seed0.csv",
            "leach_modified_seed1.csv",
            "leach_modified_seed2.csv",
            "leach_seed0.csv",
            "leach_seed1.csv",
            "leach_seed2.csv"
        ]
    );
    let csv = fs::read_to_string(tmp.path().join("runs/leach_seed0.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), ROUND_CSV_HEADER);
    for f in ["config.json", "comparison.csv", "comparison.json", "summary_leach.json"] {
        assert!(tmp.path().join(f).is_file(), "missing {f}");
    }
}

#[test]
fn reruns_and_worker_counts_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert!(simulate(a.path(), "1").status.success());
    assert!(simulate(b.path(), "3").status.success());
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert_eq!(sa.keys().collect::<Vec<_>>(), sb.keys().collect::<Vec<_>>());
    for (k, v) in &sa {
        if k != "config.json" {
            assert!(v == &sb[k], "{k} differs");
        }
    }
}

#[test]
fn compare_rebuilds_the_table() {
    let tmp = TempDir::new().unwrap();
    assert!(simulate(tmp.path(), "2").status.success());
    let before = fs::read(tmp.path().join("comparison.csv")).unwrap();
    fs::remove_file(tmp.path().join("comparison.csv")).unwrap();
    let out = leachsim(&["compare", "--in", tmp.path().to_str().unwrap()], "1");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let after = fs::read(tmp.path().join("comparison.csv")).unwrap();
    assert_eq!(before, after);

    let (cfg, series) = load_experiment(tmp.path()).unwrap();
    assert_eq!(cfg.nodes, 30);
    assert_eq!(series.values().map(Vec::len).collect::<Vec<_>>(), [3, 3]);
}

#[test]
fn bad_inputs_fail_with_a_message() {
    let tmp = TempDir::new().unwrap();
    let out = leachsim(
        &[
            "simulate",
            "--set",
            "leach.p=1.5",
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        "1",
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("leach.p"));

    let out = leachsim(&["simulate", "--protocol", "heed"], "1");
    assert!(!out.status.success());

    let out = leachsim(&["compare", "--in", tmp.path().join("nope").to_str().unwrap()], "1");
    assert!(!out.status.success());
}

#[test]
fn unwritable_output_directory_is_an_error() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = parse_config(
        None,
        &[
            ("nodes".into(), "10".into()),
            ("seeds".into(), "[0]".into()),
            ("protocols".into(), r#"["direct","leach"]"#.into()),
            ("max_rounds".into(), "5".into()),
            (
                "out_dir".into(),
                format!("{:?}", blocker.join("sub").display().to_string()),
            ),
        ],
    )
    .unwrap();
    assert!(run_experiment_with(&cfg, 1).is_err());
}
