//! End-to-end checks of the command-line interface: subcommands, file
//! outputs, and exit codes (0 ok, 2 config, 3 runtime, 4 i/o).

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmoea"))
}

fn run_args(problem: &str, variant: &str, dir: &Path) -> Vec<String> {
    [
        "run",
        "--problem",
        problem,
        "--variant",
        variant,
        "--pop",
        "16",
        "--fe",
        "160",
        "--seed",
        "1",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain([
        "--out".to_string(),
        dir.join("runs").to_string_lossy().into_owned(),
        "--fronts".to_string(),
        dir.join("fronts").to_string_lossy().into_owned(),
    ])
    .collect()
}

#[test]
fn run_writes_trace_population_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin().args(run_args("tnk", "aop", dir.path())).output().unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("problem=tnk"));
    for suffix in ["trace.csv", "pop.csv", "summary.txt"] {
        let path = dir.path().join("runs").join(format!("tnk_aop_s1_{suffix}"));
        assert!(path.is_file(), "missing {}", path.display());
    }
    let trace = std::fs::read_to_string(dir.path().join("runs/tnk_aop_s1_trace.csv")).unwrap();
    assert!(trace.starts_with(
        "gen,fe,hv,igd,feasible_ratio,p_sbx,p_derand,p_debest,reward,critic_loss\n"
    ));
}

#[test]
fn unknown_problem_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(run_args("zdt1", "aop", dir.path()))
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn unknown_variant_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(run_args("bnh", "sbx-only", dir.path()))
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn compare_on_missing_directory_exits_with_runtime_code() {
    let status = bin()
        .args(["compare", "--in", "/nonexistent-cmoea-dir", "--baseline", "aop"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(4));
}

#[test]
fn fronts_regenerates_caches() {
    let dir = tempfile::tempdir().unwrap();
    let front_dir = dir.path().join("fronts");
    let status = bin()
        .args(["fronts", "--problem", "constr", "--n", "64", "--dir"])
        .arg(&front_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let cache = front_dir.join("constr_n64.txt");
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("# problem=constr n=64 M=2\n"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn batch_then_compare_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.cfg");
    std::fs::write(
        &config,
        format!(
            "problems = bnh\nvariants = aop ga-only\npop = 12\nfe = 72\nseeds = 2\n\
             out = {}\nfronts_dir = {}\nfront_size = 50\n",
            dir.path().join("out").display(),
            dir.path().join("fronts").display()
        ),
    )
    .unwrap();
    let status = bin()
        .args(["batch", "--config"])
        .arg(&config)
        .args(["--jobs", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("out/batch_report.txt").is_file());
    // One aggregate row per generation: (72 - 12) / 12 = 5, plus a header.
    let agg = std::fs::read_to_string(dir.path().join("out/bnh_aop_agg.csv")).unwrap();
    assert_eq!(agg.lines().count(), 6, "agg:\n{agg}");
    assert!(agg.starts_with("gen,fe,mean_hv,mean_igd\n"));

    let output = bin()
        .args(["compare", "--in"])
        .arg(dir.path().join("out"))
        .args(["--baseline", "aop"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let table = String::from_utf8(output.stdout).unwrap();
    assert!(table.contains("bnh"), "table:\n{table}");
    assert!(dir.path().join("out/comparison.txt").is_file());
    assert!(dir.path().join("out/comparison.csv").is_file());
    let csv = std::fs::read_to_string(dir.path().join("out/comparison.csv")).unwrap();
    assert!(csv.starts_with("problem,variant,mean_igd,std_igd,verdict,best\n"));
}

#[test]
fn fixed_portfolio_variant_runs() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(run_args("bnh", "fixed-portfolio:0.2,0.5,0.3", dir.path()))
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let trace = std::fs::read_to_string(
        dir.path().join("runs/bnh_fixed-0.20-0.50-0.30_s1_trace.csv"),
    )
    .unwrap();
    let row = trace.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[5], "0.2");
    assert_eq!(fields[6], "0.5");
    assert_eq!(fields[7], "0.3");
}
