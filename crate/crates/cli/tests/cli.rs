use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn snapshot() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/usdtry_2022.csv")
}

fn fxcast(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fxcast"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn describe_prints_tables() {
    let dir = tempfile::tempdir().unwrap();
    let input = snapshot();
    let out = fxcast(&["describe", "--input", input.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Table 1. Descriptive Statistics"));
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let input = snapshot();
    let out = fxcast(&["test", "--input", input.to_str().unwrap(), "--format", "json"], dir.path());
    assert_eq!(code(&out), 0);
    let report = fxcast::parse_report(&out.stdout).unwrap();
    assert!(report.unit_root.is_present());
}

#[test]
fn report_writes_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("fxcast.toml");
    std::fs::write(
        &config,
        format!(
            "input = {:?}\nformats = [\"text\", \"json\", \"csv\"]\n\n[arima]\np_max = 1\nq_max = 1\n\n[zoo]\narima = []\nar = [1]\nma = []\n",
            snapshot()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = fxcast(
        &["report", "--config", config.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["report.txt", "report.json", "report.csv", "returns.csv", "correlogram.csv"] {
        assert!(out_dir.join(name).is_file(), "{name} missing");
    }
    assert!(String::from_utf8(out.stdout).unwrap().contains("Table 11. Forecasting Evaluation"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = snapshot();
    let input = input.to_str().unwrap();

    let out = fxcast(&["describe", "--input", "missing.csv"], dir.path());
    assert_eq!(code(&out), 3);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "date,rate\n2022-01-03,13.5\n2022-01-04,-1\n2022-01-05,13.6\n").unwrap();
    let out = fxcast(&["describe", "--input", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 3);

    let out = fxcast(&["describe", "--input", input, "--criterion", "xyz"], dir.path());
    assert_eq!(code(&out), 2);

    let out = fxcast(&["describe", "--input", input, "--format", "yaml"], dir.path());
    assert_eq!(code(&out), 2);

    let config = dir.path().join("typo.toml");
    std::fs::write(&config, "inptu = \"x.csv\"\n").unwrap();
    let out = fxcast(&["describe", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("inptu"));

    let out = fxcast(&["mc", "--reps", "5", "--nobs", "60"], dir.path());
    assert!(matches!(code(&out), 0 | 1));
}
