use std::path::Path;
use std::process::{Command, Output};

use horn_core::{generate_t, TripleTable};

fn horn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SIGMA: &str = "13,8,5,3,2,1";
const SCALE: &str = "0.03125";

#[test]
fn gen_triples_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.json");
    let o = horn(&["gen-triples", "--p", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("6+6+1"));
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(TripleTable::from_json(&value).unwrap(), generate_t(3));
}

#[test]
fn verify_domino_reports_counts() {
    let o = horn(&["verify-domino", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "12 checked, 0 failures");
}

fn sample_csv(dir: &Path, command: &str, threads: &str) -> (Output, Vec<u8>) {
    let out = dir.join(format!("{command}-{threads}.csv"));
    let o = horn(&[
        command,
        "--spectrum",
        SIGMA,
        "--scale",
        SCALE,
        "--n",
        "5000",
        "--seed",
        "42",
        "--threads",
        threads,
        "--out",
        out.to_str().unwrap(),
    ]);
    (o, std::fs::read(&out).unwrap_or_default())
}

#[test]
fn sampling_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for command in ["sample-imf", "sample-proj", "sample-adapted"] {
        let (o1, one) = sample_csv(dir.path(), command, "1");
        let (o4, four) = sample_csv(dir.path(), command, "4");
        assert_eq!(o1.status.code(), Some(0), "{}", stderr(&o1));
        assert_eq!(o4.status.code(), Some(0));
        assert!(stdout(&o1).contains("countInside = 5000"));
        assert_eq!(one, four, "{command}");
        assert_eq!(String::from_utf8(one).unwrap().lines().count(), 5001);
    }
}

#[test]
fn report_json_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = horn(&[
        "sample-proj",
        "--spectrum",
        SIGMA,
        "--scale",
        SCALE,
        "--n",
        "100",
        "--sampler",
        "haar",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["count_inside"], 100);
    assert_eq!(value["config"]["sampler"], "haar");
    assert_eq!(value["tight_counts"].as_array().unwrap().len(), 12);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["sample-imf", "--spectrum", ""],
        vec!["sample-imf", "--spectrum", "1,x"],
        vec!["sample-imf", "--spectrum", "1,2", "--unknown", "3"],
        vec!["sample-imf", "--spectrum", "1,2,3"],
        vec!["sample-imf", "--spectrum", "1,2", "--p", "2"],
        vec!["sample-imf", "--spectrum", "1,2", "--sampler", "uniform"],
        vec!["sample-imf", "--spectrum", "1,2", "--n", "0"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = horn(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn unsorted_spectrum_warns() {
    let o = horn(&["sample-adapted", "--spectrum", "1,3,2,0", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!("# reference inertia\nspectrum = {SIGMA}\nscale = {SCALE}\nn = 50\nseed = 1\n"),
    )
    .unwrap();
    let o = horn(&["sample-imf", "--config", cfg.to_str().unwrap(), "--n", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("samples = 7"));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = horn(&["verify-domino", "--p", "2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_points() {
    let o = horn(&[
        "check",
        "--spectrum",
        SIGMA,
        "--scale",
        SCALE,
        "--point",
        "0.5,0.3125,0.1875",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inside_p1"], true);

    // The point is not scaled, so its trace is off by a factor of 32.
    let o = horn(&[
        "check",
        "--spectrum",
        SIGMA,
        "--scale",
        SCALE,
        "--point",
        "26,16,10,6,4,2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inside_p"], false);

    // 2σ is the spectrum of 2·S0, a point of P.

    let twice: Vec<String> = [26.0, 16.0, 10.0, 6.0, 4.0, 2.0]
        .iter()
        .map(|v: &f64| (v / 32.0).to_string())
        .collect();
    let o = horn(&[
        "check",
        "--spectrum",
        SIGMA,
        "--scale",
        SCALE,
        "--point",
        &twice.join(","),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inside_p"], true);
    assert_eq!(v["projection_inside_p1"], true);
    assert_eq!(v["hermitian"], false);
}

#[test]
fn compare_partitions_block_split() {
    let o = horn(&[
        "compare-partitions",
        "--spectrum",
        SIGMA,
        "--scale",
        SCALE,
        "--split",
        "1,2,3",
        "--n",
        "2000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("fraction = 1"));
    let o = horn(&["compare-partitions", "--spectrum", SIGMA, "--split", "1,1,2"]);
    assert_eq!(o.status.code(), Some(2));
}
