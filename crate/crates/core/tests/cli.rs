use std::fs;
use std::process::{Command, Output};

fn hlfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlfq")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn count_prints_one_json_row() {
    let out = hlfq(&["count", "--field", "5", "--n", "2", "--offsets", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pi"], 5);
    assert_eq!(v["prediction"], "25/4");
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["outside_hypotheses"], false);
}

#[test]
fn one_shard_of_a_split() {
    let total: u64 = (0..3)
        .map(|i| {
            let s = format!("{i}/3");
            let v = json(&hlfq(&["count", "--field", "7", "--n", "3", "--offsets", "0,1", "--shards", &s]));
            assert_eq!(v["shard"], s.as_str());
            v["pi"].as_u64().unwrap()
        })
        .sum();
    let full = json(&hlfq(&["count", "--field", "7", "--n", "3", "--offsets", "0,1"]));
    assert_eq!(full["pi"].as_u64().unwrap(), total);
}

#[test]
fn csv_format() {
    let out = hlfq(&["count", "--field", "3", "--n", "2", "--offsets", "0,1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("field,n,offsets,mode,pi,prediction"));
    assert!(lines.next().unwrap().starts_with("3,2,0;1,exact,0,9/4"));
}

#[test]
fn validation_failures_exit_2() {
    for args in [
        &["count", "--field", "2^2", "--n", "2", "--offsets", "0,1"][..],
        &["count", "--field", "5", "--n", "2", "--offsets", "0,0"],
        &["count", "--field", "5", "--n", "2", "--offsets", "0,t^2"],
        &["count", "--field", "6", "--n", "2", "--offsets", "0,1"],
        &["count", "--field", "5", "--n", "2", "--offsets", "0,t^^2"],
        &["estimate", "--field", "5", "--n", "2", "--offsets", "0,1", "--samples", "0"],
    ] {
        let out = hlfq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn even_q_allowed_on_request() {
    let out = hlfq(&["count", "--field", "2^2", "--n", "2", "--offsets", "0,1", "--allow-even-q"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outside_hypotheses"], true);
}

#[test]
fn budget_exit_3() {
    let out = hlfq(&["count", "--field", "101", "--n", "3", "--offsets", "0,1", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exit_4() {
    let out = hlfq(&["count", "--field", "5", "--n", "2", "--offsets", "0,1", "--out", "/nonexistent/dir/x.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn estimate_is_reproducible() {
    let args = ["estimate", "--field", "31", "--n", "2", "--offsets", "0,1", "--samples", "500", "--seed", "4"];
    let a = hlfq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, hlfq(&args).stdout);
    let v = json(&a);
    assert_eq!(v["sample_size"], 500);
    assert!(v["ci_half_width"].as_f64().unwrap() > 0.0);
}

#[test]
fn cr_density_and_cycle_stats() {
    let v = json(&hlfq(&["cr-density", "--field", "5", "--n", "2", "--offsets", "0,t"]));
    assert_eq!(v["N"], 4);
    let out = hlfq(&["cycle-stats", "--field", "11", "--n", "2", "--offsets", "0,1", "--samples", "2000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out.stdout.is_empty());
}

#[test]
fn config_file_sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.jsonl");
    let cfg = dir.path().join("sweep.conf");
    fs::write(
        &cfg,
        format!("field = 3..61\nn = 2\noffsets = 0,1\nshards = 4\nout = {}\n", rows.display()),
    )
    .unwrap();
    let out = hlfq(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(&rows).unwrap().lines().count(), 21);
    let fit = hlfq(&["fit", rows.to_str().unwrap()]);
    assert_eq!(fit.status.code(), Some(0));
    let v = json(&fit);
    assert_eq!(v["points"], 21);
    assert!(v["slope"].as_f64().unwrap() < 1.6);
    // flags override the file
    let out = hlfq(&["sweep", "--config", cfg.to_str().unwrap(), "--field", "5^2", "--out", "/nonexistent/r.jsonl"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_refuses_bad_grid_point_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.jsonl");
    let out = hlfq(&["sweep", "--field", "3,5,2^3", "--n", "2", "--offsets", "0,1", "--out", rows.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!rows.exists());
}
