use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperslice")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn analyze_c6() {
    let out = run(&["analyze", fixture("c6.khg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["components"], 1);
    assert_eq!(v["nu"], 2);
    assert_eq!(v["fractional"]["weight"], "2");
    // every cluster triple of C_6 under v mod 3 carries 6 of the 8 transversals
    assert_eq!(v["reduced"]["weights"]["0,1,2"], "3/4");
    let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
    let got: f64 = v["reduced"]["entropy"].as_str().unwrap().parse().unwrap();
    assert!((got - h).abs() < 1e-9);
}

#[test]
fn sweep_eg_shape() {
    let args = ["--format", "csv", "sweep", "eg", "--n", "8", "--k", "3", "--p", "0:1:0.25", "--trials", "5", "--seed", "1"];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,seed,edges,longest_cycle"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 25);
    for row in &rows {
        let (edges, cycle): (usize, usize) = (row[2].parse().unwrap(), row[3].parse().unwrap());
        assert!(cycle <= 8);
        assert!(cycle == 0 || cycle >= 4);
        if edges == 0 {
            assert_eq!(cycle, 0);
        }
    }
    let ps: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(&ps[..6], ["0", "0", "0", "0", "0", "0.25"]);
    // p = 1 is K_8^(3), which has a Hamiltonian tight cycle
    assert!(rows[20..].iter().all(|r| r[2] == "56" && r[3] == "8"));
    assert_eq!(run(&args).stdout, out.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["--format", "csv", "sweep", "partite", "--t", "3", "--k", "3", "--p", "0:1:1/2", "--trials", "3", "--seed", "9"];
    let one = Command::new(env!("CARGO_BIN_EXE_hyperslice")).args(args).env("HYPERSLICE_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_hyperslice")).args(args).env("HYPERSLICE_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn verify_bundled_fixtures() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn reports_are_byte_identical() {
    let path = fixture("partite-2-2-2.khg");
    let args = ["analyze", path.to_str().unwrap()];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let slice = ["slice", "stats", "--t", "4", "--k", "3", "--m", "2", "--cells", "2", "--samples", "300", "--seed", "5"];
    let a = run(&slice);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&slice).stdout);
    assert_eq!(json(&a)["probability_mismatches"], 0);
    assert_eq!(json(&a)["enumeration"]["total_probability"], "1");
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("hyperslice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.khg");
    std::fs::write(&bad, "khg 1\nk 3\nn 4\ne 0 1\n").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let c6 = fixture("c6.khg");
    let out = run(&["search", c6.to_str().unwrap(), "--cycle", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "exhaustive_negative");
    let out = run(&["search", c6.to_str().unwrap(), "--longest-cycle", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["sweep", "eg", "--n", "5", "--k", "3", "--p", "1:0:1"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gen_round_trips_through_analyze() {
    let dir = std::env::temp_dir().join(format!("hyperslice-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cycle.khg");
    let out = run(&["--out", path.to_str().unwrap(), "gen", "tight-cycle:9:3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# hyperslice gen tight-cycle:9:3\n"));
    let v = json(&run(&["analyze", path.to_str().unwrap()]));
    assert_eq!(v["edges"], 9);
    assert_eq!(v["fractional"]["weight"], "3");
    let out = run(&["verify", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}
