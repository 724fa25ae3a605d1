//! Runs the built `gdi` binary end to end.

use std::fs;
use std::process::{Command, Output};

fn gdi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows under the comment line and header, split on commas.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn epsilon_sweep_vanishes_at_full_exploration() {
    let csv = stdout(&gdi(&["sweep-epsilon"]));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# gdi sweep-epsilon method=exact grid-points=21"));
    assert_eq!(lines.next().unwrap(), "epsilon,arrow,plasticity_bits,ci_low,ci_high,method,seed");
    let rows = rows(&csv);
    assert_eq!(rows.len(), 42);
    let last = rows.iter().find(|r| r[0] == "1" && r[1] == "delayed").unwrap();
    assert!(num(&last[2]) < 1e-12);
}

#[test]
fn qinit_sweep_respects_the_bound() {
    let csv = stdout(&gdi(&["sweep-qinit"]));
    for r in rows(&csv) {
        assert!(num(&r[3]) <= num(&r[4]) + 1e-10, "{r:?}");
    }
}

#[test]
fn constant_agent_measures_zero() {
    let csv = stdout(&gdi(&["measure", "--agent", "constant", "--env", "uniform"]));
    let r = &rows(&csv)[0];
    assert_eq!(num(&r[0]), 0.0);
    assert_eq!(num(&r[3]), 0.0);
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "measure".to_string(),
            "--agent".into(),
            "qlearn(eps=0.2,q0=0.5)".into(),
            "--env".into(),
            "bandit(p0=0.4,p1=0.7)".into(),
            "--method".into(),
            "mc".into(),
            "--samples".into(),
            "5000".into(),
            "--replicates".into(),
            "100".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    for p in [&p1, &p2] {
        let a = args(p);
        let out = gdi(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# corridor run\nrooms = 3\nhorizon = 2\n").unwrap();
    let conf = conf.display().to_string();
    let csv = stdout(&gdi(&["corridor", "--config", &conf, "--rooms", "4"]));
    assert!(csv.starts_with("# gdi corridor rooms=4 theta=0.5 horizon=2 p-on=0.75 p-off=0.25\n"));
    assert_eq!(rows(&csv).len(), 4);
}

#[test]
fn failures_have_distinct_messages_and_statuses() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["measure", "--agent", "bogus"], 3, "unknown zoo name `bogus`"),
        (&["measure", "--a", "3", "--b", "2"], 4, "invalid interval"),
        (&["measure", "--na", "3", "--no", "3", "--b", "8", "--d", "8"], 5, "enumeration cap exceeded"),
        (&["corridor", "--agent", "uniform"], 2, "unknown setting `--agent`"),
        (&["laws", "--horizons", "x"], 2, "invalid value `x` for `horizons`"),
    ];
    for (args, code, message) in cases {
        let out = gdi(args);
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {err}");
        assert!(err.contains(message), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1);
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn law_suite_rows_pass() {
    let csv = stdout(&gdi(&[
        "laws",
        "--laws",
        "conservation,summation,kramer",
        "--instances",
        "3",
        "--horizons",
        "2,3",
    ]));
    let rows = rows(&csv);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[11] == "true"));
}

#[test]
fn corridor_orders_rooms() {
    let rows = rows(&stdout(&gdi(&["corridor"])));
    assert_eq!(rows.len(), 5);
    assert!(num(&rows[0][1]) > num(&rows[4][1]));
    assert!(num(&rows[0][2]) < num(&rows[4][2]));
}
