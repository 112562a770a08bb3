use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use carpool::graph::GirthThreshold;
use carpool::oracle::{brute_girth, Girth};
use carpool::stream::{parse_stream, TraceLine};
use carpool::{EdgeId, UpdateEvent, UpdateKind};

const SCRIPTED: &str = "# 7-cycle stays in the girth part, (0,3) closes a 4-cycle
n 8
+ 0 1
+ 1 2
+ 2 3
+ 3 4
+ 4 5
+ 5 6
+ 0 6
+ 0 3
";

fn carpool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carpool"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gen_random_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = carpool(&[
            "gen",
            "random",
            "--n",
            "16",
            "--steps",
            "100",
            "--seed",
            "1",
            "--out",
            s(p),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let stream = parse_stream(&text).unwrap();
    assert_eq!(stream.len(), 100);
    assert_eq!(stream.provenance.unwrap().generator, "random");

    let stdout = carpool(&[
        "gen", "random", "--n", "16", "--steps", "100", "--seed", "1",
    ]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);
}

#[test]
fn gen_high_girth_keeps_girth() {
    let o = carpool(&[
        "gen",
        "high_girth",
        "--n",
        "32",
        "--steps",
        "400",
        "--seed",
        "3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stream = parse_stream(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let min = GirthThreshold::new(32).unwrap().girth_min as usize;
    let mut edges = Vec::new();
    for e in &stream.events {
        match *e {
            UpdateEvent::Insert(u, v) => edges.push(Some((u, v))),
            UpdateEvent::DeleteById(EdgeId(id)) => edges[id as usize] = None,
            UpdateEvent::DeleteByPair(..) => unreachable!(),
        }
        let live: Vec<_> = edges.iter().flatten().copied().collect();
        assert!(brute_girth(32, &live) >= Girth::Finite(min));
    }
}

#[test]
fn gen_rejects_bad_parameters() {
    let o = carpool(&[
        "gen",
        "random",
        "--n",
        "16",
        "--steps",
        "10",
        "--p-delete",
        "1.0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p_delete"));
    let o = carpool(&["gen", "zigzag", "--n", "16", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown generator"));
}

#[test]
fn scripted_run_has_one_cycle_extraction() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    fs::write(&input, SCRIPTED).unwrap();
    let t1 = dir.path().join("t1.jsonl");
    let t2 = dir.path().join("t2.jsonl");
    for t in [&t1, &t2] {
        let o = carpool(&["run", s(&input), "--trace", s(t), "--check"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let trace = fs::read(&t1).unwrap();
    assert_eq!(trace, fs::read(&t2).unwrap());
    let lines: Vec<TraceLine> = String::from_utf8(trace)
        .unwrap()
        .lines()
        .map(|l| TraceLine::from_json(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 8);
    let cycles: Vec<_> = lines
        .iter()
        .filter(|l| l.kind == UpdateKind::InsertCycle)
        .collect();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].seq, 8);
    assert_eq!(cycles[0].event, "+ 0 3");
    assert!(lines.iter().all(|l| l.max_disc <= 3));
}

#[test]
fn verify_reports_success() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    let o = carpool(&[
        "gen",
        "cycle-churn",
        "--n",
        "16",
        "--steps",
        "500",
        "--out",
        s(&input),
    ]);
    assert!(o.status.success());
    let o = carpool(&["verify", s(&input)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("ok: 500 updates"));
}

#[test]
fn check_mode_names_the_broken_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    fs::write(&input, SCRIPTED).unwrap();
    let cases = [
        ("reversed-cycle-edge:8", "cycle-orientation"),
        ("partition-orphan:8", "partition-totality"),
        ("short-cycle-in-girth:8", "girth-lower-bound"),
        ("label-miscount:8", "label-membership"),
    ];
    for (spec, name) in cases {
        let o = carpool(&["run", s(&input), "--check", "--inject-fault", spec]);
        assert_eq!(o.status.code(), Some(1), "{spec}: {}", stderr(&o));
        assert!(stderr(&o).contains(name), "{spec}: {}", stderr(&o));
    }
    // without --check the final sweep still catches it
    let o = carpool(&["run", s(&input), "--inject-fault", "reversed-cycle-edge:8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cycle-orientation"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "n 4\n+ 0 0\n").unwrap();
    let o = carpool(&["run", s(&input)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("self-loop"), "{err}");

    fs::write(&input, "n 4\n-# 7\n").unwrap();
    let err = stderr(&carpool(&["verify", s(&input)]));
    assert!(
        err.contains("line 2") && err.contains("unknown-edge"),
        "{err}"
    );

    let o = carpool(&["run", s(&dir.path().join("missing.txt"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_empty_stream_prints_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "n 8\n").unwrap();
    let o = carpool(&["bench", s(&input)]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("n,log,"));
}

#[test]
fn bench_rows_stay_within_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let json = dir.path().join("b.jsonl");
    let o = carpool(&[
        "bench",
        "--n-list",
        "8,16,32",
        "--steps",
        "2000",
        "--seeds",
        "2",
        "--csv",
        s(&csv),
        "--json",
        s(&json),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text, String::from_utf8(o.stdout).unwrap());
    let rows: Vec<serde_json::Value> = fs::read_to_string(&json)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r["max_disc"].as_u64().unwrap() <= 3);
        assert!(r["max_recourse"].as_u64().unwrap() <= r["ceiling"].as_u64().unwrap());
        assert_eq!(r["updates"].as_u64().unwrap(), 4000);
    }
}
