use std::process::Command;

use mulgame::simulator::PayoutSchedule;
use mulgame::IntervalUnion;
use serde_json::Value;

fn run_with_input(args: &[&str], input: &str) -> (i32, String, String) {
    let mut argv = vec!["mulgame"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = mulgame_cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with_input(args, "")
}

fn stdout(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&["value", "--digits", "1,2,3"]), "0.6020599913\n");
    assert_eq!(stdout(&["count", "-n", "3"]), "461698,348302\n");
    assert_eq!(stdout(&["count", "-n", "1"]), "44,37\n");
    assert_eq!(stdout(&["fair-payout", "--digits", "1,2,3"]), "1.5129\n");
    assert_eq!(stdout(&["value", "--intervals", "1:4"]), "0.6020599913\n");
    assert_eq!(stdout(&["value", "--intervals", "0:0.30103", "--domain", "log"]).len(), 13);
}

#[test]
fn count_csv_layout() {
    let out = stdout(&["count", "-n", "2", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,casino,player,ratio,digit1,digit2,digit3,digit4,digit5,digit6,digit7,digit8,digit9"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], ["2", "4616", "3484"]);
    let hist: u64 = row[4..].iter().map(|c| c.parse::<u64>().unwrap()).sum();
    assert_eq!(hist, 8100);
    assert_eq!(stdout(&["count", "-n", "2", "--naive", "--format", "csv"]), out);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["value", "--digits", "0"][..],
        &["value", "--intervals", "4:1"],
        &["count", "-n", "9"],
        &["vy", "--y", "10"],
        &["simulate", "--payout", "100"],
        &["simulate", "--strategy", "{\"type\":\"nope\"}"],
        &["group", "--cyclic", "4", "--w", "7"],
        &["matrix", "--matrix", "[[1,2]]"],
        &["frobnicate"],
        &["value", "--no-such-flag"],
        &["value", "--digits", "1", "--intervals", "1:2"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn seeded_output_is_reproducible() {
    for args in [
        &["simulate", "--seed", "11", "--rounds", "50"][..],
        &["simulate", "--seed", "11", "--rounds", "50", "--format", "csv"],
        &["simulate", "--seed", "11", "--sessions", "20", "--format", "csv"],
        &["gap", "--seed", "2", "-n", "3"],
        &["limit", "--samples", "1000", "--seed", "5", "--format", "csv"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
    assert_ne!(stdout(&["simulate", "--seed", "1"]), stdout(&["simulate", "--seed", "2"]));
}

#[test]
fn unseeded_runs_print_their_seed() {
    let out = stdout(&["simulate", "--rounds", "10"]);
    let seed = out.lines().next().unwrap().strip_prefix("seed: ").unwrap().to_string();
    assert_eq!(stdout(&["simulate", "--rounds", "10", "--seed", &seed]), out);
}

#[test]
fn json_outputs_follow_the_schemas() {
    let v = json(&["value", "--digits", "2,3,5,7"]);
    let ws: IntervalUnion = serde_json::from_value(v["winning_set"].clone()).unwrap();
    assert_eq!(ws, IntervalUnion::from_digits(&[2, 3, 5, 7]).unwrap());
    assert!((v["value"].as_f64().unwrap() - 0.438203).abs() < 1e-6);

    let c = json(&["count", "-n", "2"]);
    assert_eq!(c["count"]["casino_wins"], 4616);
    assert_eq!(c["count"]["histogram"].as_array().unwrap().len(), 9);

    let s = json(&["simulate", "--seed", "3", "--sessions", "10", "--payout", "100:151.29"]);
    let p: PayoutSchedule = serde_json::from_value(s["payout"].clone()).unwrap();
    assert_eq!(p.win_return(), 15_129);
    assert_eq!(s["batch"]["profits"].as_array().unwrap().len(), 10);

    let vy = json(&["vy", "--y", "2"]);
    let set: IntervalUnion = serde_json::from_value(vy["v_y"].clone()).unwrap();
    assert!((set.benford_measure().unwrap() - 4f64.log10()).abs() < 1e-12);

    let l = json(&["limit"]);
    assert!((l["p"].as_f64().unwrap() - 0.5700118).abs() < 1e-6);

    let g = json(&["group", "--dihedral", "4", "--w", "0,1,5"]);
    assert_eq!(g["certificate"]["verified"], true);
    assert_eq!(g["player_value"], 0.625);

    let m = json(&["matrix", "--matrix", "[[1,0,0],[0,1,0],[0,0,1]]"]);
    assert!((m["report"]["value_lower"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-4);
    assert_eq!(m["balanced"]["ones"], 1);
}

#[test]
fn group_from_table() {
    let table = r#"{"order":2,"table":[[0,1],[1,0]],"labels":["e","a"]}"#;
    assert_eq!(stdout(&["group", "--table", table, "--w", "1"]), "2,1,0.5000000000,true\n");
}

#[test]
fn terminal_play() {
    let (code, out, _) = run_with_input(
        &["play", "--seed", "9", "--strategy", r#"{"type":"pure","x":5}"#],
        "2.0\n20\nseven\n2\nq\n",
    );
    assert_eq!(code, 0);
    assert!(out.starts_with("seed: 9\n"));
    assert_eq!(out.matches("casino wins, -100").count(), 3, "{out}");
    assert!(out.contains("not a number"));
    assert!(out.trim_end().ends_with("3 rounds, casino won 3, bankroll -300"));

    let (_, out, _) = run_with_input(&["play", "--strategy", r#"{"type":"pure","x":2}"#, "--seed", "1"], "2");
    assert!(out.contains("-> 4 (digit 4): you win, 140 | bankroll 140"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mulgame");
    let ok = Command::new(bin).args(["value", "--digits", "1,2,3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "0.6020599913\n");
    let bad = Command::new(bin).args(["count", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
}
