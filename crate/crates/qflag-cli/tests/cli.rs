use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn qflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflag")).args(args).output().expect("spawn qflag")
}

fn qflag_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qflag"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qflag");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn separation_and_hom() {
    let v = json(&qflag(&["sep", "--n", "4", "--i", "1,2", "--j", "3,4"]));
    assert_eq!(v["weak"], true);
    assert_eq!(v["strong"], true);
    let v = json(&qflag(&["hom", "--n", "5", "--i", "1,3", "--j", "2..4"]));
    assert_eq!(v["formula"], v["modules"]);
}

#[test]
fn collection_round_trip_through_stdin() {
    let rect = qflag(&["collection", "rectangle", "--n", "5", "--k", "2"]);
    let v = json(&qflag_stdin(&["collection", "check", "--input", "-"], &rect.stdout));
    assert_eq!(v["maximal"], true);
    assert_eq!(v["weakly_separated"], true);
    assert_eq!(v["size"], 7);
    let seed = qflag_stdin(&["seed", "--input", "-"], &rect.stdout);
    let v = json(&seed);
    assert_eq!(v["labels"].as_array().unwrap().len(), 7);
}

#[test]
fn counts() {
    let v = json(&qflag(&["collection", "rectangle", "--n", "6", "--k", "3", "--count"]));
    assert_eq!(v, 10);
}

#[test]
fn schedule_reaches_target() {
    let v = json(&qflag(&["schedule", "--n", "6", "--J", "1..5", "--k", "4"]));
    assert_eq!(v["reaches_target"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(qflag(&["sep", "--n", "3", "--i", "1,5", "--j", "2"]).status.code(), Some(2));
    assert_eq!(qflag(&["sep", "--n", "3", "--i", "x", "--j", "2"]).status.code(), Some(2));
    assert_eq!(qflag(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qflag_stdin(&["collection", "check", "--input", "-"], b"{not json").status.code(), Some(2));
    assert_eq!(qflag(&["word", "--n", "3", "--word", "1,1"]).status.code(), Some(0));
}

#[test]
fn pretty_output_is_a_table() {
    let out = qflag(&["--pretty", "c", "--n", "4", "--i", "1,2", "--j", "1,3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("c "));
}
