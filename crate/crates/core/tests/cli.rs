use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn kneser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser"))
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

#[test]
fn sumset_and_stabilizer() {
    let o = kneser(&["sumset", "Z5", "{0,1}", "{0,1}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{0,1,2}\n");

    let o = kneser(&["stabilizer", "Z6", "{0,2,4}", "{0,1}"]);
    assert_eq!(stdout(&o), "{0,2,4}\n{0}\n");

    let o = kneser(&["sumset", "Z", "{0,1,2}", "{0,10}"]);
    assert_eq!(stdout(&o), "{0,1,2,10,11,12}\n");
}

#[test]
fn check_reports_equality() {
    let o = kneser(&["check", "Z6", "{0,3}", "{0,3}"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("K: {0,3}"), "{text}");
    assert!(text.ends_with("lhs=2 rhs=2 equality\n"), "{text}");

    let o = kneser(&["check", "Z2xZ2", "{(0,0),(1,0)}", "{(0,0),(0,1)}"]);
    assert!(stdout(&o).ends_with("lhs=4 rhs=4 equality\n"));
}

#[test]
fn certify_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("z8.json");
    let cert_s = cert.to_str().unwrap();
    let o = kneser(&["certify", "Z8", "{0,1,4}", "{0,4,5}", "--out", cert_s]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("claimed bound 5"));

    let o = kneser(&["verify", "Z8", "{0,1,4}", "{0,4,5}", "--cert", cert_s]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "accept\n");

    // same certificate against a different pair
    let o = kneser(&["verify", "Z8", "{0,1,4}", "{0,4,6}", "--cert", cert_s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject: "));

    // stdout output matches the file byte for byte
    let o = kneser(&["certify", "Z8", "{0,1,4}", "{0,4,5}"]);
    assert_eq!(stdout(&o), fs::read_to_string(&cert).unwrap());
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("c.json");
    let cert_s = cert.to_str().unwrap();
    kneser(&["certify", "Z8", "{0,1,4}", "{0,4,5}", "--out", cert_s]);
    let text = fs::read_to_string(&cert).unwrap();

    let bumped = text.replace("\"claimed_bound\": 5", "\"claimed_bound\": 6");
    assert_ne!(bumped, text);
    fs::write(&cert, bumped).unwrap();
    let o = kneser(&["verify", "Z8", "{0,1,4}", "{0,4,5}", "--cert", cert_s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("claimed bound"), "{}", stdout(&o));

    fs::write(&cert, "{ not json").unwrap();
    let o = kneser(&["verify", "Z8", "{0,1,4}", "{0,4,5}", "--cert", cert_s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject: "));
}

#[test]
fn file_input_is_read_in_pairs() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sets.txt");
    fs::write(&path, "# pairs\n{0,1}\n{0,1}\n\n{0,3}\n{0,3}\n").unwrap();
    let o = kneser(&["sumset", "Z6", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "{0,1,2}\n{0,3}\n");

    let o = kneser(&["check", "Z6", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).matches("equality").count(), 2);

    // odd number of literals
    fs::write(&path, "{0,1}\n").unwrap();
    let o = kneser(&["sumset", "Z6", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let o = kneser(&["sumset", "Z6", "{0,9}", "{0}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 4"), "{}", stderr(&o));

    assert_eq!(kneser(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kneser(&["check", "Q6", "{0}", "{0}"]).status.code(), Some(2));
    assert_eq!(kneser(&["exhaust", "Z64"]).status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    let o = kneser(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kneser-certificate v1"));
    assert_eq!(kneser(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweeps_emit_csv() {
    let o = kneser(&["exhaust", "Z4", "Z2xZ2", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("group,mode,seed,"));
    assert!(lines.next().unwrap().starts_with("Z4,exhaustive,"));
    assert!(text.contains("Z2xZ2,exhaustive,"));

    let a = stdout(&kneser(&["sample", "Z12", "--count", "200", "--seed", "9"]));
    let b = stdout(&kneser(&["sample", "Z12", "--count", "200", "--seed", "9", "--jobs", "3"]));
    assert_eq!(a, b);

    let o = kneser(&["cd-check", "5", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# OK Z7"));
}

#[test]
fn audit_prints_diagnostics() {
    let o = kneser(&["audit", "Z8", "{0,1,4,5}", "{0,1,4}", "{0,4,5}", "1", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("H: {0,4}"));
    assert!(text.contains("final: 4 vs 4"));
}
