use std::path::Path;
use std::process::{Command, Output};

use slstar::harness::verify_rendered;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slstar"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("spawn slstar")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn record<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("record.{key}=");
    text.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

fn without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("timestamp=")).collect::<Vec<_>>().join("\n")
}

#[test]
fn passing_experiment_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["experiment", "gl-criterion"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("gl-criterion.report")).unwrap();
    assert_eq!(text, stdout(&o));
    assert!(text.starts_with("format=slstar-report-1\n"));
    assert!(text.contains("\nverdict=pass\n"));
    assert!(verify_rendered(&text));
}

#[test]
fn refusal_experiments_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["counterexample-char-odd", "adelic-quat-char0-refusal"] {
        let o = run(dir.path(), &["experiment", name]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(stdout(&o).contains("\nverdict=refusal\n"), "{name}");
    }
}

#[test]
fn unknown_experiment_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["experiment", "bogus"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("star-local-euclid") && err.contains("dh-sl2f"), "{err}");
}

#[test]
fn malformed_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["ring", "selftest", "Mat(2,Z/(9"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["divide", "Z/(9)", "[[1]", "1"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic_up_to_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&run(dir.path(), &["--seed", "7", "experiment", "adelic-Q"]));
    let b = stdout(&run(dir.path(), &["--seed", "7", "experiment", "adelic-Q"]));
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
    assert!(verify_rendered(&a) && verify_rendered(&b));
    let tampered = a.replace("verdict=pass", "verdict=fail");
    assert!(!verify_rendered(&tampered));
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (desc, kind) in [("Z/(9)", "one-local"), ("Prod(Z/(4),Z/(4))", "two-local"), ("GF(4)", "one-local")] {
        let o = run(dir.path(), &["classify", desc]);
        assert_eq!(o.status.code(), Some(0), "{desc}");
        assert_eq!(record(&stdout(&o), "kind"), Some(kind), "{desc}");
    }
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    for desc in ["SplitQuat(GF(3))", "Mat(2,Z/(9))", "Prod(GF(2),GF(2))"] {
        let o = run(dir.path(), &["ring", "selftest", desc, "--samples", "300"]);
        assert_eq!(o.status.code(), Some(0), "{desc}: {}", stdout(&o));
        assert_eq!(record(&stdout(&o), "first_failure"), Some("none"));
    }
}

#[test]
fn divide_refuses_odd_quaternion_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["divide", "SplitQuat(GF(3))", "[[1,0],[1,0]]", "[[0,1],[0,1]]"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(record(&text, "certificate.symmetric_count"), Some("3"));
    assert_eq!(record(&text, "certificate.unit_remainders"), Some("0"));
}

#[test]
fn adelic_involute_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["adelic", "involute", "Q", "{2: [[1,2],[0,1]], tail: [[1,0],[0,1]]}"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
