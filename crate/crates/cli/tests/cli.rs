use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ordkit_cli::{emit, generate::generate, parse, run_suite, Kind, Params, UnknownSuite, Verdict};

fn ordkit(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordkit"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("ORDKIT_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    for kind in Kind::ALL {
        let a = ordkit(&["gen", kind.name(), "--n", "4", "--seed", "42"], None);
        let b = ordkit(&["gen", kind.name(), "--n", "4", "--seed", "42"], None);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        assert_eq!(emit(&parse(&text).unwrap()), text);
        assert_eq!(parse(&text).unwrap(), generate(kind, 4, 42));
    }
}

#[test]
fn verify_streams_are_byte_identical_across_thread_counts() {
    let args = ["verify", "gjh", "--n", "5", "--count", "40", "--seed", "1"];
    let one = ordkit(&args, Some("1"));
    let four = ordkit(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, ordkit(&args, None).stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert_eq!(text.lines().count(), 390 + 40);
    assert!(text.lines().all(|l| l.contains(r#""verdict":"pass""#)));
}

#[test]
fn out_flag_writes_the_stream() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let status = ordkit(&["verify", "macneille", "--count", "5", "--out", out.to_str().unwrap()], None).status;
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["suite"], "macneille");
    assert_eq!(first["instance"], 0);
    assert_eq!(first["tier"], "exhaustive");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ordkit(&["verify", "bogus"], None).status.code(), Some(2));
    assert_eq!(ordkit(&["no-such-command"], None).status.code(), Some(2));
    let bad = write(dir.path(), "bad.txt", "lattice 3\n");
    let out = ordkit(&["scott", &bad], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PARSE_ERROR at line 1, column 1"));
    let chain = write(dir.path(), "c.txt", "poset 3\n0 1\n1 2\n");
    assert_eq!(ordkit(&["normality", &chain, "--a", "{2}", "--b", "{0}"], None).status.code(), Some(2));
    assert_eq!(ordkit(&["verify", "a4", "--count", "3"], None).status.code(), Some(0));
}

#[test]
fn unknown_suite_is_an_error() {
    assert_eq!(run_suite("bogus", &Params::default()).unwrap_err(), UnknownSuite("bogus".into()));
}

#[test]
fn analysis_commands_on_a_chain() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write(dir.path(), "c.txt", "preorder 3\n0 1\n1 2\n");
    let text = |args: &[&str]| String::from_utf8(ordkit(args, None).stdout).unwrap();
    assert_eq!(text(&["scott", &chain]), "topology 3\n{}\n{2}\n{1,2}\n{0,1,2}\n");
    assert_eq!(text(&["lower", &chain]), "topology 3\n{}\n{0}\n{0,1}\n{0,1,2}\n");
    assert_eq!(text(&["represent", &chain]), "family 3\n0 1/2 1\n");
    assert_eq!(text(&["check-closed", &chain]), "{\"closed\":true}\n");
    assert_eq!(text(&["normality", &chain, "--a", "{0}", "--b", "{2}"]), "{\"o1\":\"{0}\",\"o2\":\"{2}\"}\n");
    assert_eq!(
        text(&["urysohn", &chain, "--a", "{0}", "--b", "{2}"]),
        "{\"f\":[\"0\",\"1/2\",\"1\"],\"rounds\":1,\"stabilized\":true}\n"
    );
    let complete = text(&["complete", &chain]);
    assert!(complete.contains("# continuous: true"));
    assert!(complete.ends_with("poset 3 completion\n0 1\n0 2\n1 2\n"));
    let pre = text(&["precontinuous", &chain, "--frink-empty", "forbid"]);
    assert_eq!(pre, "{\"frink_empty\":\"forbid\",\"precontinuous\":true}\n{\"fast\":true}\n");

    let fam = write(dir.path(), "f.txt", "family 2\n0 1\n1 0\n");
    assert_eq!(text(&["interpolate", &fam, "--phi", "1 1"]), "{\"found\":[\"1\",\"1\"]}\n");
    assert_eq!(text(&["interpolate", &fam, "--phi", "1/2 1"]), "{\"found\":null,\"no_match\":[0,0]}\n");

    let open = write(dir.path(), "o.txt", "bitop 2\nt1 {0}\nt2 {1}\n0 1\n");
    assert_eq!(text(&["check-closed", &open]), "{\"a\":1,\"b\":0,\"closed\":false}\n");
}

#[test]
fn qpm_instances_feed_the_space_commands() {
    let dir = tempfile::tempdir().unwrap();
    let qpm = write(dir.path(), "q.txt", "qpm 2\n0 0\n1 0\n");
    let out = ordkit(&["check-closed", &qpm], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"closed\":true}\n");
}

#[test]
fn library_streams_match_for_the_same_seed() {
    let params = Params { count: 30, seed: 9, ..Params::default() };
    let a = run_suite("a3", &params).unwrap();
    let b = run_suite("a3", &params).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().enumerate().all(|(i, r)| r.instance == i && r.verdict != Verdict::Violation));
}
