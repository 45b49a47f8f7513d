use std::path::PathBuf;
use std::process::{Command, Output};

use reach_core::cegar::{Statistics, Verdict};
use reach_core::diagnostics::DiagnosticsReport;

fn nets() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/nets")
}

fn net(name: &str) -> String {
    nets().join(name).to_string_lossy().into_owned()
}

fn reach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reach"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("reach-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn flawed_process_witness() {
    let o = reach(&["solve", &net("net_c.net"), "--final", "o:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d\nx1\n");
}

#[test]
fn flawed_process_with_requirement_is_unreachable() {
    let o = reach(&["solve", &net("net_c.net"), "--final", "o:1", "--require", "x2:1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("blocked places: c1 c2"), "{text}");
}

#[test]
fn borrowing_net_witness_has_four_lines() {
    let o = reach(&["solve", &net("net_a.net"), "--final", "s3:1", "--require", "t:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn inconclusive_exit_code() {
    let o = reach(&[
        "solve",
        &net("net_c.net"),
        "--final",
        "o:1",
        "--require",
        "x2:1",
        "--max-steps",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("inconclusive: step limit reached"));
}

#[test]
fn check_witness_cases() {
    let good = temp_file("good.txt", "u\nt\nt'\nu'\n");
    let o = reach(&["check-witness", &net("net_a.net"), "--final", "s3:1", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let bad = temp_file("bad.txt", "t\nt'\n");
    let o = reach(&["check-witness", &net("net_a.net"), "--final", "s3:1", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("disabled at position 1: t"));

    let empty = temp_file("empty.txt", "");
    let o = reach(&["check-witness", &net("net_a.net"), "--final", "s3:1", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let unknown = temp_file("unknown.txt", "v\n");
    let o = reach(&["check-witness", &net("net_a.net"), "--final", "s3:1", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let short = temp_file("short.txt", "u\n");
    let o = reach(&[
        "check-witness",
        &net("net_a.net"),
        "--final",
        "s2:1",
        "--require",
        "t:1",
        short.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_3() {
    for args in [
        vec!["solve", "/nonexistent.net", "--final", "o:1"],
        vec!["solve"],
        vec!["solve", "NET"],
        vec!["bogus"],
    ] {
        let args: Vec<String> = args
            .into_iter()
            .map(|a| if a == "NET" { net("net_c.net") } else { a.to_string() })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = reach(&refs);
        assert_eq!(o.status.code(), Some(3), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let bad_net = temp_file("bad.net", "PLACE p\nTRANSITION t;");
    let o = reach(&["solve", bad_net.to_str().unwrap(), "--final", "p:1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = reach(&["solve", &net("net_c.net"), "--final", "nowhere:1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = reach(&["solve", &net("net_c.net"), "--final", "o:x"]);
    assert_eq!(o.status.code(), Some(3));
    let problem = temp_file("p.toml", "[final]\no = 1\n");
    let o = reach(&[
        "solve",
        &net("net_c.net"),
        "--problem",
        problem.to_str().unwrap(),
        "--final",
        "o:1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = reach(&["solve", &net("net_c.net"), "--final", "o:1", "--workers", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn problem_file() {
    let problem = temp_file(
        "flaw.toml",
        "mode = \"reach\"\n[final]\no = 1\n[[require]]\ntransition = \"x2\"\nmin = 1\n",
    );
    let o = reach(&["solve", &net("net_c.net"), "--problem", problem.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn structured_output_round_trips() {
    for args in [
        vec!["solve", "net_c.net", "--final", "o:1", "--format", "structured", "--seed", "7"],
        vec!["solve", "net_c.net", "--final", "o:1", "--require", "x2:1", "--format", "structured"],
        vec!["oracle", "net_c.net", "--final", "o:1", "--format", "structured"],
    ] {
        let args: Vec<String> = args
            .into_iter()
            .map(|a| if a.ends_with(".net") { net(a) } else { a.to_string() })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = reach(&refs);
        let text = stdout(&o);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["verdict", "witness", "stats"] {
            assert!(value.get(key).is_some(), "{key} missing");
        }
        let verdict: Verdict = serde_json::from_value(value["verdict"].clone()).unwrap();
        assert_eq!(serde_json::to_value(verdict).unwrap(), value["verdict"]);
        if args[0] == "solve" {
            let stats: Statistics = serde_json::from_value(value["stats"].clone()).unwrap();
            assert_eq!(serde_json::to_value(&stats).unwrap(), value["stats"]);
            let diagnostics: Option<DiagnosticsReport> =
                serde_json::from_value(value["diagnostics"].clone()).unwrap();
            assert_eq!(serde_json::to_value(&diagnostics).unwrap(), value["diagnostics"]);
        }
    }
    let o = reach(&["solve", &net("net_c.net"), "--final", "o:1", "--format", "structured", "--seed", "7"]);
    let value: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(value["seed"], 7);
    assert_eq!(value["verdict"], "reachable");
}

#[test]
fn oracle_subcommand() {
    let o = reach(&["oracle", &net("net_c.net"), "--final", "o:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d\nx1\n");
    let o = reach(&["oracle", &net("net_a.net"), "--final", "s1:1", "--final", "s3:1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = reach(&["oracle", &net("net_c.net"), "--final", "o:1", "--require", "x2:1", "--max-states", "500"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cover_and_graph_export() {
    let o = reach(&["solve", &net("net_c.net"), "--final", "a2:2", "--cover"]);
    assert_eq!(o.status.code(), Some(0));
    let graph = std::env::temp_dir().join(format!("reach-graph-{}.txt", std::process::id()));
    let o = reach(&[
        "solve",
        &net("net_c.net"),
        "--final",
        "o:1",
        "--require",
        "x2:1",
        "--graph",
        graph.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = std::fs::read_to_string(&graph).unwrap();
    assert!(text.contains("node c1 place region=blocked"));
    assert!(text.contains("node x2 transition region=affected"));
}

#[test]
fn solve_then_check_is_sound() {
    let dir = std::env::temp_dir().join(format!("reach-e2e-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (file, flags) in [
        ("net_a.net", vec!["--final", "s3:1", "--require", "t:1"]),
        ("net_b.net", vec!["--final", "s1:1", "--final", "s4:1", "--require", "t:1", "--require", "u:1"]),
        ("net_c.net", vec!["--final", "o:1"]),
    ] {
        let mut args = vec!["solve".to_string(), net(file)];
        args.extend(flags.iter().map(|s| s.to_string()));
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = reach(&refs);
        assert_eq!(o.status.code(), Some(0));
        let witness = dir.join(format!("{file}.witness"));
        std::fs::write(&witness, &o.stdout).unwrap();
        let mut check = vec!["check-witness".to_string(), net(file)];
        check.extend(flags.iter().map(|s| s.to_string()));
        check.push(witness.to_string_lossy().into_owned());
        let refs: Vec<&str> = check.iter().map(String::as_str).collect();
        assert_eq!(reach(&refs).status.code(), Some(0), "{file}");
    }
}
