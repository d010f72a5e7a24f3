use std::path::{Path, PathBuf};
use std::process::Command as Process;

use normnet::cli::{run, Command, OutputFormat, RunConfig, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};
use normnet::MergeMode;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn config(path: impl Into<PathBuf>, command: Command) -> RunConfig {
    RunConfig::new(path, command)
}

fn structured(mut c: RunConfig) -> RunConfig {
    c.format = OutputFormat::Structured;
    c
}

fn all_commands() -> Vec<Command> {
    vec![
        Command::Parse,
        Command::Compile,
        Command::Graph,
        Command::Dominance { first: "".into(), second: "".into() },
        Command::Consistent,
        Command::Permission { query: "x".into() },
        Command::Ctd,
        Command::Check,
        Command::Optima,
    ]
}

#[test]
fn compile_cattown_describes_the_net() {
    let out = run(&config(data("cattown.norms"), Command::Compile));
    assert_eq!(out.status, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("edges: d -> f, f -> w"));
    assert!(out.stdout.contains("  TRUE: not d > d"));
    assert!(out.stdout.contains("  not f: w ~ not w"));
    assert!(out.stdout.contains("b: no preferences"));
}

#[test]
fn ctd_framework_is_consistent() {
    let out = run(&config(data("ctd.norms"), Command::Consistent));
    assert_eq!(out.status, EXIT_OK);
    assert_eq!(out.stdout, "consistent\n");
}

#[test]
fn cyclic_norms_are_inconsistent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.norms");
    std::fs::write(&path, "O(b IF a)\nO(not a IF b)\nO(not b IF not a)\nO(a IF not b)\n").unwrap();
    let out = run(&config(&path, Command::Consistent));
    assert_eq!(out.status, EXIT_FAILURE);
    assert!(out.stdout.starts_with("inconsistent\n"));
    let out = run(&structured(config(&path, Command::Consistent)));
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["result"]["consistent"], false);
    assert_eq!(doc["result"]["witness_cycle"].as_array().unwrap().len(), 4);
}

#[test]
fn dominance_with_equal_outcomes() {
    let c = config(data("ctd.norms"), Command::Dominance { first: "phi, psi".into(), second: "psi, phi".into() });
    let out = run(&c);
    assert_eq!((out.status, out.stdout.as_str()), (EXIT_OK, "equal\n"));
}

#[test]
fn dominance_reports_a_witness() {
    let c = config(
        data("ctd.norms"),
        Command::Dominance { first: "phi, not psi".into(), second: "not phi, not psi".into() },
    );
    let out = run(&structured(c));
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["schema"], "normnet.v1");
    assert_eq!(doc["result"]["verdict"], "dominates");
    let witness: Vec<&str> = doc["result"]["witness"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(witness.first(), Some(&"phi, not psi"));
    assert_eq!(witness.last(), Some(&"not phi, not psi"));
}

#[test]
fn bad_outcomes_are_input_errors() {
    for (first, second) in [("phi", "phi, psi"), ("phi, psi, chi", "phi, psi"), ("phi, not phi", "phi, psi")] {
        let c = config(data("ctd.norms"), Command::Dominance { first: first.into(), second: second.into() });
        let out = run(&c);
        assert_eq!(out.status, EXIT_INPUT, "{first}: {}", out.stdout);
        assert!(out.stderr.starts_with("error: "));
    }
}

#[test]
fn permission_queries() {
    let cases = [
        ("c", "strongly permitted (bilateral)\n"),
        ("b", "weakly permitted\n"),
        ("d", "forbidden\n"),
        ("not d", "obligatory\n"),
        ("f IF d", "obligatory\n"),
        ("f IF not d", "forbidden\n"),
    ];
    for (query, want) in cases {
        let out = run(&config(data("cattown.norms"), Command::Permission { query: query.into() }));
        assert_eq!((out.status, out.stdout.as_str()), (EXIT_OK, want), "{query}");
    }
    let out = run(&config(data("cattown.norms"), Command::Permission { query: "w".into() }));
    assert!(out.stdout.starts_with("depends on context\n"), "{}", out.stdout);
    let out = run(&config(data("cattown.norms"), Command::Permission { query: "f IF c".into() }));
    assert_eq!(out.status, EXIT_INPUT);
}

#[test]
fn ctd_pairs_are_listed() {
    let out = run(&config(data("cattown.norms"), Command::Ctd));
    assert_eq!(
        out.stdout,
        "#0 O(not d) -> #3 O(f IF d) (violation: d)\n#2 O(not f IF not d) -> #4 O(w IF f) (violation: f)\n"
    );
}

#[test]
fn check_passes_on_cattown_and_fails_on_a_cycle() {
    let out = run(&config(data("cattown.norms"), Command::Check));
    assert_eq!(out.status, EXIT_OK);
    assert!(out.stdout.ends_with("all norms satisfied\n"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.norms");
    std::fs::write(&path, "L(a)\nO(b IF a)\nO(not b IF not a)\n").unwrap();
    let out = run(&config(&path, Command::Check));
    assert_eq!(out.status, EXIT_FAILURE);
    assert!(out.stdout.contains("VIOLATED"));
}

#[test]
fn conflicting_norms_exit_with_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clash.norms");
    std::fs::write(&path, "O(f IF d)\nL(f)\n").unwrap();
    let out = run(&config(&path, Command::Compile));
    assert_eq!(out.status, EXIT_FAILURE);
    assert!(out.stderr.contains("strict order versus indifference"), "{}", out.stderr);
    let out = run(&structured(config(&path, Command::Graph)));
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], "conflict");
    assert_eq!(doc["error"]["conflicts"][0]["variable"], "f");
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.norms");
    std::fs::write(&path, "O(a)\n  O(b or c)\n").unwrap();
    let out = run(&structured(config(&path, Command::Parse)));
    assert_eq!(out.status, EXIT_INPUT);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], "parse");
    assert_eq!(doc["error"]["line"], 2);
    assert!(out.stderr.contains("line 2"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&config("/nonexistent/file.norms", Command::Parse));
    assert_eq!(out.status, EXIT_INPUT);
}

#[test]
fn cap_limits_exhaustive_commands() {
    for command in [Command::Graph, Command::Consistent, Command::Check, Command::Optima] {
        let mut c = config(data("cattown.norms"), command.clone());
        c.cap = 4;
        let out = run(&c);
        assert_eq!(out.status, EXIT_INPUT, "{command:?}");
        assert!(out.stderr.contains("cap"), "{}", out.stderr);
    }
}

#[test]
fn dot_output() {
    let mut c = config(data("cattown.norms"), Command::Graph);
    c.format = OutputFormat::Dot;
    let out = run(&c);
    assert_eq!(out.status, EXIT_OK);
    assert_eq!(out.stdout.matches(" [label=").count(), 16);
    c.merge = MergeMode::Raw;
    assert_eq!(run(&c).stdout.matches(" [label=").count(), 32);

    let mut c = config(data("ctd.norms"), Command::Graph);
    c.format = OutputFormat::Dot;
    let out = run(&c).stdout;
    assert_eq!(out.matches(" [label=").count(), 4);
    assert_eq!(out.matches(" -> ").count(), 4);

    let mut c = config(data("ctd.norms"), Command::Compile);
    c.format = OutputFormat::Dot;
    assert!(run(&c).stdout.starts_with("digraph cpnet {"));
}

#[test]
fn structured_output_is_stable() {
    for command in all_commands() {
        let command = match command {
            Command::Dominance { .. } => {
                Command::Dominance { first: "c, d, f, w, b".into(), second: "not c, not d, not f, w, b".into() }
            }
            Command::Permission { .. } => Command::Permission { query: "f IF d".into() },
            other => other,
        };
        let c = structured(config(data("cattown.norms"), command.clone()));
        let first = run(&c);
        let second = run(&c);
        assert_eq!(first, second, "{command:?}");
        let doc: serde_json::Value = serde_json::from_str(&first.stdout).unwrap();
        assert_eq!(doc["schema"], "normnet.v1");
        assert_eq!(doc["command"], command.name());
        assert!(doc.get("result").is_some(), "{command:?}: {}", first.stdout);
    }
}

#[test]
fn every_command_handles_an_empty_norm_set() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.norms");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    for command in all_commands() {
        for format in [OutputFormat::Text, OutputFormat::Structured] {
            let mut c = config(&empty, command.clone());
            c.format = format;
            let out = run(&c);
            // `x` is not an atom of the empty set; everything else succeeds.
            let want = match command {
                Command::Permission { .. } => EXIT_INPUT,
                _ => EXIT_OK,
            };
            assert_eq!(out.status, want, "{command:?} {format:?}: {}", out.stderr);
        }
    }
    let out = run(&config(&empty, Command::Optima));
    assert_eq!(out.stdout, "\n", "the single empty outcome is optimal");
}

#[test]
fn binary_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_normnet");
    let out = Process::new(bin).args(["consistent"]).arg(data("ctd.norms")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "consistent\n");

    let out = Process::new(bin)
        .args(["--format", "structured", "graph"])
        .arg(data("cattown.norms"))
        .env("NORMNET_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Process::new(bin)
        .args(["--cap", "5", "--raw", "--format", "dot", "graph"])
        .arg(data("cattown.norms"))
        .env("NORMNET_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).matches(" [label=").count(), 32);

    let out = Process::new(bin).args(["dominance"]).arg(data("ctd.norms")).args(["phi, psi", "phi, not psi"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("dominated"));
}
