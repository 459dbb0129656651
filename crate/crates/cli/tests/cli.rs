use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_protogame"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success() || code(out) == 1, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn list_shows_six_protocols_and_two_aliases() {
    let v = json(&run(&["list"]));
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 6);
    let aliases: usize = entries.iter().map(|e| e["aliases"].as_array().unwrap().len()).sum();
    assert_eq!(aliases, 2);
    let md = String::from_utf8(run(&["list", "--format", "md"]).stdout).unwrap();
    assert!(md.contains("| fair_exchange | contract_signing, certified_mail |"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["list", "extra"])), 2);
    assert_eq!(code(&run(&["analyze", "fair_exchange", "--samples", "0"])), 2);
    assert_eq!(code(&run(&["analyze", "fair_exchange", "--variant", "with-abort"])), 2);

    let unknown = run(&["analyze", "nosuch"]);
    assert_eq!(code(&unknown), 3);
    let err = String::from_utf8_lossy(&unknown.stderr);
    assert!(err.contains("fair_exchange") && err.contains("certified_mail"), "{err}");
    assert_eq!(code(&run(&["export", "diffie_hellman"])), 3);

    let parse = run(&["analyze", &data("broken.gamespec")]);
    assert_eq!(code(&parse), 4);
    assert!(String::from_utf8_lossy(&parse.stderr).contains(":8:11: undeclared parameter 'v'"));

    for args in [
        vec!["analyze", "fair_exchange", "--params", &data("violating.params")],
        vec!["analyze", "fair_exchange", "--params", &data("broken.gamespec")],
        vec!["analyze", "fair_exchange", "--params", "/nonexistent/p.params"],
        vec!["analyze", "s2pc", "--params", &data("fair_exchange.params")],
    ] {
        assert_eq!(code(&run(&args)), 5, "{args:?}");
    }
}

#[test]
fn explicit_params_fix_the_reported_instance() {
    let v = json(&run(&["analyze", "fair_exchange", "--samples", "20", "--params", &data("fair_exchange.params")]));
    let report = &v["report"];
    assert_eq!(report["config"]["explicit_params"], true);
    assert_eq!(report["instance"]["u_BA"], "5/2");
    let values: Vec<&str> = report["spectra"][0]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["-2", "0", "1", "3"]);
}

#[test]
fn export_is_stable_and_reanalyzes_identically() {
    let first = run(&["export", "certified_mail"]);
    let second = run(&["export", "fair_exchange"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fe.gamespec");
    let path = path.to_str().unwrap();
    assert!(run(&["export", "fair_exchange", "-o", path]).status.success());
    assert_eq!(std::fs::read(path).unwrap(), first.stdout);
    let again = run(&["export", path]);
    assert_eq!(again.stdout, first.stdout);

    let from_file = json(&run(&["verify", path, "--samples", "100"]));
    let from_catalog = json(&run(&["verify", "fair_exchange", "--samples", "100"]));
    assert_eq!(from_file["report"], from_catalog["report"]);
    assert_eq!(from_file["target"]["kind"], "file");
    assert_eq!(from_catalog["target"]["kind"], "catalog");
}

#[test]
fn reports_match_the_schema() {
    let validator = schema();
    let names = ["fair_exchange", "s2pc", "coin_flipping", "oblivious_transfer", "bit_commitment", "zero_knowledge"];
    for name in names {
        for cmd in ["analyze", "verify"] {
            let out = run(&[cmd, name, "--samples", "30", "--seed", "9"]);
            assert_eq!(code(&out), 0, "{cmd} {name}: {}", String::from_utf8_lossy(&out.stderr));
            let v = json(&out);
            let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
            assert!(errors.is_empty(), "{cmd} {name}: {errors:#?}");
        }
    }
}

#[test]
fn markdown_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ot.md");
    let out = run(&[
        "verify",
        "oblivious_transfer",
        "--samples",
        "40",
        "--format",
        "md",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&path).unwrap();
    assert!(md.starts_with("# verify `oblivious_transfer`"));
    assert!(md.contains("All verdicts match expectations: **yes**"));
    assert!(md.contains("order on all samples: `-u_A < 0 < (k - 1)*u_A < k*u_A`"), "{md}");
    assert!(md.contains("A plays abort"));
}

#[test]
fn variant_filter_limits_games_and_audits() {
    let v = json(&run(&["verify", "oblivious_transfer", "--samples", "30", "--variant", "with-abort"]));
    let games = v["report"]["games"].as_array().unwrap();
    assert_eq!(games.len(), 1);
    assert_eq!(games[0]["name"], "with_abort");
    assert_eq!(v["report"]["all_claims_match"], true);
    for a in v["report"]["audits"].as_array().unwrap() {
        assert!(a["game"].is_null() || a["game"] == "with_abort", "{a}");
    }
}

#[test]
fn readme_example_verifies() {
    let readme = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    let start = readme.find("protocol \"demo\"").expect("example in README");
    let end = start + readme[start..].find("```").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("demo.gamespec");
    std::fs::write(&path, &readme[start..end]).unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--samples", "100"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["report"]["all_claims_match"], true);
}
