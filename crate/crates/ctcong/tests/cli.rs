//! End-to-end checks of the command-line binary: argument handling, text and
//! JSON output shapes, and the exit-code contract.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctcong"))
        .args(args)
        .output()
        .expect("the binary should launch")
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ctcong"));
    cmd.args(args);
    for &(k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("the binary should launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("the binary should not be killed by a signal")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout should be valid JSON")
}

fn json_stderr(out: &Output) -> Value {
    serde_json::from_str(&stderr(out)).expect("stderr should be valid JSON")
}

#[test]
fn sum_prints_symmetric_residues() {
    let out = run(&["sum", "--seq", "catalan", "--r", "1", "--p", "5"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), "-2");

    let out = run(&["sum", "--seq", "central_binomial", "--r", "2", "--p", "7"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), "3");
}

#[test]
fn sum_accepts_custom_polynomials() {
    let out = run(&[
        "sum", "--poly", "2+x+1/x", "--mult", "1-x", "--r", "1", "--p", "5",
    ]);
    assert_eq!(exit_code(&out), 0);
    // (2 + x + 1/x)^n (1 - x) has constant term C(2n,n) - C(2n,n-1): the
    // custom polynomial is the Catalan sequence in disguise.
    assert_eq!(stdout(&out).trim(), "-2");

    let named = run(&["sum", "--seq", "catalan", "--r", "1", "--p", "5"]);
    assert_eq!(stdout(&named).trim(), stdout(&out).trim());
}

#[test]
fn sum_reports_prime_power_residues_on_request() {
    let base = run(&["sum", "--seq", "motzkin", "--r", "2", "--p", "5"]);
    let lifted = run(&[
        "sum", "--seq", "motzkin", "--r", "2", "--p", "5", "--power", "2",
    ]);
    assert_eq!(exit_code(&base), 0);
    assert_eq!(exit_code(&lifted), 0);
    let b: i64 = stdout(&base).trim().parse().expect("an integer");
    let l: i64 = stdout(&lifted).trim().parse().expect("an integer");
    // The power-2 residue must reduce to the power-1 residue modulo 5.
    assert_eq!((l - b).rem_euclid(5), 0);
    assert_eq!(l, -1);
}

#[test]
fn malformed_polynomials_exit_with_code_two() {
    let out = run(&["sum", "--poly", "1/(1+x)", "--r", "1", "--p", "5"]);
    assert_eq!(exit_code(&out), 2);
    let diag = json_stderr(&out);
    assert_eq!(diag["error"]["kind"], "parse_error");
    assert_eq!(diag["error"]["code"], 2);
    assert!(
        diag["error"]["message"]
            .as_str()
            .unwrap()
            .contains("not a single-term monomial"),
        "the diagnostic should name the offending construct"
    );

    let out = run(&["sum", "--poly", "2+", "--r", "1", "--p", "5"]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(json_stderr(&out)["error"]["kind"], "parse_error");
}

#[test]
fn missing_and_conflicting_inputs_exit_with_code_two() {
    let out = run(&["sum", "--r", "1", "--p", "5"]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(json_stderr(&out)["error"]["kind"], "invalid_input");

    let out = run(&[
        "sum", "--seq", "catalan", "--poly", "1+x", "--r", "1", "--p", "5",
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = run(&["sum", "--seq", "no_such_sequence", "--r", "1", "--p", "5"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("no_such_sequence"));
}

#[test]
fn bad_primes_exit_with_code_four() {
    let out = run(&["sum", "--seq", "catalan", "--r", "1", "--p", "4"]);
    assert_eq!(exit_code(&out), 4);
    assert_eq!(json_stderr(&out)["error"]["kind"], "not_prime");

    let out = run(&["sum", "--seq", "central_binomial", "--r", "1", "--p", "3"]);
    assert_eq!(exit_code(&out), 4);
    assert_eq!(json_stderr(&out)["error"]["kind"], "prime_too_small");
}

#[test]
fn verify_passes_cleanly_at_the_prime_level() {
    let out = run(&["verify", "--seq", "motzkin", "--pmax", "50", "--rmax", "3"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("summary: 42 passed, 0 failed"), "got: {text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_flags_failed_lifts_and_sets_the_exit_code() {
    let out = run(&["verify", "--seq", "motzkin", "--pmax", "50", "--super", "2"]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout(&out);
    // The square-level residue diverges from the mod-p value at every prime
    // in the window; the first offender is p = 5.
    assert!(
        text.contains("motzkin r=1 p=5 k=2: engine - oracle -8 predicted 2 … FAIL"),
        "got: {text}"
    );
    assert!(text.contains("0 failed") == false);
}

#[test]
fn verify_json_carries_the_full_row_schema_in_sorted_order() {
    let out = run(&[
        "verify",
        "--seq",
        "binomial_squared",
        "--rmax",
        "2",
        "--pmax",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report = json_stdout(&out);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(
        report["command"],
        "verify --seq binomial_squared --rmax 2 --super 1 --pmax 10"
    );
    let rows = report["results"].as_array().expect("a result array");
    // Four index tuples × two primes (5, 7).
    assert_eq!(rows.len(), 8);
    let mut keys = Vec::new();
    for row in rows {
        for field in ["spec", "r", "p", "k", "engine", "oracle", "predicted", "pass"] {
            assert!(row.get(field).is_some(), "row lacks {field}: {row}");
        }
        assert_eq!(row["spec"], "binomial_squared");
        assert_eq!(row["k"], 1);
        assert_eq!(row["pass"], true);
        assert_eq!(row["engine"], row["oracle"]);
        assert_eq!(row["predicted"], row["oracle"]);
        let r: Vec<u64> = row["r"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        keys.push((r, row["p"].as_u64().unwrap()));
    }
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "rows must be sorted by (r, p)");
    assert_eq!(report["summary"]["pass"], 8);
    assert_eq!(report["summary"]["fail"], 0);
}

#[test]
fn verify_reports_patternless_sequences_without_predictions() {
    let out = run(&[
        "verify",
        "--seq",
        "central_trinomial",
        "--pmax",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report = json_stdout(&out);
    let rows = report["results"].as_array().expect("a result array");
    assert!(!rows.is_empty());
    for row in rows {
        assert!(row["predicted"].is_null());
        assert_eq!(row["k"], 1);
        assert_eq!(row["pass"], true);
    }
}

#[test]
fn discover_reports_the_central_binomial_pattern() {
    let out = run(&[
        "discover",
        "--seq",
        "central_binomial",
        "--r",
        "1",
        "--pmax",
        "100",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report = json_stdout(&out);
    let claim = &report["results"][0]["claim"];
    assert_eq!(claim["modulus_class"], 3);
    assert_eq!(claim["cases"]["1"]["constant"], 1);
    assert_eq!(claim["cases"]["2"]["constant"], -1);
    assert_eq!(claim["super_level"], 2);
    // Level 2 but not 3: a concrete witness against the cube lift.
    let cx = claim["counterexamples"].as_array().expect("witnesses");
    assert!(cx.iter().any(|c| c["level"] == 3));
    assert!(cx.iter().all(|c| c["level"] != 2));
}

#[test]
fn discover_treats_custom_polynomials_like_their_named_twin() {
    let custom = run(&[
        "discover", "--poly", "1+x+1/x", "--mult", "1-x^2", "--r", "1", "--pmax",
        "100", "--format", "json",
    ]);
    assert_eq!(exit_code(&custom), 0);
    let named = run(&[
        "discover", "--seq", "motzkin", "--r", "1", "--pmax", "100", "--format",
        "json",
    ]);
    assert_eq!(exit_code(&named), 0);
    let c = json_stdout(&custom)["results"][0]["claim"].clone();
    let n = json_stdout(&named)["results"][0]["claim"].clone();
    assert_eq!(c["spec_id"], "custom");
    assert_eq!(n["spec_id"], "motzkin");
    for field in ["modulus_class", "cases", "super_level", "evidence"] {
        assert_eq!(c[field], n[field], "field {field} should coincide");
    }
}

#[test]
fn discover_annotates_family_claims_with_catalogue_ids() {
    let out = run(&[
        "discover",
        "--seq",
        "central_binomial",
        "--r",
        "5",
        "--pmax",
        "100",
        "--oeis",
        "offline",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let record = &json_stdout(&out)["results"][0];
    let annotations = record["oeis"].as_array().expect("annotations");
    assert_eq!(annotations.len(), 2);
    for ann in annotations {
        assert_eq!(ann["family"], "alpha(5)");
        assert_eq!(ann["ids"].as_array().unwrap(), &[Value::from("A006134")]);
        assert_eq!(ann["source"], "fixture");
        assert_eq!(ann["terms"][9], "66197");
    }

    let text = run(&[
        "discover", "--seq", "central_binomial", "--r", "5", "--pmax", "100",
        "--oeis", "offline",
    ]);
    let rendered = stdout(&text);
    assert!(rendered.contains("A006134"), "got: {rendered}");
    assert!(rendered.contains("(Fixture)"), "got: {rendered}");
}

#[test]
fn discover_reports_a_level_one_claim_for_four_indices() {
    let out = run(&[
        "discover", "--seq", "multinomial4", "--r", "1,1,1,1", "--pmax", "20",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("super_level 1"), "got: {text}");
}

#[test]
fn selftest_takes_no_flags() {
    let out = run(&["selftest", "--format", "json"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unexpected argument"));
}

#[test]
fn thread_cap_is_accepted() {
    let out = run_with_env(
        &["verify", "--seq", "catalan", "--pmax", "20"],
        &[("CTCONG_THREADS", "1")],
    );
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn help_names_every_subcommand() {
    let out = run(&["--help"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    for sub in ["sum", "verify", "discover", "selftest"] {
        assert!(text.contains(sub), "help should mention {sub}");
    }
}
