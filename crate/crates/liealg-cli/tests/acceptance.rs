//! Acceptance gate for the command-line binary: determinism of the
//! self-test output, plus the documented exit-code contract.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liealg"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_10_selftest_output_is_byte_identical_across_runs() {
    let first = run(&["selftest", "--seed", "0"]);
    let second = run(&["selftest", "--seed", "0"]);
    let mut failures = Vec::new();
    if !first.status.success() {
        failures.push(format!(
            "first run exited with {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout != second.stdout {
        failures.push("the two runs produced different bytes on stdout".to_string());
    }
    if first.stdout.is_empty() {
        failures.push("self-test produced no output".to_string());
    }
    if failures.is_empty() {
        println!("criterion 10: PASS - two `selftest --seed 0` runs emit byte-identical JSON");
    } else {
        println!("criterion 10: FAIL - two `selftest --seed 0` runs emit byte-identical JSON");
        panic!("criterion 10 failed:\n{}", failures.join("\n"));
    }
}

#[test]
fn exit_codes_follow_the_documented_contract() {
    // 0: successful computation.
    assert_eq!(run(&["orbits", "--type", "A2"]).status.code(), Some(0));
    // 2: usage errors (unknown type label, unsupported family, bad flags).
    assert_eq!(run(&["orbits", "--type", "Q9"]).status.code(), Some(2));
    assert_eq!(
        run(&["springer-check", "--family", "SL", "--n", "3", "--p", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["orbits"]).status.code(), Some(2));
    // 3: rejected primes, validated before any computation.
    let bad = run(&["orbits", "--type", "G2", "--prime", "2"]);
    assert_eq!(bad.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("2 is bad"), "stderr was: {stderr}");
    assert_eq!(run(&["orbits", "--type", "A3", "--prime", "9"]).status.code(), Some(3));
    assert_eq!(
        run(&["verify", "--type", "B2", "--prime", "2"]).status.code(),
        Some(3)
    );
}

#[test]
fn triple_and_verify_emit_well_formed_json() {
    let out = run(&["triple", "--type", "G2", "--levi", "all", "--parabolic", "empty", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["ambient_type"], "G2");
    assert_eq!(v["verified"]["exact"], true);
    assert_eq!(v["verified"]["mod"]["7"], true);
    assert_eq!(v["triple"]["denominator_primes"], serde_json::json!([]));

    let out = run(&["verify", "--type", "A2", "--levi", "all", "--parabolic", "empty", "--prime", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["reports"][0]["all_passed"], true);
    assert_eq!(v["reports"][0]["sign_c"], -1);
    assert!(v["reports"][0]["identities"]["weyl_element"]["fail"] == 0);
}
