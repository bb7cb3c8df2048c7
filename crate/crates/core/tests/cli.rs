//! Command-line behaviour and golden replays.
//!
//! Each `tests/golden/NAME.args` holds one argument per line; the matching
//! `NAME.out` starts with `exit: CODE` followed by the exact output. Set
//! `UPDATE_GOLDEN=1` to rewrite the `.out` files.

use std::fs;
use std::path::Path;

use oclam::cli::run;
use serde_json::Value;

fn oclam(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["oclam"];
    argv.extend_from_slice(args);
    run(argv)
}

fn golden_dir() -> &'static Path {
    Path::new("tests/golden")
}

#[test]
fn golden_files_replay() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut cases: Vec<_> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "args"))
        .collect();
    cases.sort();
    assert!(cases.len() >= 20, "golden corpus went missing");
    let mut mismatches = Vec::new();
    for case in &cases {
        let args_text = fs::read_to_string(case).unwrap();
        let args: Vec<&str> = args_text.lines().collect();
        let (code, out) = oclam(&args);
        let got = format!("exit: {code}\n{out}");
        let expected_path = case.with_extension("out");
        if update {
            fs::write(&expected_path, &got).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&expected_path)
            .unwrap_or_else(|_| panic!("{} has no .out file", case.display()));
        if got != expected {
            mismatches.push(format!(
                "{}\n--- expected\n{expected}\n--- got\n{got}",
                case.display()
            ));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn hadamard_file_checks() {
    let (code, out) = oclam(&[
        "check",
        "tests/golden/h.term",
        "--type",
        "(I&I) -o (I&I)",
        "--semiring",
        "crat",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn hadamard_columns() {
    let col = |i: &str| {
        let (code, out) = oclam(&[
            "--json",
            "eval",
            "tests/golden/h.term",
            "--semiring",
            "crat",
            "--at",
            i,
        ]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        v["result"]["coefficients"].clone()
    };
    assert_eq!(col("0"), serde_json::json!(["(1, 0)", "(1, 0)"]));
    assert_eq!(col("1"), serde_json::json!(["(1, 0)", "(-1, 0)"]));
    let (code, out) = oclam(&["eval", "tests/golden/h.term", "--semiring", "crat", "--at", "2"]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn extracted_hadamard_matrix() {
    let (code, out) = oclam(&[
        "--json",
        "matrix",
        "extract",
        "tests/golden/h.term",
        "--domain",
        "I&I",
        "--codomain",
        "I&I",
        "--semiring",
        "crat",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["result"]["entries"],
        serde_json::json!([["(1, 0)", "(1, 0)"], ["(1, 0)", "(-1, 0)"]])
    );
}

#[test]
fn parse_errors_have_a_location() {
    let (code, out) = oclam(&["--json", "normalize", "tests/golden/bad.term"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let d = &v["diagnostics"][0];
    assert_eq!(d["code"], "parse");
    assert_eq!(d["line"], 2);
    assert_eq!(d["col"], 1);
}

#[test]
fn fuzz_sr_hundred_passes() {
    let (code, out) = oclam(&["fuzz", "--props", "sr", "--n", "100", "--seed", "7"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reports"][0]["prop"], "sr");
    assert_eq!(v["reports"][0]["passes"], 100);
    assert_eq!(v["reports"][0]["failures"], serde_json::json!([]));
}

#[test]
fn json_output_is_reproducible() {
    let args = [
        "--json",
        "fuzz",
        "--props",
        "confluence,intro",
        "--n",
        "20",
        "--seed",
        "11",
    ];
    let a = oclam(&args);
    let b = oclam(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    for key in ["command", "inputs", "result", "diagnostics", "timings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(oclam(&["check", "tests/golden/reuse.term"]).0, 2);
    assert_eq!(
        oclam(&["equiv", "tests/golden/p12.term", "tests/golden/p13.term"]).0,
        2
    );
    assert_eq!(oclam(&["normalize", "tests/golden/loop.term", "--fuel", "50"]).0, 3);
    assert_eq!(oclam(&["fuzz", "--props", "nonsense"]).0, 1);
    assert_eq!(oclam(&["check", "tests/golden/h.term", "--semiring", "reals"]).0, 1);
    assert_eq!(oclam(&["eval", "tests/golden/p12.term", "--type", "I &"]).0, 1);
}

#[test]
fn counterexample_pair_is_equivalent_at_depth_one() {
    let (code, out) = oclam(&[
        "--json",
        "equiv",
        "tests/golden/sum_inside.term",
        "tests/golden/sum_outside.term",
        "--depth",
        "1",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["verdict"], "equivalent_up_to_bound");
}

#[test]
fn strategies_and_ultra() {
    let (code, out) = oclam(&["normalize", "tests/golden/matrix_apply.args"]);
    assert_eq!(code, 1, "{out}");
    let lo = oclam(&["normalize", "tests/golden/m2_apply.term"]);
    let rnd = oclam(&["normalize", "tests/golden/m2_apply.term", "--strategy", "rand:9"]);
    assert_eq!(lo, rnd);
    assert_eq!(lo.1.trim(), "pair(star(5), star(12))");
    let (code, out) = oclam(&["normalize", "tests/golden/star_sum.term", "--ultra"]);
    assert_eq!(code, 0);
    assert!(["star(1)", "star(2)", "star(3)"].contains(&out.trim()), "{out}");
}

#[test]
fn env_files_drive_open_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let env = dir.path().join("x.env");
    let term = "tests/golden/open.term";
    // fst contributes a·(u, u), snd contributes b·(0, u).
    for (a, b, expected) in [(2, 1, "(6, 9)"), (0, 5, "(0, 15)")] {
        fs::write(
            &env,
            format!("x : I & I = pair(star({a}), star({b}))\n!u : I = bang(star(3))\n"),
        )
        .unwrap();
        let (code, out) = oclam(&["eval", term, "--env", env.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.trim(), expected);
    }
    fs::write(&env, "x : I & I = star(1)\n!u : I = bang(star(3))\n").unwrap();
    assert_ne!(oclam(&["eval", term, "--env", env.to_str().unwrap()]).0, 0);
    fs::write(&env, "x I & I\n").unwrap();
    assert_eq!(oclam(&["eval", term, "--env", env.to_str().unwrap()]).0, 1);
}
