//! End-to-end checks of the cantor binary: worked examples, exit codes,
//! report shapes, and the flags that alter rendering without altering
//! semantics.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cantor_cli::formats;
use cantor_core::kernel::disintegrate;

fn cantor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

const SWAP: &str = "kernel level=1 depth=1 quasi=0\nrow 0 mass=1/1\n0 0/1\n1 1/1\nrow 1 mass=1/1\n0 1/1\n1 0/1\n";
const JOINT: &str = "measure depth=2 mass=1/1\n00 1/8\n01 3/8\n10 1/8\n11 3/8\n";
const BIASED_TOWER: &str = "tower levels=2\nmeasure depth=1 mass=1/1\n0 1/4\n1 3/4\nmeasure depth=2 mass=1/1\n00 1/8\n01 3/8\n10 1/8\n11 3/8\n";
const EXAMPLE_TREE: &str = "2\n2.1\n2.3\n5\n5.0\n";

#[test]
fn validate_identifies_every_artifact_type() {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("m.msr", JOINT, "measure"),
        ("k.knl", SWAP, "kernel"),
        ("t.twr", BIASED_TOWER, "tower"),
        ("p.ppc", "ppconfig depth=2 n=2\n00\n01\n", "ppconfig"),
        ("s.cyl", "cylset depth=2\n00\n11\n", "cylset"),
        ("t.tree", EXAMPLE_TREE, "tree"),
    ];
    for (name, content, kind) in files {
        let path = write(dir.path(), name, content);
        let out = cantor(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{kind}: {}", stderr(&out));
        assert_eq!(stdout(&out), format!("valid {kind}\n"));
    }
}

#[test]
fn worked_examples_are_frozen() {
    let dir = tempfile::tempdir().unwrap();
    let swap = write(dir.path(), "swap.knl", SWAP);
    let out = cantor(&["fixpoint", "--kernel", swap.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(1/2, 1/2)\n");

    let a = write(dir.path(), "a.ppc", "ppconfig depth=2 n=1\n00\n");
    let b = write(dir.path(), "b.ppc", "ppconfig depth=2 n=1\n10\n");
    let out = cantor(&[
        "pp-dist",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--terms",
        "6",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "29/32\n");

    let bad = write(dir.path(), "bad.msr", "measure depth=1 mass=1/1\n0 1/2\n1 1/3\n");
    let out = cantor(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "");
    assert!(
        stderr(&out).contains("line 3: declared mass 1/1 but leaves sum to 5/6"),
        "got: {}",
        stderr(&out)
    );
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "t.tree", EXAMPLE_TREE);
    let tree = tree.to_str().unwrap();

    let ok = cantor(&["select", "--tree", tree, "--least", "2"]);
    assert_eq!(code(&ok), 0);

    let missing = cantor(&["validate", dir.path().join("absent.msr").to_str().unwrap()]);
    assert_eq!(code(&missing), 1);
    assert!(stderr(&missing).starts_with("error: "));

    let usage = cantor(&["select", "--tree", tree, "--least", "2", "--word", "5"]);
    assert_eq!(code(&usage), 2);
    let usage = cantor(&["select", "--tree", tree]);
    assert_eq!(code(&usage), 2);
    let usage = cantor(&["no-such-subcommand"]);
    assert_eq!(code(&usage), 2);

    // domain error inside a subcommand, not at parse time
    let deep = cantor(&["select", "--tree", tree, "--least", "3"]);
    assert_eq!(code(&deep), 1);
    assert!(stderr(&deep).contains("depth 3 exceeds the available depth 2"));
}

#[test]
fn decimal_renders_scalars_but_not_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.msr", JOINT);
    let s = write(dir.path(), "s.cyl", "cylset depth=2\n00\n11\n");
    let (m, s) = (m.to_str().unwrap(), s.to_str().unwrap());

    let exact = cantor(&["mass", m, s]);
    assert_eq!(stdout(&exact), "1/2\n");
    let rendered = cantor(&["mass", m, s, "--decimal", "3"]);
    assert_eq!(stdout(&rendered), "0.500\n");
    assert_eq!(code(&rendered), 0);

    let a = write(dir.path(), "a.ppc", "ppconfig depth=2 n=1\n00\n");
    let b = write(dir.path(), "b.ppc", "ppconfig depth=2 n=1\n10\n");
    let out = cantor(&[
        "pp-dist",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--terms",
        "6",
        "--decimal",
        "5",
    ]);
    assert_eq!(stdout(&out), "0.90625\n");

    // artifact reports keep exact rationals regardless of the flag
    let odd = cantor(&["marginal", m, "--parity", "odd", "--decimal", "3"]);
    assert_eq!(stdout(&odd), "measure depth=1 mass=1/1\n0 1/4\n1 3/4\n");
}

#[test]
fn product_marginals_recover_factors() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.msr", "measure depth=1 mass=1/1\n0 1/2\n1 1/2\n");
    let b = write(dir.path(), "b.msr", "measure depth=1 mass=1/1\n0 1/4\n1 3/4\n");
    let product = cantor(&["product", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(stdout(&product), JOINT);

    let joint = write(dir.path(), "joint.msr", &stdout(&product));
    let joint = joint.to_str().unwrap();
    let even = cantor(&["marginal", joint, "--parity", "even"]);
    assert_eq!(stdout(&even), std::fs::read_to_string(&a).unwrap());
    let odd = cantor(&["marginal", joint, "--parity", "odd"]);
    assert_eq!(stdout(&odd), std::fs::read_to_string(&b).unwrap());
}

#[test]
fn extend_lists_every_level_cylinder() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.twr", BIASED_TOWER);
    let out = cantor(&["extend", "--tower", t.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "joint level=0 e 1/1\n\
         joint level=0 0 1/4\n\
         joint level=0 1 3/4\n\
         joint level=1 e 1/1\n\
         joint level=1 0 1/2\n\
         joint level=1 1 1/2\n\
         joint level=1 00 1/8\n\
         joint level=1 01 3/8\n\
         joint level=1 10 1/8\n\
         joint level=1 11 3/8\n"
    );
}

#[test]
fn strict_check_reports_escape_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let swap = write(dir.path(), "swap.knl", SWAP);
    let out = cantor(&["strict-check", "--kernel", swap.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "not strict: atom 0 escapes mass 1/1 into {1}\n");

    let stay = "kernel level=1 depth=1 quasi=0\nrow 0 mass=1/1\n0 1/1\n1 0/1\nrow 1 mass=1/1\n0 0/1\n1 1/1\n";
    let stay = write(dir.path(), "stay.knl", stay);
    let out = cantor(&["strict-check", "--kernel", stay.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "strict\n");
}

#[test]
fn disintegrate_emits_the_conditional_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "joint.msr", JOINT);
    let out = cantor(&["disintegrate", "--mu", m.to_str().unwrap(), "--level", "1"]);
    assert_eq!(code(&out), 0);
    let printed = formats::parse_kernel(&stdout(&out), 12).unwrap();
    let expected = disintegrate(&formats::parse_measure(JOINT, 12).unwrap(), 1).unwrap();
    assert_eq!(printed, expected);
    // a product disintegrates into copies of the second factor
    assert_eq!(
        stdout(&out),
        "kernel level=1 depth=1 quasi=0\nrow 0 mass=1/1\n0 1/4\n1 3/4\nrow 1 mass=1/1\n0 1/4\n1 3/4\n"
    );
}

#[test]
fn dynkin_refine_zeroes_rows_that_leak_off_their_class() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = "kernel level=1 depth=1 quasi=0\nrow 0 mass=1/1\n0 1/2\n1 1/2\nrow 1 mass=1/1\n0 0/1\n1 1/1\n";
    let k = write(dir.path(), "mixed.knl", mixed);
    let out = cantor(&["dynkin-refine", "--kernel", k.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "kernel level=1 depth=1 quasi=1\nrow 0 mass=0/1\n0 0/1\n1 0/1\nrow 1 mass=1/1\n0 0/1\n1 1/1\n"
    );

    // an explicit partner list is accepted
    let partner = write(dir.path(), "partner.knl", mixed);
    let out = cantor(&[
        "dynkin-refine",
        "--kernel",
        k.to_str().unwrap(),
        "--with",
        partner.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn pp_push_accepts_all_map_specs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.ppc", "ppconfig depth=2 n=2\n00\n01\n");
    let cfg = cfg.to_str().unwrap();

    let delta = cantor(&["pp-push", cfg, "--map", "delta"]);
    assert_eq!(stdout(&delta), "ppconfig depth=1 n=2\n0\n1\n");

    let constant = cantor(&["pp-push", cfg, "--map", "const:11"]);
    assert_eq!(stdout(&constant), "ppconfig depth=2 n=2\n11\n11\n");

    let table = write(dir.path(), "f.map", "00 1\n01 0\n10 0\n11 0\n");
    let out = cantor(&["pp-push", cfg, "--map", table.to_str().unwrap()]);
    assert_eq!(stdout(&out), "ppconfig depth=1 n=2\n0\n1\n");

    let bad = cantor(&["pp-push", cfg, "--map", "const:xyz"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn select_retracts_and_finds_least_branches() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.tree", EXAMPLE_TREE);
    let t = t.to_str().unwrap();
    let cases = [
        (vec!["select", "--tree", t, "--least", "2"], "2.1\n"),
        (vec!["select", "--tree", t, "--least", "0"], "e\n"),
        (vec!["select", "--tree", t, "--word", "2.9"], "2.1\n"),
        (vec!["select", "--tree", t, "--word", "7.0"], "2.1\n"),
        (vec!["select", "--tree", t, "--word", "2.3"], "2.3\n"),
        (vec!["select", "--tree", t, "--word", "5"], "5\n"),
        (vec!["select", "--tree", t, "--word", "e"], "e\n"),
    ];
    for (args, expected) in cases {
        let out = cantor(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        assert_eq!(stdout(&out), expected, "{args:?}");
    }
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.msr", JOINT);
    let s = write(dir.path(), "s.cyl", "cylset depth=2\n00\n11\n");
    let report = dir.path().join("report.txt");
    let out = cantor(&[
        "mass",
        m.to_str().unwrap(),
        s.to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
    assert_eq!(std::fs::read_to_string(&report).unwrap(), "1/2\n");
}

#[test]
fn depth_cap_gates_every_parser() {
    let dir = tempfile::tempdir().unwrap();
    let deep = write(dir.path(), "deep.cyl", "cylset depth=13\n");
    let deep = deep.to_str().unwrap();

    let default_cap = cantor(&["validate", deep]);
    assert_eq!(code(&default_cap), 1);
    assert!(stderr(&default_cap).contains("exceeds the depth cap 12"));

    let raised = cantor(&["validate", deep, "--depth-cap", "13"]);
    assert_eq!(code(&raised), 0);

    let lowered = cantor(&["validate", deep, "--depth-cap", "4"]);
    assert_eq!(code(&lowered), 1);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.msr",
        "# a fair coin\n\nmeasure depth=1 mass=1/1\n# leaves follow\n0 1/2\n\n1 1/2\n",
    );
    let out = cantor(&["validate", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "valid measure\n");
}

#[test]
fn oracle_prints_the_suite_table() {
    let out = cantor(&["oracle"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    for line in lines {
        assert!(line.contains(" pass cases="), "line: {line}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.twr", BIASED_TOWER);
    let k = write(dir.path(), "k.knl", SWAP);
    let m = write(dir.path(), "m.msr", JOINT);
    let runs: Vec<Vec<&str>> = vec![
        vec!["extend", "--tower", t.to_str().unwrap()],
        vec!["fixpoint", "--kernel", k.to_str().unwrap()],
        vec!["disintegrate", "--mu", m.to_str().unwrap(), "--level", "1"],
        vec!["oracle"],
    ];
    for args in runs {
        let first = cantor(&args);
        let second = cantor(&args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.stderr, second.stderr, "{args:?}");
        assert_eq!(first.status.code(), second.status.code(), "{args:?}");
    }
}
