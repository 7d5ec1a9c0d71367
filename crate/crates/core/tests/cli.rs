use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn ls2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ls2"))
        .args(args)
        .env_remove("LS2_SEMIRING")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).lines().last().expect("a report line")).expect("valid json")
}

#[test]
fn apply_matrices() {
    let o = ls2(&["apply", "[[1,2],[3,4]]", "[5,6]"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "[17, 39]"));
    let o = ls2(&["apply", "[[0,1],[1,0]]", "[2,5]", "--pow", "3"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "[5, 2]"));
    let o = ls2(&["apply", "[[1,2],[3,4]]", "[5,6,7]"]);
    assert_eq!(code(&o), 4);
    let o = ls2(&["apply", "[[1,2,3],[4,5,6]]", "[1,1,1]", "--pow", "2"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn check_reports_types_and_errors() {
    let o = ls2(&["check", "-e", "(x*y)+(y*x)", "--ctx", "x:A, y:A"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("A * A"));
    let o = ls2(&["check", "-e", "(x+y)*(y+x)", "--ctx", "x:A, y:A", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["ok"], false);
    assert_eq!(v["failures"][0]["kind"], "LinearVarReused");
    let o = ls2(&["check", "-e", "z * z", "--nonlinear", "z:1"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1 * 1"));
}

#[test]
fn check_a_compiled_matrix() {
    let term = stdout(&ls2(&["encode", "[[1,3],[2,4]]"]));
    assert_eq!(
        term,
        r"\x:1 & 1. da1(x; y0:1. d1(y0; <1.*, 2.*>)) + da2(x; y0:1. d1(y0; <3.*, 4.*>))"
    );
    let o = ls2(&["check", "-e", &term]);
    let ty = ls2::parse_prop(&stdout(&o)).unwrap();
    assert_eq!(ty, ls2::parse_prop("(1 & 1) -o (1 & 1)").unwrap());
    let o = ls2(&["encode", "[1,2,3]", "--domain", "(1 & 1) & 1"]);
    assert_eq!(stdout(&o), "<<1.*, 2.*>, 3.*>");
}

#[test]
fn normalize_and_trace() {
    let o = ls2(&["normalize", "-e", "d1(2.*; <1.*, 1.*>)", "--trace"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "1 beta.one ε\n2 prod.pair ε\n3 prod.star 0\n4 prod.star 1\n<2.*, 2.*>"
    );
    let o = ls2(&["normalize", "-e", r"(\x:!1. db(x; y:1. 2.*)) (!(1.*) + !(3.*))"]);
    assert_eq!(stdout(&o), "2.*");
    let o = ls2(&["normalize", "-e", "(1.* + 2.*) * 3.*", "--mode", "ultra", "--seed", "4"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&ls2(&["normalize", "-e", "x"])), 1);
    assert_eq!(code(&ls2(&["normalize", "-e", r"(\x:1. x) 1.*", "--max-steps", "0"])), 2);
    assert_eq!(code(&ls2(&["normalize", "-e", "1.* +"])), 4);
    assert_eq!(code(&ls2(&["normalize", "/nonexistent/file.ls2"])), 4);
    assert_eq!(code(&ls2(&["frobnicate"])), 4);
    assert_eq!(code(&ls2(&["--help"])), 0);
}

#[test]
fn equivalence() {
    let o = ls2(&["equiv", "-e", "1.* + 2.*", "3.*"]);
    assert_eq!(stdout(&o), "true");
    let o = ls2(&["equiv", "-e", r"\y:1 -o 1. y 3.*", r"\y:1 -o 1. (y 1.*) + (y 2.*)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "false"));
    let o = ls2(&["equiv", "-e", "1.*", "<>"]);
    assert_eq!(stdout(&o), "false");
}

#[test]
fn files_and_semirings() {
    let mut f = tempfile::Builder::new().suffix(".ls2").tempfile().unwrap();
    writeln!(
        f,
        "defprop V = 1 & 1\ndef swap = \\v:V. <da2(v; b:1. b), da1(v; a:1. a)>\nmain = swap <(1/2).*, 2.*>"
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let o = ls2(&["check", path]);
    assert_eq!(stdout(&o), "swap : 1 & 1 -o 1 & 1\nmain : 1 & 1");
    let o = ls2(&["normalize", path, "--json"]);
    let v = json(&o);
    assert_eq!(v["command"], "normalize");
    assert_eq!(v["normal_form"], "<2.*, (1/2).*>");
    assert_eq!(v["type"], "1 & 1");

    let o = Command::new(env!("CARGO_BIN_EXE_ls2"))
        .args(["normalize", "-e", "(2+3i).* + (i).*"])
        .env("LS2_SEMIRING", "gauss")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "(2+4i).*");
    let o = ls2(&["normalize", "-e", "(1/2).*", "--semiring", "nat"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn error_spans_name_the_definition() {
    let mut f = tempfile::Builder::new().suffix(".ls2").tempfile().unwrap();
    writeln!(f, "def ok = 1.*\ndef bad = \\v:1. v * v").unwrap();
    let o = ls2(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":2:1: in `bad`:"), "{err}");
}

#[test]
fn property_sweeps() {
    let o = ls2(&["metatheory", "--suite", "semimodule", "--samples", "30", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 7);
    assert!(lines.iter().all(|l| l.starts_with("PASS semimodule.") && l.contains(" seed=7 ")));
    let o = ls2(&["metatheory", "--suite", "intro", "--samples", "40", "--json"]);
    let v = json(&o);
    assert_eq!((v["ok"].clone(), v["failures"].as_array().unwrap().len()), (Value::Bool(true), 0));
    assert_eq!(code(&ls2(&["metatheory", "--suite", "nonsense"])), 4);

    let matrix = stdout(&ls2(&["encode", "[[1,2],[3,4]]"]));
    let o = ls2(&["linearity", "-e", &matrix, "--samples", "20"]);
    assert_eq!((code(&o), stdout(&o).lines().next().unwrap_or("")), (0, "PASS linearity seed=0 size=18 checked=20"));
    let o = ls2(&["linearity", "-e", r"\x:!1. db(x; y:1. 2.*)"]);
    assert_eq!(code(&o), 1);
}
