//! Golden corpus: every `tests/golden/*.pl` file is run at seed 0 and its
//! JSON report compared byte for byte with the stored `.json` next to it.
//! Set `UPDATE_GOLDEN=1` to rewrite the stored reports.

use std::path::{Path, PathBuf};
use std::process::Command;

use multisym_frontend::runner::{RunOptions, Status};
use multisym_frontend::{check_source, parser, printer};

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("golden directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pl"))
        .collect();
    files.sort();
    files
}

/// Files whose every row passes; the rest must contain a failure.
const ALL_PASS: [&str; 6] = ["cartan", "lie_n_algebra", "jacobiator_r3", "product_moment", "so3_ok", "symplectic_r2"];

fn stem(p: &Path) -> String {
    p.file_stem().unwrap().to_string_lossy().into_owned()
}

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 6);
}

#[test]
fn reports_match_stored_json() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for path in corpus() {
        let src = std::fs::read_to_string(&path).unwrap();
        let report =
            check_source(&src, &RunOptions::default(), |_| {}).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let json = report.to_json();
        let stored = path.with_extension("json");
        if update {
            std::fs::write(&stored, &json).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&stored).unwrap_or_else(|_| panic!("missing {}", stored.display()));
        if expected != json {
            mismatched.push(stem(&path));
        }
        assert!(report.rows.iter().all(|r| r.status != Status::Error), "{}: error row", path.display());
        assert_eq!(ALL_PASS.contains(&stem(&path).as_str()), report.passed(), "{}", path.display());
    }
    assert!(mismatched.is_empty(), "reports differ from stored JSON: {mismatched:?}");
}

#[test]
fn corpus_round_trips_through_the_printer() {
    for path in corpus() {
        let src = std::fs::read_to_string(&path).unwrap();
        let program = parser::parse(&src).unwrap();
        let printed = printer::print_program(&program);
        assert_eq!(parser::parse(&printed).unwrap(), program, "{}", path.display());
        assert_eq!(printer::print_program(&parser::parse(&printed).unwrap()), printed);
    }
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_multisym")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name).to_string_lossy().into_owned()
}

#[test]
fn exit_codes() {
    let (code, out, _) = run_cli(&["check", &golden("symplectic_r2.pl")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("0 fail, 0 error\n"), "{out}");
    let (code, out, _) = run_cli(&["check", &golden("so3_broken.pl")]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL  gen-jacobi [m=3] k=3 (e1, e2, e3): -e2"), "{out}");

    let dir = std::env::temp_dir().join(format!("multisym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.pl");
    std::fs::write(&bad, "chart M (x, y);\nform w on M = dx ^ q;\n").unwrap();
    let (code, _, err) = run_cli(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("2:20: unknown-name: unknown name `q`"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_is_deterministic_and_seeded() {
    let file = golden("jacobiator_r3.pl");
    let (_, a, _) = run_cli(&["check", &file, "--json", "--seed", "7"]);
    let (_, b, _) = run_cli(&["check", &file, "--json", "--seed", "7"]);
    let (_, c, _) = run_cli(&["check", &file, "--json", "--seed", "8"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    for row in v["rows"].as_array().unwrap() {
        for key in ["id", "directive", "check", "status", "arity", "tuple", "condition", "residual", "residual_nonzero"]
        {
            assert!(row.get(key).is_some(), "row lacks {key}: {row}");
        }
        assert!(["pass", "fail", "error"].contains(&row["status"].as_str().unwrap()));
    }
}
