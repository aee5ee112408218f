//! End-to-end tests of the splq binary: exit codes and report determinism.

use std::process::{Command, Output};

fn splq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splq"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn consistency_passes_with_exit_zero() {
    let out = splq(&[
        "consistency",
        "--algebra",
        "spl",
        "--N",
        "3",
        "--param",
        "q12=2",
        "--param",
        "q13=3/5",
        "--param",
        "q23=7",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("result: pass"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    let out = splq(&["consistency", "--algebra", "spl"]);
    assert_eq!(out.status.code(), Some(2));
    let out = splq(&["consistency", "--algebra", "osp12"]);
    assert_eq!(out.status.code(), Some(2));
    let out = splq(&["normal-order", "V(3)", "--algebra", "spl", "--N", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("out of range"), "{err}");
}

#[test]
fn rank_and_casimir_examples() {
    let out = splq(&["rank", "--N", "4"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("= 3"));
    let out = splq(&["casimir", "--n", "0", "--q", "2"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("1/12"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "verify-rep",
        "--algebra",
        "osp22",
        "--n",
        "2",
        "--q",
        "5/3",
        "--format",
        "json",
    ];
    let a = splq(&args);
    let b = splq(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failing_check_exits_one() {
    // a custom table with a broken remainder fails the overlap check
    let table = splq_cli::classical_table();
    let mut doc = splq_core::docs::TableDoc::from_table(&table);
    for rule in &mut doc.rules {
        if rule.left == "E(2,1)" && rule.right == "E(1,2)" {
            rule.remainder = format!("2*({})", rule.remainder);
        }
    }
    let dir = std::env::temp_dir().join("splq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken-table.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = splq(&[
        "consistency",
        "--algebra",
        "custom",
        "--table",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("result: fail"));
}

#[test]
fn json_reports_parse() {
    let out = splq(&[
        "qes-enumerate",
        "--n",
        "1",
        "--q",
        "5/3",
        "--degree",
        "2",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["all_certified"], serde_json::Value::Bool(true));
}
