use std::process::Command;

fn siegel3(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_siegel3")).args(args).output().expect("spawn siegel3")
}

#[test]
fn decompose_two() {
    let out = siegel3(&["decompose", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["d"], 2);
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(siegel3(&["decompose", "9"]).status.code(), Some(2));
    assert_eq!(siegel3(&["--qorder", "6", "expand", "--form", "chi18"]).status.code(), Some(2));
    assert_eq!(siegel3(&["--modulus", "7", "decompose", "1"]).status.code(), Some(2));
    assert_eq!(siegel3(&["selfcheck", "--check", "nope"]).status.code(), Some(2));
}

#[test]
fn discriminant_order() {
    let out = siegel3(&["order-dc", "--discriminant"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "14");
}

#[test]
fn selfcheck_single() {
    let out = siegel3(&["selfcheck", "--check", "plethysm"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["status"], "pass");
}

#[test]
fn corrupted_chi18_fails() {
    let out = siegel3(&["selfcheck", "--tier", "1", "--corrupt-chi18"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[FAIL] chi18-leading"));
}
