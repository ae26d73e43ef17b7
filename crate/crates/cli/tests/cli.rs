use std::process::{Command, Output};

use serde_json::{json, Value};

fn aclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aclab")).args(args).env_remove("ACLAB_SEED").output().unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = aclab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn documented_invocations() {
    assert_eq!(ok(&["val", "x^2 + l1"]), json!({"valuation": [-2]}));
    assert_eq!(ok(&["lambda", "1"]), json!({"expr": "x^-1 + (x*l1)^-1"}));
    assert_eq!(ok(&["classify", "trunc:3"]), json!({"kind": "grounded", "max_psi": [1, 1, 1]}));
}

#[test]
fn field_and_couple_queries() {
    assert_eq!(ok(&["val", "(x+1)/l1"]), json!({"valuation": [-1, 1]}));
    assert_eq!(ok(&["val", "x - x"]), json!({"valuation": "inf"}));
    assert_eq!(ok(&["psi", "[0, 0, 3]"]), json!({"psi": [1, 1, 1]}));
    assert_eq!(ok(&["cmp", "x", "l1"]), json!({"order": "greater", "dominance": "strictly_dominates"}));
    assert_eq!(ok(&["classify", "logfull", "--lambda-free", "no"]), json!({"kind": "asymptotic_integration", "closures": "two"}));
    assert_eq!(ok(&["classify", "loggap"])["kind"], "gap");
}

#[test]
fn set_queries() {
    assert_eq!(ok(&["set", "psidown", "member", "--elem", "[1, 1, 0]"]), json!({"member": true}));
    assert_eq!(ok(&["set", "psidown", "member", "--elem", "[1, 2]"]), json!({"member": false}));
    assert_eq!(ok(&["set", "(affine [1] 3 psidown)", "jammed"])["verdict"], "holds");
    let y = ok(&["set", "(lt [1])", "yardstick"]);
    assert_eq!(y["verdict"], "fails");
    assert_eq!(y["evidence"]["points"][0], json!([1, 0, 0, 0, 0, "-1/2"]));
    assert_eq!(ok(&["set", "(affine [0, 1] 2 (lt []))", "sup"]), json!({"sup": [0, 1]}));
    assert_eq!(ok(&["set", "(int psidown)", "simplify"]), json!({"descriptor": "(lt [])"}));
    assert_eq!(ok(&["set", "(ext smallint)", "derived-yardstick"])["verdict"], "holds");
}

#[test]
fn extension_steps_and_sequences() {
    let c = ok(&["extend", "step", "--kind", "smallint", "--s", "x^-2*l1^-1", "--iters", "2"]);
    assert_eq!(c["gammas"][0], json!([2, 1]));
    assert_eq!(c["gammas"].as_array().unwrap().len(), 3);
    let c = ok(&["extend", "step", "--scenario", "bigint", "--iters", "1"]);
    assert_eq!(c["kind"], "bigint");
    let p = ok(&["pc-analyze", "geometric", "--len", "6", "--limit", "x/(x-1)"]);
    assert_eq!(p["pc"]["verdict"], "yes");
    assert_eq!(p["pseudolimit"]["verdict"], "yes");
    assert_eq!(ok(&["pc-analyze", "const:x", "--len", "6"])["pc"]["verdict"], "no");
}

#[test]
fn suites_report_and_honour_the_seed() {
    let r = ok(&["suite", "identities", "--cases", "50", "--seed", "9"]);
    assert_eq!((r["suite"].clone(), r["seed"].clone(), r["failures"].clone()), (json!("identities"), json!(9), json!([])));
    assert!(r["wall_time"].is_number());
    let out = Command::new(env!("CARGO_BIN_EXE_aclab"))
        .args(["suite", "classify"])
        .env("ACLAB_SEED", "17")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["seed"], 17);
}

#[test]
fn errors_are_json_with_exit_codes() {
    let out = aclab(&["val", "x^(1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((e["error"]["kind"].clone(), e["error"]["offset"].clone()), (json!("syntax"), json!(6)));

    let out = aclab(&["val", "(x+1)^(1/2)"]);
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(e["error"]["kind"], "semantic");

    for args in [&["nope"][..], &["suite", "nope"], &["set", "psidown", "member"], &["lambda", "x"]] {
        let out = aclab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let e: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(e["error"]["message"].is_string());
    }
    let out = aclab(&["classify", "loggap", "--lambda-free", "yes"]);
    assert_eq!(out.status.code(), Some(2));
}
