use std::process::Command;

use serde_json::Value;

fn definetti(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_definetti"))
        .args(args)
        .env_remove("DEFINETTI_MAX_HORIZON")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

#[test]
fn cone_verify_examples() {
    let (code, out, _) = definetti(&["cone-verify", "--coalgebra", "polya", "--black", "1", "--white", "1", "--horizon", "8"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["cone"]["verdict"], "ok");

    let (code, out, _) = definetti(&["cone-verify", "--coalgebra", "alternating", "--state", "0", "--horizon", "3"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["cone"]["level"], 1);
    assert_eq!(v["cone"]["lhs"], "1/1");
    assert_eq!(v["cone"]["rhs"], "1/2");

    let (code, out, _) = definetti(&["cone-verify", "--candidate", "lebesgue", "--horizon", "12"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["cone"]["horizon"], 12);
}

#[test]
fn definetti_reports() {
    let (code, out, _) = definetti(&["definetti", "--coalgebra", "polya", "--horizon", "10", "--match", "lebesgue"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["moments"]["values"][3], "1/4");
    assert_eq!(v["monotonicity"]["verdict"], "completely-monotone");
    assert_eq!(v["match"]["verdict"], "match");

    let (code, out, _) = definetti(&[
        "definetti", "--coalgebra", "bernoulli", "--bias", "2/5", "--horizon", "8", "--match", "point-mass:2/5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["moments"]["values"][8], "256/390625");

    let (code, out, _) = definetti(&[
        "definetti", "--coalgebra", "polya", "--black", "2", "--white", "3", "--horizon", "8", "--match", "beta:2,3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["match"]["verdict"], "match");

    let (code, out, _) = definetti(&["definetti", "--coalgebra", "polya", "--horizon", "4", "--match", "point-mass:1/2"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["match"]["verdict"], "mismatch");
    assert_eq!(v["match"]["level"], 2);

    let (code, out, _) = definetti(&["definetti", "--coalgebra", "alternating", "--horizon", "4"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["cone"]["verdict"], "fail");
}

#[test]
fn table_examples() {
    let (code, out, _) = definetti(&["table", "--candidate", "lebesgue", "--ks", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("K,grid_point,weight,weight_decimal_12"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.ends_with(",1/11,0.090909090909")));

    let (code, out, _) = definetti(&["table", "--coalgebra", "bernoulli", "--bias", "1/2", "--ks", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let weights: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(weights, ["1/32", "5/32", "5/16", "5/16", "5/32", "1/32"]);

    let (code, out, _) = definetti(&["table", "--hypergeom", "K=5", "p=1/2", "N=10,100,1000"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["strictly_decreasing"], true);
    assert_eq!(v["rows"][0]["tv"], "457/4576");
}

#[test]
fn conjugacy_examples() {
    for (b, w, j) in [("1", "1", "4"), ("2", "3", "6")] {
        let (code, out, _) = definetti(&["conjugacy", "--black", b, "--white", w, "--orders", j]);
        assert_eq!(code, 0);
        assert_eq!(json(&out)["verdict"]["verdict"], "commutes");
    }
    let (code, out, _) = definetti(&["conjugacy", "--black", "1", "--white", "1", "--inject-fault", "posterior-shift"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["verdict"]["verdict"], "mismatch");
}

#[test]
fn exchangeable_witness() {
    let (code, out, _) = definetti(&["exchangeable", "--coalgebra", "alternating", "--state", "0"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["verdict"]["outcome"], "(0,1)");
    assert_eq!(v["verdict"]["swapped"], "(1,0)");
    assert_eq!(v["verdict"]["state"], "0");

    let (code, out, _) = definetti(&["exchangeable", "--coalgebra", "polya", "--black", "2", "--white", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("state,exchangeable,"));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["cone-verify"],
        &["cone-verify", "--coalgebra", "bernoulli"],
        &["cone-verify", "--coalgebra", "bernoulli", "--bias", "3/2"],
        &["cone-verify", "--coalgebra", "polya", "--candidate", "lebesgue"],
        &["cone-verify", "--candidate", "beta:0.5,0.5"],
        &["table", "--candidate", "lebesgue", "--ks", "0"],
        &["conjugacy", "--black", "0", "--white", "1"],
        &["frobnicate"],
        &["exchangeable", "--candidate", "lebesgue"],
    ];
    for args in cases {
        let (code, out, err) = definetti(args);
        assert_eq!(code, 2, "{args:?}: {out}{err}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
    let (code, _, err) = definetti(&["cone-verify", "--coalgebra", "polya", "--bias", "1/x"]);
    assert_eq!(code, 2);
    assert!(err.contains("1/x"), "{err}");
}

#[test]
fn horizon_cap_from_env() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_definetti"))
            .args(["cone-verify", "--candidate", "lebesgue", "--horizon", "20"])
            .env("DEFINETTI_MAX_HORIZON", cap)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("10"), Some(2));
    assert_eq!(run("20"), Some(0));
    let (code, _, err) = definetti(&["cone-verify", "--candidate", "lebesgue", "--horizon", "65"]);
    assert_eq!(code, 2);
    assert!(err.contains("64"));
}
