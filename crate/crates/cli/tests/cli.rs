use std::path::PathBuf;

use blockenc::linalg::max_abs_diff;
use blockenc::GraphDocument;
use blockenc_cli::{demos, estimate, run, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use serde_json::Value;

fn be(args: &[&str]) -> (i32, String, String) {
    be_with_budget(args, None)
}

fn be_with_budget(args: &[&str], budget: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("be").chain(args.iter().copied());
    let code = run(argv, budget, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("be-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(be(&["--help"]).0, EXIT_OK);
    assert_eq!(be(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(be(&["verify"]).0, EXIT_USAGE);
    assert_eq!(be(&["demo", "nope"]).0, EXIT_USAGE);
    assert_eq!(be(&["estimate", "/definitely/not/here.json"]).0, EXIT_USAGE);

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"version": 1, "root": {"op": "warp_drive"}}"#).unwrap();
    let (code, _, err) = be(&["estimate", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"));

    assert_eq!(be_with_budget(&["estimate", "demo:increment"], Some("lots")).0, EXIT_USAGE);
    assert_eq!(be(&["verify", "demo:increment", "--tol=-1"]).0, EXIT_VERIFY_FAILED);
    assert_eq!(be(&["verify", "demo:increment"]).0, EXIT_OK);
}

#[test]
fn dump_graph_round_trips() {
    for name in demos::DEMOS {
        let path = scratch(&format!("{name}.json"));
        let (code, out, _) = be(&["demo", name, "--dump-graph", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{name}");
        assert!(serde_json::from_str::<Value>(&out).is_ok());

        let text = std::fs::read_to_string(&path).unwrap();
        let doc = GraphDocument::parse(&text).unwrap();
        assert_eq!(doc.metadata["demo"], Value::from(name));
        let loaded = doc.node().unwrap();
        let original = demos::run(name, None, None).unwrap().node;
        let err = max_abs_diff(&loaded.toarray().unwrap(), &original.toarray().unwrap());
        assert!(err <= 1e-12, "{name}: {err}");
        assert_eq!(estimate(&loaded).unwrap(), estimate(&original).unwrap(), "{name}");

        let (code, _, _) = be(&["verify", path.to_str().unwrap(), "--tol", "1e-6"]);
        assert_eq!(code, EXIT_OK, "{name}");
    }
}

#[test]
fn eval_identity_returns_input() {
    let graph = scratch("identity.json");
    std::fs::write(&graph, r#"{"op": "identity", "params": {"dim": 3}}"#).unwrap();
    let input = scratch("v.json");
    std::fs::write(&input, "[1.5, [0, -2], 0.25]").unwrap();
    for simulate in [false, true] {
        let mut args = vec!["eval", graph.to_str().unwrap(), "--input", input.to_str().unwrap()];
        if simulate {
            args.push("--simulate");
        }
        let (code, out, err) = be(&args);
        assert_eq!(code, EXIT_OK, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        let output = v["output"].as_array().unwrap();
        // one complex entry makes every entry a [re, im] pair
        let want = [(1.5, 0.0), (0.0, -2.0), (0.25, 0.0)];
        for (got, (re, im)) in output.iter().zip(want) {
            assert!((got[0].as_f64().unwrap() - re).abs() < 1e-12);
            assert!((got[1].as_f64().unwrap() - im).abs() < 1e-12);
        }
    }
    assert_eq!(be(&["eval", graph.to_str().unwrap(), "--input", "basis:3"]).0, EXIT_USAGE);
}

#[test]
fn eval_laplace_matches_dense_solve() {
    let (code, out, _) = be(&["eval", "demo:laplace"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let got: Vec<f64> = v["output"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();

    let a = demos::laplace_matrix(3).unwrap().toarray().unwrap();
    let b = demos::laplace_rhs(3).unwrap().toarray().unwrap();
    let x = a.as_ref().clone().lu().solve(b.as_ref()).unwrap();
    let diff: f64 = got.iter().zip(x.iter()).map(|(g, e)| (g - e.re).powi(2)).sum::<f64>().sqrt();
    assert!(diff / x.norm() < 0.01, "{diff}");
}

#[test]
fn estimate_increment() {
    let (code, out, _) = be(&["estimate", "demo:increment"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gate_counts"]["CX"], 1);
    assert_eq!(v["gate_counts"]["X"], 1);
    assert_eq!(v["main_qubits"], 2);
    assert_eq!(v["ancilla_qubits"], 0);
    assert_eq!(v["normalization"], 1.0);
    assert_eq!(v["dim_in"], 4);
    assert!(v["norm_queries"].is_array());
}

#[test]
fn emit_qasm() {
    let (code, out, _) = be(&["emit", "demo:increment"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("OPENQASM 3"));
    assert!(out.contains("cx q[0], q[1];"));
    assert!(out.contains("x q[0];"));
}
