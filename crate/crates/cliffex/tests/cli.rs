use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cliffex::circuit::Circuit;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cliffex"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const FOUR_QUBIT: &str = r#"{"num_qubits":4,"terms":[{"pauli":"ZZZZ","coeff":0.3},{"pauli":"YYXX","coeff":0.7}],"observables":["XXZZ","ZIII"]}"#;

fn optimize(dir: &Path, input: &str, extra: &[&str]) -> Output {
    let mut args = vec![
        "optimize",
        input,
        "--out",
        "o.qasm",
        "--clifford",
        "c.qasm",
        "--report",
        "r.json",
    ];
    args.extend_from_slice(extra);
    run(dir, &args)
}

#[test]
fn observable_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.json"), FOUR_QUBIT).unwrap();
    let o = optimize(dir.path(), "in.json", &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let r = json(dir.path().join("r.json"));
    assert_eq!(r["mode"], "observables");
    assert!(r["metrics"]["cnot_after"].as_u64().unwrap() <= 4);
    assert_eq!(r["metrics"]["cnot_before"], 12);
    assert_eq!(r["observables"].as_array().unwrap().len(), 2);
    assert_eq!(r["observables"][0]["original"], "XXZZ");
    assert!(r["input_digest"].as_str().unwrap().starts_with("sha256:"));
    for name in ["o.qasm", "c.qasm", "o_obs0.qasm", "o_obs1.qasm"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }

    // report metrics agree with the emitted circuit
    let qasm = std::fs::read_to_string(dir.path().join("o.qasm")).unwrap();
    let c = Circuit::from_qasm(&qasm).unwrap();
    assert_eq!(
        c.cnot_count() as u64,
        r["metrics"]["cnot_after"].as_u64().unwrap()
    );
    assert_eq!(
        c.entangling_depth() as u64,
        r["metrics"]["entangling_depth_after"].as_u64().unwrap()
    );

    let v = run(dir.path(), &["verify", "in.json", "--report", "r.json"]);
    assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stdout));

    let sign = if r["observables"][0]["transformed"]
        .as_str()
        .unwrap()
        .starts_with('-')
    {
        -1.0
    } else {
        1.0
    };
    std::fs::write(dir.path().join("v.json"), "[0.5, 0.25]").unwrap();
    let m = run(
        dir.path(),
        &[
            "map-expectations",
            "v.json",
            "--report",
            "r.json",
            "-o",
            "m.json",
        ],
    );
    assert_eq!(code(&m), 0, "{}", stderr(&m));
    let mapped = json(dir.path().join("m.json"));
    assert_eq!(mapped[0].as_f64().unwrap(), sign * 0.5);

    std::fs::write(dir.path().join("v.json"), "[0.5]").unwrap();
    let m = run(
        dir.path(),
        &["map-expectations", "v.json", "--report", "r.json"],
    );
    assert_eq!(code(&m), 2);
}

#[test]
fn probability_pipeline_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let g = run(
        dir.path(),
        &[
            "gen", "maxcut", "--nodes", "3", "--degree", "2", "--out", "tri.json",
        ],
    );
    assert_eq!(code(&g), 0, "{}", stderr(&g));
    let input = json(dir.path().join("tri.json"));
    assert_eq!(input["terms"].as_array().unwrap().len(), 6);

    let o = optimize(dir.path(), "tri.json", &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(dir.path().join("r.json"));
    assert_eq!(r["mode"], "probabilities");
    assert_eq!(r["metrics"]["cnot_after"], 5);
    assert_eq!(r["absorption"]["h_mask"], serde_json::json!([0, 1, 2]));

    let v = run(dir.path(), &["verify", "tri.json", "--report", "r.json"]);
    assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stdout));

    // zero string is fixed by any network
    std::fs::write(
        dir.path().join("k.json"),
        r#"{"n":3,"shots":9,"counts":{"000":9}}"#,
    )
    .unwrap();
    let p = run(
        dir.path(),
        &[
            "postprocess",
            "k.json",
            "--report",
            "r.json",
            "-o",
            "p.json",
        ],
    );
    assert_eq!(code(&p), 0, "{}", stderr(&p));
    assert_eq!(json(dir.path().join("p.json"))["counts"]["000"], 9);

    std::fs::write(
        dir.path().join("k.json"),
        r#"{"n":2,"shots":1,"counts":{"00":1}}"#,
    )
    .unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["postprocess", "k.json", "--report", "r.json"]
        )),
        2
    );
}

#[test]
fn postprocess_applies_network() {
    let dir = tempfile::tempdir().unwrap();
    let report = serde_json::json!({
        "input_digest": "sha256:00",
        "mode": "probabilities",
        "num_qubits": 2,
        "metrics": {"cnot_before": 0, "cnot_after": 0, "entangling_depth_before": 0,
                    "entangling_depth_after": 0, "rotation_count": 0},
        "absorption": {"h_mask": [], "network": [[0, 1]]},
        "artifacts": {"optimized": "o.qasm", "clifford": "c.qasm", "executed": []}
    });
    std::fs::write(dir.path().join("r.json"), report.to_string()).unwrap();
    std::fs::write(
        dir.path().join("k.json"),
        r#"{"n":2,"shots":5,"counts":{"10":5}}"#,
    )
    .unwrap();
    let p = run(dir.path(), &["postprocess", "k.json", "--report", "r.json"]);
    assert_eq!(code(&p), 0, "{}", stderr(&p));
    let out: Value = serde_json::from_slice(&p.stdout).unwrap();
    assert_eq!(out["counts"], serde_json::json!({"11": 5}));
    assert_eq!(out["shots"], 5);

    // an observable-mode report cannot post-process counts
    let o = run(
        dir.path(),
        &["map-expectations", "k.json", "--report", "r.json"],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_detects_perturbed_angle() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.json"), FOUR_QUBIT).unwrap();
    assert_eq!(code(&optimize(dir.path(), "in.json", &[])), 0);
    let path = dir.path().join("o.qasm");
    let c = Circuit::from_qasm(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let gates: Vec<_> = c
        .gates()
        .iter()
        .map(|g| match *g {
            cliffex::Gate::Rz(q, t) => cliffex::Gate::Rz(q, t + 1e-3),
            g => g,
        })
        .collect();
    let bent = Circuit::from_gates(c.num_qubits(), gates).unwrap();
    std::fs::write(&path, bent.to_qasm()).unwrap();
    let v = run(dir.path(), &["verify", "in.json", "--report", "r.json"]);
    assert_eq!(code(&v), 1);
    assert!(String::from_utf8_lossy(&v.stdout).contains("FAIL unitary round trip"));
}

#[test]
fn verify_refuses_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["gen", "labs", "--n", "12", "--out", "l.json"]
        )),
        0
    );
    assert_eq!(code(&optimize(dir.path(), "l.json", &[])), 0);
    let v = run(dir.path(), &["verify", "l.json", "--report", "r.json"]);
    assert_eq!(code(&v), 2);
    assert!(stderr(&v).contains("subset"), "{}", stderr(&v));
}

#[test]
fn probability_mode_rejects_y_terms() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("y.json"),
        r#"{"num_qubits":2,"terms":[{"pauli":"YY","coeff":0.3},{"pauli":"XI","coeff":0.2}]}"#,
    )
    .unwrap();
    let o = optimize(dir.path(), "y.json", &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("observable mode"), "{}", stderr(&o));
}

#[test]
fn schema_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"terms":[]}"#).unwrap();
    let o = optimize(dir.path(), "bad.json", &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("num_qubits"), "{}", stderr(&o));
    assert_eq!(code(&run(dir.path(), &["optimize"])), 2);
}

#[test]
fn generators() {
    let dir = tempfile::tempdir().unwrap();
    let g = run(
        dir.path(),
        &[
            "gen", "maxcut", "--nodes", "20", "--degree", "8", "--seed", "7", "--out", "m.json",
        ],
    );
    assert_eq!(code(&g), 0, "{}", stderr(&g));
    assert_eq!(
        json(dir.path().join("m.json"))["terms"]
            .as_array()
            .unwrap()
            .len(),
        100
    );

    let again = run(
        dir.path(),
        &[
            "gen", "maxcut", "--nodes", "20", "--degree", "8", "--seed", "7", "--out", "m2.json",
        ],
    );
    assert_eq!(code(&again), 0);
    assert_eq!(
        std::fs::read(dir.path().join("m.json")).unwrap(),
        std::fs::read(dir.path().join("m2.json")).unwrap()
    );

    assert_eq!(
        code(&run(
            dir.path(),
            &["gen", "labs", "--n", "10", "--out", "l.json"]
        )),
        0
    );
    assert_eq!(
        json(dir.path().join("l.json"))["terms"]
            .as_array()
            .unwrap()
            .len(),
        80
    );

    let e = run(
        dir.path(),
        &[
            "gen", "maxcut", "--nodes", "10", "--edges", "12", "--out", "e.json",
        ],
    );
    assert_eq!(code(&e), 0);
    assert_eq!(
        json(dir.path().join("e.json"))["terms"]
            .as_array()
            .unwrap()
            .len(),
        22
    );

    let bad = run(
        dir.path(),
        &["gen", "maxcut", "--nodes", "3", "--degree", "3"],
    );
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("3-regular"));
}

#[test]
fn generated_instances_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        vec![
            "gen", "maxcut", "--nodes", "6", "--degree", "3", "--seed", "2", "--layers", "2",
        ],
        vec![
            "gen", "maxcut", "--nodes", "8", "--edges", "10", "--seed", "5",
        ],
        vec!["gen", "labs", "--n", "6", "--gamma", "0.3", "--beta", "0.9"],
        vec![
            "gen",
            "maxcut",
            "--nodes",
            "5",
            "--degree",
            "2",
            "--observable",
            "ZZIII",
            "--observable",
            "XIIIY",
        ],
    ]
    .into_iter()
    .enumerate()
    {
        let file = format!("g{i}.json");
        let mut a = args.clone();
        a.extend(["--out", &file]);
        assert_eq!(code(&run(dir.path(), &a)), 0);
        for extra in [&[][..], &["--no-peephole"][..]] {
            let o = optimize(dir.path(), &file, extra);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            let v = run(dir.path(), &["verify", &file, "--report", "r.json"]);
            assert_eq!(
                code(&v),
                0,
                "{args:?}: {}",
                String::from_utf8_lossy(&v.stdout)
            );
        }
    }
}
