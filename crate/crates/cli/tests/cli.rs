use std::process::{Command, Output};

fn qimpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qimpl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_writes_csv_to_stdout() {
    let o = qimpl(&["sweep", "--samples", "3", "--epsilons", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# tool: qimpl"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 4);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qimpl(&["sweep", "--nonsense"]).status.code(), Some(2));
    assert_eq!(qimpl(&["sweep", "--epsilons", "0.6", "--noise", "pauli:zz"]).status.code(), Some(2));
    assert_eq!(qimpl(&["sweep", "--epsilons", "0"]).status.code(), Some(2));
    assert_eq!(qimpl(&["sweep", "--noise", "bitflop"]).status.code(), Some(2));
    assert_eq!(qimpl(&["sweep", "--ensemble", "gaussian"]).status.code(), Some(2));
    assert_eq!(qimpl(&["verify", "plots"]).status.code(), Some(2));
    assert_eq!(qimpl(&["ingest", "/definitely/not/here.json"]).status.code(), Some(2));
    let o = qimpl(&["purity-audit", "--noise", "ad", "--samples", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("amplitude damping"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"noise": "dephasing", "samples": 7, "epsilons": [0.1, 0.2], "format": "json"}"#).unwrap();
    let o = qimpl(&["sweep", "--config", cfg.to_str().unwrap(), "--samples", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["metadata"]["config"]["noise"], "dephasing");
    assert_eq!(doc["metadata"]["config"]["samples"], 2);
    assert_eq!(doc["records"].as_array().unwrap().len(), 2 * 3);
    std::fs::write(&cfg, r#"{"nosie": "dephasing"}"#).unwrap();
    assert_eq!(qimpl(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_output_gets_summary_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = qimpl(&["sweep", "--samples", "5", "--epsilons", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let side = dir.path().join("s.csv.summary.json");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(doc["summary"]["per_epsilon"][0]["samples"], 5);
    assert!(doc["metadata"]["config"]["out"].is_null());
}

#[test]
fn verify_single_module_report() {
    let o = qimpl(&["verify", "linalg", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["suites"].as_array().unwrap().len(), 1);
    assert_eq!(doc["suites"][0]["module"], "linalg");
}

#[test]
fn purity_audit_single_qubit() {
    let o = qimpl(&["purity-audit", "--noise", "dephasing", "--qubits", "1", "--samples", "50", "--epsilons", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["per_epsilon"][0]["violations"], 0);
    assert_eq!(doc["summary"]["per_epsilon"][0]["shrinkage_violations"], 0);
}

#[test]
fn analytic_table() {
    let o = qimpl(&["analytic", "--epsilons", "0.1,0.6", "--qubits", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "noise,qubits,epsilon,nu,mu,max_entangled_delta");
    // pauli:zz has no row at 0.6.
    assert_eq!(lines.len(), 1 + 4 + 3);
    let o = qimpl(&["analytic", "--noise", "depolarizing", "--qubits", "1", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rows[0]["max_entangled_delta"].is_null());
}

#[test]
fn ingest_identity_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    let c = qimpl::Choi::identity(qimpl::linalg::Factorization::qubits(2));
    qimpl::channel::json::write_choi(&c, &path).unwrap();
    let o = qimpl(&["ingest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["channel"]["is_cp"], true);
    assert_eq!(doc["separability"]["passes"], true);
}
