use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cve(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cve"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("cve binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmsv_json(r: f64) -> String {
    let t = r.tanh();
    format!(
        r#"{{"A0":{},"M1":[[[0,0],[-1,0]],[[-1,0],[0,0]]],"M2":[[[0,0],[-1,0]],[[-1,0],[0,0]]],"M12":[[[{m},0],[0,0]],[[0,0],[{m},0]]]}}"#,
        1.0 / r.cosh().powi(2),
        m = -t
    )
}

#[test]
fn circuit_tmsv_with_check() {
    let out = cve(&["circuit", "--theta", "0.7853981633974483", "--zeta1=-1,0", "--zeta2", "1,0", "--check"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["entropy_nats"].as_f64().unwrap() - 1.6198220929).abs() < 1e-9);
    assert!((v["lambda"].as_f64().unwrap() - 0.5800256583859739).abs() < 1e-11);
    assert_eq!(v["separable"], false);
    assert!(v["deviations"]["oracle"].as_f64().unwrap() < 1e-8);
}

#[test]
fn gaussian_stdin_matches_circuit() {
    let g = json(&cve(&["gaussian"], &tmsv_json(1.0)));
    assert!((g["entropy_nats"].as_f64().unwrap() - 1.6198220929).abs() < 1e-9);
    assert!((g["normalization_check"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn bits_switches_units() {
    let out = cve(&["--bits", "fock", "--n1", "1", "--n2", "0", "--theta", "0.7853981633974483"], "");
    let v = json(&out);
    assert!((v["entropy_bits"].as_f64().unwrap() - 1.0).abs() < 1e-11);
    assert!(v.get("entropy_nats").is_none());
}

#[test]
fn degrees_flag_reads_angles_in_degrees() {
    let rad = json(&cve(&["fock", "--n1", "2", "--n2", "1", "--theta", "0.5235987755982988"], ""));
    let deg = json(&cve(&["--degrees", "fock", "--n1", "2", "--n2", "1", "--theta", "30"], ""));
    let a = rad["entropy_nats"].as_f64().unwrap();
    let b = deg["entropy_nats"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn sweep_csv_and_jsonl() {
    let out = cve(&["sweep", "--param", "r", "--start", "0", "--stop", "1", "--steps", "5"], "");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let entropies: Vec<f64> = rows.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(entropies.len(), 5);
    assert_eq!(entropies[0], 0.0);
    assert!(entropies.windows(2).all(|w| w[1] > w[0]));

    let out = cve(&["sweep", "--param", "theta", "--start", "0", "--stop", "3", "--steps", "4", "--format", "jsonl", "--zeta1", "0.8,0.2", "--zeta2", "0.8,0.2"], "");
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l["entropy_nats"].as_f64().unwrap().abs() < 1e-8));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--scope", "gaussian", "--samples", "30", "--seed", "11"];
    let a = cve(&args, "");
    let b = cve(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("properties passed"));
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], String, i32); 6] = [
        (&["verify", "--scope", "gaussian", "--samples", "10", "--mutate"], String::new(), 1),
        (&["circuit", "--frobnicate"], String::new(), 2),
        (&["gaussian"], tmsv_json(15.0), 3),
        (&["gaussian"], tmsv_json(1.0).replacen("[[-1,0],[0,0]]", "[[-3,0],[0,0]]", 1), 4),
        (&["gaussian"], tmsv_json(1.0).replace("\"M2\":[[[0,0],[-1,0]],[[-1,0],[0,0]]]", "\"M2\":[[[0,0],[0,0]],[[0,0],[0,0]]]"), 5),
        (&["fock", "--n1", "1", "--n2", "0", "--theta", "0.7", "--reading", "literal"], String::new(), 6),
    ];
    for (args, stdin, code) in cases {
        let out = cve(args, &stdin);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(code == 1 || !out.stderr.is_empty());
    }
}

#[test]
fn formula_mismatch_reports_both_spectra() {
    let out = cve(&["fock", "--n1", "1", "--n2", "0", "--theta", "0.7853981633974483", "--reading", "literal"], "");
    let err = String::from_utf8_lossy(&out.stderr);
    let start = err.find('{').expect("JSON diagnostic on stderr");
    let v: serde_json::Value = serde_json::from_str(err[start..].trim()).unwrap();
    assert!(v["formula"].is_array() && v["oracle"].is_array());
}
