use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const CUBIC: &str = "x1^3+x2^3+x3^3";
const QUARTIC_SEXTIC: &str = "x1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4";

fn shl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = shl(&all);
    assert_eq!(
        code(&o),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn certified(report: &Value, module: &str) -> Option<i64> {
    report["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["module"] == module)
        .and_then(|c| c["certified_level"].as_i64())
}

#[test]
fn cubic_report() {
    let r = json(&["analyze", CUBIC]);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "input",
            "classification",
            "milnor",
            "spectral",
            "pairing",
            "filtration",
            "certificates",
            "meta"
        ]
    );
    assert_eq!(r["milnor"]["mu"], 8);
    assert_eq!(r["spectral"]["alpha_f"], "1/1");
    assert_eq!(r["spectral"]["singularity_class"], "DuBoisOnly");
    assert_eq!(r["filtration"]["k0"], 1);
    assert_eq!(r["filtration"]["k1"], 0);
    assert_eq!(certified(&r, "Mprime"), Some(1));
    assert_eq!(certified(&r, "M"), Some(0));
    assert_eq!(r["pairing"]["all_perfect"], true);
    assert_eq!(r["input"]["weights_source"], "inferred");
}

#[test]
fn quartic_sextic_report() {
    let r = json(&["analyze", QUARTIC_SEXTIC, "--weights", "1/6,1/4,1/4,1/4"]);
    assert_eq!(r["classification"]["kind"], "SemiQuasihomogeneous");
    assert_eq!(r["spectral"]["alpha_f"], "11/12");
    assert_eq!(r["spectral"]["r0"], 3);
    assert_eq!(r["milnor"]["mu"], 135);
    assert_eq!(
        (
            r["filtration"]["k0"].as_i64(),
            r["filtration"]["k1"].as_i64()
        ),
        (Some(2), Some(2))
    );
    for m in ["Mprime", "Mdoubleprime", "M"] {
        let l = certified(&r, m).expect("certified");
        assert!(l <= 1, "{m} certified at {l}");
    }
    let top = &r["milnor"]["top_degree"];
    assert_eq!(
        (
            top["num"].as_str(),
            top["den"].as_str(),
            top["scaled"].as_i64()
        ),
        (Some("37"), Some("12"), Some(37))
    );
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        vec!["analyze", CUBIC, "--json"],
        vec!["analyze", "x1^3*x2+x2^3", "--json", "--module", "M"],
    ] {
        let o = shl(&args);
        assert_eq!(code(&o), 0);
        let text = String::from_utf8(o.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&shl(&["analyze", "x1^2*x2^2"])), 2);
    assert_eq!(
        code(&shl(&["analyze", "x1^2*x2^2", "--weights", "1/4,1/4"])),
        2
    );
    assert_eq!(
        code(&shl(&["analyze", "x1^2+x2^3", "--weights", "1/3,1/3"])),
        2
    );
    assert_eq!(code(&shl(&["analyze", "x1^3+"])), 1);
    assert_eq!(code(&shl(&["analyze", CUBIC, "--weights", "1/3,1/x"])), 1);
    assert_eq!(
        code(&shl(&["analyze", CUBIC, "--weights", "2/3,1/3,1/3"])),
        1
    );
    assert_eq!(code(&shl(&["analyze", CUBIC, "--module", "N"])), 1);
    assert_eq!(code(&shl(&["analyze", CUBIC, "--bogus"])), 1);
    // A semiquasihomogeneous input has no single weight solution.
    assert_eq!(code(&shl(&["analyze", QUARTIC_SEXTIC])), 1);
    assert_eq!(code(&shl(&["analyze", "0"])), 1);
}

#[test]
fn file_input_matches_inline() {
    let f = temp_file(&format!("{CUBIC}\n"));
    let a = json(&["analyze", f.path().to_str().unwrap()]);
    let b = json(&["analyze", CUBIC]);
    assert_eq!(a["input"], b["input"]);
    assert_eq!(a["milnor"], b["milnor"]);
}

#[test]
fn flags_shape_the_report() {
    let r = json(&["analyze", CUBIC, "--module", "M", "--certify-level", "0"]);
    let certs = r["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["attempts"][0]["verdict"], "CertifiedUpTo");
    assert_eq!(r["filtration"]["tables"].as_array().unwrap().len(), 1);

    let r = json(&[
        "analyze",
        CUBIC,
        "--module",
        "Mprime",
        "--certify-level",
        "0",
    ]);
    let a = &r["certificates"][0]["attempts"][0];
    assert_eq!(a["verdict"], "WitnessFailure");
    assert_eq!(a["witness"], "(x1*x2*x3)/f^2");
    assert_eq!(a["p"], 1);

    let r = json(&["analyze", CUBIC, "--max-level", "2", "--max-degree", "7/3"]);
    let c = &r["meta"]["cutoffs"];
    assert_eq!(c["p_max"], 2);
    assert_eq!(c["delta_max"]["scaled"], 7);
    let max_p = r["filtration"]["tables"][0]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["p"].as_i64().unwrap())
        .max();
    assert_eq!(max_p, Some(2));
}

#[test]
fn text_output_mentions_key_facts() {
    let o = shl(&["analyze", CUBIC]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("mu = 8"));
    assert!(text.contains("DuBoisOnly"));
    assert!(text.contains("k0 = 1, k1 = 0"));
}

fn batch_lines(contents: &str, workers: &str) -> (i32, Vec<Value>) {
    let f = temp_file(contents);
    let o = Command::new(env!("CARGO_BIN_EXE_shl"))
        .args(["batch", f.path().to_str().unwrap(), "--json"])
        .env("SHL_WORKERS", workers)
        .output()
        .unwrap();
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    (
        code(&o),
        text.lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect(),
    )
}

#[test]
fn batch_of_running_examples() {
    let file =
        "x1^2+x2^2+x3^2\nx1^3+x2^3+x3^3\nx1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4 ; 1/6,1/4,1/4,1/4\n";
    let (c, out) = batch_lines(file, "3");
    assert_eq!(c, 0);
    let mus: Vec<i64> = out
        .iter()
        .map(|r| r["milnor"]["mu"].as_i64().unwrap())
        .collect();
    assert_eq!(mus, [1, 8, 135]);
}

#[test]
fn batch_keeps_input_order_and_reports_errors() {
    let file = "# three inputs\nx1^3*x2+x2^3\n\nx1^2*x2^2\nx1^4+x2^4 ; 1/4,1/4\n";
    let (c1, one) = batch_lines(file, "1");
    let (c4, four) = batch_lines(file, "4");
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(one.len(), 3);
    let inputs = |v: &[Value]| -> Vec<Value> {
        v.iter().map(|r| r["input"]["polynomial"].clone()).collect()
    };
    assert_eq!(inputs(&one), inputs(&four));
    assert_eq!(one[1]["line"], 4);
    assert_eq!(one[1]["exit_code"], 2);
    assert!(one[0]["milnor"].is_object() && one[2]["milnor"].is_object());
}

#[test]
fn batch_edge_cases() {
    let (c, out) = batch_lines("", "2");
    assert_eq!((c, out.len()), (0, 0));
    assert_eq!(code(&shl(&["batch", "/nonexistent/input.txt"])), 1);
}

#[test]
fn check_suites() {
    for suite in ["paper-examples", "symmetry", "poincare"] {
        let o = shl(&["check", suite]);
        assert_eq!(
            code(&o),
            0,
            "{suite}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
    assert_eq!(code(&shl(&["check", "bogus"])), 1);
}
