use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn adelic(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_adelic")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn forge(dir: &Path, field: &str, n: usize) -> String {
    let path = dir.join(format!("{field}-{n}.json")).to_str().unwrap().to_string();
    let (code, out) = adelic(&["forge", "--field", field, "-n", &n.to_string(), "-o", &path]);
    assert_eq!(code, 0);
    serde_json::from_str::<Value>(&out).expect("stdout is JSON");
    path
}

fn edit(path: &str, target: &Path, f: impl FnOnce(&mut Value)) -> String {
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    f(&mut doc);
    std::fs::write(target, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    target.to_str().unwrap().to_string()
}

#[test]
fn worked_certificate_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert = forge(dir.path(), "f2", 3);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["terms"], serde_json::json!(["u", "u^4*v", "u^11*v^2 + u^10*v^3"]));
    assert_eq!(adelic(&["verify", &cert]).0, 0);

    let tampered = edit(&cert, &dir.path().join("t.json"), |d| d["terms"][1] = "u^6*v".into());
    let (code, out) = adelic(&["verify", &tampered]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["failures"].as_array().unwrap().iter().any(|f| f == "nonvanishing[2]"));
}

#[test]
fn schema_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cert = forge(dir.path(), "f2", 3);
    let missing = edit(&cert, &dir.path().join("m.json"), |d| {
        d.as_object_mut().unwrap().remove("schedule");
    });
    assert_eq!(adelic(&["verify", &missing]).0, 3);
    let noncanonical = edit(&cert, &dir.path().join("n.json"), |d| d["tower"]["witnesses"][1] = "v*u^2".into());
    assert_eq!(adelic(&["verify", &noncanonical]).0, 3);
    let extra = edit(&cert, &dir.path().join("e.json"), |d| d["comment"] = "hi".into());
    assert_eq!(adelic(&["verify", &extra]).0, 3);
}

#[test]
fn forge_verify_roundtrip_up_to_six() {
    let dir = tempfile::tempdir().unwrap();
    for n in 2..=6 {
        let cert = forge(dir.path(), "f2", n);
        assert_eq!(adelic(&["verify", &cert]).0, 0, "verify N = {n}");
        assert_eq!(adelic(&["roundtrip", "--cert", &cert]).0, 0, "roundtrip N = {n}");
    }
}

#[test]
fn json_re_emission_is_byte_identical() {
    let (code, first) = adelic(&["forge", "--field", "f3", "-n", "4"]);
    assert_eq!(code, 0);
    let doc: adelic::forge::CertificateDocument = serde_json::from_str(&first).unwrap();
    assert_eq!(doc.to_json(), first);
}

#[test]
fn not_poly_and_prefix_too_short() {
    let dir = tempfile::tempdir().unwrap();
    let cert = forge(dir.path(), "f2", 3);
    let (code, out) = adelic(&["verify", &cert, "--not-poly", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["not_polynomial"]["evidence"][0]["n"], 2);
    assert_eq!(adelic(&["verify", &cert, "--not-poly", "5"]).0, 2);
}

#[test]
fn residues_and_series_from_residues() {
    let dir = tempfile::tempdir().unwrap();
    let cert = forge(dir.path(), "f2", 4);
    let (code, residues) = adelic(&["residues", "--cert", &cert]);
    assert_eq!(code, 0);
    let path = dir.path().join("r.json");
    std::fs::write(&path, &residues).unwrap();
    let (code, out) = adelic(&["series-from-residues", "--residues", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let series: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(series["terms"].as_array().unwrap().len(), 4);

    // a lift of r_2 that is off by a non-member
    let r: Value = serde_json::from_str(&residues).unwrap();
    let mut lifts: Vec<String> = r["residues"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    lifts[1] = "1".into();
    let lifts_path = dir.path().join("l.json");
    std::fs::write(&lifts_path, serde_json::to_string(&lifts).unwrap()).unwrap();
    let (code, _) = adelic(&["series-from-residues", "--residues", path.to_str().unwrap(), "--lifts", lifts_path.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn restrict_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let cert = forge(dir.path(), "f2", 3);
    let (code, out) = adelic(&["restrict", "--cert", &cert, "--curve", "v", "--precision", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["numerator"], "u");
    let (code, out) = adelic(&["value", "--cert", &cert, "--point", "(0,0)", "--precision", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["value"].as_str(), v["stabilization_index"].as_u64()), (Some("u"), Some(3)));
    assert_eq!(adelic(&["restrict", "--cert", &cert, "--curve", "u + 1", "--precision", "1"]).0, 2);
}

#[test]
fn lines_and_gap_check() {
    let dir = tempfile::tempdir().unwrap();
    let lambdas = dir.path().join("l.json");
    std::fs::write(&lambdas, r#"[{"lambda":"0","bound":2},{"lambda":"1","bound":2}]"#).unwrap();
    let (code, out) = adelic(&["lines", "--evasion", "4", "--field", "f2", "--lambdas", lambdas.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["verdict"], "inconclusive");
    let (code, out) = adelic(&["gap-check", "--field", "f2", "--level", "3", "--krull", "2"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["gap"]["status"], "verified");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(adelic(&["bogus"]).0, 1);
    assert_eq!(adelic(&["forge", "--field", "f2"]).0, 1);
    assert_eq!(adelic(&["forge", "--field", "f2", "-n", "3", "--wat"]).0, 1);
}
