use std::path::PathBuf;
use std::process::{Command, Output};

use hrel::verify::Report;
use serde_json::Value;

fn catalog(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog").join(name)
}

fn hrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrel"))
        .args(args)
        .env_remove("HREL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn parse_catalog_file() {
    let o = hrel(&["parse", catalog("phase_u1.rep").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "OK");
}

#[test]
fn parse_unknown_identifier() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rep");
    std::fs::write(&path, "param b = 0;\nrep U : state = exp(b * Q);\n").unwrap();
    let o = hrel(&["parse", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("'Q'"), "{err}");
    assert!(err.contains("line 2, column 25"), "{err}");
}

#[test]
fn parse_missing_file() {
    assert_eq!(hrel(&["parse", "/no/such/file.rep"]).status.code(), Some(3));
}

#[test]
fn derive_phase_generator() {
    let o = hrel(&["derive", catalog("phase_u1.rep").to_str().unwrap(), "--omega", "b"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = v["generators"].as_array().unwrap().iter().find(|g| g["rep"] == "I").unwrap();
    // −q/(ie) with q = e = 1 is i
    assert_eq!(g["re"][0][0].as_f64().unwrap(), 0.0);
    assert!((g["im"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!(g["flow"].is_null());
}

#[test]
fn derive_vector_catalog_all() {
    let o = hrel(&["derive", catalog("poincare_vector.rep").to_str().unwrap(), "--omega", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    let gens = v["generators"].as_array().unwrap();
    let d: Vec<_> = gens.iter().filter(|g| g["rep"] == "D_vector").collect();
    assert_eq!(d.len(), 10);
    for g in gens.iter().filter(|g| g["rep"] == "H") {
        let omega = g["omega"].as_str().unwrap();
        let flow = &g["flow"];
        assert_eq!(flow["delta"].as_f64().unwrap(), 0.0, "{omega}");
        assert_eq!(flow["shift_part"].as_array().unwrap().len(), 4);
        assert!(g["fd_discrepancy"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn derive_table_and_bad_omega() {
    let path = catalog("dilation_affine.rep");
    let o = hrel(&["derive", path.to_str().unwrap(), "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("delta 4"));
    assert_eq!(hrel(&["derive", path.to_str().unwrap(), "--omega", "zz"]).status.code(), Some(2));
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let a = hrel(&["verify", "--all", "--degree", "4", "--seed", "42", "--format", "json"]);
    let b = hrel(&["verify", "--all", "--degree", "4", "--seed", "42", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let r = Report::from_json(&stdout(&a)).unwrap();
    assert!(r.pass);
    assert_eq!(r.seed, 42);
    assert_eq!(r.relations.len(), hrel::verify::RELATION_NAMES.len());
}

#[test]
fn unreachable_tolerance_fails() {
    let o = hrel(&["verify", "--relation", "poincare-scalar", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert!(!r.pass);
    assert!(r.relations[0].records.iter().any(|x| x.residual > 1e-20));
}

#[test]
fn fock_charge_two() {
    let o = hrel(&["verify", "--relation", "fock-charge", "--charge", "2", "--cutoff", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert!(r.relations[0].records.iter().all(|x| x.residual < 1e-12));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hrel"));
        c.args(["verify", "--relation", "frame-vector", "--degree", "2"]).args(args);
        match env {
            Some(v) => c.env("HREL_SEED", v),
            None => c.env_remove("HREL_SEED"),
        };
        c.output().unwrap()
    };
    let seed_of = |o: &Output| Report::from_json(&stdout(o)).unwrap().seed;
    assert_eq!(seed_of(&run(None, &[])), 42);
    assert_eq!(seed_of(&run(Some("7"), &[])), 7);
    assert_eq!(seed_of(&run(Some("7"), &["--seed", "9"])), 9);
    assert_eq!(run(Some("x"), &[]).status.code(), Some(2));
}

#[test]
fn physical_rescale_keeps_status() {
    let plain = Report::from_json(&stdout(&hrel(&["verify", "--all", "--degree", "2"]))).unwrap();
    let phys = Report::from_json(&stdout(&hrel(&["verify", "--all", "--degree", "2", "--physical"]))).unwrap();
    assert_eq!(plain.pass, phys.pass);
    for (a, b) in plain.relations.iter().zip(&phys.relations) {
        assert_eq!(a.pass, b.pass, "{}", a.name);
    }
}

#[test]
fn out_file_and_report_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hrel(&["verify", "--relation", "fock-global", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let t = hrel(&["report", out.to_str().unwrap()]);
    assert_eq!(t.status.code(), Some(0));
    assert!(stdout(&t).contains("fock-global [fock-global] PASS"));
    let j = hrel(&["report", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(j.stdout, std::fs::read(&out).unwrap());

    std::fs::write(&out, "{\"schema_version\": 1}").unwrap();
    assert_eq!(hrel(&["report", out.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hrel(&["report", "/no/such.json"]).status.code(), Some(3));
    let unwritable = dir.path().join("missing-dir").join("r.json");
    assert_eq!(
        hrel(&["verify", "--relation", "fock-global", "--out", unwritable.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn user_rep_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("boost.rep");
    std::fs::write(
        &path,
        "param x = 0;\n\
         let K = [[0,1,0,0],[1,0,0,0],[0,0,0,0],[0,0,0,0]];\n\
         rep H : coordinate = affine(exp(-x * K), [[0],[0],[0],[0]]);\n\
         rep D : component = exp(x * K);\n",
    )
    .unwrap();
    let o = hrel(&["verify", path.to_str().unwrap(), "--format", "table"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("boost:H-D"));
}

#[test]
fn numerical_failure_names_relation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("huge.rep");
    std::fs::write(&path, "param x = 0;\nrep D : component = exp(x * [[1e300, 0], [0, 1]]);\n").unwrap();
    let o = hrel(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("huge:"), "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    assert_eq!(hrel(&["verify"]).status.code(), Some(2));
    assert_eq!(hrel(&["verify", "--relation", "bogus"]).status.code(), Some(2));
    assert_eq!(hrel(&["verify", "--all", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(hrel(&["frobnicate"]).status.code(), Some(2));
}
