use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use permlat::examples::fixture_torsion_coinvariants;
use permlat::glattice::GLattice;
use permlat::group::GroupSpec;
use permlat::json::{diagram_to_json, lattice_to_json};
use serde_json::Value;
use tempfile::TempDir;

fn permlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permlat"))
        .args(args)
        .env_remove("PERMLAT_DATA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_example_shapes() {
    let d = json_out(&permlat(&["gen-example", "--p", "3"]));
    assert_eq!(d["dimV"], 5);
    let l = json_out(&permlat(&["gen-example", "--p", "3", "--emit-lattice"]));
    assert_eq!(l["dim"], 11);
    let c = json_out(&permlat(&["gen-example", "--c2cube"]));
    assert_eq!(c["dim"], 11);
    assert_eq!(c["rank_k"], 3);
}

#[test]
fn gen_example_rejects_even_p() {
    let o = permlat(&["gen-example", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = permlat(&["gen-example"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conversions_round_trip() {
    let dir = TempDir::new().unwrap();
    for p in [3u64, 5] {
        let d = dir.path().join(format!("d{p}.json"));
        let l = dir.path().join(format!("l{p}.json"));
        let d2 = dir.path().join(format!("d{p}b.json"));
        let l2 = dir.path().join(format!("l{p}b.json"));
        assert!(permlat(&["gen-example", "--p", &p.to_string(), "--out", s(&d)]).status.success());
        assert!(permlat(&["to-lattice", s(&d), "--out", s(&l)]).status.success());
        let lat: Value = serde_json::from_str(&std::fs::read_to_string(&l).unwrap()).unwrap();
        assert_eq!(lat["dim"], p * p + p - 1);
        assert!(permlat(&["to-diagram", s(&l), "--out", s(&d2)]).status.success());
        assert!(permlat(&["to-lattice", s(&d2), "--out", s(&l2)]).status.success());
        let lat2: Value = serde_json::from_str(&std::fs::read_to_string(&l2).unwrap()).unwrap();
        assert_eq!(lat2["dim"], lat["dim"]);
    }
}

#[test]
fn regular_lattice_is_not_reduced() {
    let dir = TempDir::new().unwrap();
    let g = GroupSpec::standard(3, 2).unwrap();
    let f = write(&dir, "reg.json", &lattice_to_json(&GLattice::regular(&g)));
    let o = permlat(&["to-diagram", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotReduced"));
    // still a permutation lattice
    let o = permlat(&["check", s(&f), "--json"]);
    let r = json_out(&o);
    let perm: Vec<&Value> =
        r["entries"].as_array().unwrap().iter().filter(|e| e["question"] == "U permutation").collect();
    assert!(perm.iter().any(|e| e["verdict"] == "yes"));
    assert!(perm.iter().all(|e| e["verdict"] != "no"));
}

fn verdicts(r: &Value, route: &str) -> Vec<String> {
    ["U^N permutation", "U_N lattice", "U_N permutation", "U permutation"]
        .iter()
        .map(|q| {
            r["entries"]
                .as_array()
                .unwrap()
                .iter()
                .find(|e| e["question"] == *q && e["route"] == route)
                .map(|e| e["verdict"].as_str().unwrap().to_string())
                .unwrap_or_default()
        })
        .collect()
}

#[test]
fn check_odd_p_lattice_pattern() {
    let dir = TempDir::new().unwrap();
    let l = dir.path().join("l.json");
    assert!(permlat(&["gen-example", "--p", "3", "--emit-lattice", "--out", s(&l)]).status.success());
    let r = json_out(&permlat(&["check", s(&l), "--json"]));
    assert_eq!(r["consistent"], true);
    for route in ["matrix", "diagram"] {
        assert_eq!(verdicts(&r, route), ["yes", "yes", "yes", "no"], "{route}");
    }
    for e in r["entries"].as_array().unwrap() {
        assert!(!e["operation"].as_str().unwrap().is_empty());
        assert!(!e["tag"].as_str().unwrap().is_empty());
    }
    let o = permlat(&["check", s(&l), "--N", "nc^2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("N = <nc^2>"));
    assert_eq!(permlat(&["check", s(&l), "--N", "q"]).status.code(), Some(2));
}

#[test]
fn check_torsion_coinvariants_diagram() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "torsion.json", &diagram_to_json(&fixture_torsion_coinvariants()));
    let r = json_out(&permlat(&["check", s(&f), "--json"]));
    assert_eq!(verdicts(&r, "diagram")[1], "no");
    assert_eq!(verdicts(&r, "matrix")[1], "no");
}

#[test]
fn check_invalid_lattice_fails_verification() {
    let dir = TempDir::new().unwrap();
    let v = serde_json::json!({"p": 3, "rank_k": 1, "generators": ["n"], "dim": 1, "actions": {"n": [[2]]}});
    let f = write(&dir, "bad.json", &v);
    assert_eq!(permlat(&["check", s(&f)]).status.code(), Some(1));
    std::fs::write(dir.path().join("junk.json"), "{ not json").unwrap();
    assert_eq!(permlat(&["check", s(&dir.path().join("junk.json"))]).status.code(), Some(2));
}

#[test]
fn decompose_and_fp_check() {
    let dir = TempDir::new().unwrap();
    let g = GroupSpec::cyclic(5, "n").unwrap();
    let f = write(&dir, "reg5.json", &lattice_to_json(&GLattice::regular(&g)));
    let r = json_out(&permlat(&["decompose", s(&f)]));
    assert_eq!((r["trivial"].clone(), r["augmentation"].clone(), r["free"].clone()), (0.into(), 0.into(), 1.into()));

    let g = GroupSpec::standard(2, 2).unwrap();
    let f = write(&dir, "reg4.json", &lattice_to_json(&GLattice::regular(&g)));
    let r = json_out(&permlat(&["decompose", s(&f)]));
    assert_eq!(r["summands"].as_array().unwrap().len(), 1);
    let r = json_out(&permlat(&["fp-check", s(&f)]));
    assert_eq!(r["verdict"], "yes");
    let again = json_out(&permlat(&["fp-check", s(&f), "--seed", "7"]));
    assert_eq!(again["verdict"], "yes");
}

#[test]
fn verify_examples_passes() {
    let o = permlat(&["verify-examples"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("all claims verified"));
    let r = json_out(&permlat(&["verify-examples", "--json"]));
    assert_eq!(r["pass"], true);
    assert!(r["first_failure"].is_null());
    assert!(r["sections"].as_array().unwrap().len() >= 6);
    assert_eq!(permlat(&["verify-paper", "--json"]).stdout, permlat(&["verify-examples", "--json"]).stdout);
}

#[test]
fn corrupted_fixture_fails_at_validate() {
    let dir = TempDir::new().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    for name in ["oddp_p3_lattice.json", "c2cube_lattice.json"] {
        std::fs::copy(data.join(name), dir.path().join(name)).unwrap();
    }
    let f = dir.path().join("oddp_p3_lattice.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let e = &mut v["actions"]["n"][0][0];
    *e = Value::from(e.as_i64().unwrap() + 1);
    std::fs::write(&f, serde_json::to_string(&v).unwrap()).unwrap();

    let ok = permlat(&["verify-examples", "--data-dir", s(&dir.path().join("missing"))]);
    assert_eq!(ok.status.code(), Some(2));
    let o = permlat(&["verify-examples", "--data-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("oddp_p3_lattice.json: validate"), "{err}");
}

#[test]
fn output_is_deterministic_and_rereadable() {
    let dir = TempDir::new().unwrap();
    let a = permlat(&["gen-example", "--p", "5", "--emit-lattice"]);
    let b = permlat(&["gen-example", "--p", "5", "--emit-lattice"]);
    assert_eq!(a.stdout, b.stdout);
    let f = dir.path().join("l.json");
    std::fs::write(&f, &a.stdout).unwrap();
    let c1 = permlat(&["check", s(&f), "--json"]);
    let c2 = permlat(&["check", s(&f), "--json"]);
    assert_eq!(c1.stdout, c2.stdout);
    let d1 = permlat(&["to-diagram", s(&f)]);
    let d2 = permlat(&["to-diagram", s(&f)]);
    assert_eq!(d1.stdout, d2.stdout);
    let df = dir.path().join("d.json");
    std::fs::write(&df, &d1.stdout).unwrap();
    assert!(permlat(&["check", s(&df)]).status.success());
    let c = dir.path().join("c.json");
    assert!(permlat(&["gen-example", "--c2cube", "--out", s(&c)]).status.success());
    assert!(permlat(&["decompose", s(&c)]).status.success());
    assert_eq!(permlat(&["verify-examples", "--json"]).stdout, permlat(&["verify-examples", "--json"]).stdout);
}
