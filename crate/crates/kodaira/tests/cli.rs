use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn kodaira(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kodaira")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    kodaira(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(kodaira(args).stdout).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn golden_exit_codes() {
    // (document, [validate, coinv, verdict, signature])
    let table: &[(&str, [i32; 4])] = &[
        ("bad_shape.json", [2, 2, 2, 2]),
        ("base_mismatch.json", [3, 3, 3, 3]),
        ("cover_node.json", [0, 0, 1, 5]),
        ("ekkos.json", [0, 0, 4, 5]),
        ("every_node.json", [0, 0, 4, 5]),
        ("genus5_base2.json", [0, 0, 0, 5]),
        ("non_symplectic.json", [3, 3, 3, 3]),
        ("product.json", [0, 0, 1, 0]),
        ("product_explicit.json", [0, 0, 1, 0]),
        ("relator_violation.json", [3, 3, 3, 3]),
        ("signature_mismatch.json", [0, 0, 1, 3]),
        ("trefoil.json", [0, 0, 1, 0]),
        ("trefoil_explicit.json", [0, 0, 1, 0]),
        ("w_standin.json", [0, 0, 1, 0]),
        ("z_genus20.json", [0, 0, 1, 5]),
    ];
    for (doc, expected) in table {
        let p = path(doc);
        let got = ["validate", "coinv", "verdict", "signature"].map(|c| code(&[c, &p]));
        assert_eq!(&got, expected, "{doc}");
    }
}

#[test]
fn unreadable_and_malformed_inputs_are_schema_errors() {
    assert_eq!(code(&["validate", "/nonexistent/doc.json"]), 2);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(code(&["validate", p.to_str().unwrap()]), 2);
    assert_eq!(code(&["verdict", &path("trefoil.json"), "--cover-degrees", "1,6"]), 2);
}

#[test]
fn coinv_reports() {
    let t = stdout(&["coinv", &path("trefoil.json")]);
    assert!(t.contains("rank: 0\n") && t.contains("torsion: none") && t.contains("b1: 18\n"), "{t}");
    let p = stdout(&["coinv", &path("product.json")]);
    assert!(p.contains("rank: 6\n") && p.contains("q_f: 3\n") && p.contains("b1: 10\n"), "{p}");
    let e = stdout(&["coinv", &path("ekkos.json")]);
    assert!(e.contains("rank: [0, 5] (declared)"), "{e}");
    let j: serde_json::Value = serde_json::from_str(&stdout(&["coinv", &path("product.json"), "--output", "json"])).unwrap();
    assert_eq!(j["rank"], 6);
    assert_eq!(j["q_f"], 3);
}

#[test]
fn verdict_examples() {
    let out = kodaira(&["verdict", &path("product.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("excluded      torelli"), "{text}");

    let out = kodaira(&["verdict", &path("w_standin.json"), "--cover-degrees", "6", "--output", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sweep = v["outcomes"].as_array().unwrap().iter().find(|o| o["check"] == "cover_sweep").unwrap();
    assert_eq!(sweep["status"], "excluded");
    assert_eq!(sweep["witness"]["degree"], 6);
    assert_eq!(sweep["witness"]["cover_base_genus"], 49);
    let xiao = v["outcomes"].as_array().unwrap().iter().find(|o| o["check"] == "xiao").unwrap();
    assert_eq!(xiao["status"], "passed");

    let doc = path("genus5_base2.json");
    let out = kodaira(&["verdict", &doc, "--chi", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8(out.stdout).unwrap().contains("modified_xiao"));
    let out = kodaira(&["verdict", &doc, "--chi", "5", "--modified-xiao"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("conditional   modified_xiao"));
    assert_eq!(code(&["verdict", &doc, "--chi", "4"]), 1);
}

#[test]
fn exhaustive_cap_warns() {
    let out = kodaira(&["verdict", &path("trefoil_explicit.json"), "--exhaustive-cap", "3", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sweep = v["outcomes"].as_array().unwrap().iter().find(|o| o["check"] == "cover_sweep").unwrap();
    assert_eq!(sweep["status"], "inconclusive");
    assert!(sweep["warning"].is_string());
}

#[test]
fn every_excluded_outcome_names_a_witness() {
    for doc in ["product.json", "w_standin.json", "z_genus20.json", "trefoil.json"] {
        let out = kodaira(&["verdict", &path(doc), "--output", "json"]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        for o in v["outcomes"].as_array().unwrap() {
            if o["status"] == "excluded" {
                assert!(!o["detail"].as_str().unwrap().is_empty());
                if o["check"] == "cover_sweep" {
                    assert!(o["witness"].is_object());
                }
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["verdict", "w_standin.json", "--output", "json"],
        vec!["verdict", "every_node.json"],
        vec!["coinv", "cover_node.json", "--output", "json"],
        vec!["cover", "trefoil.json", "--degree", "4", "--twist-generator", "b3"],
    ] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        args[1] = path(&args[1]);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = kodaira(&args);
        let b = kodaira(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn cover_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cover.json");
    let o = out.to_str().unwrap();
    assert_eq!(code(&["cover", &path("trefoil.json"), "--degree", "6", "--twist-generator", "a1", "--out", o]), 0);
    let doc = kodaira::parse_document(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.base_genus(), 49);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let images = v["images"].as_array().unwrap();
    assert_eq!(images.len(), 2 * 9 * 6 - 6 + 1);
    assert!(images.iter().all(|m| *m == serde_json::json!([[1, 0], [0, 1]])));
    assert_eq!(stdout(&["coinv", o]).lines().find(|l| l.starts_with("rank")), Some("rank: 2"));

    // Degree 1 reproduces the input monodromy.
    let input = kodaira::parse_document(&std::fs::read_to_string(data("trefoil_explicit.json")).unwrap()).unwrap();
    let same = kodaira::parse_document(&stdout(&["cover", &path("trefoil_explicit.json"), "--degree", "1"])).unwrap();
    assert_eq!((same.fiber_genus(), same.base_genus()), (input.fiber_genus(), input.base_genus()));
    match (input.content(), same.content()) {
        (
            kodaira_core::monodromy::BundleContent::Explicit(a),
            kodaira_core::monodromy::BundleContent::GeneratingSet(b),
        ) => assert_eq!(a.images(), b.images()),
        _ => panic!("unexpected content"),
    }

    assert_eq!(code(&["cover", &path("ekkos.json"), "--degree", "6"]), 5);
    assert_eq!(code(&["cover", &path("trefoil.json"), "--degree", "6", "--twist-generator", "a10"]), 2);
    assert_eq!(code(&["cover", &path("trefoil.json"), "--degree", "6", "--images", "2,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,4"]), 2);
    assert_eq!(code(&["cover", &path("trefoil.json"), "--degree", "6", "--images", "1,-1"]), 2);
}

#[test]
fn signature_reports() {
    let t = stdout(&["signature", &path("product.json")]);
    assert_eq!(t, "computed signature: 0\ntracked signature: 0 (agrees)\n");
    let out = kodaira(&["signature", &path("signature_mismatch.json")]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("computed signature: 0") && text.contains("tracked signature: 4"));
    let dir = tempfile::tempdir().unwrap();
    let cover = dir.path().join("c.json");
    let c = cover.to_str().unwrap();
    assert_eq!(code(&["cover", &path("trefoil.json"), "--degree", "2", "--out", c]), 0);
    assert_eq!(code(&["signature", c]), 5);
}
