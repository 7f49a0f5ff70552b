use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nodal-kernel"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn kernel_lines() {
    assert_eq!(run(&["kernel", "--dim", "5"]), (0, "cone(j*S' -> j*S''[2]), 3-spherical: pass\n".into(), String::new()));
    assert_eq!(run(&["kernel", "--dim", "4"]).1, "j*S, 2-spherical: pass\n");
    assert_eq!(run(&["kernel", "--dim", "1"]).0, 3);
}

#[test]
fn cohomology_and_homs() {
    assert_eq!(run(&["cohom", "--quadric", "3", "S(1)"]).1, "C^4\n");
    assert_eq!(run(&["hom", "--context", "nodal:5", "j*S'", "j*S''"]).1, "C[−2]\n");
    assert_eq!(run(&["hom", "--context", "nodal:4", "j*S", "j*S"]).1, "C ⊕ C[−2]\n");
    assert_eq!(run(&["mutate", "--context", "quadric:4", "--dir", "right", "--through", "O", "S''"]).1, "S'(1)[-1]\n");
    assert_eq!(run(&["serre", "--context", "nodal:6", "--relative", "j*S"]).1, "j*S[-4]\n");
    assert_eq!(run(&["mukai", "t*S"]).1, "ch = 2 - h + (1/12)h^3\nv = (2, -1·H, 2)\n<v,v> = -2\n");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["hom", "--context", "nodal:5", "cone(j*S' ->", "j*S'"]);
    assert_eq!(code, 3);
    assert!(err.contains("column 13"), "{err}");
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["mutate", "--context", "nodal:4", "--dir", "up", "--through", "j*O", "j*S"]).0, 3);
    assert_eq!(run(&["hom", "--context", "cubic", "OY", "OY(H)"]).0, 2);
    assert_eq!(run(&["hom", "--context", "nodal:4", "j*O(7)", "j*S"]).0, 2);
    assert_eq!(run(&["cohom", "--quadric", "4", "S"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn verify_writes_golden_json_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let first = run(&["verify", "--dims", "4..5", "--json", p]);
    assert_eq!(first.0, 0);
    assert!(first.1.ends_with("all_pass: true\n"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("verify_4_5.json"));
    assert_eq!(run(&["verify", "--dims", "4..5", "--json", p]), first);
}

#[test]
fn verify_full_range() {
    let (code, out, _) = run(&["verify", "--dims", "2..13"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 13);
    let order: Vec<&str> = out.lines().take(12).map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(order.first(), Some(&"dim  2"));
    assert_eq!(order.last(), Some(&"dim 13"));
}

#[test]
fn cubic_json_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cubic.json");
    let (code, out, _) = run(&["cubic4", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("5. p_* [R4] -> t*S[1]"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, golden("cubic4.json"));
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["all_pass"], true);
    assert_eq!(json["trace"].as_array().unwrap().len(), 5);
    assert_eq!(json["trace"][0]["hom_evidence"], serde_json::json!({}));
    assert_eq!(json["trace"][2]["hom_evidence"], serde_json::Value::Null);
}
