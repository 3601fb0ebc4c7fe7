use std::process::Command;

use treeauto::GeneratorSet;

fn treeauto(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_treeauto")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn classify_tullio() {
    let (code, out, _) = treeauto(&["classify", "--catalog", "tullio"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"a":{"class":"bounded"},"b":{"class":"polynomial","degree":1}}"#);
}

#[test]
fn eval_vertex_and_point() {
    let (code, out, _) = treeauto(&["eval", "--catalog", "tullio", "--word", "a", "--vertex", "011"]);
    assert_eq!((code, out.trim()), (0, r#""111""#));
    let (_, out, _) = treeauto(&["eval", "--catalog", "tullio", "--word", "b", "--vertex", "001100"]);
    assert_eq!(out.trim(), r#""001010""#);
    let (_, out, _) = treeauto(&["eval", "--catalog", "adding_machine", "--word", "a", "--point", ":1"]);
    assert_eq!(out.trim(), r#"":0""#);
}

#[test]
fn relations_of_the_adding_machine() {
    let (code, out, _) = treeauto(&["relations", "--catalog", "adding_machine", "--max-len", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["relators"], serde_json::json!([]));
    assert_eq!(v["complete"], true);
    assert_eq!(v["searched_length"], 10);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(treeauto(&["frobnicate"]).0, 1);
    assert_eq!(treeauto(&["classify"]).0, 1);
    assert_eq!(treeauto(&["classify", "--catalog", "nope"]).0, 1);
    assert_eq!(treeauto(&["eval", "--catalog", "tullio", "--word", "a"]).0, 1);
    assert_eq!(treeauto(&["eval", "--catalog", "tullio", "--word", "z", "--vertex", "0"]).0, 1);
    assert_eq!(treeauto(&["--help"]).0, 0);
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.aut");
    std::fs::write(&path, "alphabet 2\nstate a\nperm 1 0\non 0 -> zz\n").unwrap();
    let (code, _, err) = treeauto(&["classify", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn budget_exhaustion_exits_2() {
    let (code, out, _) = treeauto(&["relations", "--catalog", "aleshin", "--max-len", "10", "--budget", "50"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["complete"], false);
    let (code, out, _) = treeauto(&["nucleus", "--catalog", "tullio", "--max-size", "8"]);
    assert_eq!(code, 2);
    assert!(out.contains("exceeded_size"));
    let (code, _, _) = treeauto(&["schreier", "--catalog", "grigorchuk", "--level", "6", "--budget", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn catalog_dump_round_trips() {
    let (_, list, _) = treeauto(&["catalog", "list"]);
    let list: serde_json::Value = serde_json::from_str(&list).unwrap();
    assert_eq!(list.as_array().unwrap().len(), 6);
    for name in treeauto::catalog::NAMES {
        let (code, text, _) = treeauto(&["catalog", "dump", name]);
        assert_eq!(code, 0);
        let parsed = GeneratorSet::parse(&text).unwrap();
        let original = treeauto::catalog::builtin(name).unwrap().generators;
        assert_eq!(parsed.names(), original.names());
        assert_eq!(parsed.elements(), original.elements());
    }
}

#[test]
fn dot_export_and_nucleus_file() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let (code, _, _) = treeauto(&["schreier", "--catalog", "adding_machine", "--level", "2", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("style=bold").count(), 1);

    let machine = dir.path().join("n.aut");
    let (code, out, _) = treeauto(&["nucleus", "--catalog", "grigorchuk", "--output", machine.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 5);
    let n = GeneratorSet::parse(&std::fs::read_to_string(&machine).unwrap()).unwrap();
    assert_eq!(n.len(), 4);
}

#[test]
fn json_envelope() {
    let (_, out, _) = treeauto(&["--json", "theta", "--catalog", "tullio", "--level", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "theta");
    assert_eq!(v["budget_exhausted"], false);
    assert_eq!(v["payload"]["b"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn every_command_is_deterministic() {
    let runs: &[&[&str]] = &[
        &["eval", "--catalog", "tullio", "--word", "a b", "--vertex", "0110"],
        &["classify", "--catalog", "grigorchuk"],
        &["theta", "--catalog", "basilica", "--level", "8"],
        &["measure", "--catalog", "aleshin", "--level", "6"],
        &["nucleus", "--catalog", "basilica"],
        &["germs", "--catalog", "grigorchuk", "--point", ":1"],
        &["schreier", "--catalog", "tullio", "--level", "4"],
        &["folner", "--catalog", "grigorchuk", "--level", "5"],
        &["relations", "--catalog", "grigorchuk", "--max-len", "4"],
        &["stabilizer", "--catalog", "tullio", "--point", ":0", "--max-len", "4"],
        &["trichotomy", "--catalog", "adding_machine", "--max-len", "4"],
        &["catalog", "list"],
        &["catalog", "dump", "gupta_sidki_3"],
    ];
    for args in runs {
        let first = treeauto(args);
        assert_eq!(first.0, 0, "{args:?}: {}", first.2);
        assert_eq!(first, treeauto(args), "{args:?}");
    }
}
