use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn addact() -> Command {
    let mut cmd = Command::cargo_bin("addact").unwrap();
    cmd.env_remove("ADDACT_MAX_DIM");
    cmd
}

fn stdout_of(args: &[&str]) -> String {
    let out = addact().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn twisted_file(a: &str, b: &str) -> PathBuf {
    let doc = stdout_of(&["spair", "--n", "1", "--a", a, "--b", b, "--variant", "twisted", "--json"]);
    write_temp(&format!("twisted_{a}_{b}.json"), &doc)
}

#[test]
fn section_tables() {
    let v = json_of(&["sections", "--n", "1", "--a", "1", "--b", "2", "--json"]);
    assert_eq!(v["sections"].as_array().unwrap().len(), 5);
    let v = json_of(&["sections", "--n", "0", "--a", "1", "--b", "1", "--json"]);
    assert_eq!(v["count"], 4);
    let v = json_of(&["sections", "--n", "2", "--a", "2", "--b", "5", "--json"]);
    assert_eq!((v["count"].as_u64(), v["formula"].as_i64()), (Some(12), Some(12)));
    assert!(stdout_of(&["sections", "--n", "1", "--a", "-1", "--b", "3"]).contains("count 0"));
}

#[test]
fn spair_documents() {
    let v = json_of(&["spair", "--n", "1", "--a", "1", "--b", "2", "--json"]);
    assert_eq!(v["vars"], serde_json::json!(["x", "y"]));
    assert_eq!(v["ideal"].as_array().unwrap().len(), 3);
    let v = json_of(&["spair", "--n", "1", "--a", "1", "--b", "2", "--variant", "twisted", "--json"]);
    assert_eq!(v["dim"], 5);
    assert_eq!(v["U"].as_array().unwrap().len(), 2);
    addact().args(["spair", "--n", "0", "--a", "1", "--b", "1", "--variant", "twisted"]).assert().code(5);
    addact().args(["spair", "--n", "1", "--a", "1", "--b", "1"]).assert().code(5);
}

#[test]
fn algebra_queries() {
    let file = twisted_file("1", "3");
    let path = file.to_str().unwrap();
    assert_eq!(stdout_of(&["algebra", "hs", path]).trim(), "1 2 2 1 1");
    let v = json_of(&["algebra", "gorenstein", path, "--json"]);
    assert_eq!(v["gorenstein"], false);
    let v = json_of(&["algebra", "socle", path, "--json"]);
    assert_eq!(v["dim"], 2);
    let line = write_temp("line.json", r#"{"vars":["x"],"ideal":[[4]]}"#);
    assert_eq!(stdout_of(&["algebra", "gorenstein", line.to_str().unwrap()]).trim(), "true");
}

#[test]
fn relations_report() {
    let v = json_of(&["relations", "--a", "1", "--b", "2", "--json"]);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(stdout_of(&["relations", "--a", "1", "--b", "2"]).ends_with("pass\n"));
    addact().args(["relations", "--a", "2", "--b", "3"]).assert().code(5);
}

#[test]
fn implicitize_quadrics() {
    let file = write_temp("cusp.json", r#"{"vars":["t","s"],"ideal":[[3,0],[1,1],[0,3]]}"#);
    let v = json_of(&["implicitize", file.to_str().unwrap(), "--degree", "2", "--json"]);
    assert_eq!(v["forms"], serde_json::json!(["z1^2 - 2*z0*z3", "z2^2 - 2*z0*z4"]));
}

#[test]
fn monomiality_verdicts() {
    let a12 = twisted_file("1", "2");
    let v = json_of(&["monomiality", a12.to_str().unwrap(), "--json"]);
    assert_eq!(v["verdict"], "monomial");
    assert_eq!(v["certificate"]["target_ideal"], "(z^4, z*w, w^2)");
    let a13 = twisted_file("1", "3");
    let v = json_of(&["monomiality", a13.to_str().unwrap(), "--json"]);
    assert_eq!(v["verdict"], "non_monomial");
    assert_eq!(v["refutations"].as_array().unwrap().len(), 2);
    addact().env("ADDACT_MAX_DIM", "6").args(["monomiality", a13.to_str().unwrap()]).assert().code(5);
}

#[test]
fn json_output_is_deterministic() {
    let a12 = twisted_file("1", "2");
    let args = ["monomiality", a12.to_str().unwrap(), "--json"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn error_exit_codes() {
    addact().args(["algebra", "hs", "/nonexistent/file.json"]).assert().code(3);
    let bad = write_temp("bad.json", "{\"dim\": 2,\n \"mult\": [\n");
    let out = addact().args(["algebra", "hs", bad.to_str().unwrap()]).assert().code(4).get_output().stderr.clone();
    assert!(String::from_utf8(out).unwrap().contains("line"));
    let nonlocal = write_temp("split.json", r#"{"dim":2,"unit":0,"mult":[[0,0,0,1],[0,1,1,1],[1,1,1,1]]}"#);
    addact().args(["algebra", "hs", nonlocal.to_str().unwrap()]).assert().code(5);
    addact().args(["sections", "--n", "1"]).assert().code(2);
    assert!(stdout_of(&["--help"]).contains("Exit codes"));
}

#[test]
fn verify_filter() {
    let v = json_of(&["verify", "--filter", "sections", "--json"]);
    assert_eq!(v["total"], 1);
    assert_eq!(v["results"][0]["key"], "sections");
    assert_eq!(v["results"][0]["passed"], true);
    let text = stdout_of(&["verify", "--filter", "monomiality"]);
    assert!(text.starts_with("PASS  8 monomiality"));
}
