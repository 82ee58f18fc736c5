use std::path::Path;
use std::process::{Command, Output};

fn minbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minbound"))
        .args(args)
        .output()
        .expect("spawn minbound")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn machine(o: &Output) -> serde_json::Value {
    let text = stdout(o);
    let json = text.split("--- machine-readable ---\n").nth(1).expect("machine part");
    serde_json::from_str(json).unwrap()
}

const CIRCLE: &str = r#"
variables = ["x", "y"]
equalities = ["x^2 + y^2 - 1"]
objective = "x"

[component]
seed = ["1", "0"]
box = [["-2", "2"], ["-2", "2"]]
"#;

#[test]
fn circle_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "circle.toml", CIRCLE);
    let o = minbound(&["certify", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = machine(&o);
    let verdicts = m["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 4);
    assert!(verdicts.iter().all(|v| v["status"] == "pass"));
    assert_eq!(m["enclosure"]["value"]["hi"], "-1");
    assert_eq!(m["enclosure"]["value"]["kind"], "certified-enclosure");
    assert_eq!(m["minimum_display"]["kind"], "display-only-float");
}

#[test]
fn qpoly_single_selector() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "circle.toml", CIRCLE);
    let o = minbound(&["qpoly", &f, "--subset", "1", "--signs=-"]);
    assert_eq!(o.status.code(), Some(0));
    let m = machine(&o);
    let certs = m["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["q"]["value"], "4*U^2 - 4");
    assert_eq!(certs[0]["real_roots"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_selector_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "circle.toml", CIRCLE);
    assert_eq!(minbound(&["qpoly", &f, "--subset", "2"]).status.code(), Some(2));
    assert_eq!(minbound(&["qpoly", &f, "--subset", "1", "--signs", "+,+"]).status.code(), Some(2));
}

#[test]
fn odd_degree_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "odd.toml", "variables = [\"x\", \"y\"]\nequalities = [\"x^2 + y^2 - 1\"]\nd = 3\n");
    let o = minbound(&["bounds", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d must be even"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.toml", "variables = [\"x\"]\nequalities = [\"x^^2\"]\n");
    assert_eq!(minbound(&["bounds", &f]).status.code(), Some(2));
    let f = write(dir.path(), "unknown.toml", "variables = [\"x\"]\nequalitys = [\"x\"]\n");
    assert_eq!(minbound(&["bounds", &f]).status.code(), Some(2));
    assert_eq!(minbound(&["bounds", "/nonexistent/input.toml"]).status.code(), Some(2));
}

#[test]
fn oversized_elimination_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "big.toml",
        "variables = [\"a\", \"b\", \"c\", \"e\"]\nequalities = [\"a^6 + b^6 + c^6 + e^6 - 1\"]\n",
    );
    let o = minbound(&["qpoly", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("size guard"));
}

#[test]
fn certify_without_component_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.toml", "variables = [\"x\", \"y\"]\nequalities = [\"x^2 + y^2 - 1\"]\n");
    assert_eq!(minbound(&["certify", &f]).status.code(), Some(2));
}

#[test]
fn example_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = minbound(&["example", "--n", "2", "--d", "2", "--h", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let f = write(dir.path(), "ex.toml", &stdout(&o));

    let b = minbound(&["bounds", &f]);
    assert_eq!(b.status.code(), Some(0));
    // 1024^(-512)
    assert_eq!(machine(&b)["separation_bound"]["value"], "2^-5120");

    let s = minbound(&["separate", &f]);
    assert_eq!(s.status.code(), Some(0), "{}", stdout(&s));
    let m = machine(&s);
    assert_eq!(m["verdicts"][0]["status"], "pass");
    assert_eq!(m["distance"]["value"]["hi"], "1/2");

    // the emitted document is already canonical
    let b2 = minbound(&["bounds", &f]);
    let echoed = machine(&b2)["input"].as_str().unwrap().to_string();
    assert_eq!(echoed, std::fs::read_to_string(&f).unwrap());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "circle.toml", CIRCLE);
    let a = minbound(&["certify", &f, "--jobs", "1"]);
    let b = minbound(&["certify", &f, "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let ex = minbound(&["example", "--n", "3"]);
    let f = write(dir.path(), "ex3.toml", &stdout(&ex));
    let a = minbound(&["separate", &f]);
    let b = minbound(&["separate", &f]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "circle.toml", CIRCLE);
    let out = dir.path().join("report.txt");
    let o = minbound(&["bounds", &f, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().starts_with("# minbound bounds"));
}

#[test]
fn target_width_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "circle.toml", CIRCLE);
    assert_eq!(minbound(&["certify", &f, "--target-width", "0"]).status.code(), Some(2));
    assert_eq!(minbound(&["certify", &f, "--target-width", "1/1024"]).status.code(), Some(0));
}
