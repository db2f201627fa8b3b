use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::{tempdir, NamedTempFile};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circlefix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_circlefix"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

const SPHERES: &str = "+ 7 2 3\n- 7 2 3\n+ 5 2 3\n- 5 2 3\n";
const BAD_III: &str = "+ 3 5 1\n+ 3 4 2\n- 5 4 2\n- 1 2 2\n";

#[test]
fn check_passes_on_sphere_pair() {
    let f = file(SPHERES);
    let o = run(&["check", path(&f)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn check_reports_abbv_value() {
    let f = file(BAD_III);
    let o = run(&["--json", "check", path(&f)]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let abbv = &v["reports"][0];
    assert_eq!(abbv["check"]["name"], "abbv_integral_one");
    assert_eq!(abbv["verdict"], "fail");
    assert_eq!(abbv["witness"]["value"], "-1/6");
    assert!(abbv["message"].as_str().unwrap().contains("-1/6"));
}

#[test]
fn check_empty_input_is_vacuous() {
    let o = run(&["check", "/dev/null"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn check_parse_error_exits_2() {
    let f = file("+ 1 2\n* 1 2\n");
    let o = run(&["check", path(&f)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&run(&["check", "/no/such/file"])), 2);
}

#[test]
fn check_with_order_prints_series() {
    let f = file(SPHERES);
    let o = run(&["check", path(&f), "--order", "4", "--pair-weights", "2,3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("series through t^4: 0 0 0 0 0"));
}

#[test]
fn classify_fixtures() {
    let f = file(SPHERES);
    let v = json(&run(&["--json", "classify", path(&f)]));
    assert_eq!(v["matches"][0]["verdict"], "Case1");

    let cp3 = stdout(&run(&["gen", "cp3", "1", "2", "3"]));
    let o = run_stdin(&["--json", "classify", "-"], &cp3);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["matches"].as_array().unwrap().len(), 1);
    assert_eq!(v["matches"][0]["verdict"], "Case2");
    assert_eq!(v["matches"][0]["params"], serde_json::json!({"a": 1, "b": 2, "c": 3}));
}

#[test]
fn classify_four_dimensional() {
    let f = file("+ 1 2\n+ 1 2\n- 1 1\n");
    let o = run(&["--json", "classify", "--effective", path(&f)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["matches"][0]["verdict"], "FourDimReachable");
    assert_eq!(v["matches"][0]["trace"].as_array().unwrap().len(), 2);

    let single = file("+ 1 1\n");
    assert_eq!(code(&run(&["classify", path(&single)])), 1);
    let odd_shape = file("+ 1 1 1\n- 1 1 1\n+ 1 1 1\n");
    assert_eq!(code(&run(&["classify", path(&odd_shape)])), 2);
}

#[test]
fn classify_unclassified_lists_failures() {
    let f = file(BAD_III);
    let o = run(&["classify", path(&f)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NotInClassification"));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn graphs_tags() {
    let cp3 = stdout(&run(&["gen", "cp3", "1", "2", "3"]));
    let o = run_stdin(&["--json", "graphs", "-"], &cp3);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let tags: Vec<&str> = v["graphs"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|g| g["figure1"]["tag"].as_str())
        .collect();
    assert!(tags.contains(&"E"), "{tags:?}");

    let pair = stdout(&run(&["gen", "s6pair", "1", "2", "3", "4", "5", "6"]));
    let o = run_stdin(&["graphs", "-"], &pair);
    assert!(stdout(&o).contains("[A]"));

    let pair = stdout(&run(&["gen", "s6pair", "1", "2", "3", "1", "2", "3"]));
    let v = json(&run_stdin(&["--json", "graphs", "-"], &pair));
    assert!(v["count"].as_u64().unwrap() > 1);
    for g in v["graphs"].as_array().unwrap() {
        let tag = g["figure1"]["tag"].as_str().unwrap();
        assert!(["A", "B", "C", "D", "E"].contains(&tag));
    }
}

#[test]
fn graphs_parity_failure_and_emit() {
    let f = file("+ 1 2 3\n- 1 2 4\n");
    assert_eq!(code(&run(&["graphs", path(&f)])), 1);

    let dir = tempdir().unwrap();
    let out = dir.path().join("graphs.txt");
    let f = file(SPHERES);
    let o = run(&["graphs", path(&f), "--emit", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("vertex 0 +"));
}

#[test]
fn reduce_examples() {
    let dir = tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let f = file(SPHERES);
    let o = run(&["reduce", path(&f), "--emit-trace", trace.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("in 2 moves"));
    assert_eq!(std::fs::read_to_string(&trace).unwrap().lines().count(), 2);

    let cp3 = stdout(&run(&["gen", "cp3", "1", "2", "3"]));
    let v = json(&run_stdin(&["--json", "reduce", "-"], &cp3));
    assert_eq!(v["outcome"], "reduced");
    let moves = v["moves"].as_array().unwrap();
    assert_eq!(moves.len(), 3);
    assert_eq!(moves[0]["op"], 2);
    assert_eq!(moves[0]["params"], serde_json::json!({"A": 1, "B": 3, "C": 6}));

    let single = file("+ 1 1 1\n");
    assert_eq!(code(&run(&["reduce", path(&single)])), 1);
    let arity2 = file("+ 1 2\n- 1 2\n");
    assert_eq!(code(&run(&["reduce", path(&arity2)])), 2);
}

#[test]
fn gen_families() {
    assert_eq!(stdout(&run(&["gen", "s6", "1", "2", "3"])), "+ 1 2 3\n- 1 2 3\n");
    assert_eq!(
        stdout(&run(&["gen", "cp2", "1", "2"])),
        "+ 1 3\n- 1 2\n+ 2 3\n"
    );
    let blowup = json(&run(&["--json", "gen", "blowup", "1", "2", "3"]));
    assert_eq!(blowup["points"].as_array().unwrap().len(), 4);
    assert_eq!(code(&run(&["gen", "cp3", "1", "2"])), 2);
    assert_eq!(code(&run(&["gen", "cp3", "1", "0", "2"])), 2);
    assert_eq!(code(&run(&["--quiet", "gen", "s6", "1", "1", "1"])), 0);
    assert!(run(&["--quiet", "gen", "s6", "1", "1", "1"]).stdout.is_empty());
}

#[test]
fn json_output_round_trips() {
    let v = stdout(&run(&["--json", "gen", "cp3", "1", "2", "3"]));
    let o = run_stdin(&["gen", "cp3", "1", "2", "3"], "");
    let text = stdout(&o);
    let from_json = run_stdin(&["--json", "classify", "-"], &v);
    let from_text = run_stdin(&["--json", "classify", "-"], &text);
    assert_eq!(json(&from_json), json(&from_text));
}

#[test]
fn oracle_reports() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = run(&["oracle", "--max-weight", "2", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let first = std::fs::read_to_string(&out).unwrap();
    let mut reader = csv::Reader::from_path(Path::new(&out)).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 330);
    for r in rows.iter().filter(|r| &r[1] == "true" && !r[2].is_empty()) {
        assert!(r[3].starts_with("Case"), "{r:?}");
    }

    run(&["oracle", "--max-weight", "2", "--output", out.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);

    let v = json(&run(&["--json", "oracle", "--max-weight", "1"]));
    assert_eq!(v["summary"]["passed_checks"], 1);

    assert_eq!(code(&run(&["oracle", "--max-weight", "5"])), 2);
}
