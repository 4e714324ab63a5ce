use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn njump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_njump")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(name: &str, text: &str) -> String {
    let p: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn p2() -> String {
    file("p2.json", r#"{"kind":"hyperbola","a":"1","b":"1","s":"1"}"#)
}

fn xy1() -> String {
    file("xy1.json", r#"{"kind":"hyperbola","a":"0","b":"0","s":"1"}"#)
}

#[test]
fn lct_and_clusters() {
    let body = p2();
    let o = njump(&["lct", "--body", &body]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1/2\n");
    assert_eq!(stdout(&njump(&["clusters", "--body", &body, "--bound", "3"])), "1, 2, 3\n");
}

#[test]
fn jump_csv_lists_square_roots() {
    let o = njump(&["jump", "--body", &xy1(), "--bound", "2", "--window", "16", "--format", "csv"]);
    assert!(o.status.success());
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    let values: Vec<&str> = rows.iter().filter(|r| &r[0] == "value").map(|r| r.get(1).unwrap()).collect();
    assert_eq!(values, ["1", "sqrt(2)", "sqrt(3)", "2"]);
    assert_eq!(rows.iter().filter(|r| &r[0] == "residual").count(), 0);
}

#[test]
fn multiplier_ideal_and_search() {
    assert_eq!(stdout(&njump(&["mi", "--body", &p2(), "--c", "1"])), "(x*y^2, x^2*y)\n");
    let o = njump(&["search", "--e", "1", "--c", "1", "--n", "10", "--format", "csv"]);
    assert_eq!(stdout(&o), "r,s\n2,6\n3,3\n");
}

#[test]
fn graded_and_period() {
    let o = njump(&["graded", "--body", &p2(), "--c", "1", "--qmax", "16"]);
    assert!(stdout(&o).contains("crosscheck: yes"), "{}", stdout(&o));
    let o = njump(&["period", "--set", "koike", "--a", "2", "--bound", "30", "--period", "1", "--probes", "3"]);
    assert!(stdout(&o).contains("falsified: yes"));
    let o = njump(&["period", "--set", "saito", "--bound", "5", "--period", "1", "--probes", "2"]);
    assert!(stdout(&o).contains("falsified: no"));
}

#[test]
fn oracle_reports_agreement() {
    let cases = file("cases.json", r#"[{"c":"1","a":[0,0]},{"c":"1/4","a":[1,1]}]"#);
    let o = njump(&["oracle", "--body", &p2(), "--cases", &cases, "--margin", "0.05", "--tmax", "400", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("case,c,a,exact_member,probe_verdict,slope,agree\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",yes")).count(), 2);
    let bad = file("cases_bad.json", r#"[{"c":"1/2","a":[0,0]}]"#);
    let o = njump(&["oracle", "--body", &p2(), "--cases", &bad, "--margin", "0.05", "--tmax", "400"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("margin"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(njump(&["lct", "--body", &p2(), "--bogus"]).status.code(), Some(2));
    assert_eq!(njump(&["mi", "--body", &p2(), "--c", "one"]).status.code(), Some(2));
    assert_eq!(njump(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_name_the_field() {
    let bad = file("bad.json", r#"{"kind":"sum","bodies":[{"kind":"diagonal","m":["1","2"]},{"kind":"hyperbola","a":"1","b":"x","s":"1"}]}"#);
    let o = njump(&["lct", "--body", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bodies[1].b"), "{}", stderr(&o));
    let neg = file("neg.json", r#"{"kind":"hyperbola","a":"1","b":"1","s":"-1"}"#);
    assert_eq!(njump(&["lct", "--body", &neg]).status.code(), Some(1));
    let o = njump(&["jump", "--body", &p2(), "--bound", "0", "--window", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(njump(&["lct", "--body", "/nonexistent/body.json"]).status.code(), Some(1));
}

#[test]
fn normalize_round_trips() {
    let sum = file(
        "sum.json",
        r#"{"kind":"sum","bodies":[{"kind":"hyperbola","a":"0","b":"0","s":"1"},{"kind":"scale","c":"1/2","body":{"kind":"diagonal","m":["2","3"]}}]}"#,
    );
    let first = stdout(&njump(&["body", "--in", &sum, "--normalize"]));
    let canon = file("canon.json", &first);
    assert_eq!(stdout(&njump(&["body", "--in", &canon, "--normalize"])), first);
    assert_eq!(stdout(&njump(&["lct", "--body", &canon])), stdout(&njump(&["lct", "--body", &sum])));
}

#[test]
fn output_is_deterministic() {
    let args = ["jump", "--body", &p2(), "--bound", "3", "--window", "30", "--format", "csv"].map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let a = njump(&args);
    let mut threaded = vec!["--jobs", "3"];
    threaded.extend(&args);
    assert_eq!(a.stdout, njump(&threaded).stdout);
    assert_eq!(a.stdout, njump(&args).stdout);
}
