use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polyfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyfact"))
        .args(args)
        .env_remove("POLYFACT_CONFIG_DIR")
        .output()
        .expect("run polyfact")
}

fn json_lines(out: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(out).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn of_type<'a>(lines: &'a [Value], kind: &str) -> Vec<&'a Value> {
    lines.iter().filter(|v| v["type"] == kind).collect()
}

#[test]
fn brocard_preset() {
    let out = polyfact(&["solve", "--preset", "brocard"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out.stdout);
    let sols = of_type(&lines, "solution");
    assert_eq!(sols.len(), 6);
    let xs: Vec<&str> = sols.iter().map(|v| v["assignment"]["x"].as_str().unwrap()).collect();
    assert_eq!(xs, ["-5", "5", "-11", "11", "-71", "71"]);
    let summary = of_type(&lines, "summary")[0];
    assert_eq!(summary["found"], 6);
    assert_eq!(summary["exhausted"], true);
    assert!(lines.iter().all(|v| v["schema"] == "polyfact/v1"));
}

#[test]
fn ulas_preset_has_two_records() {
    let out = polyfact(&["solve", "--preset", "ulas-2nn-square"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out.stdout);
    let sols = of_type(&lines, "solution");
    assert_eq!(sols.len(), 2);
    assert!(sols.iter().all(|v| v["assignment"]["n"] == "0"));
}

#[test]
fn every_preset_runs() {
    let out = polyfact(&["solve", "--list-presets"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert!(names.len() >= 15);
    for name in &names {
        // small ranges keep this quick
        let out = polyfact(&["solve", "--preset", name, "--bound", "n=0..6", "--bound", "m=0..2", "--bound", "l=0..2"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn usage_errors_exit_2() {
    let out = polyfact(&["solve", "--eq", "1 * n! = x^2 +"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 14"));
    assert_eq!(polyfact(&["solve", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(polyfact(&["solve", "--eq", "1 * n! = x^2"]).status.code(), Some(2));
    assert_eq!(polyfact(&["solve", "--preset", "brocard", "--budget-seconds", "0"]).status.code(), Some(2));
    assert_eq!(polyfact(&["solve", "--preset", "brocard", "--checkpoint", "c.json"]).status.code(), Some(2));
    assert_eq!(polyfact(&["scan-brocard", "--limit", "1"]).status.code(), Some(2));
    assert_eq!(polyfact(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn node_budget_exits_3() {
    let out = polyfact(&["solve", "--preset", "two-factorials-square", "--budget-nodes", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let lines = json_lines(&out.stdout);
    let summary = of_type(&lines, "summary")[0];
    assert_eq!(summary["exhausted"], false);
    assert_eq!(summary["status"], "node-budget");
    assert_eq!(summary["tuples_done"], "10");
}

#[test]
fn construct_examples() {
    let out = polyfact(&["construct", "--r", "2", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out.stdout)[0];
    assert_eq!(v["assignment"]["n1"], "3");
    assert_eq!(v["assignment"]["n2"], "4");
    assert_eq!(v["assignment"]["x"], "12");
    assert_eq!(v["verified"], true);

    let out = polyfact(&["construct", "--r", "3", "--degree", "3", "--b", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out.stdout)[0]["verified"], true);

    assert_eq!(polyfact(&["construct", "--r", "1", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(polyfact(&["construct", "--r", "2", "--degree", "2", "--b", "-1"]).status.code(), Some(2));

    let out = polyfact(&["construct", "--bases", "1,1", "--form", "x^2 + y^2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_lines(&out.stdout)[0]["verified"], true);
}

#[test]
fn bhargava_tables() {
    let out = polyfact(&["bhargava", "--set", "Z", "--n", "0..5"]);
    let values: Vec<String> =
        json_lines(&out.stdout).iter().map(|v| v["value"].as_str().unwrap().to_string()).collect();
    assert_eq!(values, ["1", "1", "2", "6", "24", "120"]);
    let out = polyfact(&["bhargava", "--set", "AP(2,0)", "--n", "3"]);
    assert_eq!(json_lines(&out.stdout)[0]["value"], "48");
    let out = polyfact(&["bhargava", "--set", "{0,1,4,9,16,25,36}", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out.stdout)[0]["orderings_agree"], true);
}

#[test]
fn prune_test_sum_of_squares() {
    let out = polyfact(&["prune-test", "--form", "x^2 + y^2", "--q", "3", "--v", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out.stdout)[0];
    assert_eq!(v["admissible"], true);
    assert_eq!(v["certificate"]["q"], 3);
    assert_eq!(v["residues"]["modulus"], 9);
    assert_eq!(v["residues"]["counterexamples"], 0);
    let out = polyfact(&["prune-test", "--form", "x^2 + y^2", "--q", "3", "--v", "2"]);
    assert_eq!(json_lines(&out.stdout)[0]["certificate"], Value::Null);
    let out = polyfact(&["prune-test", "--form", "x^2 + y^2", "--q", "5"]);
    assert_eq!(json_lines(&out.stdout)[0]["admissible"], false);
}

#[test]
fn audit_triples_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("triples.txt");
    std::fs::write(&file, "# a b c\n1,8,9\n1 2 3\n").unwrap();
    let out = polyfact(&["audit", "--triples", file.to_str().unwrap(), "--finsler", "10000", "--stirling", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = json_lines(&out.stdout);
    assert_eq!(lines.len(), 4);
    let szpiro = lines[0]["metrics"]["szpiro"].as_f64().unwrap();
    assert!((szpiro - 72f64.ln() / 6f64.ln()).abs() < 1e-9);
    assert_eq!(lines[2]["kind"], "finsler-sweep");
    assert_eq!(lines[2]["holds"], true);
    assert_eq!(lines[3]["holds"], false);
    assert_eq!(polyfact(&["audit", "--triple", "1,2,4"]).status.code(), Some(2));
}

#[test]
fn audit_reads_solve_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("b.jsonl");
    let out = polyfact(&["solve", "--preset", "brocard", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = polyfact(&["audit", "--records", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out.stdout);
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|v| v["kind"] == "depressed-solution" && v["holds"] == true));
    assert_eq!(lines[5]["metrics"]["z"], "142");
}

#[test]
fn csv_output() {
    let out = polyfact(&["solve", "--preset", "brocard", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("n,x,verified,certificate"));
    assert_eq!(rows.next(), Some("4,-5,true,\"{\"\"kind\"\":\"\"exact-equality\"\"}\""));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("polyfact.conf"), "preset = brocard\nbound = n=0..5\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_polyfact"))
        .arg("solve")
        .env("POLYFACT_CONFIG_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(of_type(&json_lines(&out.stdout), "solution").len(), 4);
    let conf = dir.path().join("other.conf");
    std::fs::write(&conf, "eq = 1 * n! = x^2 - 1\nbound = n=0..7\nworkers = 2\n").unwrap();
    let out = polyfact(&["--config", conf.to_str().unwrap(), "solve", "--bound", "n=0..4"]);
    assert_eq!(of_type(&json_lines(&out.stdout), "solution").len(), 2);
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn workers_and_resume_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let base = ["solve", "--preset", "two-factorials-square", "--emit-pruned"];
    let run = |extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        polyfact(&args)
    };
    assert_eq!(run(&["--workers", "1", "--out", &d("w1")]).status.code(), Some(0));
    assert_eq!(run(&["--workers", "8", "--out", &d("w8")]).status.code(), Some(0));
    assert_eq!(read(Path::new(&d("w1"))), read(Path::new(&d("w8"))));

    let ck = d("ck.json");
    let part = d("part");
    let first = run(&["--out", &part, "--checkpoint", &ck, "--checkpoint-every", "40", "--budget-nodes", "123"]);
    assert_eq!(first.status.code(), Some(3));
    let second = run(&["--out", &part, "--checkpoint", &ck, "--checkpoint-every", "40", "--budget-nodes", "200", "--resume"]);
    assert_eq!(second.status.code(), Some(3));
    // bytes written after the last checkpoint, as left by a killed process
    let mut f = std::fs::OpenOptions::new().append(true).open(&part).unwrap();
    std::io::Write::write_all(&mut f, b"{\"partial\":").unwrap();
    drop(f);
    let last = run(&["--out", &part, "--checkpoint", &ck, "--checkpoint-every", "40", "--resume", "--workers", "3"]);
    assert_eq!(last.status.code(), Some(0));
    assert_eq!(read(Path::new(&part)), read(Path::new(&d("w1"))));

    let other = polyfact(&["solve", "--preset", "brocard", "--out", &part, "--checkpoint", &ck, "--resume"]);
    assert_eq!(other.status.code(), Some(2));
}

#[test]
fn scan_resume_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let full = polyfact(&["scan-brocard", "--limit", "10000", "--out", &d("full")]);
    assert_eq!(full.status.code(), Some(0));
    let ck = d("scan.json");
    let part = polyfact(&["scan-brocard", "--limit", "10000", "--out", &d("part"), "--checkpoint", &ck, "--checkpoint-every", "1000", "--budget-nodes", "5000"]);
    assert_eq!(part.status.code(), Some(3));
    let partial = json_lines(&read(Path::new(&d("part"))));
    assert_eq!(partial[0]["complete"], false);
    assert_eq!(partial[0]["scanned_to"], 5000);
    let rest = polyfact(&["scan-brocard", "--limit", "10000", "--out", &d("part"), "--checkpoint", &ck, "--resume"]);
    assert_eq!(rest.status.code(), Some(0));
    assert_eq!(read(Path::new(&d("part"))), read(Path::new(&d("full"))));
    let report = &json_lines(&read(Path::new(&d("full"))))[0];
    let confirmed: Vec<u64> = report["confirmed"].as_array().unwrap().iter().map(|s| s["n"].as_u64().unwrap()).collect();
    assert_eq!(confirmed, [4, 5, 7]);
}
