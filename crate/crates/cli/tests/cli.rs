use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn lnnreg(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnnreg"))
        .args(args.iter().map(|a| a.as_ref()))
        .env("NO_COLOR", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn pinv_rank_and_svd() {
    let w = Work::new();
    let a = w.file("a.csv", "1,0\n0,0\n");
    let i = w.file("i.csv", "# 2 2\n1,0\n0,1\n");
    let o = lnnreg(&[&"pinv", &a]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1,0\n0,0\n");
    assert_eq!(stdout(&lnnreg(&[&"rank", &i])), "2\n");
    assert_eq!(stdout(&lnnreg(&[&"svd", &a])), "1,0\n");
}

#[test]
fn parse_errors_name_the_line() {
    let w = Work::new();
    let bad = w.file("bad.csv", "1,2\n3,abc\n");
    let o = lnnreg(&[&"rank", &bad]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert!(!stderr(&o).contains('\x1b'));

    let nan = w.file("nan.csv", "1,NaN\n");
    assert_eq!(code(&lnnreg(&[&"svd", &nan])), 2);
    assert_eq!(code(&lnnreg(&[&"svd", &w.path("missing.csv")])), 2);
}

#[test]
fn shape_errors_exit_three() {
    let w = Work::new();
    let a = w.file("a.csv", "1,0\n0,1\n");
    let f = w.file("f.csv", "1,2,3\n");
    assert_eq!(code(&lnnreg(&[&"solve", &a, &f])), 3);
    let header = w.file("h.csv", "# 3 2\n1,0\n0,1\n");
    assert_eq!(code(&lnnreg(&[&"rank", &header])), 3);
}

#[test]
fn solve_examples() {
    let w = Work::new();
    let a = w.file("a.csv", "1,0\n0,0\n");
    let f = w.file("f.csv", "1,1\n");
    let o = lnnreg(&[&"solve", &a, &f, &"--method", &"pseudo"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("q = 1,0\n"), "{}", stdout(&o));

    let a3 = w.file("a3.csv", "1,0,0\n0,10,0\n0,0,0\n");
    let f3 = w.file("f3.csv", "1\n1\n1\n");
    let o = lnnreg(&[&"solve", &a3, &f3, &"--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["alpha", "method", "q", "residual_norm", "solution_norm", "stop_index"]
    );
    assert_eq!(v["q"], serde_json::json!([1.0, 0.1, 0.0]));
    assert_eq!(v["method"], "pseudo");
    assert!(v["alpha"].is_null() && v["stop_index"].is_null());
}

#[test]
fn tikhonov_needs_alpha_or_delta() {
    let w = Work::new();
    let a = w.file("a.csv", "1,0\n0,1\n");
    let f = w.file("f.csv", "1,0\n");
    let o = lnnreg(&[&"solve", &a, &f, &"--method", &"tikhonov"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("BadAlpha"));

    let o = lnnreg(&[
        &"solve",
        &a,
        &f,
        &"--method",
        &"tikhonov",
        &"--delta",
        &"0.5",
        &"--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["alpha"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((v["residual_norm"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn iterative_methods_report_stop_index() {
    let w = Work::new();
    let a = w.file("a.csv", "1,0\n0,0\n");
    let f = w.file("f.csv", "1,0\n");
    let o = lnnreg(&[
        &"solve",
        &a,
        &f,
        &"--method",
        &"landweber",
        &"--delta",
        &"0.1",
        &"--rule",
        &"2",
        &"--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stop_index"], 1);
    assert_eq!(v["method"], "landweber");

    let f = w.file("f2.csv", "1,1\n");
    let o = lnnreg(&[
        &"solve",
        &a,
        &f,
        &"--method",
        &"landweber",
        &"--delta",
        &"0.1",
        &"--rule",
        &"2",
    ]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("NeverTriggered"));

    let o = lnnreg(&[&"solve", &a, &f, &"--method", &"gd", &"--max-iter", &"200", &"--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stop_index"], 200);
    assert!((v["q"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn select_alpha_principles() {
    let w = Work::new();
    let a = w.file("i.csv", "1,0\n0,1\n");
    let f = w.file("f.csv", "1,0\n");
    let alpha = |o: &Output| -> f64 {
        let s = stdout(o);
        s.lines()
            .find_map(|l| l.strip_prefix("alpha = "))
            .unwrap()
            .parse()
            .unwrap()
    };
    let o = lnnreg(&[
        &"select-alpha",
        &a,
        &f,
        &"--principle",
        &"discrepancy",
        &"--delta",
        &"0.5",
    ]);
    assert!((alpha(&o) - 1.0).abs() < 1e-8);
    let o = lnnreg(&[
        &"select-alpha",
        &a,
        &f,
        &"--principle",
        &"apriori",
        &"--h",
        &"5e-7",
        &"--delta",
        &"5e-7",
        &"--p",
        &"2",
    ]);
    assert!((alpha(&o) - 1e-3).abs() < 1e-15);
    let o = lnnreg(&[
        &"select-alpha",
        &a,
        &f,
        &"--principle",
        &"discrepancy",
        &"--delta",
        &"10",
    ]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("DeltaTooLarge"));
    let o = lnnreg(&[
        &"select-alpha",
        &a,
        &f,
        &"--principle",
        &"generalized",
        &"--h",
        &"0.1",
        &"--delta",
        &"0.2",
    ]);
    assert_eq!(code(&o), 0);
}

fn read_model(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn train_predict_diagnose() {
    let w = Work::new();
    let g = w.file("g.csv", "1,0\n0,0\n");
    let h = w.file("h.csv", "1,0\n1,0\n");
    let model = w.path("model.json");
    let o = lnnreg(&[&"train", &g, &h, &"--model-out", &model]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = read_model(&model);
    assert_eq!(m["q"], serde_json::json!([[1.0, 0.0], [1.0, 0.0]]));
    assert!(m["bias"].is_null());
    assert_eq!(m["method_tag"], "pseudo");

    let x = w.file("x.csv", "1\n1\n");
    let o = lnnreg(&[&"predict", &"--model-in", &model, &x]);
    assert_eq!(stdout(&o), "1,1\n");
    let wrong = w.file("wrong.csv", "1,2,3\n");
    assert_eq!(code(&lnnreg(&[&"predict", &"--model-in", &model, &wrong])), 3);

    let o = lnnreg(&[&"diagnose", &g]);
    assert!(stdout(&o).contains("rank = 1\nfull_rank = false\n"), "{}", stdout(&o));

    let stdout_model = stdout(&lnnreg(&[&"train", &g, &h]));
    let v: serde_json::Value = serde_json::from_str(&stdout_model).unwrap();
    assert_eq!(v, m);

    let mismatched = w.file("h3.csv", "1,0,0\n");
    assert_eq!(code(&lnnreg(&[&"train", &g, &mismatched])), 3);
}

#[test]
fn model_round_trip_matches_library() {
    let w = Work::new();
    let g_rows = [[0.3, -1.2, 0.7, 2.1], [1.1, 0.4, -0.9, 0.25], [-0.6, 0.8, 1.9, -1.3]];
    let h_rows = [[0.5, 1.5, -2.0, 0.125], [1.0, -0.75, 0.3, 2.2]];
    let csv = |rows: &[[f64; 4]]| {
        rows.iter()
            .map(|r| lnnreg_cli::io::format_row(r) + "\n")
            .collect::<String>()
    };
    let g = w.file("g.csv", &csv(&g_rows));
    let h = w.file("h.csv", &csv(&h_rows));
    let model = w.path("m.json");
    assert_eq!(code(&lnnreg(&[&"train", &g, &h, &"--bias", &"--model-out", &model])), 0);

    let set = lnnreg::TrainingSet::new(
        lnnreg::Matrix64::from_f64_rows(&g_rows).unwrap(),
        lnnreg::Matrix64::from_f64_rows(&h_rows).unwrap(),
    )
    .unwrap();
    let lib = lnnreg::train_with_bias(&set, &lnnreg::Method64::Pseudo).unwrap();
    let o = lnnreg(&[&"predict", &"--model-in", &model, &g]);
    let printed = lnnreg_cli::io::parse_matrix(&stdout(&o)).unwrap();
    for k in 0..4 {
        let expected = lnnreg::predict(&lib, &set.g.column(k)).unwrap();
        assert_eq!(printed.column(k).as_slice(), expected.as_slice());
    }
}

const EXPERIMENT: &str = r#"{
    "system": {"a": [[1, 0], [0, 0]], "f": [1, 1]},
    "reference": [1, 0],
    "noise_levels": [1e-2, 1e-4, 1e-6],
    "perturbation": {"both": {"row": 1, "col": 1}},
    "methods": [
        {"method": "pseudo"},
        {"method": "tikhonov", "alpha": {"apriori": {"p": 1.5}}},
        {"method": "tikhonov", "alpha": "generalized", "label": "tikhonov-gdp"},
        {"method": "landweber", "rule": 1, "max_iter": 5000}
    ],
    "seed": 11
}"#;

#[test]
fn experiment_is_deterministic() {
    let w = Work::new();
    let spec = w.file("spec.json", EXPERIMENT);
    let first = lnnreg(&[&"experiment", &spec]);
    let second = lnnreg(&[&"experiment", &spec]);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("epsilon,method,alpha_or_n,residual,error_to_reference,solution_norm\n"));
    assert_eq!(text.lines().count(), 1 + 12);
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').count(), 6, "{line}");
    }
    let failed = text.lines().filter(|l| l.contains("FAILED")).count();
    assert_eq!(code(&first), if failed == 0 { 0 } else { 4 });
}

#[test]
fn experiment_blow_up_and_failures() {
    let w = Work::new();
    let spec = EXPERIMENT
        .replace(
            r#"{"both": {"row": 1, "col": 1}}"#,
            r#"{"operator_entry": {"row": 1, "col": 1}}"#,
        )
        .replace(r#""generalized""#, r#""discrepancy""#);
    let path = w.file("spec.json", &spec);
    let o = lnnreg(&[&"experiment", &path]);
    assert_eq!(code(&o), 4);
    let text = stdout(&o);
    let row = |eps: &str, method: &str| -> Vec<String> {
        text.lines()
            .find(|l| l.starts_with(&format!("{eps},{method},")))
            .unwrap()
            .split(',')
            .map(String::from)
            .collect()
    };
    let pseudo = row("1e-6", "pseudo");
    let norm: f64 = pseudo[5].parse().unwrap();
    assert!((norm / 1e6 - 1.0).abs() < 1e-9);
    let tik = row("1e-6", "tikhonov");
    let err: f64 = tik[4].parse().unwrap();
    assert!((err - 1e-2).abs() < 1e-4);
    assert_eq!(row("1e-6", "tikhonov-gdp")[2], "FAILED");
    assert!(stderr(&o).contains("DeltaTooSmall"), "{}", stderr(&o));
}

#[test]
fn experiment_rejects_bad_specs() {
    let w = Work::new();
    let empty = w.file("empty.json", &EXPERIMENT.replace("[1e-2, 1e-4, 1e-6]", "[]"));
    assert_eq!(code(&lnnreg(&[&"experiment", &empty])), 2);
    let broken = w.file("broken.json", "{\"system\": ");
    assert_eq!(code(&lnnreg(&[&"experiment", &broken])), 2);
    let increasing = w.file("inc.json", &EXPERIMENT.replace("[1e-2, 1e-4, 1e-6]", "[1e-6, 1e-2]"));
    assert_eq!(code(&lnnreg(&[&"experiment", &increasing])), 2);
}
