use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewreduce"))
        .args(args)
        .env_remove("SKEWREDUCE_SEED")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn dc_and_iterated_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.json");
    let out = run(&[
        "sample",
        "matrix",
        "--m",
        "8",
        "--r",
        "3",
        "--degree",
        "12",
        "--seed",
        "4",
        "--out",
        p(&input),
    ]);
    assert!(out.status.success());
    let mut texts = Vec::new();
    for algo in ["dc", "iterated"] {
        let dest = dir.path().join(format!("{algo}.json"));
        let out = run(&[
            "reduce",
            "--in",
            p(&input),
            "--t",
            "5",
            "--algo",
            algo,
            "--out",
            p(&dest),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let mut v = json(&dest);
        v["algorithm"] = Value::Null;
        v["stats"] = Value::Null;
        texts.push(v);
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn key_matrix_reduces_to_weak_popov() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.json");
    let out = run(&[
        "sample",
        "key-matrix",
        "--m",
        "12",
        "--n",
        "12",
        "--k",
        "6",
        "--ell",
        "2",
        "--tau",
        "4",
        "--out",
        p(&input),
    ]);
    assert!(out.status.success());
    for algo in ["dc", "iterated", "naive"] {
        let dest = dir.path().join("r.json");
        let out = run(&[
            "reduce",
            "--in",
            p(&input),
            "--algo",
            algo,
            "--out",
            p(&dest),
        ]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains("weak Popov form: yes"));
        let v = json(&dest);
        assert_eq!(v["weak_popov"], Value::Bool(true));
        let before = v["degree_before"].as_u64().unwrap();
        let after = v["degree_after"].as_u64().unwrap();
        if algo != "naive" {
            assert_eq!(before - after, v["t"].as_u64().unwrap());
        }

        // reducing the output again is the identity
        let again = dir.path().join("again.json");
        let reduced = serde_json::json!({"schema": "skewreduce.matrix.v1", "field": v["field"], "rows": v["reduced"]});
        std::fs::write(&again, reduced.to_string()).unwrap();
        let out = run(&[
            "reduce",
            "--in",
            p(&again),
            "--algo",
            algo,
            "--out",
            p(&dest),
        ]);
        assert!(out.status.success());
        let w = json(&dest);
        assert_eq!(w["t"], 0);
        assert_eq!(
            w["transform"],
            serde_json::json!([[[1], [], []], [[], [1], []], [[], [], [1]]])
        );
    }
}

#[test]
fn roundtrip_is_deterministic() {
    let args = [
        "roundtrip",
        "--m",
        "12",
        "--n",
        "12",
        "--k",
        "6",
        "--ell",
        "2",
        "--tau",
        "4",
        "--trials",
        "20",
        "--seed",
        "9",
        "--verbose",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut parallel = args.to_vec();
    parallel.extend(["--parallel", "4"]);
    assert_eq!(run(&parallel).stdout, a.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "skewreduce.roundtrip.v1");
    assert_eq!(v["results"].as_array().unwrap().len(), 20);
}

#[test]
fn roundtrip_without_errors_always_succeeds() {
    let out = run(&[
        "roundtrip",
        "--m",
        "8",
        "--n",
        "8",
        "--k",
        "3",
        "--ell",
        "3",
        "--tau",
        "0",
        "--trials",
        "10",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["successes"], 10);
}

#[test]
fn exit_codes() {
    // n > m
    assert_eq!(
        run(&["roundtrip", "--m", "8", "--n", "9", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["roundtrip", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["reduce", "--in", "x.json", "--t", "soon"])
            .status
            .code(),
        Some(2)
    );
    // far beyond the radius the rate bar is missed
    let out = run(&[
        "roundtrip",
        "--m",
        "12",
        "--n",
        "12",
        "--k",
        "6",
        "--tau",
        "6",
        "--trials",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "roundtrip",
        "--m",
        "12",
        "--n",
        "12",
        "--k",
        "6",
        "--tau",
        "6",
        "--trials",
        "10",
        "--min-rate",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decode_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("i.json");
    let report = dir.path().join("r.json");
    let out = run(&[
        "sample",
        "instance",
        "--m",
        "16",
        "--n",
        "16",
        "--k",
        "8",
        "--ell",
        "2",
        "--tau",
        "5",
        "--seed",
        "3",
        "--out",
        p(&input),
    ]);
    assert!(out.status.success());
    let out = run(&["decode", "--in", p(&input), "--out", p(&report)]);
    assert!(out.status.success());
    let inst = json(&input);
    let rep = json(&report);
    assert_eq!(rep["schema"], "skewreduce.decode-report.v1");
    assert_eq!(rep["status"], "decoded");
    assert_eq!(rep["messages"], inst["messages"]);
    assert_eq!(rep["lambda_degree"], 5);

    std::fs::write(&input, "{\"schema\": \"skewreduce.instance.v1\"}").unwrap();
    assert_eq!(run(&["decode", "--in", p(&input)]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let out = run(&[
        "bench",
        "--sizes",
        "8,16",
        "--reps",
        "1",
        "--algos",
        "dc,iterated,naive",
        "--csv",
        p(&csv),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("schema,algorithm,r,n,t,ell,seed,rep,wall_time_ms,base_case_count,st_count")
    );
    assert_eq!(lines.count(), 6);
    let out = run(&[
        "bench", "--suite", "decode", "--sizes", "8,12", "--reps", "2",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["bench", "--sizes", "16,8"]).status.code(), Some(2));
}
