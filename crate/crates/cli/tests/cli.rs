/*
Copyright 2026 The slrcov Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn slrcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slrcov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

#[test]
fn gen_banded_writes_the_formula() {
    let dir = TempDir::new().unwrap();
    let out = slrcov(&[
        "gen",
        "--model",
        "banded",
        "--p",
        "3",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        read_csv(&dir.path().join("sigma0.csv")),
        vec![
            vec![1.0, 0.9, 0.8],
            vec![0.9, 1.0, 0.9],
            vec![0.8, 0.9, 1.0]
        ]
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("ar_true="));
}

#[test]
fn gen_is_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        let out = slrcov(&[
            "gen",
            "--model",
            "block",
            "--p",
            "100",
            "--k",
            "5",
            "--seed",
            "7",
            "--n",
            "20",
            "--out",
            &path(dir, ""),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    for file in ["sigma0.csv", "samples.csv", "sample_cov.csv"] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn gen_rejects_k_above_p() {
    let dir = TempDir::new().unwrap();
    let out = slrcov(&[
        "gen",
        "--model",
        "block",
        "--p",
        "4",
        "--k",
        "9",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("k exceeds p"));
}

#[test]
fn unwritable_output_is_an_io_error_naming_the_path() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let out = slrcov(&[
        "gen",
        "--model",
        "banded",
        "--p",
        "3",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains(target.to_str().unwrap()),
        "{}",
        stderr(&out)
    );
}

#[test]
fn fit_without_penalties_returns_the_input() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "cov.csv");
    fs::write(&input, "2,1,0\n1,2,0.5\n0,0.5,1\n").unwrap();
    let out = slrcov(&[
        "fit",
        "--input",
        &input,
        "--lambda",
        "0",
        "--tau",
        "0",
        "--out",
        &path(&dir, "fit"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let est = read_csv(&dir.path().join("fit/estimate.csv"));
    let expected = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.5], [0.0, 0.5, 1.0]];
    for (row, want) in est.iter().zip(expected) {
        for (x, y) in row.iter().zip(want) {
            assert!((x - y).abs() <= 1e-3);
        }
    }
    let record = json(&dir.path().join("fit/result.json"));
    assert_eq!(record["converged"], true);
    assert!(record["kkt"]["consensus"].is_number());
}

#[test]
fn fit_recovers_the_diagonal_instance() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "cov.csv");
    fs::write(&input, "10,0,0\n0,10,0\n0,0,0.1\n").unwrap();
    let out = slrcov(&[
        "fit",
        "--input",
        &input,
        "--lambda",
        "0.5",
        "--tau",
        "0.5",
        "--trace",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let est = read_csv(&dir.path().join("estimate.csv"));
    let expected = [[9.0, 0.0, 0.0], [0.0, 9.0, 0.0], [0.0, 0.0, 0.0]];
    for (row, want) in est.iter().zip(expected) {
        for (x, y) in row.iter().zip(want) {
            assert!((x - y).abs() <= 1e-3, "{est:?}");
        }
    }
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,residual_gamma,residual_sigma,primal_gap,objective,h_distance"));
}

#[test]
fn fit_with_one_iteration_reports_non_convergence() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "cov.csv");
    fs::write(&input, "10,0,0\n0,10,0\n0,0,0.1\n").unwrap();
    let out = slrcov(&[
        "fit",
        "--input",
        &input,
        "--lambda",
        "0.5",
        "--tau",
        "0.5",
        "--max-iter",
        "1",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&dir.path().join("result.json"))["converged"], false);
}

#[test]
fn fit_reports_malformed_input() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "bad.csv");
    fs::write(&input, "1,0\n0,x\n").unwrap();
    let out = slrcov(&[
        "fit",
        "--input",
        &input,
        "--lambda",
        "0.1",
        "--tau",
        "0.1",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    fs::write(&input, "1,0,0\n0,1,0\n").unwrap();
    let out = slrcov(&[
        "fit",
        "--input",
        &input,
        "--lambda",
        "0.1",
        "--tau",
        "0.1",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not square"), "{}", stderr(&out));

    let out = slrcov(&[
        "fit",
        "--input",
        &path(&dir, "missing.csv"),
        "--lambda",
        "0.1",
        "--tau",
        "0.1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("missing.csv"));
}

#[test]
fn eval_scores_a_perfect_estimate() {
    let dir = TempDir::new().unwrap();
    let truth = path(&dir, "t.csv");
    fs::write(&truth, "1,0.5,0\n0.5,1,0\n0,0,1\n").unwrap();
    let out = slrcov(&[
        "eval",
        "--truth",
        &truth,
        "--estimate",
        &truth,
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let record = json(&dir.path().join("metrics.json"));
    assert_eq!(record["fpr"], 0.0);
    assert_eq!(record["tpr"], 1.0);
    assert_eq!(record["frob_error"], 0.0);
}

#[test]
fn experiment_summary_is_the_mean_of_runs_and_reproducible() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        let out = slrcov(&[
            "experiment",
            "--model",
            "block",
            "--p",
            "20",
            "--k",
            "2",
            "--n",
            "30",
            "--lambda",
            "0.1",
            "--tau",
            "0.2",
            "--reps",
            "3",
            "--seed",
            "5",
            "--out",
            &path(dir, ""),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let summary = fs::read_to_string(a.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("p,ar_true,ar_est,sp_true,sp_est,fpr,tpr,time_s\n"));
    let runs = fs::read_to_string(a.path().join("runs.csv")).unwrap();
    let header: Vec<&str> = runs.lines().next().unwrap().split(',').collect();
    let tpr_col = header.iter().position(|h| *h == "tpr").unwrap();
    let tprs: Vec<f64> = runs
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(tpr_col).unwrap().parse().unwrap())
        .collect();
    let mean_tpr: f64 = summary
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(6)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(tprs.len(), 3);
    assert!((mean_tpr - tprs.iter().sum::<f64>() / 3.0).abs() <= 1e-12);

    let strip_time = |text: String| -> Vec<String> {
        text.lines()
            .map(|l| l.split(',').take(7).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(
        strip_time(fs::read_to_string(a.path().join("summary.csv")).unwrap()),
        strip_time(fs::read_to_string(b.path().join("summary.csv")).unwrap())
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = TempDir::new().unwrap();
    let config = path(&dir, "config.json");
    fs::write(&config, r#"{"model": "block", "p": 4, "k": 9}"#).unwrap();
    let out = slrcov(&["gen", "--config", &config, "--out", &path(&dir, "")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("k exceeds p"));
    let out = slrcov(&[
        "gen",
        "--config",
        &config,
        "--k",
        "2",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(read_csv(&dir.path().join("sigma0.csv")).len(), 4);

    fs::write(&config, r#"{"lambdaa": 1}"#).unwrap();
    let out = slrcov(&["gen", "--config", &config, "--model", "banded", "--p", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn synthetic_rate_has_slope_minus_one_half() {
    let dir = TempDir::new().unwrap();
    let out = slrcov(&[
        "rate",
        "--synthetic",
        "--n",
        "25,50,100,200",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let fit = json(&dir.path().join("rate_fit.json"));
    assert!((fit["slope"].as_f64().unwrap() + 0.5).abs() <= 1e-12);
    assert!(fs::read_to_string(dir.path().join("rate.csv"))
        .unwrap()
        .starts_with("n,mean_frob_error\n"));
}

#[test]
fn rate_with_two_sizes_is_a_usage_error() {
    let out = slrcov(&[
        "rate", "--model", "block", "--p", "10", "--k", "2", "--lambda", "0.1", "--tau", "0.1",
        "--n", "25,50",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&slrcov(&["gen", "--p", "notanumber"])), 1);
    assert_eq!(code(&slrcov(&["frobnicate"])), 1);
    assert_eq!(code(&slrcov(&["fit", "--input", "x.csv"])), 1);
    assert_eq!(code(&slrcov(&["--help"])), 0);
    assert_eq!(code(&slrcov(&["--version"])), 0);
}

#[test]
fn overflowing_input_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "huge.csv");
    fs::write(&input, "1e308,1e308\n1e308,-1e308\n").unwrap();
    let out = slrcov(&[
        "fit",
        "--input",
        &input,
        "--lambda",
        "0.1",
        "--tau",
        "0.1",
        "--out",
        &path(&dir, ""),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}
