use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use saqnn::circuit::parse_qasm;
use saqnn::model::{init_from_series, load_model, save_model, Encoding, SaqnnConfig, SavedModel};
use saqnn::simulator::simulate;
use saqnn::spectral::enumerate_cube_frequencies;
use saqnn::spectral::Basis;
use saqnn::training::{initial_params, Hyperparams, Target};
use tempfile::TempDir;

fn saqnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saqnn")).args(args).env_remove("SAQNN_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn exact_model(dir: &TempDir, target: Target, encoding: Encoding) -> String {
    let series = target.exact_series().unwrap();
    let config = SaqnnConfig::for_series(&series, encoding).unwrap();
    let params = init_from_series(&series, config.m()).unwrap();
    let path = p(dir, &format!("{target:?}-{encoding}.json"));
    save_model(Path::new(&path), &SavedModel::new(&config, &params, 0)).unwrap();
    path
}

fn csv_rows(path: &str) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn gen_data_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (p(&dir, "a.csv"), p(&dir, "b.csv"));
    for out in [&a, &b] {
        let o = saqnn(&["gen-data", "--target", "f2", "--count", "200", "--seed", "42", "--out", out]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(csv_rows(&a).len(), 200);
}

#[test]
fn gen_data_rejects_unknown_target_and_respects_domain() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "x.csv");
    assert_eq!(saqnn(&["gen-data", "--target", "f9", "--count", "5", "--out", &out]).status.code(), Some(2));
    assert_eq!(saqnn(&["gen-data", "--target", "f3", "--count", "2", "--out", &out]).status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[..2].iter().all(|v| (-1.0..=1.0).contains(v))));
}

#[test]
fn seed_env_applies_only_without_flag() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, env: Option<&str>, flag: Option<&str>| {
        let out = p(&dir, name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_saqnn"));
        cmd.args(["gen-data", "--target", "f1", "--count", "10", "--out", &out]).env_remove("SAQNN_SEED");
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        if let Some(e) = env {
            cmd.env("SAQNN_SEED", e);
        }
        assert!(cmd.output().unwrap().status.success());
        std::fs::read(out).unwrap()
    };
    let env7 = run("e.csv", Some("7"), None);
    assert_eq!(env7, run("f.csv", None, Some("7")));
    assert_ne!(env7, run("z.csv", None, None));
    assert_eq!(run("g.csv", Some("7"), Some("3")), run("h.csv", None, Some("3")));
}

#[test]
fn config_precedence_flag_over_file_over_default() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "run.json");
    std::fs::write(
        &cfg,
        r#"{"frequencies": {"cube": 1}, "tau": 0.01,
            "hyperparams": {"learning_rate": 0.2, "max_iters": 7}}"#,
    )
    .unwrap();
    let o = saqnn(&["train", "--config", &cfg, "--max-iters", "3", "--print-config"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let h = &v["hyperparams"];
    assert_eq!(h["max_iters"], 3);
    assert_eq!(h["learning_rate"], 0.2);
    assert_eq!(h["fd_step"], Hyperparams::default().fd_step);
    assert_eq!(v["tau"], 0.01);
    assert_eq!(v["normalize"], true);
    assert_eq!(v["frequencies"]["cube"], 1);
}

#[test]
fn config_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "bad.json");
    std::fs::write(&cfg, r#"{"frequencies": {"cube": 1}, "hyperparams": {"learning_rate": -1.0}}"#).unwrap();
    let o = saqnn(&["train", "--config", &cfg, "--data", "d.csv", "--out", "m.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hyperparams.learning_rate"));
    std::fs::write(&cfg, r#"{"frequencies": {"cube": 1}, "learning_rate": 0.1}"#).unwrap();
    let o = saqnn(&["train", "--config", &cfg, "--data", "d.csv", "--out", "m.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("learning_rate"));
}

#[test]
fn train_f2_end_to_end_with_packaged_config() {
    let dir = TempDir::new().unwrap();
    let (train, test, model) = (p(&dir, "train.csv"), p(&dir, "test.csv"), p(&dir, "m.json"));
    saqnn(&["gen-data", "--target", "f2", "--count", "100", "--seed", "1", "--out", &train]);
    saqnn(&["gen-data", "--target", "f2", "--count", "100", "--seed", "2", "--out", &test]);
    let cfg = configs_dir().join("f2.json");
    let o = saqnn(&["train", "--config", cfg.to_str().unwrap(), "--train", &train, "--test", &test, "--out", &model]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let test_mse: f64 = text.split_whitespace().find_map(|w| w.strip_prefix("test_mse=")).unwrap().parse().unwrap();
    assert!(test_mse <= 1e-3, "{text}");
    assert!(load_model(Path::new(&model)).is_ok());
}

#[test]
fn train_missing_data_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = saqnn(&["train", "--cube", "1", "--data", &p(&dir, "nope.csv"), "--out", &p(&dir, "m.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fixed_rescale_bypasses_fine_tuning() {
    let dir = TempDir::new().unwrap();
    let (data, model) = (p(&dir, "d.csv"), p(&dir, "m.json"));
    saqnn(&["gen-data", "--target", "f1", "--count", "40", "--out", &data]);
    let o = saqnn(&["train", "--cube", "1", "--data", &data, "--out", &model, "--rescale", "1.0", "--max-iters", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("rung"));
    assert_eq!(load_model(Path::new(&model)).unwrap().a, 1.0);
}

#[test]
fn failed_fine_tuning_exits_3_with_trace() {
    let dir = TempDir::new().unwrap();
    let (data, model, trace) = (p(&dir, "d.csv"), p(&dir, "m.json"), p(&dir, "t.csv"));
    saqnn(&["gen-data", "--target", "f1", "--count", "40", "--out", &data]);
    let o = saqnn(&[
        "train",
        "--cube",
        "1",
        "--data",
        &data,
        "--out",
        &model,
        "--tau",
        "1e-12",
        "--rescale-cap",
        "2",
        "--max-iters",
        "3",
        "--trace-out",
        &trace,
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(&trace));
    let rows = csv_rows(&trace);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![1.0, 2.0]);
    assert!(!Path::new(&model).exists());
}

#[test]
fn normalized_training_records_scale() {
    let dir = TempDir::new().unwrap();
    let (data, model) = (p(&dir, "d.csv"), p(&dir, "m.json"));
    saqnn(&["gen-data", "--target", "f1", "--count", "40", "--out", &data]);
    let o = saqnn(&["train", "--cube", "1", "--data", &data, "--out", &model, "--rescale", "1", "--max-iters", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let max_train = csv_rows(&data)[..20].iter().map(|r| r[2]).fold(f64::MIN, f64::max);
    assert_eq!(load_model(Path::new(&model)).unwrap().y_scale, max_train);
    let o = saqnn(&[
        "train",
        "--cube",
        "1",
        "--data",
        &data,
        "--out",
        &model,
        "--rescale",
        "1",
        "--max-iters",
        "2",
        "--no-normalize",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(load_model(Path::new(&model)).unwrap().y_scale, 1.0);
}

#[test]
fn eval_exact_model_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let model = exact_model(&dir, Target::F2, Encoding::Dense);
    let data = p(&dir, "d.csv");
    saqnn(&["gen-data", "--target", "f2", "--count", "100", "--seed", "5", "--out", &data]);
    let first = saqnn(&["eval", "--model", &model, "--data", &data]);
    let second = saqnn(&["eval", "--model", &model, "--data", &data]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let mse: f64 = stdout(&first).split_whitespace().find_map(|w| w.strip_prefix("mse=")).unwrap().parse().unwrap();
    assert!(mse < 1e-12, "{mse}");
}

#[test]
fn eval_dimension_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let model = exact_model(&dir, Target::F2, Encoding::Dense);
    let data = p(&dir, "d3.csv");
    std::fs::write(&data, "x0,x1,x2,y\n0.1,0.2,0.3,0.5\n").unwrap();
    assert_eq!(saqnn(&["eval", "--model", &model, "--data", &data]).status.code(), Some(2));
}

#[test]
fn synth_listing_shows_every_section() {
    let dir = TempDir::new().unwrap();
    let model = exact_model(&dir, Target::F2, Encoding::Dense);
    let o = saqnn(&["synth", "--model", &model, "--x", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let headers: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with('#')).map(String::from).collect();
    assert_eq!(headers, ["# P(θ)", "# layer 1", "# layer 2", "# layer 3", "# padding", "# P(θ)†"]);
    assert!(stdout(&o).contains("width=3 params=6"));
}

#[test]
fn synth_qasm_requires_decompose() {
    let dir = TempDir::new().unwrap();
    let model = exact_model(&dir, Target::F2, Encoding::Dense);
    let o = saqnn(&["synth", "--model", &model, "--x", "0,0", "--format", "qasm"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--decompose"));
}

#[test]
fn synth_qasm_round_trips_through_the_simulator() {
    let dir = TempDir::new().unwrap();
    for (target, encoding, x) in [(Target::F2, Encoding::Dense, "0.7,-2.1"), (Target::F3, Encoding::Tensor, "0.3,-0.8")]
    {
        let model = exact_model(&dir, target, encoding);
        let out = p(&dir, "c.qasm");
        let o = saqnn(&["synth", "--model", &model, "--x", x, "--format", "qasm", "--decompose", "--out", &out]);
        assert_eq!(o.status.code(), Some(0));
        let circuit = parse_qasm(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let a = load_model(Path::new(&model)).unwrap().a;
        let value = a * simulate(&circuit).unwrap().amplitude_of_zero().norm();
        let xs: Vec<f64> = x.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((value - target.eval(&xs)).abs() < 1e-9);
        let printed: f64 = stdout(&o).lines().find_map(|l| l.strip_prefix("forward=")).unwrap().parse().unwrap();
        assert!((value - printed).abs() < 1e-9);
    }
}

#[test]
fn synth_resource_line_for_49_terms() {
    let dir = TempDir::new().unwrap();
    let config =
        SaqnnConfig::new(2, enumerate_cube_frequencies(2, 3).unwrap(), Basis::Fourier, Encoding::Dense).unwrap();
    let params = initial_params(&config, 1.0, &Hyperparams::default()).unwrap();
    let model = p(&dir, "m49.json");
    save_model(Path::new(&model), &SavedModel::new(&config, &params, 0)).unwrap();
    let o = saqnn(&["synth", "--model", &model, "--x", "0.1,0.2"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("width=7 params=112 ")));
    let o = saqnn(&["synth", "--model", &model, "--x", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_cases_and_precondition() {
    let o = saqnn(&["bounds", "--s", "2", "--d", "2", "--eps", "0.9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("case=4 n=129\n"), "{}", stdout(&o));
    let o = saqnn(&["bounds", "--s", "2", "--d", "2", "--eps", "0.05"]);
    assert!(stdout(&o).starts_with("case=4 n=2^"), "{}", stdout(&o));
    let o = saqnn(&["bounds", "--s", "1", "--d", "16", "--eps", "0.75"]);
    assert!(stdout(&o).starts_with("case=3 n=65536\n"));
    assert_eq!(saqnn(&["bounds", "--s", "2", "--d", "1", "--eps", "0.5"]).status.code(), Some(2));
    assert_eq!(saqnn(&["bounds", "--s", "2", "--d", "2", "--eps", "1.5"]).status.code(), Some(2));
}

#[test]
fn grid_export() {
    let dir = TempDir::new().unwrap();
    let model = exact_model(&dir, Target::F2, Encoding::Dense);
    let out = p(&dir, "g.csv");
    assert_eq!(saqnn(&["grid", "--model", &model, "--resolution", "50", "--out", &out]).status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2500);
    let worst = rows.iter().map(|r| (r[2] - Target::F2.eval(&r[..2])).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");

    let f3 = exact_model(&dir, Target::F3, Encoding::Tensor);
    assert_eq!(saqnn(&["grid", "--model", &f3, "--resolution", "2", "--out", &out]).status.code(), Some(0));
    let corners: Vec<[f64; 2]> = csv_rows(&out).iter().map(|r| [r[0], r[1]]).collect();
    assert_eq!(corners, [[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]]);

    let config =
        SaqnnConfig::new(1, vec![saqnn::spectral::FrequencyVector(vec![1])], Basis::Fourier, Encoding::Dense).unwrap();
    let params = initial_params(&config, 1.0, &Hyperparams::default()).unwrap();
    let one_d = p(&dir, "m1.json");
    save_model(Path::new(&one_d), &SavedModel::new(&config, &params, 0)).unwrap();
    assert_eq!(saqnn(&["grid", "--model", &one_d, "--out", &out]).status.code(), Some(2));
}
