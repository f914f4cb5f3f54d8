//! The `saqnn` command line.
//!
//! Exit codes: 0 success, 2 usage or configuration error (including missing
//! or malformed input files), 3 runtime failure (divergence, failed
//! fine-tuning, simulator disagreement).
//!
//! `SAQNN_SEED` supplies the seed when neither a flag nor a config file sets
//! one.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bounds::{required_terms, resource_profile_theoretical, LogBase, SobolevSpec, TermCount, DEPTH_CONSTANT};
use crate::circuit::{circuit_metrics, decompose_full, export_qasm};
use crate::error::Error;
use crate::model::{
    assemble_circuit, control_register_size, forward, load_model, save_model, Encoding, ParameterSet, SaqnnConfig,
    SavedModel,
};
use crate::spectral::{enumerate_cube_frequencies, enumerate_l2_minimal, Basis, FrequencyVector};
use crate::training::{fine_tune_rescale, generate_dataset, train, Dataset, Hyperparams, Target, TrainReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Environment variable consulted for the default seed.
pub const SEED_ENV: &str = "SAQNN_SEED";

/// Largest term count for which `bounds` builds and measures the circuit.
const MEASURED_PROFILE_LIMIT: u64 = 1024;

#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }

    fn runtime(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_RUNTIME, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Structural(_)
            | Error::Size(_)
            | Error::Export(_)
            | Error::Divergence { .. }
            | Error::FineTune { .. } => EXIT_RUNTIME,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CmdResult = std::result::Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(name = "saqnn", version, about = "Spectral adaptive quantum neural network toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a built-in target function to CSV.
    GenData(GenDataArgs),
    /// Train a model and write it as JSON.
    Train(Box<TrainArgs>),
    /// Report the MSE of a saved model on a CSV dataset.
    Eval(EvalArgs),
    /// Emit the circuit of a saved model at one input.
    Synth(SynthArgs),
    /// Term counts and resources for a Sobolev accuracy target.
    Bounds(BoundsArgs),
    /// Evaluate a two-dimensional model on a uniform grid.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
struct GenDataArgs {
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

/// One layer of training hyperparameters. Absent fields fall through to the
/// layer below (flags over config file over defaults).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct HyperLayer {
    #[arg(long, visible_alias = "lr")]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub scheduler_period: Option<usize>,
    #[arg(long)]
    pub scheduler_factor: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub crosscheck_every: Option<usize>,
    #[arg(long)]
    pub init_jitter: Option<f64>,
    #[arg(long)]
    pub init_regulator: Option<f64>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
}

impl HyperLayer {
    fn apply(&self, h: &mut Hyperparams) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { h.$f = v; } )* };
        }
        take!(
            learning_rate,
            max_iters,
            fd_step,
            scheduler_period,
            scheduler_factor,
            seed,
            crosscheck_every,
            init_jitter,
            init_regulator,
            grad_tol
        );
    }
}

/// How the model's frequency set is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencySpec {
    /// `{-k..k}^d` (Fourier) or `{0..k}^d` (Chebyshev).
    Cube(u32),
    /// The `n` smallest Fourier frequencies in `ℓ₂`.
    L2Minimal(usize),
    List(Vec<Vec<i64>>),
}

impl FrequencySpec {
    pub fn build(&self, d: usize, basis: Basis) -> crate::Result<Vec<FrequencyVector>> {
        match (self, basis) {
            (FrequencySpec::Cube(k), Basis::Fourier) => enumerate_cube_frequencies(d, *k),
            (FrequencySpec::Cube(k), Basis::Chebyshev) => Ok(enumerate_cube_frequencies(d, *k)?
                .into_iter()
                .filter(|j| j.components().iter().all(|&c| c >= 0))
                .collect()),
            (FrequencySpec::L2Minimal(n), Basis::Fourier) => enumerate_l2_minimal(d, *n),
            (FrequencySpec::L2Minimal(_), Basis::Chebyshev) => {
                Err(Error::config("frequencies.l2_minimal requires the fourier basis"))
            }
            (FrequencySpec::List(list), _) => Ok(list.iter().cloned().map(FrequencyVector).collect()),
        }
    }
}

fn parse_frequency_list(text: &str) -> std::result::Result<Vec<Vec<i64>>, String> {
    text.split(';')
        .map(|term| {
            term.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|e| format!("bad frequency component {c:?}: {e}")))
                .collect()
        })
        .collect()
}

/// Config file schema for `train`; every field is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub d: Option<usize>,
    pub basis: Option<Basis>,
    pub encoding: Option<Encoding>,
    pub frequencies: Option<FrequencySpec>,
    pub normalize: Option<bool>,
    pub rescale: Option<f64>,
    pub tau: Option<f64>,
    pub rescale_cap: Option<f64>,
    #[serde(default)]
    pub hyperparams: HyperLayer,
    pub train: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub trace_out: Option<PathBuf>,
}

/// Fully resolved `train` settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    /// Input dimension; taken from the data when absent.
    pub d: Option<usize>,
    pub basis: Basis,
    pub encoding: Encoding,
    pub frequencies: FrequencySpec,
    /// Divide targets by the training maximum before fitting.
    pub normalize: bool,
    /// Fixed `a'`; skips fine-tuning when set.
    pub rescale: Option<f64>,
    pub tau: f64,
    pub rescale_cap: f64,
    pub hyperparams: Hyperparams,
    pub train: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub trace_out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> crate::Result<()> {
        let field = |name: &str, msg: &str| Err(Error::config(format!("{name}: {msg}")));
        if let Some(0) = self.d {
            return field("d", "must be at least 1");
        }
        if let Some(a) = self.rescale {
            if !(a.is_finite() && a > 0.0) {
                return field("rescale", "must be finite and positive");
            }
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return field("tau", "must be finite and positive");
        }
        if !(self.rescale_cap.is_finite() && self.rescale_cap >= 1.0) {
            return field("rescale_cap", "must be at least 1");
        }
        self.hyperparams.validate().map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("hyperparams.{msg}")),
            other => other,
        })?;
        match (&self.train, &self.test, &self.data) {
            (Some(_), Some(_), None) | (None, None, Some(_)) => {}
            _ => return field("train/test/data", "give either train and test, or data alone"),
        }
        if self.out.is_none() {
            return field("out", "missing output model path");
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long)]
    test: Option<PathBuf>,
    /// Single CSV split into a training half and a test half.
    #[arg(long, conflicts_with_all = ["train", "test"])]
    data: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where the per-iteration loss trace goes if training fails.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    basis: Option<Basis>,
    #[arg(long)]
    encoding: Option<Encoding>,
    #[arg(long, group = "freq")]
    cube: Option<u32>,
    #[arg(long, group = "freq")]
    l2_terms: Option<usize>,
    /// Explicit frequencies, e.g. "0,0;1,1;-1,-1".
    #[arg(long, group = "freq", value_parser = parse_frequency_list)]
    frequencies: Option<Vec<Vec<i64>>>,
    #[arg(long, overrides_with = "no_normalize")]
    normalize: bool,
    #[arg(long)]
    no_normalize: bool,
    #[arg(long)]
    rescale: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    rescale_cap: Option<f64>,
    #[command(flatten)]
    hyper: HyperLayer,
    /// Print the resolved configuration as JSON and stop.
    #[arg(long)]
    print_config: bool,
}

fn read_config_file(path: &Path) -> crate::Result<RunConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::config(format!("config {}: {e}", path.display())))
}

fn env_seed(env: Option<String>) -> crate::Result<Option<u64>> {
    env.map(|s| s.trim().parse().map_err(|_| Error::config(format!("{SEED_ENV}={s:?} is not an unsigned integer"))))
        .transpose()
}

fn resolve_config(args: &TrainArgs, env: Option<String>) -> crate::Result<RunConfig> {
    let file = match &args.config {
        Some(p) => read_config_file(p)?,
        None => RunConfigFile::default(),
    };
    let mut hyper = Hyperparams::default();
    if let Some(seed) = env_seed(env)? {
        hyper.seed = seed;
    }
    file.hyperparams.apply(&mut hyper);
    args.hyper.apply(&mut hyper);

    let flag_freqs = args
        .cube
        .map(FrequencySpec::Cube)
        .or(args.l2_terms.map(FrequencySpec::L2Minimal))
        .or(args.frequencies.clone().map(FrequencySpec::List));
    let flag_normalize = match (args.normalize, args.no_normalize) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    };
    // A flag naming either data source replaces both file entries.
    let (train, test, data) = if args.train.is_some() || args.test.is_some() || args.data.is_some() {
        (args.train.clone(), args.test.clone(), args.data.clone())
    } else {
        (file.train, file.test, file.data)
    };
    let config = RunConfig {
        d: args.d.or(file.d),
        basis: args.basis.or(file.basis).unwrap_or(Basis::Fourier),
        encoding: args.encoding.or(file.encoding).unwrap_or(Encoding::Dense),
        frequencies: flag_freqs
            .or(file.frequencies)
            .ok_or_else(|| Error::config("frequencies: missing (use --cube, --l2-terms or --frequencies)"))?,
        normalize: flag_normalize.or(file.normalize).unwrap_or(true),
        rescale: args.rescale.or(file.rescale),
        tau: args.tau.or(file.tau).unwrap_or(1e-3),
        rescale_cap: args.rescale_cap.or(file.rescale_cap).unwrap_or(16.0),
        hyperparams: hyper,
        train,
        test,
        data,
        out: args.out.clone().or(file.out),
        trace_out: args.trace_out.clone().or(file.trace_out),
    };
    if !args.print_config {
        config.validate()?;
    }
    Ok(config)
}

fn read_dataset(path: &Path, basis: Basis) -> std::result::Result<Dataset, Failure> {
    let file = File::open(path).map_err(|e| Failure::usage(format!("cannot open {}: {e}", path.display())))?;
    Dataset::read_csv(file, basis).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn create_file(path: &Path) -> std::result::Result<File, Failure> {
    File::create(path).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    create_file(path)?
        .write_all(text.as_bytes())
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_gen_data(args: &GenDataArgs, env: Option<String>) -> CmdResult {
    let target: Target = args.target.parse()?;
    let seed = match args.seed {
        Some(s) => s,
        None => env_seed(env)?.unwrap_or(0),
    };
    let data = generate_dataset(target, args.count, seed)?;
    data.write_csv(create_file(&args.out)?)?;
    println!("wrote {} rows to {}", data.len(), args.out.display());
    Ok(())
}

fn trace_path(config: &RunConfig) -> PathBuf {
    config.trace_out.clone().unwrap_or_else(|| config.out.as_ref().expect("validated").with_extension("trace.csv"))
}

fn cmd_train(args: &TrainArgs, env: Option<String>) -> CmdResult {
    let rc = resolve_config(args, env)?;
    if args.print_config {
        println!("{}", serde_json::to_string_pretty(&rc).map_err(Error::from)?);
        return Ok(());
    }
    let (train_raw, test_raw) = match (&rc.train, &rc.test, &rc.data) {
        (Some(tr), Some(te), None) => (read_dataset(tr, rc.basis)?, read_dataset(te, rc.basis)?),
        (None, None, Some(all)) => read_dataset(all, rc.basis)?.split_halves(),
        _ => unreachable!("validated"),
    };
    let d = rc.d.unwrap_or(train_raw.d());
    if train_raw.d() != d || test_raw.d() != d {
        return Err(Failure::usage(format!(
            "dimension mismatch: config d={d}, training data d={}, test data d={}",
            train_raw.d(),
            test_raw.d()
        )));
    }
    if train_raw.is_empty() || test_raw.is_empty() {
        return Err(Failure::usage("training and test data must both be non-empty"));
    }
    let y_scale = if rc.normalize {
        let max = train_raw.max_y();
        if max <= 0.0 {
            return Err(Failure::usage("normalize: training targets have no positive maximum"));
        }
        max
    } else {
        1.0
    };
    let (train_data, test_data) = (train_raw.scaled(y_scale)?, test_raw.scaled(y_scale)?);
    let config = SaqnnConfig::new(d, rc.frequencies.build(d, rc.basis)?, rc.basis, rc.encoding)?;
    let hyper = &rc.hyperparams;

    let outcome = match rc.rescale {
        Some(a) => train(&config, &train_data, &test_data, hyper, a).map(|(p, r)| (p, r, Vec::new())),
        None => fine_tune_rescale(&config, &train_data, &test_data, hyper, rc.tau, rc.rescale_cap)
            .map(|o| (o.params, o.report, o.rungs)),
    };
    let (params, report, rungs) = match outcome {
        Ok(v) => v,
        Err(Error::Divergence { iteration, msg, trace }) => {
            let path = trace_path(&rc);
            let mut text = String::from("iteration,train_mse\n");
            for (i, v) in trace.iter().enumerate() {
                text.push_str(&format!("{},{v:?}\n", i + 1));
            }
            write_text(&path, &text)?;
            return Err(Failure::runtime(format!(
                "training diverged at iteration {iteration}: {msg}; trace written to {}",
                path.display()
            )));
        }
        Err(Error::FineTune { trace }) => {
            let path = trace_path(&rc);
            let mut text = String::from("a,train_mse\n");
            for (a, v) in &trace {
                text.push_str(&format!("{a:?},{v:?}\n"));
            }
            write_text(&path, &text)?;
            return Err(Failure::runtime(format!(
                "no rescale value up to {} reached train MSE {}; trace written to {}",
                rc.rescale_cap,
                rc.tau,
                path.display()
            )));
        }
        Err(e) => return Err(e.into()),
    };
    for (a, mse) in &rungs {
        println!("rung a={a} train_mse={mse:.6e}");
    }
    let out = rc.out.as_ref().expect("validated");
    let mut saved = SavedModel::new(&config, &params, hyper.seed);
    saved.y_scale = y_scale;
    save_model(out, &saved).map_err(|e| Failure::usage(format!("cannot write {}: {e}", out.display())))?;
    print_report(&report, y_scale);
    println!("model written to {}", out.display());
    Ok(())
}

fn print_report(report: &TrainReport, y_scale: f64) {
    let s2 = y_scale * y_scale;
    println!(
        "a={} iterations={} train_mse={:.6e} test_mse={:.6e} crosscheck_deviation={:.3e} seconds={:.2}",
        report.a,
        report.train_mse.len(),
        report.final_train_mse() * s2,
        report.test_mse * s2,
        report.crosscheck_deviation,
        report.wall_seconds
    );
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
}

fn load(path: &Path) -> std::result::Result<(SavedModel, SaqnnConfig, ParameterSet), Failure> {
    let saved = load_model(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let (config, params) = saved.parts()?;
    Ok((saved, config, params))
}

fn cmd_eval(args: &EvalArgs) -> CmdResult {
    let (saved, config, params) = load(&args.model)?;
    let data = read_dataset(&args.data, config.basis())?;
    if data.d() != config.d() {
        return Err(Failure::usage(format!("dimension mismatch: model d={}, data d={}", config.d(), data.d())));
    }
    if data.is_empty() {
        return Err(Failure::usage("dataset is empty"));
    }
    let mut sum = 0.0;
    for (x, y) in data.xs().iter().zip(data.ys()) {
        let r = saved.y_scale * forward(&config, &params, x)? - y;
        sum += r * r;
    }
    println!("rows={} mse={:.12e}", data.len(), sum / data.len() as f64);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum SynthFormat {
    List,
    Qasm,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    model: PathBuf,
    /// Input point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, value_enum, default_value_t = SynthFormat::List)]
    format: SynthFormat,
    /// Rewrite into ry, rz, u1, x and cx gates.
    #[arg(long)]
    decompose: bool,
    /// Write the circuit here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| Failure::usage(format!("bad input coordinate {v:?}: {e}"))))
        .collect()
}

fn cmd_synth(args: &SynthArgs) -> CmdResult {
    if args.format == SynthFormat::Qasm && !args.decompose {
        return Err(Failure::usage("OpenQASM export needs elementary gates; add --decompose"));
    }
    let (saved, config, params) = load(&args.model)?;
    let x = parse_point(&args.x)?;
    if x.len() != config.d() {
        return Err(Failure::usage(format!("--x has {} coordinates, model has d={}", x.len(), config.d())));
    }
    config.check_input(&x)?;
    let mut circuit = assemble_circuit(&config, &params, &x)?;
    if args.decompose {
        circuit = decompose_full(&circuit);
    }
    let text = match args.format {
        SynthFormat::List => circuit.listing(),
        SynthFormat::Qasm => export_qasm(&circuit)?,
    };
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    // Trainable parameters belong to the model, not to the (possibly decomposed) gate list.
    let p = circuit_metrics(&circuit, true);
    println!("width={} params={} depth={} cnot={}", p.width, config.num_params(), p.depth, p.cnot_count);
    println!("forward={:?}", saved.y_scale * forward(&config, &params, &x)?);
    Ok(())
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    s: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    eps: f64,
    /// Logarithm base: e or 2.
    #[arg(long, default_value = "e")]
    base: LogBase,
    /// Encoding used for the resource profile.
    #[arg(long, default_value = "dense")]
    encoding: Encoding,
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    if args.d < 2 {
        return Err(Failure::usage("bounds need d ≥ 2"));
    }
    let spec = SobolevSpec::new(args.s, args.d, args.eps)?;
    let req = required_terms(&spec, args.base)?;
    let [e1, e2, e3] = req.boundaries;
    println!("case={} n={}", req.case, req.per_case);
    println!("boundaries E1={e1:.6e} E2={e2:.6e} E3={e3:.6e}");
    println!("unified n={}", req.unified);
    let data_qubits = match args.encoding {
        Encoding::Dense => 1,
        Encoding::Tensor => args.d as usize,
    };
    match req.per_case {
        TermCount::Exact(n) if n <= MEASURED_PROFILE_LIMIT => {
            let t = resource_profile_theoretical(n as usize, args.d as usize, args.encoding)?;
            let p = t.profile;
            print!("resources width={} params={} depth={} cnot={}", p.width, p.param_count, p.depth, p.cnot_count);
            match t.depth_ratio {
                Some(r) => println!(" depth/(n log2 n)={r:.3}"),
                None => println!(),
            }
        }
        TermCount::Exact(n) => {
            let m = control_register_size(n as usize);
            println!(
                "resources width={} params={} depth<={:.6e}",
                m + data_qubits,
                (1u64 << m) - 1 + n,
                DEPTH_CONSTANT * n as f64 * (n as f64).log2()
            );
        }
        TermCount::Log2(l) => {
            // n = 2^l with l past the exact limit, so 2^m - 1 + n ≈ 2^m + 2^l.
            let m = l.floor() + 1.0;
            let params = m + (1.0 + (l - m).exp2()).log2();
            let depth = l + l.log2() + DEPTH_CONSTANT.log2();
            println!("resources width={} params=2^{params:.6} depth<=2^{depth:.6}", m as usize + data_qubits);
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 50)]
    resolution: usize,
    #[arg(long)]
    out: PathBuf,
}

/// `count` endpoint-inclusive points from `lo` to `hi`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 }).collect()
}

fn cmd_grid(args: &GridArgs) -> CmdResult {
    let (saved, config, params) = load(&args.model)?;
    if config.d() != 2 {
        return Err(Failure::usage(format!("grid export needs a d=2 model, got d={}", config.d())));
    }
    if args.resolution < 2 {
        return Err(Failure::usage("resolution must be at least 2"));
    }
    let (lo, hi) = config.basis().domain();
    let axis = linspace(lo, hi, args.resolution);
    let mut w = csv::Writer::from_writer(create_file(&args.out)?);
    w.write_record(["x0", "x1", "y_model"]).map_err(Error::from)?;
    for &x0 in &axis {
        for &x1 in &axis {
            let y = saved.y_scale * forward(&config, &params, &[x0, x1])?;
            w.write_record([x0, x1, y].map(|v| format!("{v:?}"))).map_err(Error::from)?;
        }
    }
    w.flush().map_err(Error::from)?;
    println!("wrote {} rows to {}", axis.len() * axis.len(), args.out.display());
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let env = std::env::var(SEED_ENV).ok();
    let result = match &cli.command {
        Command::GenData(a) => cmd_gen_data(a, env),
        Command::Train(a) => cmd_train(a, env),
        Command::Eval(a) => cmd_eval(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Grid(a) => cmd_grid(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}
