//! Datasets, MSE loss, finite-difference Adam training and rescale
//! fine-tuning.
//!
//! Training evaluates the loss through the closed form with per-point basis
//! values cached; every `crosscheck_every` iterations the loss is recomputed
//! through the statevector simulator and the two must agree.

mod dataset;
mod optimizer;

pub use dataset::{generate_dataset, generate_dataset_with, normalize_dataset, Dataset, Target};
pub use optimizer::{finite_diff_gradient, Adam, StepScheduler};

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{angles_for_amplitudes, closed_form_value, forward, ControlAmplitudes, ParameterSet, SaqnnConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    pub learning_rate: f64,
    pub max_iters: usize,
    pub fd_step: f64,
    pub scheduler_period: usize,
    pub scheduler_factor: f64,
    pub seed: u64,
    /// Iterations between simulator cross-checks; 0 disables them.
    pub crosscheck_every: usize,
    /// Standard deviation of the Gaussian jitter on the initial angles.
    pub init_jitter: f64,
    /// Initial amplitude of the regulator slot relative to a zero-frequency
    /// term. A nonzero start lets training move mass there when `a` exceeds
    /// the target's coefficient sum.
    pub init_regulator: f64,
    /// Gradients with Euclidean norm below this are treated as zero; Adam
    /// would otherwise rescale finite-difference noise to full-size steps.
    pub grad_tol: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            learning_rate: 0.01,
            max_iters: 80,
            fd_step: 1e-3,
            scheduler_period: 40,
            scheduler_factor: 0.5,
            seed: 0,
            crosscheck_every: 20,
            init_jitter: 0.1,
            init_regulator: 0.3,
            grad_tol: 1e-6,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("learning_rate", self.learning_rate)?;
        positive("fd_step", self.fd_step)?;
        positive("scheduler_factor", self.scheduler_factor)?;
        if self.max_iters == 0 || self.scheduler_period == 0 {
            return Err(Error::config("max_iters and scheduler_period must be at least 1"));
        }
        if !(self.init_jitter.is_finite() && self.init_jitter >= 0.0) {
            return Err(Error::config("init_jitter must be non-negative"));
        }
        if !(self.init_regulator.is_finite() && self.init_regulator >= 0.0) {
            return Err(Error::config("init_regulator must be non-negative"));
        }
        if !(self.grad_tol.is_finite() && self.grad_tol >= 0.0) {
            return Err(Error::config("grad_tol must be non-negative"));
        }
        Ok(())
    }

    pub fn scheduler(&self) -> StepScheduler {
        StepScheduler { period: self.scheduler_period, factor: self.scheduler_factor }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainReport {
    /// Training MSE after each iteration.
    pub train_mse: Vec<f64>,
    pub test_mse: f64,
    pub a: f64,
    pub wall_seconds: f64,
    /// Largest `|simulated − closed-form|` training loss seen at cross-checks.
    pub crosscheck_deviation: f64,
}

impl TrainReport {
    pub fn final_train_mse(&self) -> f64 {
        self.train_mse.last().copied().unwrap_or(f64::NAN)
    }
}

fn check_data(config: &SaqnnConfig, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::domain("dataset is empty"));
    }
    if data.d() != config.d() {
        return Err(Error::structural(format!("dataset has d={}, model has d={}", data.d(), config.d())));
    }
    if data.domain() != config.basis() {
        return Err(Error::structural("dataset domain does not match the model basis"));
    }
    Ok(())
}

/// `(1/N) Σ (forward(x_i) − y_i)²` through the statevector simulator.
pub fn mse_loss(config: &SaqnnConfig, params: &ParameterSet, data: &Dataset) -> Result<f64> {
    check_data(config, data)?;
    let mut acc = 0.0;
    for (x, y) in data.xs().iter().zip(data.ys()) {
        acc += (forward(config, params, x)? - y).powi(2);
    }
    Ok(acc / data.len() as f64)
}

/// Closed-form loss with basis values cached per sample.
pub struct ClosedFormLoss {
    m: usize,
    basis: Vec<Vec<Complex64>>,
    ys: Vec<f64>,
}

impl ClosedFormLoss {
    pub fn new(config: &SaqnnConfig, data: &Dataset) -> Result<Self> {
        check_data(config, data)?;
        for x in data.xs() {
            config.check_input(x)?;
        }
        Ok(ClosedFormLoss {
            m: config.m(),
            basis: data.xs().iter().map(|x| config.basis_values(x)).collect(),
            ys: data.ys().to_vec(),
        })
    }

    pub fn eval(&self, theta: &[f64], phi: &[f64], a: f64) -> f64 {
        let amps = match ControlAmplitudes::from_theta(theta, self.m) {
            Ok(c) => c.amps,
            Err(_) => return f64::NAN,
        };
        let sum: f64 =
            self.basis.iter().zip(&self.ys).map(|(b, y)| (closed_form_value(&amps, phi, a, b) - y).powi(2)).sum();
        sum / self.ys.len() as f64
    }

    pub fn eval_params(&self, params: &ParameterSet) -> f64 {
        self.eval(&params.theta, &params.phi, params.a)
    }

    /// Loss as a function of the packed trainable vector `θ ‖ φ`.
    pub fn eval_packed(&self, packed: &[f64], num_theta: usize, a: f64) -> f64 {
        let (theta, phi) = packed.split_at(num_theta);
        self.eval(theta, phi, a)
    }
}

/// Starting point: term amplitudes `a_r ∝ 1/(1 + ‖j_r‖²)` (the coefficient
/// decay of an `H²` function), regulator at `init_regulator`, tail empty,
/// zero phases, then seeded Gaussian jitter on every angle.
pub fn initial_params(config: &SaqnnConfig, a: f64, hyper: &Hyperparams) -> Result<ParameterSet> {
    hyper.validate()?;
    let n = config.n();
    let mut target = vec![0.0; 1 << config.m()];
    for (t, j) in target[1..=n].iter_mut().zip(config.frequencies()) {
        *t = 1.0 / (1.0 + j.norm_sqr() as f64);
    }
    target[0] = hyper.init_regulator;
    let norm = target.iter().map(|t| t * t).sum::<f64>().sqrt();
    target.iter_mut().for_each(|t| *t /= norm);
    let mut theta = angles_for_amplitudes(&target)?;
    let mut phi = vec![0.0; n];
    if hyper.init_jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
        let noise = Normal::new(0.0, hyper.init_jitter).map_err(|e| Error::config(e.to_string()))?;
        for v in theta.iter_mut().chain(&mut phi) {
            *v += noise.sample(&mut rng);
        }
    }
    ParameterSet::new(theta, phi, a)
}

/// Trains from [`initial_params`] with rescale `a`.
pub fn train(
    config: &SaqnnConfig,
    train_data: &Dataset,
    test_data: &Dataset,
    hyper: &Hyperparams,
    a: f64,
) -> Result<(ParameterSet, TrainReport)> {
    let init = initial_params(config, a, hyper)?;
    train_from(config, train_data, test_data, hyper, init)
}

/// Full-batch Adam on central finite-difference gradients of the training
/// MSE, starting from `init` (whose `a` stays fixed).
pub fn train_from(
    config: &SaqnnConfig,
    train_data: &Dataset,
    test_data: &Dataset,
    hyper: &Hyperparams,
    init: ParameterSet,
) -> Result<(ParameterSet, TrainReport)> {
    hyper.validate()?;
    init.check(config)?;
    let started = Instant::now();
    let loss = ClosedFormLoss::new(config, train_data)?;
    let test_loss = ClosedFormLoss::new(config, test_data)?;
    let num_theta = config.num_theta();
    let a = init.a;
    let mut params = init;
    let mut packed = params.trainable();
    let mut adam = Adam::new(packed.len());
    let scheduler = hyper.scheduler();
    let mut trace = Vec::with_capacity(hyper.max_iters);
    let mut deviation = 0.0f64;

    for iter in 0..hyper.max_iters {
        let grad = finite_diff_gradient(|p| loss.eval_packed(p, num_theta, a), &packed, hyper.fd_step);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence { iteration: iter + 1, msg: "non-finite gradient".into(), trace });
        }
        if grad.iter().map(|g| g * g).sum::<f64>().sqrt() >= hyper.grad_tol {
            adam.step(&mut packed, &grad, scheduler.rate(hyper.learning_rate, iter));
        }
        let value = loss.eval_packed(&packed, num_theta, a);
        if !value.is_finite() {
            return Err(Error::Divergence { iteration: iter + 1, msg: format!("training loss is {value}"), trace });
        }
        trace.push(value);
        if hyper.crosscheck_every > 0 && (iter + 1) % hyper.crosscheck_every == 0 {
            params.set_trainable(&packed);
            let simulated = mse_loss(config, &params, train_data)?;
            let gap = (simulated - value).abs();
            deviation = deviation.max(gap);
            if gap > 1e-8 {
                return Err(Error::structural(format!(
                    "simulated loss {simulated} and closed-form loss {value} disagree at iteration {}",
                    iter + 1
                )));
            }
        }
    }
    params.set_trainable(&packed);
    let report = TrainReport {
        train_mse: trace,
        test_mse: test_loss.eval_params(&params),
        a,
        wall_seconds: started.elapsed().as_secs_f64(),
        crosscheck_deviation: deviation,
    };
    Ok((params, report))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FineTuneOutcome {
    pub a: f64,
    pub params: ParameterSet,
    pub report: TrainReport,
    /// `(a', final train MSE)` for every rung tried, in order.
    pub rungs: Vec<(f64, f64)>,
}

/// Tries `a' = 1, 2, 4, …` while `a' ≤ cap` and returns the first rung whose
/// final training MSE is at most `tau`.
pub fn fine_tune_rescale(
    config: &SaqnnConfig,
    train_data: &Dataset,
    test_data: &Dataset,
    hyper: &Hyperparams,
    tau: f64,
    cap: f64,
) -> Result<FineTuneOutcome> {
    let mut rungs = Vec::new();
    let mut a = 1.0;
    while a <= cap {
        let (params, report) = train(config, train_data, test_data, hyper, a)?;
        let mse = report.final_train_mse();
        rungs.push((a, mse));
        if mse <= tau {
            return Ok(FineTuneOutcome { a, params, report, rungs });
        }
        a *= 2.0;
    }
    Err(Error::FineTune { trace: rungs })
}
