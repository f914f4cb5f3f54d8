//! Circuit assembly, simulated and closed-form forward passes, and analytic
//! initialization.
//!
//! Register layout: control qubits `0..m`, data qubits `m..m+d` (tensor
//! encoding) or the single qubit `m` (dense encoding). Control slot `r = 0` is
//! the regulator, slots `1..=n` carry the series terms and slots above `n`
//! form the constant tail.

mod persist;

pub use persist::{load_model, save_model, SavedModel};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{make_multiplexor_ry, pattern_of, Axis, Circuit, Gate};
use crate::error::{Error, Result};
use crate::simulator::simulate;
use crate::spectral::{basis_value, Basis, FrequencyVector, SeriesCoefficients};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    /// One controlled rotation per input coordinate.
    Tensor,
    /// One controlled `Rz(-2 j·x)` per term on a single data qubit.
    Dense,
}

impl std::fmt::Display for Encoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Encoding::Tensor => "tensor",
            Encoding::Dense => "dense",
        })
    }
}

impl std::str::FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(Encoding::Tensor),
            "dense" => Ok(Encoding::Dense),
            other => Err(Error::config(format!("unknown encoding {other:?} (expected tensor or dense)"))),
        }
    }
}

/// `⌈log₂(n+1)⌉`: slot 0 is reserved, so `2^m ≥ n + 1`.
pub fn control_register_size(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaqnnConfig {
    d: usize,
    frequencies: Vec<FrequencyVector>,
    basis: Basis,
    encoding: Encoding,
    m: usize,
}

impl SaqnnConfig {
    /// Uses the smallest admissible control register.
    pub fn new(d: usize, frequencies: Vec<FrequencyVector>, basis: Basis, encoding: Encoding) -> Result<Self> {
        let m = control_register_size(frequencies.len());
        Self::with_control_size(d, frequencies, basis, encoding, m)
    }

    pub fn with_control_size(
        d: usize,
        frequencies: Vec<FrequencyVector>,
        basis: Basis,
        encoding: Encoding,
        m: usize,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::config("input dimension must be at least 1"));
        }
        if frequencies.is_empty() {
            return Err(Error::config("at least one frequency is required"));
        }
        if basis == Basis::Chebyshev && encoding == Encoding::Dense {
            return Err(Error::config("dense encoding is only defined for the Fourier basis"));
        }
        if m >= usize::BITS as usize || (1usize << m) < frequencies.len() + 1 {
            return Err(Error::config(format!(
                "control register of {m} qubits cannot hold {} terms plus the regulator slot",
                frequencies.len()
            )));
        }
        for (r, j) in frequencies.iter().enumerate() {
            if j.dim() != d {
                return Err(Error::structural(format!(
                    "frequency #{} has {} components, expected {d}",
                    r + 1,
                    j.dim()
                )));
            }
            if basis == Basis::Chebyshev && j.components().iter().any(|&c| c < 0) {
                return Err(Error::config(format!("Chebyshev frequency #{} has a negative component", r + 1)));
            }
        }
        Ok(SaqnnConfig { d, frequencies, basis, encoding, m })
    }

    /// Configuration whose terms are the frequencies of `coeffs`.
    pub fn for_series(coeffs: &SeriesCoefficients, encoding: Encoding) -> Result<Self> {
        Self::new(coeffs.dim(), coeffs.frequencies(), coeffs.basis, encoding)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.frequencies.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn frequencies(&self) -> &[FrequencyVector] {
        &self.frequencies
    }

    pub fn data_qubits(&self) -> usize {
        match self.encoding {
            Encoding::Tensor => self.d,
            Encoding::Dense => 1,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.m + self.data_qubits()
    }

    pub fn num_theta(&self) -> usize {
        (1 << self.m) - 1
    }

    pub fn num_params(&self) -> usize {
        self.num_theta() + self.n()
    }

    pub fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::structural(format!("input has {} components, model expects {}", x.len(), self.d)));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("input is not finite"));
        }
        if self.basis == Basis::Chebyshev && x.iter().any(|v| v.abs() > 1.0 + 1e-12) {
            return Err(Error::domain("Chebyshev inputs must lie in [-1, 1]"));
        }
        Ok(())
    }

    /// `B_r(x)` for every term, in slot order.
    pub fn basis_values(&self, x: &[f64]) -> Vec<Complex64> {
        self.frequencies.iter().map(|j| basis_value(self.basis, j, x)).collect()
    }
}

/// Trainable state `(θ, φ)` plus the fixed rescale coefficient `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub a: f64,
}

impl ParameterSet {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain(format!("rescale coefficient must be finite and positive, got {a}")));
        }
        Ok(ParameterSet { theta, phi, a })
    }

    pub fn check(&self, config: &SaqnnConfig) -> Result<()> {
        if self.theta.len() != config.num_theta() || self.phi.len() != config.n() {
            return Err(Error::structural(format!(
                "expected {} θ and {} φ, got {} and {}",
                config.num_theta(),
                config.n(),
                self.theta.len(),
                self.phi.len()
            )));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::domain("rescale coefficient must be finite and positive"));
        }
        if self.theta.iter().chain(&self.phi).any(|v| !v.is_finite()) {
            return Err(Error::domain("parameters must be finite"));
        }
        Ok(())
    }

    /// `θ` followed by `φ`; `a` is never trainable.
    pub fn trainable(&self) -> Vec<f64> {
        self.theta.iter().chain(&self.phi).copied().collect()
    }

    pub fn set_trainable(&mut self, values: &[f64]) {
        let (t, p) = values.split_at(self.theta.len());
        self.theta.copy_from_slice(t);
        self.phi.copy_from_slice(p);
    }
}

/// Real amplitudes `a_r` prepared by `P(θ)` on `|0⟩^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlAmplitudes {
    pub amps: Vec<f64>,
}

impl ControlAmplitudes {
    /// Simulates `P(θ)` alone.
    pub fn from_theta(theta: &[f64], m: usize) -> Result<Self> {
        let state = simulate(&build_state_prep(theta, m)?)?;
        Ok(ControlAmplitudes { amps: state.amplitudes().iter().map(|c| c.re).collect() })
    }
}

/// `m` multiplexor-`Ry` gates; gate `i` (1-based) targets qubit `i-1`, is
/// controlled by qubits `0..i-1` and uses `θ[2^{i-1}-1 .. 2^i-1]`.
pub fn build_state_prep(theta: &[f64], m: usize) -> Result<Circuit> {
    if m == 0 || theta.len() != (1 << m) - 1 {
        return Err(Error::structural(format!(
            "state preparation on {m} qubits needs 2^{m}-1 angles, got {}",
            theta.len()
        )));
    }
    let mut c = Circuit::new(m);
    for i in 0..m {
        let offset = (1 << i) - 1;
        let controls: Vec<usize> = (0..i).collect();
        let mut g = make_multiplexor_ry(&controls, i, &theta[offset..offset + (1 << i)])?;
        if let Gate::Multiplexor { theta_offset, .. } = &mut g {
            *theta_offset = Some(offset);
        }
        c.push(g)?;
    }
    Ok(c)
}

/// Inverse of [`build_state_prep`]: angles that prepare `target`.
///
/// Level `i` splits on qubit `i`. Inner nodes use subtree masses, so the
/// leaf level alone carries signs and negative targets are reproduced too.
pub fn angles_for_amplitudes(target: &[f64]) -> Result<Vec<f64>> {
    let len = target.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::structural(format!("target length {len} is not a power of two ≥ 2")));
    }
    let norm: f64 = target.iter().map(|t| t * t).sum();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::domain("target amplitudes are zero or not finite"));
    }
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("target amplitudes have squared norm {norm}, expected 1")));
    }
    let m = len.trailing_zeros() as usize;
    let mut theta = vec![0.0; len - 1];
    for i in 0..m {
        let offset = (1 << i) - 1;
        let low_mask = (1 << i) - 1;
        for p in 0..(1usize << i) {
            let branch = |bit: usize| {
                target.iter().enumerate().filter(move |(idx, _)| idx & low_mask == p && (idx >> i) & 1 == bit)
            };
            theta[offset + p] = if i + 1 == m {
                let zero = target[p];
                let one = target[p | (1 << i)];
                2.0 * one.atan2(zero)
            } else {
                let mass = |bit| branch(bit).map(|(_, t)| t * t).sum::<f64>().sqrt();
                2.0 * mass(1).atan2(mass(0))
            };
        }
    }
    Ok(theta)
}

fn control_qubits(config: &SaqnnConfig) -> Vec<usize> {
    (0..config.m).collect()
}

/// Layer `r`: pattern-controlled basis block on the data register followed
/// by the pattern-controlled phase `e^{iφ_r}`.
pub fn build_spectrum_layer(
    r: usize,
    j: &FrequencyVector,
    phi_r: f64,
    x: &[f64],
    config: &SaqnnConfig,
) -> Result<Circuit> {
    if r == 0 || r >= 1 << config.m {
        return Err(Error::structural(format!("layer index {r} outside 1..2^{}", config.m)));
    }
    if j.dim() != config.d {
        return Err(Error::structural("frequency dimension does not match the configuration"));
    }
    config.check_input(x)?;
    let controls = control_qubits(config);
    let pattern = pattern_of(r, config.m);
    let controlled = |axis, target, angle| Gate::ControlledRotation {
        axis,
        controls: controls.clone(),
        pattern: pattern.clone(),
        target,
        angle,
    };
    let mut c = Circuit::new(config.num_qubits());
    match (config.basis, config.encoding) {
        (Basis::Fourier, Encoding::Tensor) => {
            for (i, (&ji, &xi)) in j.components().iter().zip(x).enumerate() {
                c.push(controlled(Axis::Z, config.m + i, -2.0 * ji as f64 * xi))?;
            }
        }
        (Basis::Fourier, Encoding::Dense) => c.push(controlled(Axis::Z, config.m, -2.0 * j.dot(x)))?,
        (Basis::Chebyshev, Encoding::Tensor) => {
            for (i, (&ji, &xi)) in j.components().iter().zip(x).enumerate() {
                c.push(controlled(Axis::Y, config.m + i, 2.0 * ji as f64 * xi.clamp(-1.0, 1.0).acos()))?;
            }
        }
        (Basis::Chebyshev, Encoding::Dense) => {
            return Err(Error::config("dense encoding is only defined for the Fourier basis"))
        }
    }
    c.push(Gate::ControlledPhase { controls, pattern, angle: phi_r, phi_index: Some(r - 1) })?;
    Ok(c)
}

/// Full circuit with sections `P(θ)`, `layer r` for each term, `padding` and
/// `P(θ)†`.
pub fn assemble_circuit(config: &SaqnnConfig, params: &ParameterSet, x: &[f64]) -> Result<Circuit> {
    params.check(config)?;
    config.check_input(x)?;
    let prep = build_state_prep(&params.theta, config.m)?;
    let mut c = Circuit::new(config.num_qubits());
    c.push_section("P(θ)", prep.gates().iter().cloned())?;
    for (idx, (j, &phi)) in config.frequencies.iter().zip(&params.phi).enumerate() {
        let layer = build_spectrum_layer(idx + 1, j, phi, x, config)?;
        c.push_section(format!("layer {}", idx + 1), layer.gates().iter().cloned())?;
    }
    let padding = Gate::Mcx { controls: control_qubits(config), pattern: vec![false; config.m], target: config.m };
    c.push_section("padding", [padding])?;
    c.push_section("P(θ)†", prep.inverse().gates().iter().cloned())?;
    Ok(c)
}

/// `a·√⟨0|U†OU|0⟩` by statevector simulation.
pub fn forward(config: &SaqnnConfig, params: &ParameterSet, x: &[f64]) -> Result<f64> {
    let state = simulate(&assemble_circuit(config, params, x)?)?;
    Ok(params.a * state.expectation_zero_projector().sqrt())
}

/// `a·|Σ_{r≤n} a_r² e^{iφ_r} B_r + Σ_{r>n} a_r²|` from precomputed pieces.
pub(crate) fn closed_form_value(amps: &[f64], phi: &[f64], a: f64, basis: &[Complex64]) -> f64 {
    let n = phi.len();
    let tail: f64 = amps[n + 1..].iter().map(|v| v * v).sum();
    let sum: Complex64 =
        amps[1..=n].iter().zip(phi).zip(basis).map(|((&w, &p), &b)| w * w * Complex64::from_polar(1.0, p) * b).sum();
    a * (sum + tail).norm()
}

/// Analytic evaluation of the same quantity as [`forward`].
pub fn closed_form_forward(config: &SaqnnConfig, params: &ParameterSet, x: &[f64]) -> Result<f64> {
    params.check(config)?;
    config.check_input(x)?;
    let amps = ControlAmplitudes::from_theta(&params.theta, config.m)?;
    Ok(closed_form_value(&amps.amps, &params.phi, params.a, &config.basis_values(x)))
}

/// Parameters that represent `|Σ c_r B_r(x)|` exactly: `a = Σ|c_r|`,
/// `a_r² = |c_r|/a` on slots `1..=n`, `φ_r = arg c_r`.
pub fn init_from_series(coeffs: &SeriesCoefficients, m: usize) -> Result<ParameterSet> {
    coeffs.validate()?;
    let n = coeffs.len();
    if m == 0 || m >= usize::BITS as usize || (1usize << m) < n + 1 {
        return Err(Error::structural(format!("{m} control qubits cannot hold {n} terms")));
    }
    let a = coeffs.l1_norm();
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::domain("series coefficients are all zero"));
    }
    let mut target = vec![0.0; 1 << m];
    for (slot, (_, c)) in target[1..].iter_mut().zip(&coeffs.entries) {
        *slot = (c.norm() / a).sqrt();
    }
    // Re-normalize away rounding in Σ|c_r|/a.
    let norm = target.iter().map(|t| t * t).sum::<f64>().sqrt();
    target.iter_mut().for_each(|t| *t /= norm);
    let phi = coeffs
        .entries
        .iter()
        .map(|(_, c)| match coeffs.basis {
            Basis::Fourier => c.arg(),
            Basis::Chebyshev => {
                if c.re < 0.0 {
                    std::f64::consts::PI
                } else {
                    0.0
                }
            }
        })
        .collect();
    ParameterSet::new(angles_for_amplitudes(&target)?, phi, a)
}
