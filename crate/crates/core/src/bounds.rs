//! Approximation-number bounds for the Sobolev unit ball `H^s` on
//! `[-π, π]^d`, their inversion into required term counts, and measured
//! resource profiles of assembled circuits.
//!
//! The base of the logarithm inside the bounds is a switch ([`LogBase`]);
//! natural log is the default. Term counts that exceed `2^53` are reported as
//! `log₂ n` only.

use std::fmt;

use serde::Serialize;

use crate::circuit::{circuit_metrics, ResourceProfile};
use crate::error::{Error, Result};
use crate::model::{assemble_circuit, Encoding, ParameterSet, SaqnnConfig};
use crate::spectral::{enumerate_l2_minimal, Basis};

/// Largest term count reported exactly.
pub const EXACT_LIMIT_LOG2: f64 = 53.0;

/// Constant `C` in the checked claim `depth ≤ C·n·log₂ n` (n ≥ 2) under the
/// linear multi-controlled-gate cost model.
///
/// The ratio is largest at `n = 2` (19.5, tensor encoding) and decreases
/// towards roughly 7 (tensor) and 5 (dense) as `n` grows.
pub const DEPTH_CONSTANT: f64 = 24.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "natural" | "ln" => Ok(LogBase::Natural),
            "2" | "two" | "log2" => Ok(LogBase::Two),
            other => Err(Error::config(format!("unknown log base {other:?} (expected e or 2)"))),
        }
    }
}

/// Smoothness `s ≥ 1`, dimension `d ≥ 2`, accuracy `0 < ε ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SobolevSpec {
    pub s: u32,
    pub d: u32,
    pub epsilon: f64,
}

impl SobolevSpec {
    pub fn new(s: u32, d: u32, epsilon: f64) -> Result<Self> {
        if s == 0 {
            return Err(Error::domain("smoothness s must be at least 1"));
        }
        if d < 2 {
            return Err(Error::domain(format!("the bounds require d ≥ 2, got {d}")));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::domain(format!("accuracy must lie in (0, 1], got {epsilon}")));
        }
        Ok(SobolevSpec { s, d, epsilon })
    }
}

/// Upper bound on the approximation number `a_n`.
///
/// For `d ≤ n ≤ 2^d`: `4^s (log(1 + d/log n) / log n)^{s/2}`.
/// For `n ≥ 2^d`: `4^s d^{-s/2} n^{-s/d}`. At `n = 2^d` the smaller applies.
pub fn approximation_number_bound(n: u64, s: u32, d: u32, base: LogBase) -> Result<f64> {
    if s == 0 || d < 2 {
        return Err(Error::domain("need s ≥ 1 and d ≥ 2"));
    }
    if n < u64::from(d) {
        return Err(Error::domain(format!("n = {n} is below d = {d}")));
    }
    let (sf, df, nf) = (f64::from(s), f64::from(d), n as f64);
    let pre = 4f64.powi(s as i32);
    let low = || {
        let ln = base.log(nf);
        pre * (base.log(1.0 + df / ln) / ln).powf(sf / 2.0)
    };
    let high = || pre * df.powf(-sf / 2.0) * nf.powf(-sf / df);
    let pow2d = if d < 64 { Some(1u64 << d) } else { None };
    Ok(match pow2d {
        Some(p) if n > p => high(),
        Some(p) if n == p => low().min(high()),
        _ => low(),
    })
}

/// A term count, exact when it fits comfortably in a double.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermCount {
    Exact(u64),
    Log2(f64),
}

impl TermCount {
    pub fn log2(self) -> f64 {
        match self {
            TermCount::Exact(n) => (n as f64).log2(),
            TermCount::Log2(l) => l,
        }
    }

    /// `⌈base^exponent⌉`, exact for integral `base` and `exponent`.
    fn power(base: f64, exponent: f64) -> TermCount {
        let log2 = exponent * base.log2();
        if log2 > EXACT_LIMIT_LOG2 {
            return TermCount::Log2(log2);
        }
        if base.fract() == 0.0 && exponent.fract() == 0.0 && exponent >= 0.0 {
            if let Some(v) = (base as u64).checked_pow(exponent as u32) {
                return TermCount::Exact(v);
            }
        }
        TermCount::Exact(base.powf(exponent).ceil() as u64)
    }

    /// `⌈2^log2⌉`, or the log itself past the exact limit.
    fn from_log2(log2: f64) -> TermCount {
        if log2 > EXACT_LIMIT_LOG2 {
            TermCount::Log2(log2)
        } else {
            TermCount::power(2.0, log2)
        }
    }
}

impl fmt::Display for TermCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermCount::Exact(n) => write!(f, "{n}"),
            TermCount::Log2(l) => write!(f, "2^{l:.6}"),
        }
    }
}

/// Accuracy thresholds separating the four cases, largest first:
/// `E1 = 4^s (log(1 + d/log d)/log d)^{s/2}`, `E2 = 4^s d^{-s/2}`,
/// `E3 = 2^s d^{-s/2}`.
pub fn case_boundaries(s: u32, d: u32, base: LogBase) -> [f64; 3] {
    let (sf, df) = (f64::from(s), f64::from(d));
    let ld = base.log(df);
    [
        4f64.powi(s as i32) * (base.log(1.0 + df / ld) / ld).powf(sf / 2.0),
        4f64.powi(s as i32) * df.powf(-sf / 2.0),
        2f64.powi(s as i32) * df.powf(-sf / 2.0),
    ]
}

fn case_terms(case: u8, s: u32, d: u32, epsilon: f64) -> TermCount {
    let inv = 1.0 / epsilon;
    let growth = inv.powf(2.0 / f64::from(s));
    match case {
        1 => TermCount::Exact(u64::from(d)),
        2 => TermCount::power(f64::from(d) + 1.0, 16.0 * growth),
        3 => TermCount::from_log2(f64::from(d)),
        _ => TermCount::from_log2(6.0 * growth + 4.0 / f64::from(s) * growth * inv.log2()),
    }
}

/// Active case for accuracy `epsilon` and its term count.
///
/// `epsilon` is not restricted to `(0, 1]` here so that every case boundary
/// can be probed; `E1 > 1` for all `d ≥ 2`, so case 1 lies outside the unit
/// accuracy range. Where intervals touch, the case with the smaller `n` wins.
pub fn classify_case(s: u32, d: u32, epsilon: f64, base: LogBase) -> Result<(u8, TermCount)> {
    if s == 0 || d < 2 || epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::domain("need s ≥ 1, d ≥ 2 and a positive finite accuracy"));
    }
    let [e1, e2, e3] = case_boundaries(s, d, base);
    let applicable = [
        (1u8, epsilon >= e1),
        (2, e2 <= epsilon && epsilon <= e1),
        (3, e3 <= epsilon && epsilon <= e2),
        (4, epsilon <= e3),
    ];
    applicable
        .iter()
        .filter(|(_, ok)| *ok)
        .map(|&(c, _)| (c, case_terms(c, s, d, epsilon)))
        .min_by(|a, b| a.1.log2().total_cmp(&b.1.log2()))
        .ok_or_else(|| Error::domain("accuracy matches no case"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RequiredTerms {
    pub case: u8,
    pub per_case: TermCount,
    /// `⌈(d + 1/ε)^{16 (1/ε)^{2/s}}⌉`, valid in every case.
    pub unified: TermCount,
    pub boundaries: [f64; 3],
}

pub fn required_terms(spec: &SobolevSpec, base: LogBase) -> Result<RequiredTerms> {
    let spec = SobolevSpec::new(spec.s, spec.d, spec.epsilon)?;
    let (case, per_case) = classify_case(spec.s, spec.d, spec.epsilon, base)?;
    let inv = 1.0 / spec.epsilon;
    let unified = TermCount::power(f64::from(spec.d) + inv, 16.0 * inv.powf(2.0 / f64::from(spec.s)));
    Ok(RequiredTerms { case, per_case, unified, boundaries: case_boundaries(spec.s, spec.d, base) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoreticalProfile {
    pub n: usize,
    pub profile: ResourceProfile,
    /// `depth / (n log₂ n)`; absent for `n = 1`.
    pub depth_ratio: Option<f64>,
    pub depth_constant: f64,
}

/// Measures the assembled, fully decomposed circuit for `n` Fourier terms
/// (the `n` smallest frequencies in `ℓ₂`) in dimension `d`.
pub fn resource_profile_theoretical(n: usize, d: usize, encoding: Encoding) -> Result<TheoreticalProfile> {
    if n == 0 || d == 0 {
        return Err(Error::domain("need n ≥ 1 and d ≥ 1"));
    }
    let config = SaqnnConfig::new(d, enumerate_l2_minimal(d, n)?, Basis::Fourier, encoding)?;
    let theta = (0..config.num_theta()).map(|k| 0.1 + 0.01 * k as f64).collect();
    let phi = (0..n).map(|k| 0.2 + 0.01 * k as f64).collect();
    let params = ParameterSet::new(theta, phi, 1.0)?;
    let x: Vec<f64> = (0..d).map(|i| 0.3 + 0.1 * i as f64).collect();
    let profile = circuit_metrics(&assemble_circuit(&config, &params, &x)?, true);
    let depth_ratio = (n >= 2).then(|| profile.depth as f64 / (n as f64 * (n as f64).log2()));
    if let Some(r) = depth_ratio {
        if r > DEPTH_CONSTANT {
            return Err(Error::Size(format!("depth {} exceeds {DEPTH_CONSTANT}·n·log₂ n", profile.depth)));
        }
    }
    Ok(TheoreticalProfile { n, profile, depth_ratio, depth_constant: DEPTH_CONSTANT })
}
