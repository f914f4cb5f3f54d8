//! Frequency lattices, Fourier and Chebyshev bases, coefficient oracles and
//! series evaluation.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest lattice the enumerators will materialize.
pub const MAX_TERMS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Fourier,
    Chebyshev,
}

impl Basis {
    /// Input domain per coordinate.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Basis::Fourier => (-PI, PI),
            Basis::Chebyshev => (-1.0, 1.0),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Fourier => "fourier",
            Basis::Chebyshev => "chebyshev",
        })
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(Basis::Fourier),
            "chebyshev" => Ok(Basis::Chebyshev),
            other => Err(Error::config(format!("unknown basis {other:?} (expected fourier or chebyshev)"))),
        }
    }
}

/// Integer frequency vector `j = (j_1, …, j_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrequencyVector(pub Vec<i64>);

impl FrequencyVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> i64 {
        self.0.iter().map(|j| j * j).sum()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&j, &xi)| j as f64 * xi).sum()
    }
}

impl From<Vec<i64>> for FrequencyVector {
    fn from(v: Vec<i64>) -> Self {
        FrequencyVector(v)
    }
}

/// All `j` with `‖j‖_∞ ≤ k`, lexicographic (first component most
/// significant). There are `(2k+1)^d` of them.
pub fn enumerate_cube_frequencies(d: usize, k: u32) -> Result<Vec<FrequencyVector>> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let side = 2 * k as usize + 1;
    let count = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(side).filter(|&c| c <= MAX_TERMS));
    let count = count.ok_or_else(|| Error::Size(format!("(2·{k}+1)^{d} exceeds {MAX_TERMS} frequencies")))?;
    let k = k as i64;
    Ok((0..count)
        .map(|mut idx| {
            let mut comps = vec![0i64; d];
            for c in comps.iter_mut().rev() {
                *c = (idx % side) as i64 - k;
                idx /= side;
            }
            FrequencyVector(comps)
        })
        .collect())
}

/// The `n` frequencies of smallest Euclidean norm, ties broken
/// lexicographically.
pub fn enumerate_l2_minimal(d: usize, n: usize) -> Result<Vec<FrequencyVector>> {
    if d == 0 || n == 0 {
        return Err(Error::domain("dimension and term count must be at least 1"));
    }
    // Grow the cube until the ball of radius k inside it holds n points; the
    // n smallest norms then all lie inside the cube.
    let mut k = 0u32;
    loop {
        let cube = enumerate_cube_frequencies(d, k)?;
        let radius = i64::from(k) * i64::from(k);
        if cube.iter().filter(|j| j.norm_sqr() <= radius).count() >= n {
            let mut all = cube;
            all.sort_by(|a, b| a.norm_sqr().cmp(&b.norm_sqr()).then_with(|| a.cmp(b)));
            all.truncate(n);
            return Ok(all);
        }
        k += 1;
    }
}

/// Chebyshev polynomial of the first kind by the three-term recursion.
/// Inputs within 1e-12 of `[-1, 1]` are clamped.
pub fn chebyshev_t(j: i64, x: f64) -> Result<f64> {
    if j < 0 {
        return Err(Error::domain(format!("Chebyshev degree must be non-negative, got {j}")));
    }
    if x.is_nan() || x.abs() > 1.0 + 1e-12 {
        return Err(Error::domain(format!("Chebyshev argument {x} outside [-1, 1]")));
    }
    Ok(cheb(j as u64, x))
}

pub(crate) fn cheb(j: u64, x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    match j {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..j {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Value of basis function `j` at `x`: `e^{i j·x}` or `∏ T_{j_i}(x_i)`.
pub fn basis_value(basis: Basis, j: &FrequencyVector, x: &[f64]) -> Complex64 {
    match basis {
        Basis::Fourier => Complex64::from_polar(1.0, j.dot(x)),
        Basis::Chebyshev => {
            let v = j.0.iter().zip(x).map(|(&ji, &xi)| cheb(ji.unsigned_abs(), xi)).product::<f64>();
            Complex64::new(v, 0.0)
        }
    }
}

/// Finite series `Σ c_r B_{j_r}(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients {
    pub basis: Basis,
    pub entries: Vec<(FrequencyVector, Complex64)>,
}

impl SeriesCoefficients {
    pub fn new(basis: Basis, entries: Vec<(FrequencyVector, Complex64)>) -> Result<Self> {
        let s = SeriesCoefficients { basis, entries };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.entries.first().map_or(0, |(j, _)| j.dim());
        if self.entries.iter().any(|(j, _)| j.dim() != d) {
            return Err(Error::structural("frequency vectors of mixed dimension"));
        }
        if self.basis == Basis::Chebyshev {
            for (j, c) in &self.entries {
                if j.0.iter().any(|&v| v < 0) {
                    return Err(Error::structural(format!("Chebyshev frequency {:?} has a negative component", j.0)));
                }
                if c.im.abs() > 1e-12 {
                    return Err(Error::structural("Chebyshev coefficients must be real"));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries.first().map_or(0, |(j, _)| j.dim())
    }

    pub fn frequencies(&self) -> Vec<FrequencyVector> {
        self.entries.iter().map(|(j, _)| j.clone()).collect()
    }

    /// `Σ |c_r|`.
    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().map(|(_, c)| c.norm()).sum()
    }
}

pub fn eval_series(coeffs: &SeriesCoefficients, x: &[f64]) -> Result<Complex64> {
    coeffs.validate()?;
    if !coeffs.is_empty() && x.len() != coeffs.dim() {
        return Err(Error::structural(format!(
            "input has {} components, series is {}-dimensional",
            x.len(),
            coeffs.dim()
        )));
    }
    if coeffs.basis == Basis::Chebyshev && x.iter().any(|v| v.is_nan() || v.abs() > 1.0 + 1e-12) {
        return Err(Error::domain("Chebyshev series evaluated outside [-1, 1]"));
    }
    Ok(coeffs.entries.iter().map(|(j, c)| c * basis_value(coeffs.basis, j, x)).sum())
}

fn check_quadrature(d: usize, points: usize) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(Error::Size(format!("tensor quadrature supports 1 ≤ d ≤ 3, got {d}")));
    }
    if points < 16 {
        return Err(Error::Size(format!("need at least 16 points per dimension, got {points}")));
    }
    Ok(())
}

/// Calls `visit(node, weight_index)` for every tensor-grid node.
fn for_each_node(d: usize, points: usize, node: impl Fn(usize) -> f64, mut visit: impl FnMut(&[f64], &[usize])) {
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let total = points.pow(d as u32);
    for mut flat in 0..total {
        for i in (0..d).rev() {
            idx[i] = flat % points;
            flat /= points;
            x[i] = node(idx[i]);
        }
        visit(&x, &idx);
    }
}

/// `c_j = (2π)^{-d} ∫ f(x) e^{-i j·x} dx` by the periodic trapezoid rule
/// on a uniform `points^d` grid over `[-π, π)^d`.
pub fn fourier_coefficient_oracle<F>(f: F, j: &FrequencyVector, points: usize) -> Result<Complex64>
where
    F: Fn(&[f64]) -> f64,
{
    let d = j.dim();
    check_quadrature(d, points)?;
    let h = 2.0 * PI / points as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_node(
        d,
        points,
        |k| -PI + h * k as f64,
        |x, _| {
            acc += f(x) * Complex64::from_polar(1.0, -j.dot(x));
        },
    );
    Ok(acc / (points as f64).powi(d as i32))
}

/// Tensor Chebyshev coefficient `b_j` by Gauss–Chebyshev quadrature on the
/// roots grid; exact for polynomial `f` of degree below `2·points - max j`.
pub fn chebyshev_coefficient_oracle<F>(f: F, j: &FrequencyVector, points: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let d = j.dim();
    check_quadrature(d, points)?;
    if j.0.iter().any(|&v| v < 0) {
        return Err(Error::domain("Chebyshev frequencies must be non-negative"));
    }
    let angle = |k: usize| PI * (k as f64 + 0.5) / points as f64;
    let mut acc = 0.0;
    for_each_node(
        d,
        points,
        |k| angle(k).cos(),
        |x, idx| {
            let w: f64 = j.0.iter().zip(idx).map(|(&ji, &k)| (ji as f64 * angle(k)).cos()).product();
            acc += f(x) * w;
        },
    );
    let scale: f64 = j.0.iter().map(|&ji| if ji == 0 { 1.0 } else { 2.0 }).product();
    Ok(acc * scale / (points as f64).powi(d as i32))
}
