use std::f64::consts::FRAC_PI_6;
use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{Basis, FrequencyVector, SeriesCoefficients};

/// Built-in two-dimensional benchmark functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// `exp(-(sin²(x₀/2) + sin²(x₁/2)))` on `[-π, π]²`.
    F1,
    /// `(cos(x₀ + x₁ + π/6) + 1) / 2.5` on `[-π, π]²`.
    F2,
    /// `(x₀ - x₁ + 1)² / 9` on `[-1, 1]²`.
    F3,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(Target::F1),
            "f2" => Ok(Target::F2),
            "f3" => Ok(Target::F3),
            other => Err(Error::config(format!("unknown target {other:?} (expected f1, f2 or f3)"))),
        }
    }
}

impl Target {
    pub fn dim(self) -> usize {
        2
    }

    pub fn basis(self) -> Basis {
        match self {
            Target::F1 | Target::F2 => Basis::Fourier,
            Target::F3 => Basis::Chebyshev,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Target::F1 => (-((x[0] / 2.0).sin().powi(2) + (x[1] / 2.0).sin().powi(2))).exp(),
            Target::F2 => ((x[0] + x[1] + FRAC_PI_6).cos() + 1.0) / 2.5,
            Target::F3 => (x[0] - x[1] + 1.0).powi(2) / 9.0,
        }
    }

    /// Finite expansion that reproduces the target exactly, where one exists.
    pub fn exact_series(self) -> Option<SeriesCoefficients> {
        let fv = |v: [i64; 2]| FrequencyVector(v.to_vec());
        let entries = match self {
            Target::F1 => return None,
            Target::F2 => vec![
                (fv([0, 0]), Complex64::new(0.4, 0.0)),
                (fv([1, 1]), Complex64::from_polar(0.2, FRAC_PI_6)),
                (fv([-1, -1]), Complex64::from_polar(0.2, -FRAC_PI_6)),
            ],
            Target::F3 => {
                let real = |j, c| (fv(j), Complex64::new(c, 0.0));
                vec![
                    real([0, 0], 2.0 / 9.0),
                    real([1, 0], 2.0 / 9.0),
                    real([0, 1], -2.0 / 9.0),
                    real([1, 1], -2.0 / 9.0),
                    real([2, 0], 1.0 / 18.0),
                    real([0, 2], 1.0 / 18.0),
                ]
            }
        };
        Some(SeriesCoefficients { basis: self.basis(), entries })
    }
}

/// Samples `(x, y)` over the domain `[-π, π]^d` (Fourier) or `[-1, 1]^d`
/// (Chebyshev).
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    d: usize,
    domain: Basis,
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(d: usize, domain: Basis, xs: Vec<Vec<f64>>, ys: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::structural("dataset dimension must be at least 1"));
        }
        if xs.len() != ys.len() {
            return Err(Error::structural(format!("{} inputs but {} targets", xs.len(), ys.len())));
        }
        let (lo, hi) = domain.domain();
        for (i, x) in xs.iter().enumerate() {
            if x.len() != d {
                return Err(Error::structural(format!("row {i} has {} inputs, expected {d}", x.len())));
            }
            if x.iter().any(|v| !(lo - 1e-12..=hi + 1e-12).contains(v)) {
                return Err(Error::domain(format!("row {i} lies outside [{lo}, {hi}]^{d}")));
            }
        }
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::domain("targets must be finite"));
        }
        Ok(Dataset { d, domain, xs, ys })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn domain(&self) -> Basis {
        self.domain
    }

    pub fn xs(&self) -> &[Vec<f64>] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn max_y(&self) -> f64 {
        self.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// First half for training, second half for testing.
    pub fn split_halves(&self) -> (Dataset, Dataset) {
        let mid = self.len() / 2;
        let part = |r: std::ops::Range<usize>| Dataset {
            d: self.d,
            domain: self.domain,
            xs: self.xs[r.clone()].to_vec(),
            ys: self.ys[r].to_vec(),
        };
        (part(0..mid), part(mid..self.len()))
    }

    /// Every target divided by `divisor`.
    pub fn scaled(&self, divisor: f64) -> Result<Dataset> {
        if !(divisor.is_finite() && divisor > 0.0) {
            return Err(Error::domain(format!("scale divisor must be finite and positive, got {divisor}")));
        }
        Ok(Dataset { ys: self.ys.iter().map(|y| y / divisor).collect(), ..self.clone() })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..self.d).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        w.write_record(&header)?;
        for (x, y) in self.xs.iter().zip(&self.ys) {
            w.write_record(x.iter().chain([y]).map(|v| format!("{v:?}")))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `x0,…,x{d-1},y`; `domain` tags the input box.
    pub fn read_csv<R: Read>(reader: R, domain: Basis) -> Result<Dataset> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        let d = header.len().saturating_sub(1);
        let expected = (0..d).map(|i| format!("x{i}")).chain(["y".to_string()]);
        if d == 0 || !header.iter().eq(expected) {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header x0,…,x{{d-1}},y, got {:?}", header.iter().collect::<Vec<_>>()),
            });
        }
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() })?;
            ys.push(vals[d]);
            xs.push(vals[..d].to_vec());
        }
        Dataset::new(d, domain, xs, ys)
    }
}

/// `count` i.i.d. uniform samples of `f` over the domain of `basis`.
pub fn generate_dataset_with<F>(f: F, d: usize, basis: Basis, count: usize, seed: u64) -> Result<Dataset>
where
    F: Fn(&[f64]) -> f64,
{
    if count < 2 {
        return Err(Error::config(format!("need at least 2 samples, got {count}")));
    }
    let (lo, hi) = basis.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Vec<f64>> = (0..count).map(|_| (0..d).map(|_| rng.random_range(lo..=hi)).collect()).collect();
    let ys = xs.iter().map(|x| f(x)).collect();
    Dataset::new(d, basis, xs, ys)
}

pub fn generate_dataset(target: Target, count: usize, seed: u64) -> Result<Dataset> {
    generate_dataset_with(|x| target.eval(x), target.dim(), target.basis(), count, seed)
}

/// Divides every target by the maximum so that `max y = 1`.
pub fn normalize_dataset(data: &Dataset) -> Result<Dataset> {
    if data.is_empty() {
        return Err(Error::domain("cannot normalize an empty dataset"));
    }
    if data.ys.iter().any(|&y| y < 0.0) {
        return Err(Error::domain("targets must be non-negative"));
    }
    let max = data.max_y();
    if max <= 0.0 {
        return Err(Error::domain("targets are all zero"));
    }
    data.scaled(max)
}
