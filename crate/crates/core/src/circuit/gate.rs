use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

/// Rotation axis of a single-qubit `R_k(θ) = exp(-iθσ_k/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Y,
    Z,
}

impl Axis {
    pub fn rotation(self, angle: f64) -> Mat2 {
        let (s, c) = (angle / 2.0).sin_cos();
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Axis::Y => {
                [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
            }
            Axis::Z => [[Complex64::new(c, -s), zero], [zero, Complex64::new(c, s)]],
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

pub fn pauli_x() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[o, l], [l, o]]
}

/// `diag(1, e^{iλ})`, the OpenQASM `u1` gate.
pub fn phase_matrix(angle: f64) -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, Complex64::from_polar(1.0, angle)]]
}

/// Gate IR.
///
/// Controlled gates carry a `pattern` aligned with `controls`: the gate fires
/// when `controls[k]` reads `pattern[k]` for every `k`. Multiplexors select
/// `angles[r]` where `r = Σ_k bit(controls[k]) << k`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Ry {
        target: usize,
        angle: f64,
    },
    Rz {
        target: usize,
        angle: f64,
    },
    /// `diag(1, e^{iλ})`.
    Phase {
        target: usize,
        angle: f64,
    },
    X {
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Mcx {
        controls: Vec<usize>,
        pattern: Vec<bool>,
        target: usize,
    },
    /// Pattern-controlled `R_y` / `R_z`. Angles here encode inputs, never
    /// trainable parameters.
    ControlledRotation {
        axis: Axis,
        controls: Vec<usize>,
        pattern: Vec<bool>,
        target: usize,
        angle: f64,
    },
    /// Uniformly controlled rotation with `2^controls` angles. `theta_offset`
    /// marks angles that are trainable parameters `θ[offset..offset+len]`.
    Multiplexor {
        axis: Axis,
        controls: Vec<usize>,
        target: usize,
        angles: Vec<f64>,
        theta_offset: Option<usize>,
    },
    /// Multiplies the amplitude of every basis state whose `controls` read
    /// `pattern` by `e^{iφ}`. `phi_index` marks a trainable phase.
    ControlledPhase {
        controls: Vec<usize>,
        pattern: Vec<bool>,
        angle: f64,
        phi_index: Option<usize>,
    },
}

/// Bit pattern of `value` over `width` qubits, least significant bit first.
pub fn pattern_of(value: usize, width: usize) -> Vec<bool> {
    (0..width).map(|k| (value >> k) & 1 == 1).collect()
}

/// Renders a pattern as a bitstring, `pattern[0]` first.
pub fn pattern_string(pattern: &[bool]) -> String {
    pattern.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parses a bitstring written `pattern[0]` first.
pub fn parse_pattern(bits: &str) -> Result<Vec<bool>> {
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::structural(format!("invalid pattern character {other:?}"))),
        })
        .collect()
}

/// Builds a multiplexor-`R_y`; `angles.len()` must equal `2^controls.len()`.
pub fn make_multiplexor_ry(controls: &[usize], target: usize, angles: &[f64]) -> Result<Gate> {
    make_multiplexor(Axis::Y, controls, target, angles)
}

pub fn make_multiplexor(axis: Axis, controls: &[usize], target: usize, angles: &[f64]) -> Result<Gate> {
    let expected =
        1usize.checked_shl(controls.len() as u32).ok_or_else(|| Error::structural("too many multiplexor controls"))?;
    if angles.len() != expected {
        return Err(Error::structural(format!(
            "multiplexor with {} controls needs {expected} angles, got {}",
            controls.len(),
            angles.len()
        )));
    }
    let gate =
        Gate::Multiplexor { axis, controls: controls.to_vec(), target, angles: angles.to_vec(), theta_offset: None };
    gate.check_shape()?;
    Ok(gate)
}

impl Gate {
    /// Every qubit touched by the gate: controls first, then the target.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Ry { target, .. } | Gate::Rz { target, .. } | Gate::Phase { target, .. } | Gate::X { target } => {
                vec![*target]
            }
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Mcx { controls, target, .. }
            | Gate::ControlledRotation { controls, target, .. }
            | Gate::Multiplexor { controls, target, .. } => {
                let mut q = controls.clone();
                q.push(*target);
                q
            }
            Gate::ControlledPhase { controls, .. } => controls.clone(),
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            Gate::Cnot { control, .. } => std::slice::from_ref(control),
            Gate::Mcx { controls, .. }
            | Gate::ControlledRotation { controls, .. }
            | Gate::Multiplexor { controls, .. }
            | Gate::ControlledPhase { controls, .. } => controls,
            _ => &[],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Ry { .. } => "ry",
            Gate::Rz { .. } => "rz",
            Gate::Phase { .. } => "u1",
            Gate::X { .. } => "x",
            Gate::Cnot { .. } => "cx",
            Gate::Mcx { .. } => "mcx",
            Gate::ControlledRotation { axis: Axis::Y, .. } => "c-ry",
            Gate::ControlledRotation { axis: Axis::Z, .. } => "c-rz",
            Gate::Multiplexor { axis: Axis::Y, .. } => "mux-ry",
            Gate::Multiplexor { axis: Axis::Z, .. } => "mux-rz",
            Gate::ControlledPhase { .. } => "c-phase",
        }
    }

    /// True for the gates an OpenQASM 2.0 `qelib1.inc` export accepts as-is.
    pub fn is_elementary(&self) -> bool {
        matches!(self, Gate::Ry { .. } | Gate::Rz { .. } | Gate::Phase { .. } | Gate::X { .. } | Gate::Cnot { .. })
    }

    fn check_shape(&self) -> Result<()> {
        let qubits = self.qubits();
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::structural(format!("{} uses qubit {q} twice", self.name())));
            }
        }
        match self {
            Gate::Mcx { controls, pattern, .. }
            | Gate::ControlledRotation { controls, pattern, .. }
            | Gate::ControlledPhase { controls, pattern, .. } => {
                if controls.len() != pattern.len() {
                    return Err(Error::structural(format!(
                        "{}: {} controls but pattern of length {}",
                        self.name(),
                        controls.len(),
                        pattern.len()
                    )));
                }
            }
            Gate::Multiplexor { controls, angles, .. }
                if controls.len() >= usize::BITS as usize || angles.len() != 1usize << controls.len() =>
            {
                return Err(Error::structural(format!(
                    "multiplexor with {} controls carries {} angles",
                    controls.len(),
                    angles.len()
                )));
            }
            _ => {}
        }
        if let Gate::ControlledPhase { controls, .. } = self {
            if controls.is_empty() {
                return Err(Error::structural("controlled phase needs at least one control"));
            }
        }
        Ok(())
    }

    /// Checks shape invariants and that every index is below `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        self.check_shape()?;
        if let Some(q) = self.qubits().into_iter().find(|&q| q >= num_qubits) {
            return Err(Error::structural(format!(
                "{} touches qubit {q} but the register has {num_qubits}",
                self.name()
            )));
        }
        let finite = match self {
            Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Phase { angle, .. }
            | Gate::ControlledRotation { angle, .. }
            | Gate::ControlledPhase { angle, .. } => angle.is_finite(),
            Gate::Multiplexor { angles, .. } => angles.iter().all(|a| a.is_finite()),
            _ => true,
        };
        if !finite {
            return Err(Error::structural(format!("{} has a non-finite angle", self.name())));
        }
        Ok(())
    }

    /// The inverse gate (same trainable labels).
    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        match &mut g {
            Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Phase { angle, .. }
            | Gate::ControlledRotation { angle, .. }
            | Gate::ControlledPhase { angle, .. } => *angle = -*angle,
            Gate::Multiplexor { angles, .. } => angles.iter_mut().for_each(|a| *a = -*a),
            Gate::X { .. } | Gate::Cnot { .. } | Gate::Mcx { .. } => {}
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Ry { target, angle } => write!(f, "ry({angle}) q{target}"),
            Gate::Rz { target, angle } => write!(f, "rz({angle}) q{target}"),
            Gate::Phase { target, angle } => write!(f, "u1({angle}) q{target}"),
            Gate::X { target } => write!(f, "x q{target}"),
            Gate::Cnot { control, target } => write!(f, "cx q{control} -> q{target}"),
            Gate::Mcx { controls, pattern, target } => {
                write!(f, "mcx[{}] {controls:?} -> q{target}", pattern_string(pattern))
            }
            Gate::ControlledRotation { axis, controls, pattern, target, angle } => {
                write!(f, "c-r{}({angle})[{}] {controls:?} -> q{target}", axis.letter(), pattern_string(pattern))
            }
            Gate::Multiplexor { axis, controls, target, angles, .. } => {
                write!(f, "mux-r{}{angles:?} {controls:?} -> q{target}", axis.letter())
            }
            Gate::ControlledPhase { controls, pattern, angle, .. } => {
                write!(f, "c-phase({angle})[{}] {controls:?}", pattern_string(pattern))
            }
        }
    }
}
