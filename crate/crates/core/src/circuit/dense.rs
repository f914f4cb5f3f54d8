//! Explicit `2^q × 2^q` unitaries, built entry by entry.
//!
//! This is the reference the native simulator and every decomposition are
//! checked against; it deliberately shares no code with
//! [`crate::simulator`]. Intended for small registers (q ≤ 10).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::{pauli_x, phase_matrix, Gate, Mat2};
use super::Circuit;

pub type Unitary = DMatrix<Complex64>;

fn bit(index: usize, q: usize) -> usize {
    (index >> q) & 1
}

fn matches_pattern(index: usize, controls: &[usize], pattern: &[bool]) -> bool {
    controls.iter().zip(pattern).all(|(&q, &p)| (bit(index, q) == 1) == p)
}

/// Branch operator for basis column `col`: the 2×2 block on the target, or
/// `None` when the gate acts as identity there.
fn branch(gate: &Gate, col: usize) -> Option<(usize, Mat2)> {
    match gate {
        Gate::Ry { target, angle } => Some((*target, super::Axis::Y.rotation(*angle))),
        Gate::Rz { target, angle } => Some((*target, super::Axis::Z.rotation(*angle))),
        Gate::Phase { target, angle } => Some((*target, phase_matrix(*angle))),
        Gate::X { target } => Some((*target, pauli_x())),
        Gate::Cnot { control, target } => (bit(col, *control) == 1).then(|| (*target, pauli_x())),
        Gate::Mcx { controls, pattern, target } => {
            matches_pattern(col, controls, pattern).then(|| (*target, pauli_x()))
        }
        Gate::ControlledRotation { axis, controls, pattern, target, angle } => {
            matches_pattern(col, controls, pattern).then(|| (*target, axis.rotation(*angle)))
        }
        Gate::Multiplexor { axis, controls, target, angles, .. } => {
            let r = controls.iter().enumerate().fold(0, |acc, (k, &q)| acc | (bit(col, q) << k));
            Some((*target, axis.rotation(angles[r])))
        }
        Gate::ControlledPhase { .. } => None,
    }
}

/// Dense unitary of one gate on a `num_qubits` register.
pub fn gate_unitary(gate: &Gate, num_qubits: usize) -> Unitary {
    let dim = 1usize << num_qubits;
    let one = Complex64::new(1.0, 0.0);
    DMatrix::from_fn(dim, dim, |row, col| {
        if let Gate::ControlledPhase { controls, pattern, angle, .. } = gate {
            return match (row == col, matches_pattern(col, controls, pattern)) {
                (false, _) => Complex64::new(0.0, 0.0),
                (true, true) => Complex64::from_polar(1.0, *angle),
                (true, false) => one,
            };
        }
        match branch(gate, col) {
            Some((t, u)) => {
                if (row ^ col) & !(1 << t) != 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    u[bit(row, t)][bit(col, t)]
                }
            }
            None => {
                if row == col {
                    one
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    })
}

/// Product of all gate unitaries in time order.
pub fn circuit_unitary(circuit: &Circuit) -> Unitary {
    let n = circuit.num_qubits();
    circuit.gates().iter().fold(DMatrix::identity(1 << n, 1 << n), |acc, g| gate_unitary(g, n) * acc)
}

pub fn max_abs_diff(a: &Unitary, b: &Unitary) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |(G†G - I)_{ij}|`.
pub fn unitarity_defect(u: &Unitary) -> f64 {
    let id = DMatrix::identity(u.nrows(), u.ncols());
    max_abs_diff(&(u.adjoint() * u), &id)
}
