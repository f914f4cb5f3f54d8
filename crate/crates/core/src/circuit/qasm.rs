use std::f64::consts::PI;
use std::fmt::Write as _;

use super::gate::Gate;
use super::Circuit;
use crate::error::{Error, Result};

const PI_DENOMINATORS: [i64; 8] = [1, 2, 3, 4, 6, 8, 12, 16];

/// Prints `k*pi/den` when that expression evaluates to exactly `angle`,
/// otherwise the shortest round-trip decimal.
fn format_angle(angle: f64) -> String {
    if angle == 0.0 {
        return "0".to_string();
    }
    for den in PI_DENOMINATORS {
        let k = (angle * den as f64 / PI).round();
        if k == 0.0 || k.abs() > 64.0 || k * PI / den as f64 != angle {
            continue;
        }
        let k = k as i64;
        let num = match k {
            1 => "pi".to_string(),
            -1 => "-pi".to_string(),
            _ => format!("{k}*pi"),
        };
        return if den == 1 { num } else { format!("{num}/{den}") };
    }
    format!("{angle:?}")
}

fn parse_angle(text: &str, line: usize) -> Result<f64> {
    let err = || Error::Parse { line, msg: format!("cannot read angle {text:?}") };
    let t = text.trim();
    if !t.contains("pi") {
        return t.parse().map_err(|_| err());
    }
    let (numer, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| err())?),
        None => (t, 1.0),
    };
    let k = match numer {
        "pi" => 1.0,
        "-pi" => -1.0,
        other => other.strip_suffix("*pi").and_then(|k| k.trim().parse::<f64>().ok()).ok_or_else(err)?,
    };
    Ok(k * PI / den)
}

/// OpenQASM 2.0 text for a circuit made only of `ry`, `rz`, `u1`, `x`, `cx`.
///
/// Qubit `i` of the circuit is `q[i]`; `rz(λ)` means `diag(e^{-iλ/2}, e^{iλ/2})`.
pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", circuit.num_qubits()).unwrap();
    for (i, g) in circuit.gates().iter().enumerate() {
        match g {
            Gate::Ry { target, angle } => writeln!(out, "ry({}) q[{target}];", format_angle(*angle)),
            Gate::Rz { target, angle } => writeln!(out, "rz({}) q[{target}];", format_angle(*angle)),
            Gate::Phase { target, angle } => writeln!(out, "u1({}) q[{target}];", format_angle(*angle)),
            Gate::X { target } => writeln!(out, "x q[{target}];"),
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            other => {
                return Err(Error::Export(format!(
                    "gate #{i} ({}) is not elementary; decompose the circuit before export",
                    other.name()
                )))
            }
        }
        .unwrap();
    }
    Ok(out)
}

fn parse_qubit(text: &str, line: usize) -> Result<usize> {
    text.trim()
        .strip_prefix("q[")
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse { line, msg: format!("bad qubit operand {text:?}") })
}

/// Reads back the subset of OpenQASM 2.0 that [`export_qasm`] writes.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.split("//").next().unwrap().trim();
        if stmt.is_empty() {
            continue;
        }
        let stmt = stmt.strip_suffix(';').ok_or_else(|| Error::Parse { line, msg: "missing ';'".into() })?.trim();
        if !seen_header {
            if stmt != "OPENQASM 2.0" {
                return Err(Error::Parse { line, msg: "expected OPENQASM 2.0 header".into() });
            }
            seen_header = true;
            continue;
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg") {
            let n = parse_qubit(rest, line)?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| Error::Parse { line, msg: "gate before qreg declaration".into() })?;
        let (head, operands) = match stmt.find(')') {
            Some(close) => stmt.split_at(close + 1),
            None => stmt.split_once(' ').ok_or_else(|| Error::Parse { line, msg: "missing operands".into() })?,
        };
        let (name, param) = match head.split_once('(') {
            Some((n, p)) => (n.trim(), Some(parse_angle(p.trim_end_matches(')'), line)?)),
            None => (head.trim(), None),
        };
        let qubits = operands.split(',').map(|q| parse_qubit(q, line)).collect::<Result<Vec<_>>>()?;
        let gate = match (name, param, qubits.as_slice()) {
            ("ry", Some(angle), &[target]) => Gate::Ry { target, angle },
            ("rz", Some(angle), &[target]) => Gate::Rz { target, angle },
            ("u1" | "p", Some(angle), &[target]) => Gate::Phase { target, angle },
            ("x", None, &[target]) => Gate::X { target },
            ("cx", None, &[control, target]) => Gate::Cnot { control, target },
            _ => return Err(Error::Parse { line, msg: format!("unsupported statement {stmt:?}") }),
        };
        c.push(gate).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    }
    circuit.ok_or_else(|| Error::Parse { line: 0, msg: "no qreg declaration".into() })
}
