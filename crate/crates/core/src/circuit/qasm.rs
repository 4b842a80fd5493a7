//! OpenQASM 3 emission. Controls become `ctrl @` / `negctrl @` modifiers,
//! except positive single and double controlled X which print as `cx`/`ccx`.

use std::fmt::Write;

use super::gate::{Gate, GateKind};
use super::Circuit;
use crate::error::{Error, Result};

pub(super) fn export(circuit: &Circuit, lower: bool) -> Result<String> {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let n = circuit.total_qubits();
    if n > 0 {
        writeln!(out, "qubit[{n}] q;").unwrap();
    }
    for gate in circuit.gates() {
        if matches!(gate.kind, GateKind::Permutation(_)) {
            if !lower {
                return Err(Error::UnsupportedGate(gate.to_string()));
            }
            for g in gate.lowered() {
                emit(&mut out, &g);
            }
        } else {
            emit(&mut out, gate);
        }
    }
    Ok(out)
}

fn emit(out: &mut String, gate: &Gate) {
    let all_positive = gate.controls.iter().all(|c| c.polarity);
    let (name, controls_absorbed) = match (&gate.kind, gate.controls.len(), all_positive) {
        (GateKind::X, 1, true) => ("cx".to_string(), true),
        (GateKind::X, 2, true) => ("ccx".to_string(), true),
        (kind, _, _) => (base_name(kind), false),
    };
    if !controls_absorbed {
        for c in &gate.controls {
            out.push_str(if c.polarity { "ctrl @ " } else { "negctrl @ " });
        }
    }
    out.push_str(&name);
    let operands: Vec<String> = gate
        .controls
        .iter()
        .map(|c| c.qubit)
        .chain(gate.targets.iter().copied())
        .map(|q| format!("q[{q}]"))
        .collect();
    if !operands.is_empty() {
        out.push(' ');
        out.push_str(&operands.join(", "));
    }
    out.push_str(";\n");
}

fn base_name(kind: &GateKind) -> String {
    match kind {
        GateKind::X => "x".into(),
        GateKind::Y => "y".into(),
        GateKind::Z => "z".into(),
        GateKind::H => "h".into(),
        GateKind::S => "s".into(),
        GateKind::Sdg => "sdg".into(),
        GateKind::T => "t".into(),
        GateKind::Tdg => "tdg".into(),
        GateKind::Phase(t) => format!("p({t:.17})"),
        GateKind::RX(t) => format!("rx({t:.17})"),
        GateKind::RY(t) => format!("ry({t:.17})"),
        GateKind::RZ(t) => format!("rz({t:.17})"),
        GateKind::GlobalPhase(t) => format!("gphase({t:.17})"),
        GateKind::Swap => "swap".into(),
        GateKind::Permutation(_) => unreachable!("permutations are lowered before emission"),
    }
}

#[cfg(test)]
mod tests {
    use super::super::gate::Control;
    use super::*;

    #[test]
    fn empty_circuit_is_header_only() {
        let text = Circuit::new(1, 0).export_text(false).unwrap();
        assert_eq!(text, "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[1] q;\n");
    }

    #[test]
    fn increment_has_two_gate_lines() {
        let c = Circuit::with_gates(2, 0, vec![Gate::cx(0, 1), Gate::x(0)]).unwrap();
        let text = c.export_text(false).unwrap();
        let body: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(body, vec!["cx q[0], q[1];", "x q[0];"]);
    }

    #[test]
    fn permutation_requires_lowering() {
        let g = Gate::permutation(vec![1, 0], vec![0]).unwrap();
        let c = Circuit::with_gates(1, 0, vec![g]).unwrap();
        assert!(matches!(c.export_text(false), Err(Error::UnsupportedGate(_))));
        assert!(c.export_text(true).unwrap().contains("x q[0];"));
    }

    #[test]
    fn negative_controls_use_modifier() {
        let g = Gate::mcx(vec![Control::off(0)], 1);
        let c = Circuit::with_gates(2, 0, vec![g]).unwrap();
        assert!(c.export_text(false).unwrap().contains("negctrl @ x q[0], q[1];"));
    }
}
