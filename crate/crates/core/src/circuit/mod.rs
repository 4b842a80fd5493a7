//! Gate-level circuit IR, simulation, counting and export.

mod counts;
mod gate;
mod qasm;
mod sim;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use counts::{t_count_estimate, GateCounts};
pub use gate::{Control, Gate, GateKind};
pub use sim::StateVector;

use crate::error::{Error, Result};

/// A gate sequence over `main_qubits` followed by `ancilla_qubits` scratch
/// qubits. Ancillas occupy indices `main_qubits..total_qubits()`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    main_qubits: usize,
    ancilla_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(main_qubits: usize, ancilla_qubits: usize) -> Self {
        Circuit { main_qubits, ancilla_qubits, gates: Vec::new() }
    }

    pub fn with_gates(main_qubits: usize, ancilla_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(main_qubits, ancilla_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn main_qubits(&self) -> usize {
        self.main_qubits
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.ancilla_qubits
    }

    pub fn total_qubits(&self) -> usize {
        self.main_qubits + self.ancilla_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(q) = gate.max_qubit() {
            if q >= self.total_qubits() {
                return Err(Error::Shape(format!(
                    "gate {gate} references qubit {q} of a {}-qubit circuit",
                    self.total_qubits()
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Concatenation on the wider of the two registers.
    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Circuit {
            main_qubits: self.main_qubits.max(other.main_qubits),
            ancilla_qubits: self.ancilla_qubits.max(other.ancilla_qubits),
            gates,
        }
    }

    /// Reversed gate order with every gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            main_qubits: self.main_qubits,
            ancilla_qubits: self.ancilla_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Every gate of this circuit with main qubit `q` sent to `main_map[q]`,
    /// ancilla `k` sent to `ancilla_base + k`, and `extra` controls appended.
    pub fn embedded<'a>(
        &'a self,
        main_map: &'a [usize],
        ancilla_base: usize,
        extra: &'a [Control],
    ) -> impl Iterator<Item = Gate> + 'a {
        let main = self.main_qubits;
        self.gates.iter().map(move |g| {
            g.remapped(|q| if q < main { main_map[q] } else { ancilla_base + (q - main) })
                .with_controls(extra)
        })
    }

    /// Same gates on a register with at least `main` main qubits and
    /// `ancillas` ancillas; ancilla indices shift up with the main register.
    pub fn widened(&self, main: usize, ancillas: usize) -> Circuit {
        let (old_main, main) = (self.main_qubits, main.max(self.main_qubits));
        Circuit {
            main_qubits: main,
            ancilla_qubits: ancillas.max(self.ancilla_qubits),
            gates: self
                .gates
                .iter()
                .map(|g| g.remapped(|q| if q < old_main { q } else { q - old_main + main }))
                .collect(),
        }
    }

    /// Permutation gates expanded into multi-controlled-X networks.
    pub fn lowered(&self) -> Circuit {
        Circuit {
            main_qubits: self.main_qubits,
            ancilla_qubits: self.ancilla_qubits,
            gates: self.gates.iter().flat_map(Gate::lowered).collect(),
        }
    }

    pub fn has_permutations(&self) -> bool {
        self.gates
            .iter()
            .any(|g| matches!(g.kind, GateKind::Permutation(_)))
    }

    pub fn gate_counts(&self, lowered: bool) -> GateCounts {
        if lowered {
            GateCounts::tally(self.gates.iter().flat_map(Gate::lowered))
        } else {
            GateCounts::tally(self.gates.iter().cloned())
        }
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.qubits() != self.total_qubits() {
            return Err(Error::Shape(format!(
                "{}-qubit state for a {}-qubit circuit",
                state.qubits(),
                self.total_qubits()
            )));
        }
        for g in &self.gates {
            state.apply(g)?;
        }
        Ok(())
    }

    /// Applies the circuit to raw amplitudes over all qubits.
    pub fn simulate(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != 1usize << self.total_qubits() {
            return Err(Error::Shape(format!(
                "{} amplitudes for a {}-qubit circuit",
                amplitudes.len(),
                self.total_qubits()
            )));
        }
        crate::budget::budget().check_amplitudes(self.total_qubits())?;
        let mut state = StateVector::from_amplitudes(amplitudes.to_vec())?;
        self.apply(&mut state)?;
        Ok(state.into_amplitudes())
    }

    /// Dense unitary over all qubits, built column by column.
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        let n = self.total_qubits();
        crate::budget::budget().check_dense(1 << n, 1 << n)?;
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut s = StateVector::basis(n, col);
            self.apply(&mut s)?;
            m.column_mut(col).copy_from_slice(s.amplitudes());
        }
        Ok(m)
    }

    /// OpenQASM 3 text. Permutation gates need `lower_permutations`.
    pub fn export_text(&self, lower_permutations: bool) -> Result<String> {
        qasm::export(self, lower_permutations)
    }
}
