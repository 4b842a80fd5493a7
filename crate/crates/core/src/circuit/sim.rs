//! Reference statevector simulator. Qubit 0 is the least significant bit of
//! the amplitude index.

use num_complex::Complex64;

use super::gate::{Control, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { qubits, amplitudes }
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector { qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::Shape(format!("state length {len} is not a power of two")));
        }
        Ok(StateVector { qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        if let Some(q) = gate.max_qubit() {
            if q >= self.qubits {
                return Err(Error::Shape(format!(
                    "gate touches qubit {q} of a {}-qubit state",
                    self.qubits
                )));
            }
        }
        let (mask, value) = control_mask(&gate.controls);
        match &gate.kind {
            GateKind::GlobalPhase(theta) => {
                let phase = Complex64::from_polar(1.0, *theta);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == value {
                        *a *= phase;
                    }
                }
            }
            GateKind::Swap => {
                let (p, q) = (gate.targets[0], gate.targets[1]);
                for i in 0..self.amplitudes.len() {
                    if (i >> p) & 1 == 1 && (i >> q) & 1 == 0 && i & mask == value {
                        self.amplitudes.swap(i, i ^ (1 << p) ^ (1 << q));
                    }
                }
            }
            GateKind::Permutation(table) => {
                let old = self.amplitudes.clone();
                let block_mask: usize = gate.targets.iter().map(|&t| 1 << t).sum();
                for (i, &amp) in old.iter().enumerate() {
                    if i & mask != value {
                        continue;
                    }
                    let sub = gather(i, &gate.targets);
                    let j = (i & !block_mask) | scatter(table[sub], &gate.targets);
                    self.amplitudes[j] = amp;
                }
            }
            kind => {
                let m = kind.matrix2().expect("single-qubit kind");
                let t = gate.targets[0];
                let bit = 1usize << t;
                for i in 0..self.amplitudes.len() {
                    if i & bit != 0 || i & mask != value {
                        continue;
                    }
                    let j = i | bit;
                    let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
                    self.amplitudes[i] = m[0] * a + m[1] * b;
                    self.amplitudes[j] = m[2] * a + m[3] * b;
                }
            }
        }
        Ok(())
    }
}

fn control_mask(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(mask, value), c| {
        (mask | 1 << c.qubit, value | (c.polarity as usize) << c.qubit)
    })
}

fn gather(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .map(|(k, &q)| ((index >> q) & 1) << k)
        .sum()
}

fn scatter(sub: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .map(|(k, &q)| ((sub >> k) & 1) << q)
        .sum()
}
