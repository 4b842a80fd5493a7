use serde::{Deserialize, Serialize};

use crate::circuit::{t_count_estimate, Circuit, GateCounts};
use crate::linalg::{CVector, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub main_qubits: usize,
    pub ancilla_qubits: usize,
    pub total_qubits: usize,
    /// Counts over the circuit as built, permutation gates included.
    pub gate_counts: GateCounts,
    /// Counts after expanding permutation gates.
    pub lowered_gate_counts: GateCounts,
    pub t_count_estimate: usize,
    pub normalization: f64,
    pub info_efficiency: Option<f64>,
    pub unchecked_assumptions: Vec<String>,
}

impl ResourceReport {
    pub fn new(circuit: &Circuit, normalization: f64, eta: Option<f64>, assumptions: Vec<String>) -> Self {
        ResourceReport {
            main_qubits: circuit.main_qubits(),
            ancilla_qubits: circuit.ancilla_qubits(),
            total_qubits: circuit.total_qubits(),
            gate_counts: circuit.gate_counts(false),
            lowered_gate_counts: circuit.gate_counts(true),
            t_count_estimate: t_count_estimate(circuit),
            normalization,
            info_efficiency: eta,
            unchecked_assumptions: assumptions,
        }
    }

    /// Amplitude-estimation query count for the norm to relative accuracy
    /// `eps` with failure probability `delta`; needs the efficiency.
    pub fn norm_query_estimate(&self, eps: f64, delta: f64) -> Option<u64> {
        self.info_efficiency.map(|eta| norm_query_estimate(eps, delta, eta))
    }
}

/// `ceil(eps^-1 * eta^-1 * ln(delta^-1))`.
pub fn norm_query_estimate(eps: f64, delta: f64, eta: f64) -> u64 {
    ((1.0 / eps) * (1.0 / eta) * (1.0 / delta).ln()).ceil() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_error: f64,
    pub worst_column: Option<usize>,
    pub pass: bool,
    pub tol: f64,
}

/// Result of a circuit-path evaluation.
#[derive(Debug, Clone)]
pub struct Simulation {
    /// Projected, rescaled output.
    pub output: CVector,
    /// Final state over main and ancilla qubits.
    pub state: Vec<C64>,
    /// Norm of the projected state before rescaling.
    pub retained: f64,
    pub input_norm: f64,
}

impl Simulation {
    /// Weight of the final state outside the projected sector.
    pub fn leakage(&self) -> f64 {
        (self.input_norm.powi(2) - self.retained.powi(2)).max(0.0).sqrt()
    }
}
