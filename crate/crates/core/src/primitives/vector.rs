//! Column vectors loaded by state preparation.

use serde_json::{json, Value};

use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::node::{Node, Operation};
use crate::subspace::Subspace;

/// The column `v` with normalization `||v||_2`.
pub fn constant_vector(entries: Vec<C64>) -> Result<Node> {
    if entries.is_empty() {
        return Err(Error::Domain("constant vector needs at least one entry".into()));
    }
    let norm = entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Domain("constant vector must be nonzero and finite".into()));
    }
    let qubits = entries.len().next_power_of_two().trailing_zeros() as usize;
    Ok(Node::new(ConstantVector { entries, norm, qubits }))
}

#[derive(Debug)]
struct ConstantVector {
    entries: Vec<C64>,
    norm: f64,
    qubits: usize,
}

fn prefix_controls(prefix: usize, from: usize, to: usize) -> Vec<Control> {
    (from..to)
        .map(|q| if prefix >> (q - from) & 1 == 1 { Control::on(q) } else { Control::off(q) })
        .collect()
}

impl Operation for ConstantVector {
    fn kind(&self) -> &'static str {
        "constant_vector"
    }

    fn params(&self) -> Value {
        let real = self.entries.iter().all(|z| z.im == 0.0);
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|z| if real { json!(z.re) } else { json!([z.re, z.im]) })
            .collect();
        json!({ "entries": entries })
    }

    fn normalization(&self) -> f64 {
        self.norm
    }

    fn subspace_in(&self) -> Subspace {
        Subspace::zeros(self.qubits)
    }

    fn subspace_out(&self) -> Subspace {
        Subspace::from_dim(self.entries.len()).expect("nonempty")
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        let col = CMatrix::from_column_slice(self.entries.len(), 1, &self.entries);
        Ok(col * v)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        let row = CMatrix::from_row_slice(1, self.entries.len(), &self.entries).conjugate();
        Ok(row * w)
    }

    /// Magnitudes by a top-down tree of multi-controlled Y rotations, then
    /// phases by fully controlled global phases.
    fn circuit(&self) -> Result<Circuit> {
        let m = self.qubits;
        let mut c = Circuit::new(m, 0);
        let mut weights: Vec<f64> = self.entries.iter().map(|z| z.norm_sqr()).collect();
        weights.resize(1 << m, 0.0);
        for q in (0..m).rev() {
            let block = 1usize << (q + 1);
            let half = 1usize << q;
            let mut rotations = Vec::new();
            for prefix in 0..(1usize << (m - q - 1)) {
                let base = prefix * block;
                let w0: f64 = weights[base..base + half].iter().sum();
                let w1: f64 = weights[base + half..base + block].iter().sum();
                if w1 > 0.0 {
                    let theta = 2.0 * w1.sqrt().atan2(w0.sqrt());
                    let controls = prefix_controls(prefix, q + 1, m);
                    rotations.push(Gate::new(GateKind::RY(theta), vec![q], controls)?);
                }
            }
            if !rotations.is_empty() {
                // Z first makes the one-qubit uniform preparation exactly H
                c.push(Gate::single(GateKind::Z, q))?;
                c.extend(rotations)?;
            }
        }
        for (i, z) in self.entries.iter().enumerate() {
            let phase = z.arg();
            if z.norm() > 0.0 && phase != 0.0 {
                c.push(Gate::new(GateKind::GlobalPhase(phase), vec![], prefix_controls(i, 0, m))?)?;
            }
        }
        Ok(c)
    }

    fn isometric(&self) -> bool {
        true
    }

    fn confines(&self) -> bool {
        false
    }
}
