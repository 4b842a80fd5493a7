//! Polynomial transformation of singular values.

use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use super::chebyshev::{Parity, TargetPolynomial};
use super::phases::{solve_phases, PhaseVector, DEFAULT_TOLERANCE};
use crate::budget::budget;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::node::{Node, Operation};
use crate::subspace::{membership_gates, Subspace};

/// `normalization * p(A / gamma_A)` in the singular value sense.
///
/// Odd `p` maps `in(A)` to `out(A)` and acts on singular values; even `p`
/// acts on `in(A)` as a function of `A^dagger A`. The circuit realizes the
/// real part of a quantum signal processing polynomial by averaging the
/// phase sequence and its negation over one extra main qubit.
pub fn qsvt(a: &Node, target: TargetPolynomial, normalization: f64) -> Result<Node> {
    if !(normalization > 0.0 && normalization.is_finite()) {
        return Err(Error::Domain(format!("normalization must be positive, got {normalization}")));
    }
    let phases = solve_phases(&target, DEFAULT_TOLERANCE)?;
    Ok(Node::new(Qsvt { a: a.clone(), target, normalization, phases, dense: OnceLock::new() }))
}

#[derive(Debug)]
struct Qsvt {
    a: Node,
    target: TargetPolynomial,
    normalization: f64,
    phases: PhaseVector,
    dense: OnceLock<Result<Arc<CMatrix>>>,
}

impl Qsvt {
    fn odd(&self) -> bool {
        self.target.parity() == Parity::Odd
    }

    /// Phases for `e^{i phi (2 Pi - 1)}` steps, outermost first. The two
    /// conventions differ by a global `(-i)^d`, undone on the extra qubit.
    fn reflection_phases(&self) -> Vec<f64> {
        let phi = &self.phases.phases;
        let d = phi.len() - 1;
        if d == 0 {
            return phi.clone();
        }
        let quarter = std::f64::consts::FRAC_PI_4;
        phi.iter()
            .enumerate()
            .map(|(j, p)| if j == 0 || j == d { p + quarter } else { p + 2.0 * quarter })
            .collect()
    }

    fn dense(&self) -> Result<Arc<CMatrix>> {
        self.dense
            .get_or_init(|| {
                budget().check_dense(self.a.dim_out(), self.a.dim_in())?;
                let b = self.a.toarray()?.as_ref() / C64::new(self.a.normalization(), 0.0);
                let p = |x: f64| C64::new(self.normalization * self.target.eval(x), 0.0);
                let m = if self.odd() {
                    let svd = b.svd(true, true);
                    let u = svd.u.expect("requested");
                    let vt = svd.v_t.expect("requested");
                    let mut scaled = u;
                    for (k, s) in svd.singular_values.iter().enumerate() {
                        scaled.column_mut(k).scale_mut(p(*s).re);
                    }
                    scaled * vt
                } else {
                    let eig = (b.adjoint() * &b).symmetric_eigen();
                    let v = eig.eigenvectors;
                    let mut scaled = v.clone();
                    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
                        scaled.column_mut(k).scale_mut(p(lambda.max(0.0).sqrt()).re);
                    }
                    scaled * v.adjoint()
                };
                Ok(Arc::new(m))
            })
            .clone()
    }

    fn phase_step(&self, c: &mut Circuit, space: &Subspace, phi: f64) -> Result<()> {
        if phi == 0.0 {
            return Ok(());
        }
        let w = self.a.width();
        let (r, flag) = (w, w + 1);
        let main: Vec<usize> = (0..w).collect();
        let (mark, _) = membership_gates(space, &main, flag, flag + 1);
        c.extend(mark.iter().cloned())?;
        c.push(Gate::cx(r, flag))?;
        c.push(Gate::single(GateKind::RZ(-2.0 * phi), flag))?;
        c.push(Gate::cx(r, flag))?;
        c.extend(mark.iter().rev().map(Gate::inverse))?;
        Ok(())
    }
}

impl Operation for Qsvt {
    fn kind(&self) -> &'static str {
        "qsvt"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn params(&self) -> Value {
        json!({
            "chebyshev": self.target.coefficients(),
            "parity": self.target.parity().name(),
            "normalization": self.normalization,
        })
    }

    fn normalization(&self) -> f64 {
        self.normalization
    }

    fn subspace_in(&self) -> Subspace {
        self.a.subspace_in().padded(self.a.width() + 1)
    }

    fn subspace_out(&self) -> Subspace {
        let s = if self.odd() { self.a.subspace_out() } else { self.a.subspace_in() };
        s.padded(self.a.width() + 1)
    }

    fn ancillas(&self) -> usize {
        let scratch = self.a.subspace_in().membership_scratch().max(self.a.subspace_out().membership_scratch());
        self.a.ancillas().max(1 + scratch)
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(self.dense()?.as_ref() * v)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(self.dense()?.adjoint() * w)
    }

    fn circuit(&self) -> Result<Circuit> {
        let w = self.a.width();
        let width = w + 1;
        let mut c = Circuit::new(width, self.ancillas());
        let map: Vec<usize> = (0..w).collect();
        let u = self.a.circuit()?;
        let u_dagger = u.adjoint();
        let phases = self.reflection_phases();
        let d = phases.len() - 1;
        c.push(Gate::single(GateKind::H, w))?;
        if !d.is_multiple_of(4) {
            c.push(Gate::single(GateKind::RZ(d as f64 * std::f64::consts::PI), w))?;
        }
        for (step, phi) in phases.iter().rev().enumerate() {
            let space = if step % 2 == 0 { self.a.subspace_in() } else { self.a.subspace_out() };
            self.phase_step(&mut c, space, *phi)?;
            if step < d {
                let block = if step % 2 == 0 { u.as_ref() } else { &u_dagger };
                c.extend(block.embedded(&map, width, &[]))?;
            }
        }
        c.push(Gate::single(GateKind::H, w))?;
        Ok(c)
    }

    fn isometric(&self) -> bool {
        false
    }

    fn confines(&self) -> bool {
        false
    }
}
