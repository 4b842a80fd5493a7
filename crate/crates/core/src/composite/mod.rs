//! The operator algebra over nodes.

mod add;
mod parallel;
mod product;
mod slice;

use serde_json::{json, Value};

use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::linalg::{CMatrix, C64};
use crate::node::{Node, Operation};
use crate::subspace::Subspace;

pub use add::{add, subtract};
pub use parallel::{block_diagonal, subnormalize, tensor};
pub use product::{product, ProductCheck};
pub use slice::{slice, SliceSpec};

pub fn adjoint(a: &Node) -> Node {
    Node::new(Adjoint { a: a.clone() })
}

#[derive(Debug)]
struct Adjoint {
    a: Node,
}

impl Operation for Adjoint {
    fn kind(&self) -> &'static str {
        "adjoint"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn normalization(&self) -> f64 {
        self.a.normalization()
    }

    fn subspace_in(&self) -> Subspace {
        self.a.subspace_out().clone()
    }

    fn subspace_out(&self) -> Subspace {
        self.a.subspace_in().clone()
    }

    fn ancillas(&self) -> usize {
        self.a.ancillas()
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        self.a.compute_adjoint_matrix(v)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        self.a.compute_matrix(w)
    }

    fn circuit(&self) -> Result<Circuit> {
        Ok(self.a.circuit()?.adjoint())
    }

    fn isometric(&self) -> bool {
        self.a.confines()
    }

    fn confines(&self) -> bool {
        self.a.is_isometric()
    }
}

/// `c * a`. A zero scalar gives a zero matrix of the same shape with
/// normalization 1.
pub fn scale(c: C64, a: &Node) -> Node {
    if c == C64::new(0.0, 0.0) {
        Node::new(Zero { a: a.clone() })
    } else {
        Node::new(Scale { a: a.clone(), c })
    }
}

pub(crate) fn scalar_json(c: C64) -> Value {
    if c.im == 0.0 {
        json!(c.re)
    } else {
        json!([c.re, c.im])
    }
}

#[derive(Debug)]
struct Scale {
    a: Node,
    c: C64,
}

impl Operation for Scale {
    fn kind(&self) -> &'static str {
        "scale"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn params(&self) -> Value {
        json!({ "scalar": scalar_json(self.c) })
    }

    fn normalization(&self) -> f64 {
        self.c.norm() * self.a.normalization()
    }

    fn subspace_in(&self) -> Subspace {
        self.a.subspace_in().clone()
    }

    fn subspace_out(&self) -> Subspace {
        self.a.subspace_out().clone()
    }

    fn ancillas(&self) -> usize {
        self.a.ancillas()
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(self.a.compute_matrix(v)? * self.c)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(self.a.compute_adjoint_matrix(w)? * self.c.conj())
    }

    fn circuit(&self) -> Result<Circuit> {
        let mut c = self.a.circuit()?.as_ref().clone();
        let phase = self.c.arg();
        if phase != 0.0 {
            c.push(Gate::global_phase(phase))?;
        }
        Ok(c)
    }

    fn isometric(&self) -> bool {
        self.a.is_isometric()
    }

    fn confines(&self) -> bool {
        self.a.confines()
    }
}

/// Zero matrix shaped like `a`. Every representable subspace contains the
/// all-zeros state, so the block is zeroed by an X on an extra top qubit
/// that both subspaces force to `|0>`.
#[derive(Debug)]
struct Zero {
    a: Node,
}

impl Operation for Zero {
    fn kind(&self) -> &'static str {
        "scale"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn params(&self) -> Value {
        json!({ "scalar": 0.0 })
    }

    fn normalization(&self) -> f64 {
        1.0
    }

    fn subspace_in(&self) -> Subspace {
        self.a.subspace_in().padded(self.a.width() + 1)
    }

    fn subspace_out(&self) -> Subspace {
        self.a.subspace_out().padded(self.a.width() + 1)
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(CMatrix::zeros(self.a.dim_out(), v.ncols()))
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(CMatrix::zeros(self.a.dim_in(), w.ncols()))
    }

    fn circuit(&self) -> Result<Circuit> {
        let w = self.a.width();
        Circuit::with_gates(w + 1, 0, vec![Gate::x(w)])
    }

    fn isometric(&self) -> bool {
        false
    }

    fn confines(&self) -> bool {
        false
    }

    fn is_zero(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ONE};
    use crate::primitives::{identity_dim, increment};

    #[test]
    fn adjoint_of_identity_and_increment() {
        let id = identity_dim(4).unwrap();
        assert_eq!(*id.adjoint().toarray().unwrap(), CMatrix::identity(4, 4));
        let inc = increment(2).unwrap();
        let t = inc.toarray().unwrap().transpose();
        assert_eq!(*inc.adjoint().toarray().unwrap(), t);
        assert!(inc.adjoint().verify(1e-12).unwrap().pass);
    }

    #[test]
    fn scale_by_i() {
        let id = identity_dim(2).unwrap();
        let s = id.scale(C64::new(0.0, 1.0));
        assert_eq!(s.normalization(), 1.0);
        let expected = CMatrix::identity(2, 2) * C64::new(0.0, 1.0);
        assert!(max_abs_diff(&s.toarray().unwrap(), &expected) < 1e-15);
        assert!(s.verify(1e-12).unwrap().pass);
        assert!((s.info_efficiency().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scale_by_one_keeps_matrix() {
        let inc = increment(2).unwrap();
        assert_eq!(*inc.scale(ONE).toarray().unwrap(), *inc.toarray().unwrap());
        assert_eq!(inc.scale(8.0).normalization(), 8.0);
    }

    #[test]
    fn zero_scale() {
        let inc = increment(2).unwrap();
        let z = inc.scale(0.0);
        assert!(z.is_zero());
        assert_eq!(z.normalization(), 1.0);
        assert_eq!(*z.toarray().unwrap(), CMatrix::zeros(4, 4));
        assert!(z.verify(1e-12).unwrap().pass);
    }
}
