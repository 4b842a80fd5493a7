//! Sums via linear combination of unitaries.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::node::{Node, Operation};
use crate::primitives::{constant_vector, identity};

/// `a + b` with normalization `gamma_a + gamma_b`.
///
/// Expands to `(prep (x) I)^dagger . diag(a / gamma_a, b / gamma_b) .
/// (prep (x) I)` with `prep = (sqrt(gamma_a), sqrt(gamma_b))`. A zero-scaled
/// operand contributes nothing and the sum expands to the other operand.
pub fn add(a: &Node, b: &Node) -> Result<Node> {
    if a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out() {
        return Err(Error::Shape(format!(
            "cannot add {}x{} and {}x{}",
            a.dim_out(),
            a.dim_in(),
            b.dim_out(),
            b.dim_in()
        )));
    }
    let expansion = lcu(a, b)?;
    Ok(Node::new(Add { a: a.clone(), b: b.clone(), expansion }))
}

/// `a + (-1) b`.
pub fn subtract(a: &Node, b: &Node) -> Result<Node> {
    add(a, &b.scale(-1.0))
}

fn lcu(a: &Node, b: &Node) -> Result<Node> {
    let (ga, gb) = (a.normalization(), b.normalization());
    let prep = constant_vector(vec![C64::new(ga.sqrt(), 0.0), C64::new(gb.sqrt(), 0.0)])?;
    let select = a.scale(1.0 / ga).block_diag(&b.scale(1.0 / gb));
    let right = prep.tensor(&identity(a.subspace_in().clone()));
    let left = prep.tensor(&identity(a.subspace_out().clone()));
    left.adjoint().matmul(&select.matmul(&right)?)
}

#[derive(Debug)]
struct Add {
    a: Node,
    b: Node,
    expansion: Node,
}

impl Operation for Add {
    fn kind(&self) -> &'static str {
        "add"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone(), self.b.clone()]
    }

    fn expansion(&self) -> Option<&Node> {
        Some(&self.expansion)
    }

    fn normalization(&self) -> f64 {
        self.a.normalization() + self.b.normalization()
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(self.a.compute_matrix(v)? + self.b.compute_matrix(v)?)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(self.a.compute_adjoint_matrix(w)? + self.b.compute_adjoint_matrix(w)?)
    }
}
