//! Tensor products and block diagonals.

use serde_json::{json, Value};

use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::node::{Node, Operation};
use crate::subspace::Subspace;

/// `kron(a, b)` with `a` on the more significant qubits.
pub fn tensor(a: &Node, b: &Node) -> Node {
    Node::new(Tensor { a: a.clone(), b: b.clone() })
}

#[derive(Debug)]
struct Tensor {
    a: Node,
    b: Node,
}

impl Tensor {
    /// Applies `fa` to the `a` index and `fb` to the `b` index of every
    /// column of `v`, where `v`'s row index is `i * rows_b + j`.
    fn apply(
        v: &CMatrix,
        rows_b: usize,
        fa: impl Fn(&CMatrix) -> Result<CMatrix>,
        fb: impl Fn(&CMatrix) -> Result<CMatrix>,
    ) -> Result<CMatrix> {
        let rows_a = v.nrows() / rows_b;
        let mut out: Option<CMatrix> = None;
        for (k, col) in v.column_iter().enumerate() {
            let m = CMatrix::from_column_slice(rows_b, rows_a, col.as_slice());
            let mb = fb(&m)?;
            let ma = fa(&mb.transpose())?;
            let r = ma.transpose();
            let out = out.get_or_insert_with(|| CMatrix::zeros(r.len(), v.ncols()));
            out.column_mut(k).copy_from_slice(r.as_slice());
        }
        Ok(out.unwrap_or_else(|| CMatrix::zeros(0, 0)))
    }
}

impl Operation for Tensor {
    fn kind(&self) -> &'static str {
        "tensor"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone(), self.b.clone()]
    }

    fn normalization(&self) -> f64 {
        self.a.normalization() * self.b.normalization()
    }

    fn subspace_in(&self) -> Subspace {
        self.a.subspace_in().tensor(self.b.subspace_in())
    }

    fn subspace_out(&self) -> Subspace {
        self.a.subspace_out().tensor(self.b.subspace_out())
    }

    fn ancillas(&self) -> usize {
        self.a.ancillas().max(self.b.ancillas())
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        if v.ncols() == 0 {
            return Ok(CMatrix::zeros(self.a.dim_out() * self.b.dim_out(), 0));
        }
        Tensor::apply(v, self.b.dim_in(), |m| self.a.compute_matrix(m), |m| self.b.compute_matrix(m))
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        if w.ncols() == 0 {
            return Ok(CMatrix::zeros(self.a.dim_in() * self.b.dim_in(), 0));
        }
        Tensor::apply(
            w,
            self.b.dim_out(),
            |m| self.a.compute_adjoint_matrix(m),
            |m| self.b.compute_adjoint_matrix(m),
        )
    }

    fn circuit(&self) -> Result<Circuit> {
        let (wa, wb) = (self.a.width(), self.b.width());
        let width = wa + wb;
        let mut c = Circuit::new(width, self.ancillas());
        let low: Vec<usize> = (0..wb).collect();
        let high: Vec<usize> = (wb..width).collect();
        c.extend(self.b.circuit()?.embedded(&low, width, &[]))?;
        c.extend(self.a.circuit()?.embedded(&high, width, &[]))?;
        Ok(c)
    }

    fn isometric(&self) -> bool {
        self.a.is_isometric() && self.b.is_isometric()
    }

    fn confines(&self) -> bool {
        self.a.confines() && self.b.confines()
    }
}

/// `diag(a, b)` with normalization `max(gamma_a, gamma_b)`. The child with
/// the smaller normalization is first scaled down by one extra qubit.
pub fn block_diagonal(a: &Node, b: &Node) -> Node {
    let (ga, gb) = (a.normalization(), b.normalization());
    let target = ga.max(gb);
    let wrap = |n: &Node, g: f64| {
        if (target - g).abs() <= 1e-12 * target {
            n.clone()
        } else {
            Node::new(SubNormalize { a: n.clone(), target })
        }
    };
    Node::new(BlockDiag { a: a.clone(), b: b.clone(), a_eff: wrap(a, ga), b_eff: wrap(b, gb) })
}

#[derive(Debug)]
struct BlockDiag {
    a: Node,
    b: Node,
    a_eff: Node,
    b_eff: Node,
}

impl BlockDiag {
    fn inner_width(&self) -> usize {
        self.a_eff.width().max(self.b_eff.width())
    }

    fn split(
        v: &CMatrix,
        rows_a: usize,
        fa: impl Fn(&CMatrix) -> Result<CMatrix>,
        fb: impl Fn(&CMatrix) -> Result<CMatrix>,
    ) -> Result<CMatrix> {
        let top = fa(&v.rows(0, rows_a).into_owned())?;
        let bottom = fb(&v.rows(rows_a, v.nrows() - rows_a).into_owned())?;
        let mut out = CMatrix::zeros(top.nrows() + bottom.nrows(), v.ncols());
        out.rows_mut(0, top.nrows()).copy_from(&top);
        out.rows_mut(top.nrows(), bottom.nrows()).copy_from(&bottom);
        Ok(out)
    }
}

impl Operation for BlockDiag {
    fn kind(&self) -> &'static str {
        "blockdiag"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone(), self.b.clone()]
    }

    fn normalization(&self) -> f64 {
        self.a.normalization().max(self.b.normalization())
    }

    fn subspace_in(&self) -> Subspace {
        let w = self.inner_width();
        Subspace::controlled(&self.a_eff.subspace_in().padded(w), &self.b_eff.subspace_in().padded(w))
            .expect("padded to equal width")
    }

    fn subspace_out(&self) -> Subspace {
        let w = self.inner_width();
        Subspace::controlled(&self.a_eff.subspace_out().padded(w), &self.b_eff.subspace_out().padded(w))
            .expect("padded to equal width")
    }

    fn ancillas(&self) -> usize {
        self.a_eff.ancillas().max(self.b_eff.ancillas())
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        BlockDiag::split(v, self.a.dim_in(), |m| self.a.compute_matrix(m), |m| self.b.compute_matrix(m))
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        BlockDiag::split(
            w,
            self.a.dim_out(),
            |m| self.a.compute_adjoint_matrix(m),
            |m| self.b.compute_adjoint_matrix(m),
        )
    }

    fn circuit(&self) -> Result<Circuit> {
        let w = self.inner_width();
        let width = w + 1;
        let mut c = Circuit::new(width, self.ancillas());
        let map: Vec<usize> = (0..w).collect();
        c.extend(self.a_eff.circuit()?.embedded(&map, width, &[Control::off(w)]))?;
        c.extend(self.b_eff.circuit()?.embedded(&map, width, &[Control::on(w)]))?;
        Ok(c)
    }

    fn isometric(&self) -> bool {
        self.a_eff.is_isometric() && self.b_eff.is_isometric()
    }

    fn confines(&self) -> bool {
        self.a_eff.confines() && self.b_eff.confines()
    }
}

/// `a` re-encoded with the larger normalization `target`.
pub fn subnormalize(a: &Node, target: f64) -> Result<Node> {
    if !(target.is_finite() && target >= a.normalization()) {
        return Err(Error::Domain(format!(
            "normalization {target} is below the child's {}",
            a.normalization()
        )));
    }
    Ok(Node::new(SubNormalize { a: a.clone(), target }))
}

/// Same matrix as `a` with a larger normalization: one extra qubit rotated
/// by `RY(theta)`, `cos(theta / 2) = gamma_a / target`, whose `|0>` branch
/// is kept.
#[derive(Debug)]
struct SubNormalize {
    a: Node,
    target: f64,
}

impl Operation for SubNormalize {
    fn kind(&self) -> &'static str {
        "subnormalize"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn params(&self) -> Value {
        json!({ "normalization": self.target })
    }

    fn normalization(&self) -> f64 {
        self.target
    }

    fn subspace_in(&self) -> Subspace {
        self.a.subspace_in().padded(self.a.width() + 1)
    }

    fn subspace_out(&self) -> Subspace {
        self.a.subspace_out().padded(self.a.width() + 1)
    }

    fn ancillas(&self) -> usize {
        self.a.ancillas()
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        self.a.compute_matrix(v)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        self.a.compute_adjoint_matrix(w)
    }

    fn circuit(&self) -> Result<Circuit> {
        let w = self.a.width();
        let mut c = Circuit::new(w + 1, self.a.ancillas());
        let map: Vec<usize> = (0..w).collect();
        c.extend(self.a.circuit()?.embedded(&map, w + 1, &[]))?;
        let ratio = (self.a.normalization() / self.target).clamp(-1.0, 1.0);
        c.push(Gate::single(GateKind::RY(2.0 * ratio.acos()), w))?;
        Ok(c)
    }

    fn isometric(&self) -> bool {
        false
    }

    fn confines(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, C64};
    use crate::primitives::{constant_vector, identity_dim, increment, qft};

    #[test]
    fn tensor_with_trivial_identity() {
        let inc = increment(2).unwrap();
        let t = inc.tensor(&identity_dim(1).unwrap());
        assert_eq!(*t.toarray().unwrap(), *inc.toarray().unwrap());
    }

    #[test]
    fn tensor_is_kron() {
        let a = increment(1).unwrap();
        let b = qft(2).unwrap();
        let t = a.tensor(&b);
        let expected = a.toarray().unwrap().kronecker(b.toarray().unwrap().as_ref());
        assert!(max_abs_diff(&t.toarray().unwrap(), &expected) < 1e-14);
        assert!(t.verify(1e-12).unwrap().pass);
    }

    #[test]
    fn three_half_vectors() {
        let v = constant_vector(vec![C64::new(0.5, 0.0); 2]).unwrap();
        let t = v.tensor(&v).tensor(&v);
        assert!((t.normalization() - 0.5f64.sqrt().powi(3)).abs() < 1e-15);
        let m = t.toarray().unwrap();
        assert_eq!(m.shape(), (8, 1));
        assert!(m.iter().all(|z| (z - C64::new(0.125, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn identity_blocks() {
        let d = identity_dim(2).unwrap().block_diag(&identity_dim(2).unwrap());
        assert_eq!(*d.toarray().unwrap(), CMatrix::identity(4, 4));
        assert!(d.verify(1e-12).unwrap().pass);
    }

    #[test]
    fn unequal_normalizations() {
        let a = increment(2).unwrap().scale(3.0);
        let b = qft(1).unwrap();
        let d = a.block_diag(&b);
        assert_eq!(d.normalization(), 3.0);
        assert!(d.verify(1e-12).unwrap().pass);
        let m = d.toarray().unwrap();
        assert_eq!(m.shape(), (6, 6));
        for r in 0..4 {
            for c in 4..6 {
                assert_eq!(m[(r, c)], C64::new(0.0, 0.0));
                assert_eq!(m[(c, r)], C64::new(0.0, 0.0));
            }
        }
    }
}
