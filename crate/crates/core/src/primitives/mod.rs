//! Leaf block encodings.

mod arithmetic;
mod vector;

use serde_json::json;
use serde_json::Value;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};
use crate::node::{Node, Operation};
use crate::subspace::Subspace;

pub use arithmetic::{constant_integer_addition, increment, integer_addition, qft};
pub use vector::constant_vector;

/// Identity on the given subspace.
pub fn identity(subspace: Subspace) -> Node {
    Node::new(Identity { subspace })
}

/// Identity on `from_dim(dim)`.
pub fn identity_dim(dim: usize) -> Result<Node> {
    Ok(identity(Subspace::from_dim(dim)?))
}

#[derive(Debug)]
struct Identity {
    subspace: Subspace,
}

impl Operation for Identity {
    fn kind(&self) -> &'static str {
        "identity"
    }

    fn params(&self) -> Value {
        json!({ "subspace": self.subspace.to_json() })
    }

    fn normalization(&self) -> f64 {
        1.0
    }

    fn subspace_in(&self) -> Subspace {
        self.subspace.clone()
    }

    fn subspace_out(&self) -> Subspace {
        self.subspace.clone()
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(v.clone())
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(w.clone())
    }

    fn circuit(&self) -> Result<Circuit> {
        Ok(Circuit::new(self.subspace.qubit_count(), 0))
    }

    fn isometric(&self) -> bool {
        true
    }

    fn confines(&self) -> bool {
        true
    }
}

/// `P e_i = e_{table[i]}` on `from_dim(table.len())`.
pub fn permutation(table: Vec<usize>) -> Result<Node> {
    let n = table.len();
    let mut seen = vec![false; n];
    for &t in &table {
        if t >= n || std::mem::replace(&mut seen[t], true) {
            return Err(Error::Domain(format!("permutation table {table:?} is not a bijection")));
        }
    }
    if n == 0 {
        return Err(Error::Domain("empty permutation table".into()));
    }
    Ok(Node::new(Permutation { table }))
}

#[derive(Debug)]
struct Permutation {
    table: Vec<usize>,
}

impl Operation for Permutation {
    fn kind(&self) -> &'static str {
        "permutation"
    }

    fn params(&self) -> Value {
        json!({ "table": self.table })
    }

    fn normalization(&self) -> f64 {
        1.0
    }

    fn subspace_in(&self) -> Subspace {
        Subspace::from_dim(self.table.len()).expect("nonempty table")
    }

    fn subspace_out(&self) -> Subspace {
        self.subspace_in()
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        let mut out = CMatrix::zeros(v.nrows(), v.ncols());
        for (i, &j) in self.table.iter().enumerate() {
            out.row_mut(j).copy_from(&v.row(i));
        }
        Ok(out)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        let mut out = CMatrix::zeros(w.nrows(), w.ncols());
        for (i, &j) in self.table.iter().enumerate() {
            out.row_mut(i).copy_from(&w.row(j));
        }
        Ok(out)
    }

    fn circuit(&self) -> Result<Circuit> {
        let m = self.subspace_in().qubit_count();
        let mut c = Circuit::new(m, 0);
        if m > 0 && self.table.iter().enumerate().any(|(i, &j)| i != j) {
            let mut full = self.table.clone();
            full.extend(self.table.len()..1 << m);
            c.push(Gate::permutation(full, (0..m).collect())?)?;
        }
        Ok(c)
    }

    fn isometric(&self) -> bool {
        true
    }

    fn confines(&self) -> bool {
        true
    }
}

/// The `keep_out x keep_in` matrix with ones on the leading diagonal,
/// selecting the first basis states of `parent`. Its circuit is empty.
pub fn projection(parent: Subspace, keep_out: usize, keep_in: usize) -> Result<Node> {
    let subspace_out = parent.prefix_truncate(keep_out)?;
    let subspace_in = parent.prefix_truncate(keep_in)?;
    Ok(Node::new(Projection { parent, keep_out, keep_in, subspace_in, subspace_out }))
}

#[derive(Debug)]
struct Projection {
    parent: Subspace,
    keep_out: usize,
    keep_in: usize,
    subspace_in: Subspace,
    subspace_out: Subspace,
}

impl Operation for Projection {
    fn kind(&self) -> &'static str {
        "projection"
    }

    fn params(&self) -> Value {
        json!({
            "subspace": self.parent.to_json(),
            "keep_out": self.keep_out,
            "keep_in": self.keep_in,
        })
    }

    fn normalization(&self) -> f64 {
        1.0
    }

    fn subspace_in(&self) -> Subspace {
        self.subspace_in.clone()
    }

    fn subspace_out(&self) -> Subspace {
        self.subspace_out.clone()
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(truncate_rows(v, self.keep_out))
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(truncate_rows(w, self.keep_in))
    }

    fn circuit(&self) -> Result<Circuit> {
        Ok(Circuit::new(self.parent.qubit_count(), 0))
    }

    fn isometric(&self) -> bool {
        self.keep_out >= self.keep_in
    }

    fn confines(&self) -> bool {
        self.keep_out <= self.keep_in
    }
}

/// First `rows` rows of `m`, zero-padded when `m` is shorter.
fn truncate_rows(m: &CMatrix, rows: usize) -> CMatrix {
    let mut out = CMatrix::from_element(rows, m.ncols(), ZERO);
    let k = rows.min(m.nrows());
    out.rows_mut(0, k).copy_from(&m.rows(0, k));
    out
}
