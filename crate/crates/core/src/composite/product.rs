use serde_json::{json, Value};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::node::{Node, Operation};
use crate::subspace::{membership_gates, Subspace};

/// Whether a product checks that the intermediate state lies in the left
/// factor's input subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductCheck {
    /// Skip the check only when a certificate shows it is redundant.
    #[default]
    Auto,
    Always,
    /// Skip without a certificate; recorded as an unchecked assumption.
    AssumeSkip,
}

impl ProductCheck {
    pub fn name(self) -> &'static str {
        match self {
            ProductCheck::Auto => "auto",
            ProductCheck::Always => "always",
            ProductCheck::AssumeSkip => "assume_skip",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ProductCheck::Auto),
            "always" => Ok(ProductCheck::Always),
            "assume_skip" => Ok(ProductCheck::AssumeSkip),
            other => Err(Error::Format(format!("unknown product check `{other}`"))),
        }
    }
}

/// `a @ b`.
///
/// Circuit: `U_b`, a basis permutation sending the k-th basis state of
/// `out(b)` to the k-th of `in(a)` (omitted when they coincide), an optional
/// membership check of `in(a)` into a new flag qubit that the output
/// subspace forces to zero, then `U_a`.
pub fn product(a: &Node, b: &Node, check: ProductCheck) -> Result<Node> {
    if a.dim_in() != b.dim_out() {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.dim_out(),
            a.dim_in(),
            b.dim_out(),
            b.dim_in()
        )));
    }
    let w = a.width().max(b.width());
    let in_a = a.subspace_in().padded(w);
    let out_b = b.subspace_out().padded(w);
    let permute = !out_b.same_span(&in_a);
    let certified = b.is_isometric() || a.confines();
    let flagged = match check {
        ProductCheck::Auto => !certified,
        ProductCheck::Always => true,
        ProductCheck::AssumeSkip => false,
    };
    Ok(Node::new(Product {
        a: a.clone(),
        b: b.clone(),
        check,
        certified,
        permute,
        flagged,
        w,
        in_a,
        out_b,
    }))
}

#[derive(Debug)]
struct Product {
    a: Node,
    b: Node,
    check: ProductCheck,
    certified: bool,
    permute: bool,
    flagged: bool,
    w: usize,
    in_a: Subspace,
    out_b: Subspace,
}

impl Product {
    fn width(&self) -> usize {
        self.w + usize::from(self.flagged)
    }

    /// Sends the k-th basis index of `from` to the k-th of `to`, and the
    /// remaining indices in increasing order onto the remaining ones.
    fn alignment(&self) -> Vec<usize> {
        let n = 1usize << self.w;
        let mut table = vec![usize::MAX; n];
        let mut used = vec![false; n];
        for (s, d) in self.out_b.enumerate_basis().into_iter().zip(self.in_a.enumerate_basis()) {
            table[s] = d;
            used[d] = true;
        }
        let mut free = (0..n).filter(|&i| !used[i]);
        for t in table.iter_mut().filter(|t| **t == usize::MAX) {
            *t = free.next().expect("complements have equal size");
        }
        table
    }
}

impl Operation for Product {
    fn kind(&self) -> &'static str {
        "matmul"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone(), self.b.clone()]
    }

    fn params(&self) -> Value {
        match self.check {
            ProductCheck::Auto => json!({}),
            other => json!({ "check": other.name() }),
        }
    }

    fn normalization(&self) -> f64 {
        self.a.normalization() * self.b.normalization()
    }

    fn subspace_in(&self) -> Subspace {
        self.b.subspace_in().padded(self.width())
    }

    fn subspace_out(&self) -> Subspace {
        self.a.subspace_out().padded(self.width())
    }

    fn ancillas(&self) -> usize {
        let check = if self.flagged { self.in_a.membership_scratch() } else { 0 };
        self.a.ancillas().max(self.b.ancillas()).max(check)
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        self.a.compute_matrix(&self.b.compute_matrix(v)?)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        self.b.compute_adjoint_matrix(&self.a.compute_adjoint_matrix(w)?)
    }

    fn circuit(&self) -> Result<Circuit> {
        let width = self.width();
        let mut c = Circuit::new(width, self.ancillas());
        let map: Vec<usize> = (0..width).collect();
        c.extend(self.b.circuit()?.embedded(&map, width, &[]))?;
        if self.permute {
            c.push(Gate::permutation(self.alignment(), (0..self.w).collect())?)?;
        }
        if self.flagged {
            let (gates, _) = membership_gates(&self.in_a, &map[..self.w], self.w, width);
            c.extend(gates)?;
        }
        c.extend(self.a.circuit()?.embedded(&map, width, &[]))?;
        Ok(c)
    }

    fn isometric(&self) -> bool {
        self.a.is_isometric() && self.b.is_isometric()
    }

    fn confines(&self) -> bool {
        self.a.confines() && self.b.confines()
    }

    fn assumptions(&self) -> Vec<String> {
        if self.check == ProductCheck::AssumeSkip && !self.certified {
            vec![format!(
                "intermediate subspace check skipped without certificate in {} @ {}",
                self.a.kind(),
                self.b.kind()
            )]
        } else {
            Vec::new()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, C64};
    use crate::primitives::{constant_integer_addition, constant_vector, identity_dim, increment, projection};

    #[test]
    fn identity_times_increment() {
        let inc = increment(2).unwrap();
        let p = identity_dim(4).unwrap().matmul(&inc).unwrap();
        assert_eq!(*p.toarray().unwrap(), *inc.toarray().unwrap());
        assert!(p.verify(1e-12).unwrap().pass);
    }

    #[test]
    fn increment_squared() {
        let inc = increment(2).unwrap();
        let p = inc.matmul(&inc).unwrap();
        let two = constant_integer_addition(2, 2).unwrap();
        assert_eq!(*p.toarray().unwrap(), *two.toarray().unwrap());
        assert_eq!(p.width(), 2);
        assert!(p.verify(1e-12).unwrap().pass);
    }

    #[test]
    fn flagged_product_blocks_leakage() {
        // a projection then its transpose: the middle check must drop
        // the discarded basis state
        let parent = crate::subspace::Subspace::from_dim(4).unwrap();
        let down = projection(parent.clone(), 3, 4).unwrap();
        let up = projection(parent, 4, 3).unwrap();
        let inc = increment(2).unwrap();
        let p = up.matmul(&down.matmul(&inc).unwrap()).unwrap();
        assert!(p.verify(1e-12).unwrap().pass);
        let forced = up
            .matmul_with(&down.matmul(&inc).unwrap(), ProductCheck::Always)
            .unwrap();
        assert!(forced.verify(1e-12).unwrap().pass);
        let expected = up.toarray().unwrap().as_ref()
            * down.toarray().unwrap().as_ref()
            * inc.toarray().unwrap().as_ref();
        assert!(max_abs_diff(&p.toarray().unwrap(), &expected) < 1e-15);
    }

    #[test]
    fn assumed_skip_is_recorded() {
        let v = constant_vector(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let parent = crate::subspace::Subspace::from_dim(2).unwrap();
        let a = projection(parent, 2, 1).unwrap();
        let b = v.adjoint();
        let p = a.matmul_with(&b, ProductCheck::AssumeSkip).unwrap();
        assert_eq!(p.assumptions().len(), 1);
        assert!(p.resources().unwrap().unchecked_assumptions.len() == 1);
    }

    #[test]
    fn dimension_mismatch() {
        let a = identity_dim(3).unwrap();
        let b = identity_dim(4).unwrap();
        assert!(matches!(a.matmul(&b), Err(Error::Shape(_))));
    }
}
