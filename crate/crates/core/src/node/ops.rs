//! Algebra on nodes. The operator forms panic on dimension mismatch; the
//! named methods return errors instead.

use std::ops::{Add, BitAnd, BitOr, Mul, Neg, Sub};

use super::Node;
use crate::composite::{self, ProductCheck, SliceSpec};
use crate::error::Result;
use crate::linalg::C64;

impl Node {
    pub fn adjoint(&self) -> Node {
        composite::adjoint(self)
    }

    pub fn scale(&self, c: impl Into<C64>) -> Node {
        composite::scale(c.into(), self)
    }

    /// `self @ other`.
    pub fn matmul(&self, other: &Node) -> Result<Node> {
        composite::product(self, other, ProductCheck::Auto)
    }

    pub fn matmul_with(&self, other: &Node, check: ProductCheck) -> Result<Node> {
        composite::product(self, other, check)
    }

    /// Kronecker product, `self` on the more significant qubits.
    pub fn tensor(&self, other: &Node) -> Node {
        composite::tensor(self, other)
    }

    pub fn block_diag(&self, other: &Node) -> Node {
        composite::block_diagonal(self, other)
    }

    pub fn plus(&self, other: &Node) -> Result<Node> {
        composite::add(self, other)
    }

    pub fn minus(&self, other: &Node) -> Result<Node> {
        composite::subtract(self, other)
    }

    /// `self[rows, cols]` with Python slice semantics.
    pub fn slice(&self, rows: SliceSpec, cols: SliceSpec) -> Result<Node> {
        composite::slice(self, rows, cols)
    }
}

macro_rules! binary {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Node> for &Node {
            type Output = Node;
            fn $method(self, rhs: &Node) -> Node {
                let f: fn(&Node, &Node) -> Node = $body;
                f(self, rhs)
            }
        }
        impl $trait<Node> for Node {
            type Output = Node;
            fn $method(self, rhs: Node) -> Node {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Node> for Node {
            type Output = Node;
            fn $method(self, rhs: &Node) -> Node {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Node> for &Node {
            type Output = Node;
            fn $method(self, rhs: Node) -> Node {
                $trait::$method(self, &rhs)
            }
        }
    };
}

binary!(Add, add, |a, b| a.plus(b).expect("`+` needs matching dimensions"));
binary!(Sub, sub, |a, b| a.minus(b).expect("`-` needs matching dimensions"));
binary!(Mul, mul, |a, b| a.matmul(b).expect("`*` needs a.dim_in == b.dim_out"));
binary!(BitAnd, bitand, |a, b| a.tensor(b));
binary!(BitOr, bitor, |a, b| a.block_diag(b));

impl Neg for &Node {
    type Output = Node;
    fn neg(self) -> Node {
        self.scale(-1.0)
    }
}

impl Neg for Node {
    type Output = Node;
    fn neg(self) -> Node {
        -&self
    }
}

macro_rules! scalar {
    ($t:ty) => {
        impl Mul<$t> for &Node {
            type Output = Node;
            fn mul(self, c: $t) -> Node {
                self.scale(c)
            }
        }
        impl Mul<$t> for Node {
            type Output = Node;
            fn mul(self, c: $t) -> Node {
                self.scale(c)
            }
        }
        impl Mul<&Node> for $t {
            type Output = Node;
            fn mul(self, n: &Node) -> Node {
                n.scale(self)
            }
        }
        impl Mul<Node> for $t {
            type Output = Node;
            fn mul(self, n: Node) -> Node {
                n.scale(self)
            }
        }
    };
}

scalar!(f64);
scalar!(C64);
