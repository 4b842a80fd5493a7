//! Block-encoding linear algebra: compose encoded matrices, evaluate them by
//! matrix arithmetic or by circuit simulation, and estimate resources.

pub mod budget;
pub mod circuit;
pub mod composite;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod node;
pub mod primitives;
pub mod qsvt;
pub mod subspace;

pub use budget::{budget, set_budget, Budget};
pub use circuit::{Circuit, Control, Gate, GateCounts, GateKind, StateVector};
pub use composite::{ProductCheck, SliceSpec};
pub use error::{Error, Result};
pub use graph::{parse_node, GraphDocument};
pub use linalg::{CMatrix, CVector, C64};
pub use node::{norm_query_estimate, Node, Operation, ResourceReport, VerifyReport};
pub use subspace::{Subspace, SubspaceFactor};
