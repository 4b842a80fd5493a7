//! Quantum singular value transformation.

mod chebyshev;
mod node;
mod phases;
mod pseudoinverse;

pub use chebyshev::{interpolate, Parity, TargetPolynomial};
pub use node::qsvt;
pub use phases::{qsp_entry, realized_poly, solve_phases, PhaseVector, DEFAULT_TOLERANCE};
pub use pseudoinverse::{inverse_target, pseudoinverse, InverseTarget};
