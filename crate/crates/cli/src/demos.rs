//! Built-in worked examples.

use blockenc::linalg::{basis_vector, max_abs_diff, singular_values};
use blockenc::primitives::{
    constant_integer_addition, constant_vector, identity, identity_dim, increment, integer_addition,
};
use blockenc::qsvt::pseudoinverse;
use blockenc::{CMatrix, Node, Result, SliceSpec, Subspace, C64};
use serde_json::{json, Value};

use crate::output::{matrix_json, vector_json};

pub const DEMOS: [&str; 3] = ["increment", "laplace", "convolution"];

/// A demo's main node and its printed report.
pub struct Demo {
    pub node: Node,
    pub report: Value,
    /// Whether the demo's own checks held.
    pub pass: bool,
}

pub fn run(name: &str, n: Option<usize>, tolerance: Option<f64>) -> Result<Demo> {
    match name {
        "increment" => increment_demo(n.unwrap_or(2)),
        "laplace" => laplace_demo(n.unwrap_or(3), tolerance.unwrap_or(0.01)),
        "convolution" => convolution_demo(),
        other => Err(blockenc::Error::Config(format!(
            "unknown demo `{other}`; expected one of {}",
            DEMOS.join(", ")
        ))),
    }
}

pub fn increment_demo(bits: usize) -> Result<Demo> {
    let inc = increment(bits)?;
    let e1 = basis_vector(inc.dim_in(), 1 % inc.dim_in());
    let simulated = inc.simulate(&e1)?;
    let computed = inc.compute(&e1)?;
    let matrix = inc.toarray()?;
    let circuit = inc.circuit()?;
    let pass = max_abs_diff(
        &CMatrix::from_column_slice(simulated.len(), 1, simulated.as_slice()),
        &CMatrix::from_column_slice(computed.len(), 1, computed.as_slice()),
    ) <= 1e-12;
    let report = json!({
        "circuit": circuit.gates().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "qubits": circuit.main_qubits(),
        "basis_in": inc.basis_in().as_ref(),
        "normalization": inc.normalization(),
        "simulate_e1": vector_json(&simulated),
        "compute_e1": vector_json(&computed),
        "toarray": matrix_json(&matrix),
    });
    Ok(Demo { node: inc, report, pass })
}

/// The `2^n - 1` interior-node stiffness matrix, scaled by `2^n`.
pub fn laplace_matrix(bits: usize) -> Result<Node> {
    let x = increment(bits)?;
    let two = identity_dim(1 << bits)?.scale(2.0);
    let full = two.minus(&x.adjoint())?.minus(&x)?.scale((1u64 << bits) as f64);
    full.slice(SliceSpec::to(-1), SliceSpec::to(-1))
}

/// The load vector of `f = 1`.
pub fn laplace_rhs(bits: usize) -> Result<Node> {
    let half = C64::new(0.5, 0.0);
    let v = constant_vector(vec![half, half])?;
    let mut b = v.clone();
    for _ in 1..bits {
        b = b.tensor(&v);
    }
    b.slice(SliceSpec::to(-1), SliceSpec::full())
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    s[0] / s[s.len() - 1]
}

pub fn laplace_demo(bits: usize, tolerance: f64) -> Result<Demo> {
    if bits == 0 {
        return Err(blockenc::Error::Config("laplace demo needs at least one bit".into()));
    }
    let a = laplace_matrix(bits)?;
    let b = laplace_rhs(bits)?;
    let dense = a.toarray()?;
    let condition = condition_number(&dense);
    let a_inv = pseudoinverse(&a, condition, tolerance, None)?;
    let solution = a_inv.matmul(&b)?;
    let scale = 2f64.powf(-(bits as f64) / 2.0);
    let qoi = solution.simulate_norm()? * scale;

    let exact = dense
        .as_ref()
        .clone()
        .lu()
        .solve(b.toarray()?.as_ref())
        .ok_or_else(|| blockenc::Error::Domain("stiffness matrix is singular".into()))?;
    let oracle = exact.norm() * scale;
    let relative_error = (qoi - oracle).abs() / oracle;
    let report = json!({
        "bits": bits,
        "dofs": a.dim_in(),
        "normalization_a": a.normalization(),
        "condition": condition,
        "tolerance": tolerance,
        "pseudoinverse_normalization": a_inv.normalization(),
        "qoi": qoi,
        "oracle_qoi": oracle,
        "relative_error": relative_error,
        "solution": vector_json(&solution.simulate(&basis_vector(1, 0))?),
    });
    Ok(Demo { node: solution, report, pass: relative_error <= 0.02 })
}

/// `exp(-(i/4)^2)` for `i = -3..=3`, padded with one zero.
pub fn gaussian_kernel() -> Vec<f64> {
    let mut k: Vec<f64> = (-3..=3).map(|i| (-(i as f64 / 4.0).powi(2)).exp()).collect();
    k.push(0.0);
    k
}

/// Convolution with a kernel centered on index 3, on an `n x n` window.
pub fn toeplitz(kernel: &[f64], n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let k = i as i64 - j as i64 + 3;
        let v = if (0..kernel.len() as i64).contains(&k) { kernel[k as usize] } else { 0.0 };
        C64::new(v, 0.0)
    })
}

pub fn convolution() -> Result<Node> {
    let kernel = gaussian_kernel();
    let prep = identity(Subspace::from_dim(16)?)
        .tensor(&constant_vector(kernel.iter().map(|k| C64::new(k.sqrt(), 0.0)).collect())?);
    let add = integer_addition(3, 4)?;
    let const_add = constant_integer_addition(4, -3)?.tensor(&identity(Subspace::from_dim(8)?));
    let unprep = prep.adjoint();
    let conv = unprep.matmul(&const_add)?.matmul(&add)?.matmul(&prep)?;
    conv.slice(SliceSpec::to(8), SliceSpec::to(8))
}

pub fn convolution_demo() -> Result<Demo> {
    let conv = convolution()?;
    let kernel = gaussian_kernel();
    let matrix = conv.toarray()?;
    let expected = toeplitz(&kernel, 8);
    let error = max_abs_diff(&matrix, &expected);
    let verify = conv.verify(1e-9)?;
    let report = json!({
        "kernel": kernel,
        "normalization": conv.normalization(),
        "kernel_sum": kernel.iter().sum::<f64>(),
        "toarray": matrix_json(&matrix),
        "toeplitz_max_error": error,
        "verify": verify,
    });
    Ok(Demo { node: conv, report, pass: error <= 1e-8 && verify.pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toeplitz_is_banded_and_symmetric() {
        let t = toeplitz(&gaussian_kernel(), 8);
        assert_eq!(t, t.transpose());
        assert_eq!(t[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(t[(0, 4)], C64::new(0.0, 0.0));
        assert!((t[(3, 0)].re - (-9.0f64 / 16.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn laplacian_normalization() {
        assert_eq!(laplace_matrix(3).unwrap().normalization(), 32.0);
        assert_eq!(laplace_rhs(3).unwrap().dim_out(), 7);
    }

    #[test]
    fn unknown_demo() {
        assert!(run("nope", None, None).is_err());
    }
}
