//! Quantum signal processing phases in the `W(x)` convention.
//!
//! `W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]]` and the realized
//! polynomial is `Re <0| e^{i phi_0 Z} prod_{j=1..d} W(x) e^{i phi_j Z} |0>`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chebyshev::{Parity, TargetPolynomial};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    pub phases: Vec<f64>,
    pub parity: Parity,
    /// Largest residual at the solver's nodes.
    pub residual: f64,
}

impl PhaseVector {
    /// All-zero phases of the given degree, which realize `T_d`.
    pub fn zeros(degree: usize) -> Self {
        PhaseVector { phases: vec![0.0; degree + 1], parity: Parity::of(degree), residual: 0.0 }
    }

    pub fn degree(&self) -> usize {
        self.phases.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        realized_poly(&self.phases, x)
    }
}

type M2 = [[Complex64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn signal(x: f64) -> M2 {
    let s = Complex64::new(0.0, (1.0 - x * x).max(0.0).sqrt());
    let x = Complex64::new(x, 0.0);
    [[x, s], [s, x]]
}

fn rz(phi: f64) -> M2 {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::from_polar(1.0, phi), z], [z, Complex64::from_polar(1.0, -phi)]]
}

/// Top-left entry of the full QSP product.
pub fn qsp_entry(phases: &[f64], x: f64) -> Complex64 {
    let w = signal(x);
    let mut u = rz(phases[0]);
    for &phi in &phases[1..] {
        u = mul(&mul(&u, &w), &rz(phi));
    }
    u[0][0]
}

pub fn realized_poly(phases: &[f64], x: f64) -> f64 {
    qsp_entry(phases, x).re
}

/// Realized value and gradient with respect to every phase, from prefix
/// and suffix products.
fn value_and_gradient(phases: &[f64], x: f64) -> (f64, Vec<f64>) {
    let d = phases.len() - 1;
    let w = signal(x);
    let id = rz(0.0);
    // prefix[j] = A_0 W A_1 W ... A_{j-1} W
    let mut prefix = Vec::with_capacity(d + 1);
    let mut acc = id;
    for (j, &phi) in phases.iter().enumerate() {
        prefix.push(acc);
        if j < d {
            acc = mul(&mul(&acc, &rz(phi)), &w);
        }
    }
    // suffix[j] = W A_{j+1} ... W A_d
    let mut suffix = vec![id; d + 1];
    let mut acc = id;
    for j in (0..d).rev() {
        acc = mul(&mul(&w, &rz(phases[j + 1])), &acc);
        suffix[j] = acc;
    }
    let value = mul(&mul(&prefix[0], &rz(phases[0])), &suffix[0])[0][0].re;
    let grad = (0..=d)
        .map(|j| {
            let a = rz(phases[j]);
            let i = Complex64::new(0.0, 1.0);
            // d/dphi e^{i phi Z} = i Z e^{i phi Z}
            let da = [[i * a[0][0], a[0][1]], [a[1][0], -i * a[1][1]]];
            mul(&mul(&prefix[j], &da), &suffix[j])[0][0].re
        })
        .collect();
    (value, grad)
}

/// Coefficient bits, parity and tolerance bits.
type CacheKey = (Vec<u64>, Parity, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, PhaseVector>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, PhaseVector>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Symmetric phases realizing `target` to within `tol` at the positive
/// Chebyshev nodes. Deterministic; results are memoized.
pub fn solve_phases(target: &TargetPolynomial, tol: f64) -> Result<PhaseVector> {
    let key = (
        target.coefficients().iter().map(|c| c.to_bits()).collect::<Vec<_>>(),
        target.parity(),
        tol.to_bits(),
    );
    if let Some(hit) = cache().lock().expect("phase cache").get(&key) {
        return Ok(hit.clone());
    }
    let solved = newton(target, tol)?;
    cache().lock().expect("phase cache").insert(key, solved.clone());
    Ok(solved)
}

fn newton(target: &TargetPolynomial, tol: f64) -> Result<PhaseVector> {
    let d = target.degree();
    let parity = target.parity();
    let sup = target.sup_norm();
    if sup > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("target sup norm {sup} exceeds 1; rescale it first")));
    }
    if d == 0 {
        let c = target.eval(0.0).clamp(-1.0, 1.0);
        return Ok(PhaseVector { phases: vec![c.acos()], parity, residual: 0.0 });
    }
    let free = d / 2 + 1;
    let nodes: Vec<f64> = (1..=free)
        .map(|j| ((2 * j - 1) as f64 * std::f64::consts::PI / (4 * free) as f64).cos())
        .collect();
    let want: Vec<f64> = nodes.iter().map(|&x| target.eval(x)).collect();
    let expand = |theta: &[f64]| -> Vec<f64> { (0..=d).map(|j| theta[j.min(d - j)]).collect() };
    let residual = |theta: &[f64]| -> DVector<f64> {
        let phases = expand(theta);
        DVector::from_iterator(
            free,
            nodes.iter().zip(&want).map(|(&x, &y)| realized_poly(&phases, x) - y),
        )
    };

    let mut theta = vec![0.0; free];
    theta[0] = std::f64::consts::FRAC_PI_4;
    let mut r = residual(&theta);
    let mut best = r.amax();
    let mut best_theta = theta.clone();
    let mut extra = 0;
    for iteration in 0..MAX_ITERATIONS {
        if best <= tol {
            // a couple of further steps are almost free once converging
            if extra == 2 || best < 1e-15 {
                break;
            }
            extra += 1;
        }
        let phases = expand(&theta);
        let mut jac = DMatrix::zeros(free, free);
        for (k, &x) in nodes.iter().enumerate() {
            let (_, grad) = value_and_gradient(&phases, x);
            for (j, g) in grad.into_iter().enumerate() {
                jac[(k, j.min(d - j))] += g;
            }
        }
        let step = jac
            .lu()
            .solve(&(-&r))
            .ok_or(Error::Solver { residual: best, iterations: iteration })?;
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + lambda * s).collect();
            let rt = residual(&trial);
            if rt.norm() < r.norm() || lambda < 1e-6 {
                theta = trial;
                r = rt;
                break;
            }
            lambda /= 2.0;
        }
        let now = r.amax();
        if now < best {
            best = now;
            best_theta.clone_from(&theta);
        } else if best <= tol {
            break;
        }
    }
    if best > tol {
        return Err(Error::Solver { residual: best, iterations: MAX_ITERATIONS });
    }
    Ok(PhaseVector { phases: expand(&best_theta), parity, residual: best })
}
