//! Chebyshev-series target polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: usize) -> Parity {
        if degree.is_multiple_of(2) { Parity::Even } else { Parity::Odd }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn parse(s: &str) -> Result<Parity> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Format(format!("unknown parity `{other}`"))),
        }
    }

    fn admits(self, k: usize) -> bool {
        Parity::of(k) == self
    }
}

/// `p(x) = sum_k c_k T_k(x)` of definite parity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetPolynomial {
    coefficients: Vec<f64>,
    parity: Parity,
}

impl TargetPolynomial {
    /// Coefficients of the wrong parity must be below 1e-12 in magnitude and
    /// are dropped.
    pub fn new(mut coefficients: Vec<f64>, parity: Parity) -> Result<Self> {
        for (k, c) in coefficients.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(Error::Domain(format!("coefficient {k} is not finite")));
            }
            if !parity.admits(k) {
                if c.abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "coefficient {k} = {c} violates {} parity",
                        parity.name()
                    )));
                }
                *c = 0.0;
            }
        }
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        Ok(TargetPolynomial { coefficients, parity })
    }

    /// The single Chebyshev polynomial `scale * T_d`.
    pub fn chebyshev(d: usize, scale: f64) -> Self {
        let mut c = vec![0.0; d + 1];
        c[d] = scale;
        TargetPolynomial::new(c, Parity::of(d)).expect("parity matches by construction")
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Degree of the realizing phase sequence: the highest nonzero
    /// coefficient, or the parity's lowest degree for the zero polynomial.
    pub fn degree(&self) -> usize {
        match self.coefficients.len() {
            0 => usize::from(self.parity == Parity::Odd),
            n => n - 1,
        }
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        let c0 = self.coefficients.first().copied().unwrap_or(0.0);
        x * b1 - b2 + c0
    }

    /// Sampled `max |p|` on `[-1, 1]`, using parity to sample `[0, 1]`.
    pub fn sup_norm(&self) -> f64 {
        let n = 4 * self.degree().max(8) + 1;
        (0..=n)
            .map(|j| self.eval((j as f64 * std::f64::consts::PI / (2 * n) as f64).cos()).abs())
            .fold(0.0, f64::max)
    }

    /// `p(x) / s`.
    pub fn scaled(&self, s: f64) -> Self {
        TargetPolynomial {
            coefficients: self.coefficients.iter().map(|c| c / s).collect(),
            parity: self.parity,
        }
    }

    /// The series truncated to degree `d`.
    pub fn truncated(&self, d: usize) -> Self {
        let keep = (d + 1).min(self.coefficients.len());
        TargetPolynomial::new(self.coefficients[..keep].to_vec(), self.parity)
            .expect("truncation keeps parity")
    }
}

/// Chebyshev coefficients of the degree `n - 1` interpolant of `f` at the
/// `n` first-kind Chebyshev points.
pub fn interpolate(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let theta: Vec<f64> = (0..n)
        .map(|j| std::f64::consts::PI * (j as f64 + 0.5) / n as f64)
        .collect();
    let values: Vec<f64> = theta.iter().map(|t| f(t.cos())).collect();
    (0..n)
        .map(|k| {
            let s: f64 = theta.iter().zip(&values).map(|(t, v)| v * (k as f64 * t).cos()).sum();
            let c = 2.0 * s / n as f64;
            if k == 0 { c / 2.0 } else { c }
        })
        .collect()
}
