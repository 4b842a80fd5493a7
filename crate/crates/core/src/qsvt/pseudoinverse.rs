//! Moore-Penrose pseudoinverse by an odd polynomial in `A^dagger`.

use serde_json::{json, Value};

use super::chebyshev::{interpolate, Parity, TargetPolynomial};
use super::node::qsvt;
use crate::error::{Error, Result};
use crate::linalg::{singular_values, CMatrix};
use crate::node::{Node, Operation};

/// Relative cutoff below which a singular value counts as zero.
const RANK_CUTOFF: f64 = 1e-10;

/// Odd approximation of `delta / (2x)` on `[delta, 1]`.
#[derive(Debug, Clone)]
pub struct InverseTarget {
    /// Already divided by `rescale`, so its sup norm is below one.
    pub polynomial: TargetPolynomial,
    pub rescale: f64,
    /// Sampled `max |p - delta/(2x)|` on `[delta, 1]` before rescaling.
    pub error: f64,
    pub degree_cap: usize,
}

/// Builds the inverse target for relative gap `delta`, tolerance `eps` and
/// condition number `kappa`.
pub fn inverse_target(delta: f64, eps: f64, kappa: f64) -> Result<InverseTarget> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("gap must lie in (0, 1], got {delta}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {eps}")));
    }
    let b = (2.0 / eps).ln().sqrt() / delta;
    let h = |x: f64| {
        if x == 0.0 {
            0.0
        } else {
            -(-(b * x).powi(2)).exp_m1() * delta / (2.0 * x)
        }
    };
    let cap = {
        let c = (4.0 * kappa.max(1.0 / delta) * (4.0 / eps).ln()).ceil() as usize;
        c.max(1) | 1
    };
    let series = {
        let nodes = (2 * cap + 64).max(2048);
        let mut c = interpolate(h, nodes);
        c.truncate(cap + 1);
        for (k, v) in c.iter_mut().enumerate() {
            if k % 2 == 0 {
                *v = 0.0;
            }
        }
        TargetPolynomial::new(c, Parity::Odd)?
    };
    let grid: Vec<f64> = (0..=4000).map(|k| delta + (1.0 - delta) * k as f64 / 4000.0).collect();
    let error_at = |d: usize| {
        let p = series.truncated(d);
        grid.iter().map(|&x| (p.eval(x) - delta / (2.0 * x)).abs()).fold(0.0, f64::max)
    };
    let ok = |d: usize| error_at(d) <= eps / 2.0;
    // smallest odd degree meeting eps/2: doubling, then bisection over odd degrees
    let mut hi = 1;
    while hi < cap && !ok(hi) {
        hi = (2 * hi + 1).min(cap);
    }
    let mut lo = if hi == 1 { 0 } else { (hi - 1) / 2 };
    if hi > 1 && lo % 2 == 0 {
        lo -= 1;
    }
    // invariant: lo fails (or is the sentinel 0), hi passes or equals the cap
    while hi > lo + 2 {
        let mid = {
            let m = (lo + hi) / 2;
            if m % 2 == 0 { m + 1 } else { m }
        };
        if mid >= hi {
            break;
        }
        if ok(mid) { hi = mid } else { lo = mid }
    }
    let p = series.truncated(hi);
    let error = error_at(hi);
    let rescale = (p.sup_norm() / (1.0 - 1e-3)).max(1.0);
    Ok(InverseTarget { polynomial: p.scaled(rescale), rescale, error, degree_cap: cap })
}

/// `A^+` with normalization `2 s / (delta gamma_A)`.
///
/// `delta` is the smallest nonzero singular value of `A / gamma_A`; when not
/// given it is read off the dense matrix.
pub fn pseudoinverse(a: &Node, condition: f64, tolerance: f64, delta: Option<f64>) -> Result<Node> {
    if !(condition >= 1.0 && condition.is_finite()) {
        return Err(Error::Domain(format!("condition number must be at least 1, got {condition}")));
    }
    let delta = match delta {
        Some(d) => d,
        None => smallest_singular_value(a.toarray()?.as_ref())? / a.normalization(),
    };
    let target = inverse_target(delta, tolerance, condition)?;
    let normalization = 2.0 * target.rescale / (delta * a.normalization());
    let expansion = qsvt(&a.adjoint(), target.polynomial, normalization)?;
    Ok(Node::new(Pseudoinverse { a: a.clone(), condition, tolerance, delta, expansion }))
}

fn smallest_singular_value(m: &CMatrix) -> Result<f64> {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.into_iter()
        .rfind(|&x| x > RANK_CUTOFF * top)
        .ok_or_else(|| Error::Domain("pseudoinverse of the zero matrix".into()))
}

#[derive(Debug)]
struct Pseudoinverse {
    a: Node,
    condition: f64,
    tolerance: f64,
    delta: f64,
    expansion: Node,
}

impl Operation for Pseudoinverse {
    fn kind(&self) -> &'static str {
        "pseudoinverse"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn params(&self) -> Value {
        json!({ "condition": self.condition, "tolerance": self.tolerance, "delta": self.delta })
    }

    fn expansion(&self) -> Option<&Node> {
        Some(&self.expansion)
    }
}
