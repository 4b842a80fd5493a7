//! Desk-scale limits for dense evaluation and statevector simulation.

use std::sync::RwLock;

use crate::error::{Error, Result};

/// Upper bounds on the work dense code paths may do.
///
/// `max_amplitudes` caps statevector length (main plus ancilla qubits),
/// `max_dense_dim` caps either side of a matrix built by `toarray`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_amplitudes: usize,
    pub max_dense_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_amplitudes: 1 << 20,
            max_dense_dim: 1 << 12,
        }
    }
}

impl Budget {
    /// Parses `"<log2 amplitudes>[,<log2 dense dim>]"`, the format of `BE_BUDGET`.
    pub fn parse(spec: &str) -> Result<Budget> {
        let mut budget = Budget::default();
        let mut parts = spec.split(',').map(str::trim);
        let log2 = |s: &str| -> Result<usize> {
            let bits: u32 = s
                .parse()
                .map_err(|_| Error::Config(format!("invalid budget exponent `{s}`")))?;
            if bits > 40 {
                return Err(Error::Config(format!("budget exponent {bits} too large")));
            }
            Ok(1usize << bits)
        };
        if let Some(sim) = parts.next().filter(|s| !s.is_empty()) {
            budget.max_amplitudes = log2(sim)?;
        }
        if let Some(dense) = parts.next().filter(|s| !s.is_empty()) {
            budget.max_dense_dim = log2(dense)?;
        }
        if parts.next().is_some() {
            return Err(Error::Config(format!("too many fields in budget `{spec}`")));
        }
        Ok(budget)
    }

    pub fn check_amplitudes(&self, qubits: usize) -> Result<()> {
        let needed = 1u128 << qubits.min(127);
        if qubits >= 64 || needed > self.max_amplitudes as u128 {
            return Err(Error::Budget {
                what: "statevector amplitudes",
                needed,
                limit: self.max_amplitudes as u128,
            });
        }
        Ok(())
    }

    pub fn check_dense(&self, rows: usize, cols: usize) -> Result<()> {
        let worst = rows.max(cols);
        if worst > self.max_dense_dim {
            return Err(Error::Budget {
                what: "dense matrix dimension",
                needed: worst as u128,
                limit: self.max_dense_dim as u128,
            });
        }
        Ok(())
    }
}

static CURRENT: RwLock<Option<Budget>> = RwLock::new(None);

/// The process-wide budget; defaults unless [`set_budget`] was called.
pub fn budget() -> Budget {
    CURRENT.read().unwrap().unwrap_or_default()
}

pub fn set_budget(budget: Budget) {
    *CURRENT.write().unwrap() = Some(budget);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_both_fields() {
        let b = Budget::parse("22,10").unwrap();
        assert_eq!(b.max_amplitudes, 1 << 22);
        assert_eq!(b.max_dense_dim, 1 << 10);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Budget::parse("abc").is_err());
        assert!(Budget::parse("1,2,3").is_err());
    }

    #[test]
    fn amplitude_check() {
        let b = Budget::default();
        assert!(b.check_amplitudes(20).is_ok());
        assert!(b.check_amplitudes(21).is_err());
    }
}
