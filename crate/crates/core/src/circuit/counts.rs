use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateKind};
use super::Circuit;

/// Per-kind gate tally keyed by [`Gate::count_key`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GateCounts(BTreeMap<String, usize>);

impl GateCounts {
    pub fn tally<I: IntoIterator<Item = Gate>>(gates: I) -> Self {
        let mut counts = GateCounts::default();
        for g in gates {
            *counts.0.entry(g.count_key()).or_insert(0) += 1;
        }
        counts
    }

    pub fn get(&self, key: &str) -> usize {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn scaled(&self, factor: usize) -> Self {
        GateCounts(self.0.iter().map(|(k, &v)| (k.clone(), v * factor)).collect())
    }
}

impl AddAssign<&GateCounts> for GateCounts {
    fn add_assign(&mut self, rhs: &GateCounts) {
        for (k, &v) in &rhs.0 {
            *self.0.entry(k.clone()).or_insert(0) += v;
        }
    }
}

impl Add for GateCounts {
    type Output = GateCounts;

    fn add(mut self, rhs: GateCounts) -> GateCounts {
        self += &rhs;
        self
    }
}

/// T-count under a fixed cost model over the lowered circuit: an
/// uncontrolled T/Tdg costs 1, a Toffoli 7, and an X with n >= 2 controls
/// costs 2n - 3 Toffolis (using n - 2 clean scratch qubits). Rotations and
/// other controlled kinds are not included.
pub fn t_count_estimate(circuit: &Circuit) -> usize {
    circuit
        .gates()
        .iter()
        .flat_map(Gate::lowered)
        .map(|g| match (&g.kind, g.controls.len()) {
            (GateKind::T | GateKind::Tdg, 0) => 1,
            (GateKind::X, n) if n >= 2 => 7 * (2 * n - 3),
            _ => 0,
        })
        .sum()
}
