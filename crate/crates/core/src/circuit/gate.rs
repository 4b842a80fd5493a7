use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A control condition: the gate fires only when `qubit` reads `polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control { qubit, polarity: true }
    }

    pub fn off(qubit: usize) -> Self {
        Control { qubit, polarity: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Phase(f64),
    RX(f64),
    RY(f64),
    RZ(f64),
    GlobalPhase(f64),
    Swap,
    /// Basis permutation of the target block; `table[i]` is the image of
    /// block index `i`, with `targets[0]` the least significant block bit.
    Permutation(Arc<[usize]>),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::Phase(_) => "Phase",
            GateKind::RX(_) => "RX",
            GateKind::RY(_) => "RY",
            GateKind::RZ(_) => "RZ",
            GateKind::GlobalPhase(_) => "GlobalPhase",
            GateKind::Swap => "Swap",
            GateKind::Permutation(_) => "Permutation",
        }
    }

    fn arity(&self) -> Option<usize> {
        match self {
            GateKind::GlobalPhase(_) => Some(0),
            GateKind::Swap => Some(2),
            GateKind::Permutation(_) => None,
            _ => Some(1),
        }
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::RX(t) => GateKind::RX(-t),
            GateKind::RY(t) => GateKind::RY(-t),
            GateKind::RZ(t) => GateKind::RZ(-t),
            GateKind::GlobalPhase(t) => GateKind::GlobalPhase(-t),
            GateKind::Permutation(table) => {
                let mut inv = vec![0; table.len()];
                for (i, &j) in table.iter().enumerate() {
                    inv[j] = i;
                }
                GateKind::Permutation(inv.into())
            }
            other => other.clone(),
        }
    }

    /// The 2x2 matrix of a single-target kind, row-major.
    pub(crate) fn matrix2(&self) -> Option<[Complex64; 4]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let diag = |phase: f64| [one, zero, zero, Complex64::from_polar(1.0, phase)];
        Some(match *self {
            GateKind::X => [zero, one, one, zero],
            GateKind::Y => [zero, c(0.0, -1.0), c(0.0, 1.0), zero],
            GateKind::Z => [one, zero, zero, -one],
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [h, h, h, -h]
            }
            GateKind::S => diag(FRAC_PI_2),
            GateKind::Sdg => diag(-FRAC_PI_2),
            GateKind::T => diag(FRAC_PI_4),
            GateKind::Tdg => diag(-FRAC_PI_4),
            GateKind::Phase(t) => diag(t),
            GateKind::RX(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
            }
            GateKind::RY(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            GateKind::RZ(t) => [
                Complex64::from_polar(1.0, -t / 2.0),
                zero,
                zero,
                Complex64::from_polar(1.0, t / 2.0),
            ],
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<Control>) -> Result<Gate> {
        match (&kind, kind.arity()) {
            (GateKind::Permutation(table), None) => {
                if table.len() != 1usize << targets.len() {
                    return Err(Error::Shape(format!(
                        "permutation table of length {} on {} targets",
                        table.len(),
                        targets.len()
                    )));
                }
                if !is_bijection(table) {
                    return Err(Error::Domain("permutation table is not a bijection".into()));
                }
            }
            (_, Some(n)) if n != targets.len() => {
                return Err(Error::Shape(format!(
                    "{} expects {n} targets, got {}",
                    kind.name(),
                    targets.len()
                )));
            }
            _ => {}
        }
        let mut seen: Vec<usize> = targets
            .iter()
            .copied()
            .chain(controls.iter().map(|c| c.qubit))
            .collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!(
                "{} gate repeats a qubit among targets and controls",
                kind.name()
            )));
        }
        Ok(Gate { kind, targets, controls })
    }

    /// Uncontrolled single-target gate. Panics only on arity misuse.
    pub fn single(kind: GateKind, target: usize) -> Gate {
        Gate::new(kind, vec![target], vec![]).expect("single-target gate")
    }

    pub fn x(target: usize) -> Gate {
        Gate::single(GateKind::X, target)
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::new(GateKind::X, vec![target], vec![Control::on(control)]).expect("cx")
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Gate {
        Gate::new(GateKind::X, vec![target], controls).expect("mcx")
    }

    pub fn global_phase(theta: f64) -> Gate {
        Gate::new(GateKind::GlobalPhase(theta), vec![], vec![]).expect("global phase")
    }

    pub fn permutation(table: Vec<usize>, targets: Vec<usize>) -> Result<Gate> {
        Gate::new(GateKind::Permutation(table.into()), targets, vec![])
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.qubits().max()
    }

    /// Same gate on relabelled qubits.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind.clone(),
            targets: self.targets.iter().map(|&q| map(q)).collect(),
            controls: self
                .controls
                .iter()
                .map(|c| Control { qubit: map(c.qubit), polarity: c.polarity })
                .collect(),
        }
    }

    pub fn with_controls(mut self, extra: &[Control]) -> Gate {
        self.controls.extend_from_slice(extra);
        self
    }

    /// Counting key: the kind name prefixed by its control count
    /// (`CX`, `CCX`, then `C3X`, `C4X`, ...).
    pub fn count_key(&self) -> String {
        let name = self.kind.name();
        match self.controls.len() {
            0 => name.to_string(),
            1 => format!("C{name}"),
            2 => format!("CC{name}"),
            n => format!("C{n}{name}"),
        }
    }

    /// Expands a permutation gate into a multi-controlled-X network; every
    /// other gate is returned unchanged.
    pub fn lowered(&self) -> Vec<Gate> {
        let GateKind::Permutation(table) = &self.kind else {
            return vec![self.clone()];
        };
        let mut gates = Vec::new();
        for (a, b) in transpositions(table) {
            gates.extend(transposition_network(a, b, &self.targets, &self.controls));
        }
        gates
    }
}

fn is_bijection(table: &[usize]) -> bool {
    let mut hit = vec![false; table.len()];
    for &j in table {
        if j >= table.len() || hit[j] {
            return false;
        }
        hit[j] = true;
    }
    true
}

/// Transpositions whose sequential application realizes `table`, cycles
/// visited by smallest moved index. A cycle `c0 -> c1 -> ... -> ck` becomes
/// `(c0 c1), (c0 c2), ..., (c0 ck)`.
pub(crate) fn transpositions(table: &[usize]) -> Vec<(usize, usize)> {
    let mut visited = vec![false; table.len()];
    let mut out = Vec::new();
    for start in 0..table.len() {
        if visited[start] || table[start] == start {
            visited[start] = true;
            continue;
        }
        let mut cursor = table[start];
        visited[start] = true;
        while cursor != start {
            visited[cursor] = true;
            out.push((start, cursor));
            cursor = table[cursor];
        }
    }
    out
}

/// Gates swapping block basis states `a` and `b`: conjugate by CXs so the
/// two states differ in one bit, flip that bit under full control, undo.
fn transposition_network(a: usize, b: usize, targets: &[usize], controls: &[Control]) -> Vec<Gate> {
    let diff = a ^ b;
    let pivot = diff.trailing_zeros() as usize;
    let b_pivot = (b >> pivot) & 1 == 1;
    let conj: Vec<Gate> = (0..targets.len())
        .filter(|&d| d != pivot && (diff >> d) & 1 == 1)
        .map(|d| {
            Gate::new(
                GateKind::X,
                vec![targets[d]],
                vec![Control { qubit: targets[pivot], polarity: b_pivot }],
            )
            .expect("conjugating cx")
        })
        .collect();
    let mut flip_controls: Vec<Control> = (0..targets.len())
        .filter(|&d| d != pivot)
        .map(|d| Control { qubit: targets[d], polarity: (a >> d) & 1 == 1 })
        .collect();
    flip_controls.extend_from_slice(controls);
    let mut gates = conj.clone();
    gates.push(Gate::mcx(flip_controls, targets[pivot]));
    gates.extend(conj.into_iter().rev());
    gates
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        match self.kind {
            GateKind::Phase(t)
            | GateKind::RX(t)
            | GateKind::RY(t)
            | GateKind::RZ(t)
            | GateKind::GlobalPhase(t) => write!(f, "({t})")?,
            _ => {}
        }
        write!(f, "(target={:?}", self.targets)?;
        if !self.controls.is_empty() {
            let ctrl: Vec<String> = self
                .controls
                .iter()
                .map(|c| if c.polarity { c.qubit.to_string() } else { format!("!{}", c.qubit) })
                .collect();
            write!(f, ", control=({})", ctrl.join(", "))?;
        }
        write!(f, ")")
    }
}
