//! Subspace membership circuits.
//!
//! `in(S)` is computed recursively: every zero factor becomes a negative
//! control, and every constrained controlled factor gets a scratch qubit
//! holding "the branch selected by its top qubit accepts the lower qubits".
//! The final multi-controlled X fires when all of these hold. Scratch qubits
//! are uncomputed in reverse order.

use super::{Subspace, SubspaceFactor};
use crate::circuit::{Circuit, Control, Gate};

struct Builder {
    gates: Vec<Gate>,
    scratch_base: usize,
    in_use: usize,
    peak: usize,
}

impl Builder {
    fn alloc(&mut self) -> usize {
        let q = self.scratch_base + self.in_use;
        self.in_use += 1;
        self.peak = self.peak.max(self.in_use);
        q
    }

    /// `target ^= [extra controls hold] and [qubits in s]`.
    fn emit_in(&mut self, s: &Subspace, qubits: &[usize], extra: &[Control], target: usize) {
        let mut controls = extra.to_vec();
        let mut held = Vec::new();
        let mut offset = 0;
        for f in s.factors() {
            match f {
                SubspaceFactor::ZeroQubit => {
                    controls.push(Control::off(qubits[offset]));
                    offset += 1;
                }
                SubspaceFactor::Controlled(low, high) => {
                    let w = low.qubit_count();
                    let sub = &qubits[offset..offset + w];
                    let top = qubits[offset + w];
                    if !(low.is_unconstrained() && high.is_unconstrained()) {
                        let a = self.alloc();
                        self.emit_branches(low, high, sub, top, a);
                        controls.push(Control::on(a));
                        held.push((low, high, sub, top, a));
                    }
                    offset += w + 1;
                }
            }
        }
        self.gates.push(Gate::mcx(controls, target));
        for (low, high, sub, top, a) in held.into_iter().rev() {
            self.emit_branches(low, high, sub, top, a);
            self.in_use -= 1;
        }
    }

    fn emit_branches(&mut self, low: &Subspace, high: &Subspace, sub: &[usize], top: usize, a: usize) {
        self.emit_in(low, sub, &[Control::off(top)], a);
        self.emit_in(high, sub, &[Control::on(top)], a);
    }
}

/// Gates flipping `flag` exactly when the register `qubits` (least
/// significant first) is outside `s`, plus the number of scratch qubits used
/// starting at `scratch_base`.
pub fn membership_gates(
    s: &Subspace,
    qubits: &[usize],
    flag: usize,
    scratch_base: usize,
) -> (Vec<Gate>, usize) {
    assert_eq!(qubits.len(), s.qubit_count(), "register width must match the subspace");
    if s.is_unconstrained() {
        return (Vec::new(), 0);
    }
    let zero_positions: Vec<usize> = {
        let mut offset = 0;
        let mut zeros = Vec::new();
        let mut only_zero_constraints = true;
        for f in s.factors() {
            match f {
                SubspaceFactor::ZeroQubit => zeros.push(qubits[offset]),
                SubspaceFactor::Controlled(l, h) => {
                    if !(l.is_unconstrained() && h.is_unconstrained()) {
                        only_zero_constraints = false;
                    }
                }
            }
            offset += f.qubit_count();
        }
        if only_zero_constraints { zeros } else { Vec::new() }
    };
    if zero_positions.len() == 1 {
        return (vec![Gate::cx(zero_positions[0], flag)], 0);
    }
    let mut b = Builder { gates: vec![Gate::x(flag)], scratch_base, in_use: 0, peak: 0 };
    b.emit_in(s, qubits, &[], flag);
    (b.gates, b.peak)
}

impl Subspace {
    /// Circuit over the subspace qubits, a flag at index `qubit_count()` and
    /// scratch ancillas above it. The flag ends in `|1>` iff the input basis
    /// state is outside the subspace; scratch qubits are restored.
    pub fn membership_circuit(&self) -> Circuit {
        let n = self.qubit_count();
        let qubits: Vec<usize> = (0..n).collect();
        let (gates, scratch) = membership_gates(self, &qubits, n, n + 1);
        Circuit::with_gates(n + 1, scratch, gates).expect("membership gates stay in range")
    }

    /// Scratch qubits needed by [`Subspace::membership_circuit`].
    pub fn membership_scratch(&self) -> usize {
        let n = self.qubit_count();
        let qubits: Vec<usize> = (0..n).collect();
        membership_gates(self, &qubits, n, n + 1).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::StateVector;

    fn check_exhaustive(s: &Subspace) {
        let c = s.membership_circuit();
        let n = s.qubit_count();
        let members = s.enumerate_basis();
        for x in 0..1usize << n {
            let mut st = StateVector::basis(c.total_qubits(), x);
            c.apply(&mut st).unwrap();
            let flag = usize::from(!members.contains(&x));
            let expected = x | flag << n;
            assert!(
                (st.amplitudes()[expected].norm() - 1.0).abs() < 1e-12,
                "state {x} of {s}"
            );
        }
    }

    #[test]
    fn single_zero_is_one_cnot() {
        let s: Subspace = "0".parse().unwrap();
        let c = s.membership_circuit();
        assert_eq!(c.gates(), &[Gate::cx(0, 1)]);
        check_exhaustive(&s);
    }

    #[test]
    fn full_space_is_empty() {
        assert!(Subspace::full(3).membership_circuit().is_empty());
    }

    #[test]
    fn four_qubit_example() {
        let s = (&"00".parse::<Subspace>().unwrap() | &"0#".parse().unwrap())
            & "0".parse().unwrap();
        check_exhaustive(&s);
        assert!(s.membership_scratch() >= 1);
    }

    #[test]
    fn from_dim_sets() {
        for d in 1..=16 {
            check_exhaustive(&Subspace::from_dim(d).unwrap());
        }
    }
}
