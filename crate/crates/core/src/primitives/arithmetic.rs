//! Modular arithmetic permutations and the Fourier transform.

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde_json::{json, Value};

use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::node::{Node, Operation};
use crate::subspace::Subspace;

fn check_bits(bits: usize, what: &str) -> Result<()> {
    if bits == 0 || bits >= usize::BITS as usize - 1 {
        return Err(Error::Domain(format!("{what} must be between 1 and 62, got {bits}")));
    }
    Ok(())
}

/// Ripple increment on `qubits` (least significant first), with `extra`
/// controls on every gate.
fn increment_gates(qubits: &[usize], extra: &[Control]) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(qubits.len());
    for j in (1..qubits.len()).rev() {
        let mut controls: Vec<Control> = qubits[..j].iter().map(|&q| Control::on(q)).collect();
        controls.extend_from_slice(extra);
        gates.push(Gate::mcx(controls, qubits[j]));
    }
    gates.push(Gate::mcx(extra.to_vec(), qubits[0]));
    gates
}

/// Permutation of basis indices with direct rule `index -> map(index)`.
#[derive(Debug)]
struct Arithmetic {
    kind: Kind,
    qubits: usize,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Increment,
    ConstantAdd { constant: i64 },
    Add { source: usize, target: usize },
}

impl Arithmetic {
    fn map(&self, index: usize) -> usize {
        let mask = |bits: usize| (1usize << bits) - 1;
        match self.kind {
            Kind::Increment => (index + 1) & mask(self.qubits),
            Kind::ConstantAdd { constant } => {
                let c = constant.rem_euclid(1i64 << self.qubits) as usize;
                (index + c) & mask(self.qubits)
            }
            Kind::Add { source, target } => {
                let a = index & mask(source);
                let b = index >> source;
                a | (((b + a) & mask(target)) << source)
            }
        }
    }
}

impl Operation for Arithmetic {
    fn kind(&self) -> &'static str {
        match self.kind {
            Kind::Increment => "increment",
            Kind::ConstantAdd { .. } => "constant_integer_addition",
            Kind::Add { .. } => "integer_addition",
        }
    }

    fn params(&self) -> Value {
        match self.kind {
            Kind::Increment => json!({ "bits": self.qubits }),
            Kind::ConstantAdd { constant } => json!({ "bits": self.qubits, "constant": constant }),
            Kind::Add { source, target } => json!({ "source_bits": source, "target_bits": target }),
        }
    }

    fn normalization(&self) -> f64 {
        1.0
    }

    fn subspace_in(&self) -> Subspace {
        Subspace::full(self.qubits)
    }

    fn subspace_out(&self) -> Subspace {
        Subspace::full(self.qubits)
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        let mut out = CMatrix::zeros(v.nrows(), v.ncols());
        for i in 0..v.nrows() {
            out.row_mut(self.map(i)).copy_from(&v.row(i));
        }
        Ok(out)
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        let mut out = CMatrix::zeros(w.nrows(), w.ncols());
        for i in 0..w.nrows() {
            out.row_mut(i).copy_from(&w.row(self.map(i)));
        }
        Ok(out)
    }

    fn circuit(&self) -> Result<Circuit> {
        let n = self.qubits;
        let mut c = Circuit::new(n, 0);
        match self.kind {
            Kind::Increment => c.extend(increment_gates(&(0..n).collect::<Vec<_>>(), &[]))?,
            Kind::ConstantAdd { constant } => {
                let k = constant.rem_euclid(1i64 << n) as usize;
                for i in (0..n).filter(|i| k >> i & 1 == 1) {
                    c.extend(increment_gates(&(i..n).collect::<Vec<_>>(), &[]))?;
                }
            }
            Kind::Add { source, target } => {
                for i in 0..source.min(target) {
                    let reg: Vec<usize> = (source + i..source + target).collect();
                    c.extend(increment_gates(&reg, &[Control::on(i)]))?;
                }
            }
        }
        Ok(c)
    }

    fn isometric(&self) -> bool {
        true
    }

    fn confines(&self) -> bool {
        true
    }
}

/// `|k> -> |k + 1 mod 2^bits>`.
pub fn increment(bits: usize) -> Result<Node> {
    check_bits(bits, "bits")?;
    Ok(Node::new(Arithmetic { kind: Kind::Increment, qubits: bits }))
}

/// `|b> -> |b + constant mod 2^bits>`.
pub fn constant_integer_addition(bits: usize, constant: i64) -> Result<Node> {
    check_bits(bits, "bits")?;
    Ok(Node::new(Arithmetic { kind: Kind::ConstantAdd { constant }, qubits: bits }))
}

/// `|b>_t |a>_s -> |b + a mod 2^t>_t |a>_s`: the source register occupies
/// the low `source_bits` qubits, the target the high `target_bits`.
pub fn integer_addition(source_bits: usize, target_bits: usize) -> Result<Node> {
    check_bits(source_bits, "source_bits")?;
    check_bits(target_bits, "target_bits")?;
    check_bits(source_bits + target_bits, "source_bits + target_bits")?;
    Ok(Node::new(Arithmetic {
        kind: Kind::Add { source: source_bits, target: target_bits },
        qubits: source_bits + target_bits,
    }))
}

/// Unitary DFT with entries `exp(2 pi i j k / N) / sqrt(N)`.
pub fn qft(bits: usize) -> Result<Node> {
    check_bits(bits, "bits")?;
    if bits > 30 {
        return Err(Error::Domain("qft supports at most 30 bits".into()));
    }
    Ok(Node::new(Qft { bits }))
}

#[derive(Debug)]
struct Qft {
    bits: usize,
}

impl Qft {
    fn transform(&self, v: &CMatrix, inverse_dft: bool) -> CMatrix {
        let n = v.nrows();
        let mut planner = FftPlanner::new();
        // rustfft's inverse has the positive exponent used here
        let fft = if inverse_dft { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        let scale = 1.0 / (n as f64).sqrt();
        let mut out = v.clone();
        for mut col in out.column_iter_mut() {
            let mut buf: Vec<C64> = col.iter().copied().collect();
            fft.process(&mut buf);
            for (dst, src) in col.iter_mut().zip(buf) {
                *dst = src * scale;
            }
        }
        out
    }
}

impl Operation for Qft {
    fn kind(&self) -> &'static str {
        "qft"
    }

    fn params(&self) -> Value {
        json!({ "bits": self.bits })
    }

    fn normalization(&self) -> f64 {
        1.0
    }

    fn subspace_in(&self) -> Subspace {
        Subspace::full(self.bits)
    }

    fn subspace_out(&self) -> Subspace {
        Subspace::full(self.bits)
    }

    fn ancillas(&self) -> usize {
        0
    }

    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        Ok(self.transform(v, true))
    }

    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        Ok(self.transform(w, false))
    }

    fn circuit(&self) -> Result<Circuit> {
        let n = self.bits;
        let mut c = Circuit::new(n, 0);
        for q in (0..n).rev() {
            c.push(Gate::single(GateKind::H, q))?;
            for m in (0..q).rev() {
                let angle = PI / (1u64 << (q - m)) as f64;
                c.push(Gate::new(GateKind::Phase(angle), vec![q], vec![Control::on(m)])?)?;
            }
        }
        for i in 0..n / 2 {
            c.push(Gate::new(GateKind::Swap, vec![i, n - 1 - i], vec![])?)?;
        }
        Ok(c)
    }

    fn isometric(&self) -> bool {
        true
    }

    fn confines(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ONE};

    fn shift(n: usize, by: usize) -> CMatrix {
        let d = 1 << n;
        CMatrix::from_fn(d, d, |r, c| if r == (c + by) % d { ONE } else { C64::new(0.0, 0.0) })
    }

    #[test]
    fn increment_two_bits() {
        let inc = increment(2).unwrap();
        let c = inc.circuit().unwrap();
        assert_eq!(c.gates(), &[Gate::cx(0, 1), Gate::x(0)]);
        assert_eq!(*inc.toarray().unwrap(), shift(2, 1));
    }

    #[test]
    fn increment_cycles_back() {
        for n in 1..=4 {
            let inc = increment(n).unwrap();
            let u = inc.circuit().unwrap().unitary().unwrap();
            assert_eq!(u, shift(n, 1));
            let mut acc = CMatrix::identity(1 << n, 1 << n);
            for _ in 0..1 << n {
                acc = &u * acc;
            }
            assert_eq!(acc, CMatrix::identity(1 << n, 1 << n));
        }
    }

    #[test]
    fn constant_addition() {
        let id = constant_integer_addition(3, 0).unwrap();
        assert_eq!(*id.toarray().unwrap(), CMatrix::identity(8, 8));
        let plus_one = constant_integer_addition(2, 1).unwrap();
        assert_eq!(*plus_one.toarray().unwrap(), shift(2, 1));
        let minus_three = constant_integer_addition(3, -3).unwrap();
        let m = minus_three.toarray().unwrap();
        assert_eq!(m[(5, 0)], ONE);
        for n in 1..=4 {
            for c in -5i64..=5 {
                let node = constant_integer_addition(n, c).unwrap();
                let u = node.circuit().unwrap().unitary().unwrap();
                assert_eq!(u, shift(n, c.rem_euclid(1 << n) as usize), "n={n} c={c}");
            }
        }
    }

    #[test]
    fn increment_adjoint_is_minus_one() {
        let inc = increment(3).unwrap().toarray().unwrap().adjoint();
        let m1 = constant_integer_addition(3, -1).unwrap().toarray().unwrap();
        assert_eq!(inc, *m1);
    }

    #[test]
    fn integer_addition_table() {
        // brute-force oracle with source in the low bits
        let (s, t) = (3, 4);
        let node = integer_addition(s, t).unwrap();
        let u = node.circuit().unwrap().unitary().unwrap();
        for a in 0..1usize << s {
            for b in 0..1usize << t {
                let from = a | b << s;
                let to = a | ((a + b) % (1 << t)) << s;
                assert_eq!(u[(to, from)], ONE);
            }
        }
        assert!(node.verify(1e-12).unwrap().pass);
        let m = node.toarray().unwrap();
        assert_eq!(m[(3 | 8 << 3, 3 | 5 << 3)], ONE);
        let one_one = integer_addition(1, 1).unwrap().toarray().unwrap();
        assert_eq!(one_one[(0b11, 0b01)], ONE);
    }

    #[test]
    fn qft_matches_dft() {
        for n in 1..=4 {
            let d = 1usize << n;
            let dft = CMatrix::from_fn(d, d, |j, k| {
                C64::from_polar(1.0 / (d as f64).sqrt(), 2.0 * PI * (j * k) as f64 / d as f64)
            });
            let node = qft(n).unwrap();
            assert!(max_abs_diff(&node.toarray().unwrap(), &dft) < 1e-12);
            let u = node.circuit().unwrap().unitary().unwrap();
            assert!(max_abs_diff(&u, &dft) < 1e-12, "circuit n={n}");
            let back = node.adjoint().toarray().unwrap().as_ref() * dft;
            assert!(max_abs_diff(&back, &CMatrix::identity(d, d)) < 1e-12);
        }
    }

    #[test]
    fn qft_diagonalizes_shift() {
        for n in 1..=3 {
            let f = qft(n).unwrap().toarray().unwrap();
            for c in 0..4 {
                let s = constant_integer_addition(n, c).unwrap().toarray().unwrap();
                let d = f.adjoint() * s.as_ref() * f.as_ref();
                for i in 0..d.nrows() {
                    for j in 0..d.ncols() {
                        if i != j {
                            assert!(d[(i, j)].norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}
