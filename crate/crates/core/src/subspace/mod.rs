//! Compressed computational-basis subspaces.
//!
//! A [`Subspace`] is a tensor product of factors stored least significant
//! first. A factor is either a qubit forced to `|0>` or a controlled pair
//! whose most significant qubit selects which of two equally wide
//! subspaces the remaining qubits must lie in. The empty factor list is the
//! zero-qubit space `C^1`; a controlled pair over two empty spaces is one
//! unconstrained qubit.
//!
//! Every representable subspace contains the all-zeros state, so sets such
//! as "the one-qubit span of `|1>`" cannot be built.

mod membership;

use std::fmt;
use std::ops::{BitAnd, BitOr};
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use membership::membership_gates;

#[derive(Debug, Clone)]
pub enum SubspaceFactor {
    ZeroQubit,
    Controlled(Arc<Subspace>, Arc<Subspace>),
}

impl SubspaceFactor {
    pub fn qubit_count(&self) -> usize {
        match self {
            SubspaceFactor::ZeroQubit => 1,
            SubspaceFactor::Controlled(low, _) => 1 + low.qubit_count(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SubspaceFactor::ZeroQubit => 1,
            SubspaceFactor::Controlled(low, high) => low.dim() + high.dim(),
        }
    }

    fn full_qubit() -> Self {
        SubspaceFactor::Controlled(Arc::new(Subspace::empty()), Arc::new(Subspace::empty()))
    }

    fn is_full_qubit(&self) -> bool {
        matches!(self, SubspaceFactor::Controlled(l, h) if l.factors.is_empty() && h.factors.is_empty())
    }

    fn basis(&self) -> Vec<usize> {
        match self {
            SubspaceFactor::ZeroQubit => vec![0],
            SubspaceFactor::Controlled(low, high) => {
                let offset = 1usize << low.qubit_count();
                let mut b = low.enumerate_basis();
                b.extend(high.enumerate_basis().into_iter().map(|x| x + offset));
                b
            }
        }
    }

    fn raw_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SubspaceFactor::ZeroQubit, SubspaceFactor::ZeroQubit) => true,
            (SubspaceFactor::Controlled(a0, a1), SubspaceFactor::Controlled(b0, b1)) => {
                a0.raw_eq(b0) && a1.raw_eq(b1)
            }
            _ => false,
        }
    }
}

/// Index subspace; factors are ordered least significant first.
#[derive(Debug, Clone, Default)]
pub struct Subspace {
    factors: Vec<SubspaceFactor>,
}

impl Subspace {
    pub fn new(factors: Vec<SubspaceFactor>) -> Result<Self> {
        for f in &factors {
            if let SubspaceFactor::Controlled(low, high) = f {
                if low.qubit_count() != high.qubit_count() {
                    return Err(Error::Shape(format!(
                        "controlled branches have {} and {} qubits",
                        low.qubit_count(),
                        high.qubit_count()
                    )));
                }
            }
        }
        Ok(Subspace { factors })
    }

    /// The zero-qubit space, dimension 1.
    pub fn empty() -> Self {
        Subspace { factors: Vec::new() }
    }

    /// `n` qubits all forced to `|0>`.
    pub fn zeros(n: usize) -> Self {
        Subspace { factors: vec![SubspaceFactor::ZeroQubit; n] }
    }

    /// All `2^n` basis states of `n` qubits.
    pub fn full(n: usize) -> Self {
        Subspace { factors: vec![SubspaceFactor::full_qubit(); n] }
    }

    /// Parses a string of `0` (forced zero) and `#` (free qubit), most
    /// significant qubit first.
    pub fn from_pattern(pattern: &str) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::Format("empty subspace pattern".into()));
        }
        let factors = pattern
            .chars()
            .rev()
            .map(|c| match c {
                '0' => Ok(SubspaceFactor::ZeroQubit),
                '#' => Ok(SubspaceFactor::full_qubit()),
                other => Err(Error::Format(format!("invalid subspace character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace { factors })
    }

    /// Single controlled factor: `low` when the new top qubit is 0, `high`
    /// when it is 1.
    pub fn controlled(low: &Subspace, high: &Subspace) -> Result<Self> {
        Subspace::new(vec![SubspaceFactor::Controlled(
            Arc::new(low.clone()),
            Arc::new(high.clone()),
        )])
    }

    /// Tensor product with `self` on the more significant qubits.
    pub fn tensor(&self, lower: &Subspace) -> Self {
        let mut factors = lower.factors.clone();
        factors.extend(self.factors.iter().cloned());
        Subspace { factors }
    }

    /// Subspace on `ceil(log2 d)` qubits spanned by `|0>, ..., |d-1>`.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("subspace dimension must be at least 1".into()));
        }
        Ok(Self::from_dim_unchecked(d))
    }

    fn from_dim_unchecked(d: usize) -> Self {
        if d.is_power_of_two() {
            return Subspace::full(d.trailing_zeros() as usize);
        }
        let k = usize::BITS as usize - 1 - d.leading_zeros() as usize;
        let low = Subspace::full(k);
        let high = Self::from_dim_unchecked(d - (1 << k)).padded(k);
        Subspace {
            factors: vec![SubspaceFactor::Controlled(Arc::new(low), Arc::new(high))],
        }
    }

    pub fn factors(&self) -> &[SubspaceFactor] {
        &self.factors
    }

    pub fn qubit_count(&self) -> usize {
        self.factors.iter().map(SubspaceFactor::qubit_count).sum()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(SubspaceFactor::dim).product()
    }

    /// True when every basis state of the register belongs to the subspace.
    pub fn is_unconstrained(&self) -> bool {
        self.factors.iter().all(|f| match f {
            SubspaceFactor::ZeroQubit => false,
            SubspaceFactor::Controlled(l, h) => l.is_unconstrained() && h.is_unconstrained(),
        })
    }

    /// Zero qubits appended on the most significant side up to `width`.
    pub fn padded(&self, width: usize) -> Self {
        let extra = width.saturating_sub(self.qubit_count());
        let mut factors = self.factors.clone();
        factors.extend(std::iter::repeat_n(SubspaceFactor::ZeroQubit, extra));
        Subspace { factors }
    }

    /// Sorted basis indices.
    pub fn enumerate_basis(&self) -> Vec<usize> {
        let mut basis = vec![0usize];
        let mut shift = 0;
        for f in &self.factors {
            let fb = f.basis();
            let mut next = Vec::with_capacity(basis.len() * fb.len());
            for j in &fb {
                for i in &basis {
                    next.push((j << shift) | i);
                }
            }
            basis = next;
            shift += f.qubit_count();
        }
        basis
    }

    pub fn contains(&self, index: usize) -> bool {
        let mut rest = index;
        for f in &self.factors {
            let w = f.qubit_count();
            let bits = rest & ((1usize << w) - 1);
            rest >>= w;
            let ok = match f {
                SubspaceFactor::ZeroQubit => bits == 0,
                SubspaceFactor::Controlled(low, high) => {
                    let lw = low.qubit_count();
                    if bits >> lw == 0 {
                        low.contains(bits)
                    } else {
                        high.contains(bits & ((1 << lw) - 1))
                    }
                }
            };
            if !ok {
                return false;
            }
        }
        rest == 0
    }

    /// Subspace spanned by the first `keep` basis states.
    ///
    /// Whole factors are truncated when `keep` is a multiple of the lower
    /// block's dimension; otherwise the most significant qubit splits the
    /// set into a kept half and a recursively truncated half.
    pub fn prefix_truncate(&self, keep: usize) -> Result<Self> {
        if keep == 0 || keep > self.dim() {
            return Err(Error::Domain(format!(
                "cannot keep {keep} of {} basis states",
                self.dim()
            )));
        }
        Ok(self.truncate_inner(keep))
    }

    fn truncate_inner(&self, keep: usize) -> Self {
        if keep == self.dim() {
            return self.clone();
        }
        let (top, rest) = self
            .factors
            .split_last()
            .expect("nonempty subspace when keep < dim");
        let rest = Subspace { factors: rest.to_vec() };
        let r = rest.dim();
        if keep.is_multiple_of(r) {
            let mut factors = rest.factors.clone();
            factors.extend(truncate_factor(top, keep / r));
            return Subspace { factors };
        }
        match top {
            SubspaceFactor::ZeroQubit => {
                let mut t = rest.truncate_inner(keep);
                t.factors.push(SubspaceFactor::ZeroQubit);
                t
            }
            SubspaceFactor::Controlled(low, high) => {
                let s0 = low.tensor(&rest);
                if keep <= s0.dim() {
                    let mut t = s0.truncate_inner(keep);
                    t.factors.push(SubspaceFactor::ZeroQubit);
                    t
                } else {
                    let s1 = high.tensor(&rest).truncate_inner(keep - s0.dim());
                    Subspace {
                        factors: vec![SubspaceFactor::Controlled(Arc::new(s0), Arc::new(s1))],
                    }
                }
            }
        }
    }

    /// Representation with common low factors of controlled branches pulled
    /// out, so `Controlled(X, X)` becomes `X` with a free qubit on top.
    pub fn canonical(&self) -> Self {
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            match f {
                SubspaceFactor::ZeroQubit => factors.push(SubspaceFactor::ZeroQubit),
                SubspaceFactor::Controlled(low, high) => {
                    let mut low = low.canonical().factors;
                    let mut high = high.canonical().factors;
                    let common = low
                        .iter()
                        .zip(&high)
                        .take_while(|(a, b)| a.raw_eq(b))
                        .count();
                    factors.extend(low.drain(..common));
                    high.drain(..common);
                    factors.push(SubspaceFactor::Controlled(
                        Arc::new(Subspace { factors: low }),
                        Arc::new(Subspace { factors: high }),
                    ));
                }
            }
        }
        Subspace { factors }
    }

    fn raw_eq(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| a.raw_eq(b))
    }

    /// Same qubit count and same basis set. Falls back to enumeration when
    /// canonical forms differ and the dimension is small enough.
    pub fn same_span(&self, other: &Self) -> bool {
        if self.qubit_count() != other.qubit_count() || self.dim() != other.dim() {
            return false;
        }
        if self == other {
            return true;
        }
        self.dim() <= 1 << 16 && self.enumerate_basis() == other.enumerate_basis()
    }

    pub fn to_json(&self) -> Value {
        if self.factors.is_empty() {
            return json!({ "dim": 1 });
        }
        if self
            .factors
            .iter()
            .all(|f| matches!(f, SubspaceFactor::ZeroQubit) || f.is_full_qubit())
        {
            let pattern: String = self
                .factors
                .iter()
                .rev()
                .map(|f| if f.is_full_qubit() { '#' } else { '0' })
                .collect();
            return json!({ "pattern": pattern });
        }
        let factor_json = |f: &SubspaceFactor| match f {
            SubspaceFactor::ZeroQubit => json!({ "pattern": "0" }),
            SubspaceFactor::Controlled(l, h) if f.is_full_qubit() => {
                let _ = (l, h);
                json!({ "pattern": "#" })
            }
            SubspaceFactor::Controlled(l, h) => json!({ "or": [l.to_json(), h.to_json()] }),
        };
        let mut iter = self.factors.iter().rev();
        let first = factor_json(iter.next().expect("nonempty"));
        let rest: Vec<Value> = iter.map(factor_json).collect();
        if rest.is_empty() {
            first
        } else {
            let mut all = vec![first];
            all.extend(rest);
            json!({ "and": all })
        }
    }

    /// Parses the JSON form: `{"pattern": "0#"}`, `{"or": [s, s]}`,
    /// `{"and": [s, ...]}` (first operand most significant) or `{"dim": n}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Format(format!("subspace must be an object, got {value}")))?;
        if obj.len() != 1 {
            return Err(Error::Format(format!("subspace object needs exactly one key: {value}")));
        }
        let (key, arg) = obj.iter().next().unwrap();
        match key.as_str() {
            "pattern" => {
                let p = arg
                    .as_str()
                    .ok_or_else(|| Error::Format("pattern must be a string".into()))?;
                Subspace::from_pattern(p)
            }
            "dim" => {
                let d = arg
                    .as_u64()
                    .ok_or_else(|| Error::Format("dim must be a positive integer".into()))?;
                Subspace::from_dim(d as usize)
            }
            "or" => {
                let parts = json_list(arg, "or")?;
                if parts.len() != 2 {
                    return Err(Error::Format("`or` takes exactly two subspaces".into()));
                }
                Subspace::controlled(&Subspace::from_json(&parts[0])?, &Subspace::from_json(&parts[1])?)
            }
            "and" => {
                let parts = json_list(arg, "and")?;
                let mut acc: Option<Subspace> = None;
                for p in parts {
                    let s = Subspace::from_json(p)?;
                    acc = Some(match acc {
                        None => s,
                        Some(a) => a.tensor(&s),
                    });
                }
                acc.ok_or_else(|| Error::Format("`and` needs at least one subspace".into()))
            }
            other => Err(Error::Format(format!("unknown subspace form `{other}`"))),
        }
    }
}

fn json_list<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Format(format!("`{what}` expects a list")))
}

fn truncate_factor(f: &SubspaceFactor, keep: usize) -> Vec<SubspaceFactor> {
    if keep == f.dim() {
        return vec![f.clone()];
    }
    match f {
        SubspaceFactor::ZeroQubit => vec![SubspaceFactor::ZeroQubit],
        SubspaceFactor::Controlled(low, high) => {
            if keep <= low.dim() {
                let mut t = low.truncate_inner(keep).factors;
                t.push(SubspaceFactor::ZeroQubit);
                t
            } else {
                let h = high.truncate_inner(keep - low.dim());
                vec![SubspaceFactor::Controlled(low.clone(), Arc::new(h))]
            }
        }
    }
}

impl PartialEq for Subspace {
    /// Structural equality of canonical forms.
    fn eq(&self, other: &Self) -> bool {
        self.canonical().raw_eq(&other.canonical())
    }
}

impl Eq for Subspace {}

impl FromStr for Subspace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subspace::from_pattern(s)
    }
}

impl BitOr for &Subspace {
    type Output = Subspace;

    /// Panics when the operands differ in width; see [`Subspace::controlled`].
    fn bitor(self, rhs: &Subspace) -> Subspace {
        Subspace::controlled(self, rhs).expect("`|` operands must have equal qubit counts")
    }
}

impl BitOr for Subspace {
    type Output = Subspace;

    fn bitor(self, rhs: Subspace) -> Subspace {
        &self | &rhs
    }
}

impl BitAnd for &Subspace {
    type Output = Subspace;

    fn bitand(self, rhs: &Subspace) -> Subspace {
        self.tensor(rhs)
    }
}

impl BitAnd for Subspace {
    type Output = Subspace;

    fn bitand(self, rhs: Subspace) -> Subspace {
        self.tensor(&rhs)
    }
}

impl fmt::Display for SubspaceFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceFactor::ZeroQubit => write!(f, "ZeroQubitSubspace()"),
            SubspaceFactor::Controlled(l, h) => write!(f, "ControlledSubspace({l}, {h})"),
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace([")?;
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{factor}")?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: &str) -> Subspace {
        p.parse().unwrap()
    }

    /// Brute-force membership: keep indices whose bits match the pattern.
    fn pattern_oracle(p: &str) -> Vec<usize> {
        let n = p.len();
        (0..1usize << n)
            .filter(|&x| {
                p.chars()
                    .rev()
                    .enumerate()
                    .all(|(bit, c)| c == '#' || (x >> bit) & 1 == 0)
            })
            .collect()
    }

    #[test]
    fn pattern_with_free_low_bit() {
        let sub = s("0#");
        assert_eq!(sub.qubit_count(), 2);
        assert_eq!(sub.enumerate_basis(), pattern_oracle("0#"));
        assert_eq!(sub.enumerate_basis(), vec![0, 1]);
    }

    #[test]
    fn single_zero_pattern() {
        let sub = s("0");
        assert_eq!((sub.qubit_count(), sub.dim()), (1, 1));
        assert_eq!(sub.enumerate_basis(), vec![0]);
    }

    #[test]
    fn full_two_qubit_space() {
        assert_eq!(s("##").enumerate_basis(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn invalid_pattern_character() {
        assert!(matches!(Subspace::from_pattern("01"), Err(Error::Format(_))));
        assert!(Subspace::from_pattern("").is_err());
    }

    #[test]
    fn controlled_or_examples() {
        let c = &s("00") | &s("0#");
        assert_eq!(c.qubit_count(), 3);
        // branch1 = "0#" under the top qubit: 100 and 101
        assert_eq!(c.enumerate_basis(), vec![0, 4, 5]);
        let free = &Subspace::empty() | &Subspace::empty();
        assert_eq!(free.enumerate_basis(), vec![0, 1]);
    }

    #[test]
    fn controlled_width_mismatch() {
        assert!(matches!(Subspace::controlled(&s("0"), &s("00")), Err(Error::Shape(_))));
    }

    #[test]
    fn four_qubit_example() {
        let sub = (&s("00") | &s("0#")) & s("0");
        assert_eq!(sub.enumerate_basis(), vec![0, 8, 10]);
        let listing = "Subspace([
            ZeroQubitSubspace(),
            ControlledSubspace(
                Subspace([ZeroQubitSubspace(), ZeroQubitSubspace()]),
                Subspace([
                    ControlledSubspace(Subspace([]), Subspace([])),
                    ZeroQubitSubspace(),
                ]),
            )
        ])";
        let squash = |t: &str| -> String {
            t.chars()
                .filter(|c| !c.is_whitespace())
                .collect::<String>()
                .replace(",)", ")")
                .replace(",]", "]")
        };
        assert_eq!(squash(&sub.to_string()), squash(listing));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(s("0") & s("0"), s("00"));
        assert_eq!((s("#") & s("0")).enumerate_basis(), vec![0, 2]);
    }

    #[test]
    fn from_dim_examples() {
        assert_eq!(Subspace::from_dim(4).unwrap(), s("##"));
        let one = Subspace::from_dim(1).unwrap();
        assert_eq!((one.qubit_count(), one.dim()), (0, 1));
        let seven = Subspace::from_dim(7).unwrap();
        assert_eq!(seven.qubit_count(), 3);
        assert_eq!(seven.enumerate_basis(), (0..7).collect::<Vec<_>>());
        let five = Subspace::from_dim(5).unwrap();
        let oracle: Vec<usize> = (0..8).filter(|&x| x < 5).collect();
        assert_eq!(five.enumerate_basis(), oracle);
        assert!(matches!(Subspace::from_dim(0), Err(Error::Domain(_))));
    }

    #[test]
    fn prefix_truncate_examples() {
        let eight = Subspace::from_dim(8).unwrap();
        assert_eq!(eight.prefix_truncate(7).unwrap(), Subspace::from_dim(7).unwrap());
        let ex = (&s("00") | &s("0#")) & s("0");
        assert_eq!(ex.prefix_truncate(3).unwrap(), ex);
        assert_eq!(ex.prefix_truncate(2).unwrap().enumerate_basis(), vec![0, 8]);
        assert!(ex.prefix_truncate(0).is_err());
        assert!(ex.prefix_truncate(4).is_err());
    }

    #[test]
    fn canonical_equalities() {
        let free = &Subspace::empty() | &Subspace::empty();
        assert_eq!(free, s("#"));
        // Controlled(X, X) is X with a free qubit on top
        assert_eq!(&s("0#") | &s("0#"), s("#0#"));
        assert_ne!(s("0#"), s("#0"));
    }

    #[test]
    fn contains_matches_enumeration() {
        let ex = (&s("00") | &s("0#")) & s("0");
        let members: Vec<usize> = (0..16).filter(|&i| ex.contains(i)).collect();
        assert_eq!(members, ex.enumerate_basis());
    }

    #[test]
    fn json_round_trip() {
        let ex = (&s("00") | &s("0#")) & s("0");
        let back = Subspace::from_json(&ex.to_json()).unwrap();
        assert_eq!(back.enumerate_basis(), ex.enumerate_basis());
        assert_eq!(Subspace::from_json(&json!({"dim": 5})).unwrap().dim(), 5);
        assert!(Subspace::from_json(&json!({"bogus": 1})).is_err());
    }
}
