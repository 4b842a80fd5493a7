//! `A[rows, cols]` as projections, with permutations for non-prefix slices.

use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::node::{Node, Operation};
use crate::primitives::{permutation, projection};
use crate::subspace::Subspace;

/// Python-style `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SliceSpec {
    pub start: Option<i64>,
    pub stop: Option<i64>,
    pub step: Option<i64>,
}

impl SliceSpec {
    pub fn full() -> Self {
        SliceSpec::default()
    }

    /// `:stop`
    pub fn to(stop: i64) -> Self {
        SliceSpec { stop: Some(stop), ..Default::default() }
    }

    pub fn new(start: Option<i64>, stop: Option<i64>, step: Option<i64>) -> Self {
        SliceSpec { start, stop, step }
    }

    /// Selected indices of a length-`len` axis, in order.
    pub fn indices(&self, len: usize) -> Result<Vec<usize>> {
        let len = len as i64;
        let step = self.step.unwrap_or(1);
        if step == 0 {
            return Err(Error::Domain("slice step cannot be zero".into()));
        }
        let clamp = |v: i64, lo: i64, hi: i64| v.max(lo).min(hi);
        let norm = |v: i64| if v < 0 { v + len } else { v };
        let (lo, hi) = if step > 0 { (0, len) } else { (-1, len - 1) };
        let start = self.start.map_or(if step > 0 { 0 } else { len - 1 }, |s| clamp(norm(s), lo, hi));
        let stop = self.stop.map_or(if step > 0 { len } else { -1 }, |s| clamp(norm(s), lo, hi));
        let mut out = Vec::new();
        let mut i = start;
        while (step > 0 && i < stop) || (step < 0 && i > stop) {
            out.push(i as usize);
            i += step;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in [("start", self.start), ("stop", self.stop), ("step", self.step)] {
            if let Some(v) = v {
                m.insert(k.into(), json!(v));
            }
        }
        Value::Object(m)
    }

    /// Accepts `{"start", "stop", "step"}` (all optional) or a string.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return s.parse();
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Format(format!("slice must be an object or string, got {v}")))?;
        let field = |k: &str| -> Result<Option<i64>> {
            match obj.get(k) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => x
                    .as_i64()
                    .map(Some)
                    .ok_or_else(|| Error::Format(format!("slice `{k}` must be an integer"))),
            }
        };
        Ok(SliceSpec { start: field("start")?, stop: field("stop")?, step: field("step")? })
    }
}

impl FromStr for SliceSpec {
    type Err = Error;

    /// `"start:stop:step"` with empty parts omitted, e.g. `":-1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.is_empty() || parts.len() > 3 {
            return Err(Error::Format(format!("invalid slice `{s}`")));
        }
        let parse = |p: Option<&&str>| -> Result<Option<i64>> {
            match p.map(|p| p.trim()) {
                None | Some("") => Ok(None),
                Some(p) => p
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::Format(format!("invalid slice bound `{p}`"))),
            }
        };
        if parts.len() == 1 {
            let i = parse(parts.first())?
                .ok_or_else(|| Error::Format("empty slice".into()))?;
            let stop = if i == -1 { None } else { Some(i + 1) };
            return Ok(SliceSpec { start: Some(i), stop, step: None });
        }
        Ok(SliceSpec { start: parse(parts.first())?, stop: parse(parts.get(1))?, step: parse(parts.get(2))? })
    }
}

/// `a[rows, cols]`.
pub fn slice(a: &Node, rows: SliceSpec, cols: SliceSpec) -> Result<Node> {
    let r = rows.indices(a.dim_out())?;
    let c = cols.indices(a.dim_in())?;
    if r.is_empty() || c.is_empty() {
        return Err(Error::Domain("slice selects no entries".into()));
    }
    let mut expansion = a.clone();
    if let Some(left) = row_selector(a.subspace_out(), &r)? {
        expansion = left.matmul(&expansion)?;
    }
    if let Some(right) = column_selector(a.subspace_in(), &c)? {
        expansion = expansion.matmul(&right)?;
    }
    Ok(Node::new(Slice { a: a.clone(), rows, cols, expansion }))
}

fn is_prefix(idx: &[usize]) -> bool {
    idx.iter().enumerate().all(|(k, &i)| k == i)
}

/// Table sending `idx[k]` to `k` and the rest upward in increasing order.
fn gather_table(idx: &[usize], n: usize) -> Vec<usize> {
    let mut table = vec![usize::MAX; n];
    for (k, &i) in idx.iter().enumerate() {
        table[i] = k;
    }
    for (t, next) in table.iter_mut().filter(|t| **t == usize::MAX).zip(idx.len()..) {
        *t = next;
    }
    table
}

/// `x x dim` matrix with `e_{idx[k]} -> e_k`.
fn row_selector(parent: &Subspace, idx: &[usize]) -> Result<Option<Node>> {
    let n = parent.dim();
    if is_prefix(idx) {
        return (idx.len() < n).then(|| projection(parent.clone(), idx.len(), n)).transpose();
    }
    let p = permutation(gather_table(idx, n))?;
    let keep = projection(Subspace::from_dim(n)?, idx.len(), n)?;
    Ok(Some(keep.matmul(&p)?))
}

/// `dim x y` matrix with `e_k -> e_{idx[k]}`.
fn column_selector(parent: &Subspace, idx: &[usize]) -> Result<Option<Node>> {
    let n = parent.dim();
    if is_prefix(idx) {
        return (idx.len() < n).then(|| projection(parent.clone(), n, idx.len())).transpose();
    }
    let gather = gather_table(idx, n);
    let mut scatter = vec![0; n];
    for (i, &k) in gather.iter().enumerate() {
        scatter[k] = i;
    }
    let p = permutation(scatter)?;
    let keep = projection(Subspace::from_dim(n)?, n, idx.len())?;
    Ok(Some(p.matmul(&keep)?))
}

#[derive(Debug)]
struct Slice {
    a: Node,
    rows: SliceSpec,
    cols: SliceSpec,
    expansion: Node,
}

impl Operation for Slice {
    fn kind(&self) -> &'static str {
        "slice"
    }

    fn children(&self) -> Vec<Node> {
        vec![self.a.clone()]
    }

    fn params(&self) -> Value {
        json!({ "rows": self.rows.to_json(), "cols": self.cols.to_json() })
    }

    fn expansion(&self) -> Option<&Node> {
        Some(&self.expansion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, CMatrix, C64};
    use crate::primitives::{identity_dim, increment, qft};

    #[test]
    fn python_indices() {
        assert_eq!(SliceSpec::to(-1).indices(8).unwrap(), (0..7).collect::<Vec<_>>());
        assert_eq!(SliceSpec::new(Some(1), None, Some(3)).indices(8).unwrap(), vec![1, 4, 7]);
        assert_eq!(SliceSpec::new(None, None, Some(-2)).indices(5).unwrap(), vec![4, 2, 0]);
        assert!(SliceSpec::new(None, None, Some(0)).indices(5).is_err());
        assert_eq!(":-1".parse::<SliceSpec>().unwrap(), SliceSpec::to(-1));
        assert_eq!("::2".parse::<SliceSpec>().unwrap(), SliceSpec::new(None, None, Some(2)));
    }

    fn dense_slice(m: &CMatrix, r: &[usize], c: &[usize]) -> CMatrix {
        CMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])])
    }

    #[test]
    fn laplacian_block() {
        let x = increment(3).unwrap();
        let i = identity_dim(8).unwrap();
        let l = i.scale(2.0).minus(&x.adjoint()).unwrap().minus(&x).unwrap();
        let s = l.slice(SliceSpec::to(-1), SliceSpec::to(-1)).unwrap();
        let m = s.toarray().unwrap();
        let expected = CMatrix::from_fn(7, 7, |r, c| {
            C64::new(
                match r.abs_diff(c) {
                    0 => 2.0,
                    1 => -1.0,
                    _ => 0.0,
                },
                0.0,
            )
        });
        assert!(max_abs_diff(&m, &expected) < 1e-14);
        assert!(s.verify(1e-10).unwrap().pass);
        assert_eq!(s.normalization(), 4.0);
    }

    #[test]
    fn strided_slices() {
        let q = qft(3).unwrap();
        let dense = q.toarray().unwrap();
        for (rows, cols) in [
            (SliceSpec::new(Some(1), None, Some(2)), SliceSpec::to(5)),
            (SliceSpec::full(), SliceSpec::new(None, None, Some(-3))),
            (SliceSpec::new(Some(2), Some(7), Some(2)), SliceSpec::new(Some(-2), None, None)),
        ] {
            let s = q.slice(rows, cols).unwrap();
            let r = rows.indices(8).unwrap();
            let c = cols.indices(8).unwrap();
            assert!(max_abs_diff(&s.toarray().unwrap(), &dense_slice(&dense, &r, &c)) < 1e-14);
            assert!(s.verify(1e-10).unwrap().pass);
        }
    }
}
