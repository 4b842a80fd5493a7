//! JSON interchange for block-encoding graphs.
//!
//! A node is `{"op": kind, "args": [...], "params": {...}}`. Parameters may
//! also sit beside `op` instead of under `params`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::composite::{self, ProductCheck, SliceSpec};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::node::Node;
use crate::primitives;
use crate::qsvt::{self, Parity, TargetPolynomial};
use crate::subspace::Subspace;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub version: u64,
    pub root: Value,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl GraphDocument {
    pub fn new(root: &Node) -> Self {
        GraphDocument { version: FORMAT_VERSION, root: root.to_json(), metadata: Map::new() }
    }

    /// Accepts a full document or a bare node expression.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let doc = if value.get("root").is_some() {
            serde_json::from_value::<GraphDocument>(value).map_err(|e| Error::Format(e.to_string()))?
        } else {
            GraphDocument { version: FORMAT_VERSION, root: value, metadata: Map::new() }
        };
        if doc.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported graph version {}", doc.version)));
        }
        Ok(doc)
    }

    pub fn node(&self) -> Result<Node> {
        parse_node(&self.root)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

struct Expr<'a> {
    op: &'a str,
    args: Vec<Node>,
    params: Map<String, Value>,
}

impl Expr<'_> {
    fn arity(&self, n: usize) -> Result<()> {
        if self.args.len() == n {
            Ok(())
        } else {
            Err(Error::Graph(format!("`{}` takes {n} argument(s), got {}", self.op, self.args.len())))
        }
    }

    fn arg(&self, i: usize) -> &Node {
        &self.args[i]
    }

    fn get(&self, key: &str) -> Result<&Value> {
        self.params
            .get(key)
            .ok_or_else(|| Error::Graph(format!("`{}` is missing parameter `{key}`", self.op)))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        self.get(key)?
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| Error::Graph(format!("`{key}` must be a nonnegative integer")))
    }

    fn i64(&self, key: &str) -> Result<i64> {
        self.get(key)?.as_i64().ok_or_else(|| Error::Graph(format!("`{key}` must be an integer")))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        self.get(key)?.as_f64().ok_or_else(|| Error::Graph(format!("`{key}` must be a number")))
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.params.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(_) => self.f64(key).map(Some),
        }
    }

    fn subspace(&self, key: &str) -> Result<Subspace> {
        match self.params.get(key) {
            Some(v) => Subspace::from_json(v),
            None => Subspace::from_dim(self.usize("dim")?),
        }
    }

    fn slice(&self, key: &str) -> Result<SliceSpec> {
        match self.params.get(key) {
            None | Some(Value::Null) => Ok(SliceSpec::full()),
            Some(Value::String(s)) => s.parse(),
            Some(v) => SliceSpec::from_json(v),
        }
    }
}

fn scalar(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::Graph("complex scalars are [re, im] number pairs".into())),
        },
        other => Err(Error::Graph(format!("expected a number or [re, im], got {other}"))),
    }
}

/// Builds the node described by `value`.
pub fn parse_node(value: &Value) -> Result<Node> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Graph(format!("node must be an object, got {value}")))?;
    let op = obj
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Graph("node is missing `op`".into()))?;
    let args = match obj.get("args") {
        None => Vec::new(),
        Some(Value::Array(items)) => items.iter().map(parse_node).collect::<Result<_>>()?,
        Some(_) => return Err(Error::Graph("`args` must be an array".into())),
    };
    let mut params = match obj.get("params") {
        None => Map::new(),
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(Error::Graph("`params` must be an object".into())),
    };
    for (k, v) in obj {
        if !matches!(k.as_str(), "op" | "args" | "params") {
            params.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    build(&Expr { op, args, params })
}

fn build(e: &Expr) -> Result<Node> {
    match e.op {
        "identity" => {
            e.arity(0)?;
            Ok(primitives::identity(e.subspace("subspace")?))
        }
        "increment" => {
            e.arity(0)?;
            primitives::increment(e.usize("bits")?)
        }
        "constant_integer_addition" => {
            e.arity(0)?;
            primitives::constant_integer_addition(e.usize("bits")?, e.i64("constant")?)
        }
        "integer_addition" => {
            e.arity(0)?;
            primitives::integer_addition(e.usize("source_bits")?, e.usize("target_bits")?)
        }
        "qft" => {
            e.arity(0)?;
            primitives::qft(e.usize("bits")?)
        }
        "constant_vector" => {
            e.arity(0)?;
            let entries = e
                .get("entries")?
                .as_array()
                .ok_or_else(|| Error::Graph("`entries` must be an array".into()))?
                .iter()
                .map(scalar)
                .collect::<Result<Vec<_>>>()?;
            primitives::constant_vector(entries)
        }
        "permutation" => {
            e.arity(0)?;
            let table = e
                .get("table")?
                .as_array()
                .and_then(|t| t.iter().map(|v| v.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::Graph("`table` must be an array of indices".into()))?;
            primitives::permutation(table)
        }
        "projection" => {
            e.arity(0)?;
            primitives::projection(e.subspace("subspace")?, e.usize("keep_out")?, e.usize("keep_in")?)
        }
        "add" => {
            e.arity(2)?;
            composite::add(e.arg(0), e.arg(1))
        }
        "sub" => {
            e.arity(2)?;
            composite::subtract(e.arg(0), e.arg(1))
        }
        "matmul" => {
            e.arity(2)?;
            let check = match e.params.get("check") {
                None => ProductCheck::Auto,
                Some(v) => ProductCheck::parse(
                    v.as_str().ok_or_else(|| Error::Graph("`check` must be a string".into()))?,
                )?,
            };
            composite::product(e.arg(0), e.arg(1), check)
        }
        "tensor" => {
            e.arity(2)?;
            Ok(composite::tensor(e.arg(0), e.arg(1)))
        }
        "blockdiag" => {
            e.arity(2)?;
            Ok(composite::block_diagonal(e.arg(0), e.arg(1)))
        }
        "scale" => {
            e.arity(1)?;
            Ok(composite::scale(scalar(e.get("scalar")?)?, e.arg(0)))
        }
        "adjoint" => {
            e.arity(1)?;
            Ok(composite::adjoint(e.arg(0)))
        }
        "slice" => {
            e.arity(1)?;
            composite::slice(e.arg(0), e.slice("rows")?, e.slice("cols")?)
        }
        "subnormalize" => {
            e.arity(1)?;
            composite::subnormalize(e.arg(0), e.f64("normalization")?)
        }
        "qsvt" => {
            e.arity(1)?;
            let coefficients = e
                .get("chebyshev")?
                .as_array()
                .and_then(|c| c.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::Graph("`chebyshev` must be an array of numbers".into()))?;
            let parity = match e.params.get("parity").and_then(Value::as_str) {
                Some(p) => Parity::parse(p)?,
                None => Parity::of(coefficients.len().saturating_sub(1)),
            };
            let target = TargetPolynomial::new(coefficients, parity)?;
            qsvt::qsvt(e.arg(0), target, e.opt_f64("normalization")?.unwrap_or(1.0))
        }
        "pseudoinverse" => {
            e.arity(1)?;
            qsvt::pseudoinverse(e.arg(0), e.f64("condition")?, e.f64("tolerance")?, e.opt_f64("delta")?)
        }
        other => Err(Error::Graph(format!("unknown op `{other}`"))),
    }
}
