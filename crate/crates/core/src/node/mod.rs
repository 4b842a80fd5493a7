//! Block-encoding DAG nodes.
//!
//! A [`Node`] is an immutable, cheaply clonable handle to an [`Operation`]
//! plus lazily filled caches. Its main register has `width()` qubits, and
//! both subspaces are padded to that width. Ancillas are clean scratch
//! qubits above the main register: every circuit returns them to `|0>`, so
//! children share them instead of stacking them.

mod ops;
mod report;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde_json::{Map, Value};

use crate::budget::budget;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{check_rows, max_abs_diff, spectral_norm, CMatrix, CVector, C64, ONE, ZERO};
use crate::subspace::Subspace;

pub use report::{norm_query_estimate, ResourceReport, Simulation, VerifyReport};

/// Behaviour of one node kind.
///
/// Leaf kinds implement every method. A proxy kind returns its expansion
/// from [`Operation::expansion`] and inherits the remaining methods, which
/// delegate to that expansion.
pub trait Operation: fmt::Debug + Send + Sync {
    /// Name used in the JSON form.
    fn kind(&self) -> &'static str;

    fn children(&self) -> Vec<Node> {
        Vec::new()
    }

    /// JSON parameters besides the children.
    fn params(&self) -> Value {
        Value::Object(Map::new())
    }

    fn expansion(&self) -> Option<&Node> {
        None
    }

    fn normalization(&self) -> f64 {
        proxy(self).normalization()
    }

    fn subspace_in(&self) -> Subspace {
        proxy(self).subspace_in().clone()
    }

    fn subspace_out(&self) -> Subspace {
        proxy(self).subspace_out().clone()
    }

    fn ancillas(&self) -> usize {
        proxy(self).ancillas()
    }

    /// `A v` for every column of `v`.
    fn compute(&self, v: &CMatrix) -> Result<CMatrix> {
        proxy(self).compute_matrix(v)
    }

    /// `A^dagger w` for every column of `w`.
    fn compute_adjoint(&self, w: &CMatrix) -> Result<CMatrix> {
        proxy(self).compute_adjoint_matrix(w)
    }

    fn circuit(&self) -> Result<Circuit> {
        Ok(proxy(self).circuit()?.as_ref().clone())
    }

    /// The circuit maps the input subspace into the output subspace.
    fn isometric(&self) -> bool {
        proxy(self).is_isometric()
    }

    /// The circuit maps the complement of the input subspace into the
    /// complement of the output subspace.
    fn confines(&self) -> bool {
        proxy(self).confines()
    }

    /// Correctness assumptions made by this node alone.
    fn assumptions(&self) -> Vec<String> {
        Vec::new()
    }

    fn is_zero(&self) -> bool {
        false
    }
}

fn proxy<O: Operation + ?Sized>(op: &O) -> &Node {
    op.expansion().unwrap_or_else(|| {
        panic!("`{}` has neither a direct rule nor an expansion", op.kind())
    })
}

#[derive(Default)]
struct Cache {
    normalization: OnceLock<f64>,
    layout: OnceLock<Layout>,
    ancillas: OnceLock<usize>,
    circuit: OnceLock<Result<Arc<Circuit>>>,
    matrix: OnceLock<Result<Arc<CMatrix>>>,
    norm: OnceLock<Result<f64>>,
    report: OnceLock<Result<ResourceReport>>,
}

struct Layout {
    width: usize,
    subspace_in: Subspace,
    subspace_out: Subspace,
    basis_in: OnceLock<Arc<Vec<usize>>>,
    basis_out: OnceLock<Arc<Vec<usize>>>,
}

struct Inner {
    op: Box<dyn Operation>,
    cache: Cache,
}

/// Shared handle to an immutable block encoding.
#[derive(Clone)]
pub struct Node(Arc<Inner>);

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.op.fmt(f)
    }
}

impl Node {
    pub fn new<O: Operation + 'static>(op: O) -> Node {
        Node(Arc::new(Inner { op: Box::new(op), cache: Cache::default() }))
    }

    pub fn op(&self) -> &dyn Operation {
        self.0.op.as_ref()
    }

    pub fn kind(&self) -> &'static str {
        self.0.op.kind()
    }

    pub fn children(&self) -> Vec<Node> {
        self.0.op.children()
    }

    pub fn ptr_eq(&self, other: &Node) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.op.is_zero()
    }

    pub fn normalization(&self) -> f64 {
        *self.0.cache.normalization.get_or_init(|| self.0.op.normalization())
    }

    fn layout(&self) -> &Layout {
        self.0.cache.layout.get_or_init(|| {
            let s_in = self.0.op.subspace_in();
            let s_out = self.0.op.subspace_out();
            let width = s_in.qubit_count().max(s_out.qubit_count());
            Layout {
                width,
                subspace_in: s_in.padded(width),
                subspace_out: s_out.padded(width),
                basis_in: OnceLock::new(),
                basis_out: OnceLock::new(),
            }
        })
    }

    /// Main-register qubit count.
    pub fn width(&self) -> usize {
        self.layout().width
    }

    pub fn subspace_in(&self) -> &Subspace {
        &self.layout().subspace_in
    }

    pub fn subspace_out(&self) -> &Subspace {
        &self.layout().subspace_out
    }

    pub fn dim_in(&self) -> usize {
        self.subspace_in().dim()
    }

    pub fn dim_out(&self) -> usize {
        self.subspace_out().dim()
    }

    pub fn is_vector(&self) -> bool {
        self.dim_in() == 1
    }

    pub fn basis_in(&self) -> Arc<Vec<usize>> {
        let l = self.layout();
        l.basis_in.get_or_init(|| Arc::new(l.subspace_in.enumerate_basis())).clone()
    }

    pub fn basis_out(&self) -> Arc<Vec<usize>> {
        let l = self.layout();
        l.basis_out.get_or_init(|| Arc::new(l.subspace_out.enumerate_basis())).clone()
    }

    pub fn ancillas(&self) -> usize {
        *self.0.cache.ancillas.get_or_init(|| self.0.op.ancillas())
    }

    pub fn is_isometric(&self) -> bool {
        self.0.op.isometric() || (self.0.op.confines() && self.dim_in() == self.dim_out())
    }

    pub fn confines(&self) -> bool {
        self.0.op.confines() || (self.0.op.isometric() && self.dim_in() == self.dim_out())
    }

    /// Unchecked assumptions of this node and its descendants.
    pub fn assumptions(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in self.children() {
            for a in c.assumptions() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out.extend(self.0.op.assumptions());
        out
    }

    /// Gate-level circuit on `width()` main qubits and `ancillas()` ancillas.
    pub fn circuit(&self) -> Result<Arc<Circuit>> {
        self.0
            .cache
            .circuit
            .get_or_init(|| {
                let c = self.0.op.circuit()?;
                let (w, anc) = (self.width(), self.ancillas());
                if c.main_qubits() > w || c.ancilla_qubits() > anc {
                    return Err(Error::Graph(format!(
                        "`{}` built a circuit on {}+{} qubits, declared {w}+{anc}",
                        self.kind(),
                        c.main_qubits(),
                        c.ancilla_qubits()
                    )));
                }
                Ok(Arc::new(c.widened(w, anc)))
            })
            .clone()
    }

    pub fn compute_matrix(&self, v: &CMatrix) -> Result<CMatrix> {
        check_rows(v, self.dim_in(), self.kind())?;
        self.0.op.compute(v)
    }

    pub fn compute_adjoint_matrix(&self, w: &CMatrix) -> Result<CMatrix> {
        check_rows(w, self.dim_out(), self.kind())?;
        self.0.op.compute_adjoint(w)
    }

    /// `A v` by matrix arithmetic.
    pub fn compute(&self, v: &CVector) -> Result<CVector> {
        let m = self.compute_matrix(&CMatrix::from_column_slice(v.len(), 1, v.as_slice()))?;
        Ok(m.column(0).into_owned())
    }

    /// `A^dagger w` by matrix arithmetic.
    pub fn compute_adjoint(&self, w: &CVector) -> Result<CVector> {
        let m = self.compute_adjoint_matrix(&CMatrix::from_column_slice(w.len(), 1, w.as_slice()))?;
        Ok(m.column(0).into_owned())
    }

    /// Dense encoded matrix, `dim_out x dim_in`.
    pub fn toarray(&self) -> Result<Arc<CMatrix>> {
        self.0
            .cache
            .matrix
            .get_or_init(|| {
                budget().check_dense(self.dim_out(), self.dim_in())?;
                let id = CMatrix::identity(self.dim_in(), self.dim_in());
                Ok(Arc::new(self.compute_matrix(&id)?))
            })
            .clone()
    }

    /// Circuit-path evaluation with the full final state for diagnostics.
    pub fn simulate_detailed(&self, v: &CVector) -> Result<Simulation> {
        if v.len() != self.dim_in() {
            return Err(Error::Shape(format!(
                "{} expects a vector of length {}, got {}",
                self.kind(),
                self.dim_in(),
                v.len()
            )));
        }
        let circuit = self.circuit()?;
        let n = circuit.total_qubits();
        budget().check_amplitudes(n)?;
        let mut amplitudes = vec![ZERO; 1 << n];
        for (k, &idx) in self.basis_in().iter().enumerate() {
            amplitudes[idx] = v[k];
        }
        let state = circuit.simulate(&amplitudes)?;
        let gamma = self.normalization();
        let projected: Vec<C64> = self.basis_out().iter().map(|&i| state[i]).collect();
        let retained = projected.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let output = CVector::from_iterator(projected.len(), projected.iter().map(|a| a * gamma));
        Ok(Simulation { output, state, retained, input_norm: v.norm() })
    }

    /// `A v` by simulating the circuit: embed, run, project, rescale by the
    /// normalization.
    pub fn simulate(&self, v: &CVector) -> Result<CVector> {
        Ok(self.simulate_detailed(v)?.output)
    }

    /// Norm of the encoded vector obtained from the simulated state.
    pub fn simulate_norm(&self) -> Result<f64> {
        if !self.is_vector() {
            return Err(Error::NotAVector { rows: self.dim_out(), cols: self.dim_in() });
        }
        Ok(self.simulate(&CVector::from_element(1, ONE))?.norm())
    }

    /// Compares simulation against arithmetic on every input basis vector.
    pub fn verify(&self, tol: f64) -> Result<VerifyReport> {
        let expected = self.toarray()?;
        let mut report = VerifyReport { max_error: 0.0, worst_column: None, pass: true, tol };
        for k in 0..self.dim_in() {
            let got = self.simulate(&crate::linalg::basis_vector(self.dim_in(), k))?;
            let col = CMatrix::from_column_slice(got.len(), 1, got.as_slice());
            let want = expected.column(k).into_owned();
            let want = CMatrix::from_column_slice(want.len(), 1, want.as_slice());
            let err = max_abs_diff(&col, &want);
            if report.worst_column.is_none() || err > report.max_error {
                report.max_error = err;
                report.worst_column = Some(k);
            }
        }
        report.pass = report.max_error <= tol;
        Ok(report)
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        self.0
            .cache
            .norm
            .get_or_init(|| Ok(spectral_norm(&*self.toarray()?)))
            .clone()
    }

    /// `||A||_2 / gamma`.
    pub fn info_efficiency(&self) -> Result<f64> {
        Ok(self.spectral_norm()? / self.normalization())
    }

    /// Structural resource report. The information efficiency is filled in
    /// only when the dense matrix fits the budget.
    pub fn resources(&self) -> Result<ResourceReport> {
        self.0
            .cache
            .report
            .get_or_init(|| {
                let circuit = self.circuit()?;
                let eta = match budget().check_dense(self.dim_out(), self.dim_in()) {
                    Ok(()) => Some(self.info_efficiency()?),
                    Err(_) => None,
                };
                Ok(ResourceReport::new(&circuit, self.normalization(), eta, self.assumptions()))
            })
            .clone()
    }

    /// JSON expression `{"op", "args", "params"}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("op".into(), Value::String(self.kind().into()));
        let args: Vec<Value> = self.children().iter().map(Node::to_json).collect();
        if !args.is_empty() {
            m.insert("args".into(), Value::Array(args));
        }
        if let Value::Object(p) = self.0.op.params() {
            if !p.is_empty() {
                m.insert("params".into(), Value::Object(p));
            }
        }
        Value::Object(m)
    }
}
