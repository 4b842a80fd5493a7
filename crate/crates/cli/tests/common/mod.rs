//! Random block-encoding DAGs paired with independently built dense
//! matrices and expected normalizations.

#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use blockenc::primitives::{constant_vector, identity_dim, increment, permutation, qft};
use blockenc::{CMatrix, Node, ProductCheck, SliceSpec, C64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone)]
pub struct Sample {
    pub node: Node,
    pub dense: CMatrix,
    /// Normalization predicted from the children by the structural rule.
    pub gamma: f64,
    pub rule: &'static str,
}

pub struct Corpus {
    rng: ChaCha8Rng,
    pool: HashMap<(usize, usize), Vec<Sample>>,
    /// Every sample built, children before parents.
    pub samples: Vec<Sample>,
    pub roots: Vec<Sample>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.nrows() * b.nrows(), a.ncols() * b.ncols(), |i, j| {
        a[(i / b.nrows(), j / b.ncols())] * b[(i % b.nrows(), j % b.ncols())]
    })
}

fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

fn pick(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

fn shift(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn dft(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| C64::from_polar(s, 2.0 * PI * (j * k) as f64 / n as f64))
}

/// A slice spec selecting `want` of `len` indices, with the indices it
/// selects worked out by hand.
fn slice_choice(rng: &mut ChaCha8Rng, len: usize, want: usize) -> (SliceSpec, Vec<usize>) {
    let mut options: Vec<(SliceSpec, Vec<usize>)> = vec![(SliceSpec::to(want as i64), (0..want).collect())];
    let start = len - want;
    options.push((SliceSpec::new(Some(start as i64), None, None), (start..len).collect()));
    if want < len {
        let drop = (len - want) as i64;
        options.push((SliceSpec::new(None, Some(-drop), None), (0..want).collect()));
    }
    if want == len {
        options.push((SliceSpec::new(None, None, Some(-1)), (0..len).rev().collect()));
    }
    if want == len.div_ceil(2) && len > 1 {
        options.push((SliceSpec::new(None, None, Some(2)), (0..len).step_by(2).collect()));
    }
    if want == len / 2 && want > 0 {
        options.push((SliceSpec::new(Some(1), None, Some(2)), (1..len).step_by(2).collect()));
    }
    options.swap_remove(rng.gen_range(0..options.len()))
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed), pool: HashMap::new(), samples: Vec::new(), roots: Vec::new() }
    }

    /// Adds `count` random roots with up to `max_dim` rows and columns.
    pub fn grow(&mut self, count: usize, max_dim: usize, depth: usize) {
        for _ in 0..count {
            let r = self.rng.gen_range(1..=max_dim);
            let cl = self.rng.gen_range(1..=max_dim);
            let root = self.gen(r, cl, depth);
            self.roots.push(root);
        }
    }

    fn keep(&mut self, s: Sample) -> Sample {
        self.pool.entry((s.dense.nrows(), s.dense.ncols())).or_default().push(s.clone());
        self.samples.push(s.clone());
        s
    }

    fn complex(&mut self) -> C64 {
        c(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    fn leaf(&mut self, r: usize, cl: usize) -> Sample {
        if r == cl {
            let mut choices = vec!["identity", "permutation"];
            if r.is_power_of_two() && r > 1 {
                choices.extend(["increment", "qft"]);
            }
            if r == 1 {
                choices.push("vector");
            }
            let s = match *choices.choose(&mut self.rng).unwrap() {
                "identity" => Sample {
                    node: identity_dim(r).unwrap(),
                    dense: CMatrix::identity(r, r),
                    gamma: 1.0,
                    rule: "leaf",
                },
                "permutation" => {
                    let mut table: Vec<usize> = (0..r).collect();
                    table.shuffle(&mut self.rng);
                    let dense = CMatrix::from_fn(r, r, |i, j| if table[j] == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
                    Sample { node: permutation(table).unwrap(), dense, gamma: 1.0, rule: "leaf" }
                }
                "increment" => Sample {
                    node: increment(r.trailing_zeros() as usize).unwrap(),
                    dense: shift(r),
                    gamma: 1.0,
                    rule: "leaf",
                },
                "qft" => Sample {
                    node: qft(r.trailing_zeros() as usize).unwrap(),
                    dense: dft(r),
                    gamma: 1.0,
                    rule: "leaf",
                },
                _ => self.vector(r),
            };
            return self.keep(s);
        }
        if cl == 1 {
            let s = self.vector(r);
            return self.keep(s);
        }
        if r == 1 {
            let v = self.vector(cl);
            let v = self.keep(v);
            return self.adjoint(v);
        }
        let n = r.max(cl);
        let square = self.leaf(n, n);
        self.slice(square, r, cl)
    }

    fn vector(&mut self, r: usize) -> Sample {
        let entries: Vec<C64> = (0..r).map(|_| self.complex()).collect();
        let norm = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Sample {
            node: constant_vector(entries.clone()).unwrap(),
            dense: CMatrix::from_column_slice(r, 1, &entries),
            gamma: norm,
            rule: "leaf",
        }
    }

    fn adjoint(&mut self, a: Sample) -> Sample {
        let s = Sample { node: a.node.adjoint(), dense: a.dense.adjoint(), gamma: a.node.normalization(), rule: "adjoint" };
        self.keep(s)
    }

    fn slice(&mut self, a: Sample, r: usize, cl: usize) -> Sample {
        let (rs, ri) = slice_choice(&mut self.rng, a.dense.nrows(), r);
        let (cs, ci) = slice_choice(&mut self.rng, a.dense.ncols(), cl);
        let s = Sample {
            node: a.node.slice(rs, cs).unwrap(),
            dense: pick(&a.dense, &ri, &ci),
            gamma: a.node.normalization(),
            rule: "slice",
        };
        self.keep(s)
    }

    fn divisors(n: usize) -> Vec<(usize, usize)> {
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d, n / d)).collect()
    }

    fn gen(&mut self, r: usize, cl: usize, depth: usize) -> Sample {
        if let Some(existing) = self.pool.get(&(r, cl)) {
            if !existing.is_empty() && self.rng.gen_bool(0.15) {
                return existing[self.rng.gen_range(0..existing.len())].clone();
            }
        }
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.leaf(r, cl);
        }
        let d = depth - 1;
        let mut ops = vec!["add", "sub", "matmul", "scale", "adjoint", "slice"];
        let tensor_splits: Vec<_> = Self::divisors(r)
            .into_iter()
            .flat_map(|(r1, r2)| Self::divisors(cl).into_iter().map(move |(c1, c2)| (r1, c1, r2, c2)))
            .filter(|&(r1, c1, r2, c2)| (r1, c1) != (1, 1) && (r2, c2) != (1, 1))
            .collect();
        if !tensor_splits.is_empty() {
            ops.push("tensor");
        }
        if r >= 2 && cl >= 2 {
            ops.push("blockdiag");
        }
        match *ops.choose(&mut self.rng).unwrap() {
            "add" | "sub" => {
                let sub = self.rng.gen_bool(0.3);
                let a = self.gen(r, cl, d);
                let b = self.gen(r, cl, d);
                let s = if sub {
                    Sample {
                        node: a.node.minus(&b.node).unwrap(),
                        dense: &a.dense - &b.dense,
                        gamma: a.node.normalization() + b.node.normalization(),
                        rule: "sub",
                    }
                } else {
                    Sample {
                        node: a.node.plus(&b.node).unwrap(),
                        dense: &a.dense + &b.dense,
                        gamma: a.node.normalization() + b.node.normalization(),
                        rule: "add",
                    }
                };
                self.keep(s)
            }
            "matmul" => {
                let k = self.rng.gen_range(1..=4);
                let a = self.gen(r, k, d);
                let b = self.gen(k, cl, d);
                let check = if self.rng.gen_bool(0.2) { ProductCheck::Always } else { ProductCheck::Auto };
                let s = Sample {
                    node: a.node.matmul_with(&b.node, check).unwrap(),
                    dense: &a.dense * &b.dense,
                    gamma: a.node.normalization() * b.node.normalization(),
                    rule: "matmul",
                };
                self.keep(s)
            }
            "scale" => {
                let a = self.gen(r, cl, d);
                let k = match self.rng.gen_range(0..10) {
                    0 => c(0.0, 0.0),
                    1 => c(-2.0, 0.0),
                    _ => self.complex() * 2.0,
                };
                let gamma = if k == c(0.0, 0.0) { 1.0 } else { k.norm() * a.node.normalization() };
                let s = Sample { node: a.node.scale(k), dense: &a.dense * k, gamma, rule: "scale" };
                self.keep(s)
            }
            "adjoint" => {
                let a = self.gen(cl, r, d);
                self.adjoint(a)
            }
            "slice" => {
                let pr = self.rng.gen_range(r..=r.max(4));
                let pc = self.rng.gen_range(cl..=cl.max(4));
                let a = self.gen(pr, pc, d);
                self.slice(a, r, cl)
            }
            "tensor" => {
                let (r1, c1, r2, c2) = *tensor_splits.choose(&mut self.rng).unwrap();
                let a = self.gen(r1, c1, d);
                let b = self.gen(r2, c2, d);
                let s = Sample {
                    node: a.node.tensor(&b.node),
                    dense: kron(&a.dense, &b.dense),
                    gamma: a.node.normalization() * b.node.normalization(),
                    rule: "tensor",
                };
                self.keep(s)
            }
            _ => {
                let r1 = self.rng.gen_range(1..r);
                let c1 = self.rng.gen_range(1..cl);
                let a = self.gen(r1, c1, d);
                let b = self.gen(r - r1, cl - c1, d);
                let s = Sample {
                    node: a.node.block_diag(&b.node),
                    dense: direct_sum(&a.dense, &b.dense),
                    gamma: a.node.normalization().max(b.node.normalization()),
                    rule: "blockdiag",
                };
                self.keep(s)
            }
        }
    }
}

/// A random `n x n` block with generic singular values: a complex
/// combination of shifts, DFTs and permutations.
pub fn random_square_block(rng: &mut ChaCha8Rng, n: usize) -> Node {
    let bits = n.trailing_zeros() as usize;
    let mut acc = increment(bits).unwrap().scale(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    for k in 0..3 {
        let mut table: Vec<usize> = (0..n).collect();
        table.shuffle(rng);
        let u = if k % 2 == 0 { qft(bits).unwrap() } else { increment(bits).unwrap().adjoint() };
        let term = permutation(table).unwrap().matmul(&u).unwrap();
        acc = acc.plus(&term.scale(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).unwrap();
    }
    acc
}
