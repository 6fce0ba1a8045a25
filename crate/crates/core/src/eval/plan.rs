//! Evaluation plans: name resolution, filter pushdown through products and
//! product-chain association by estimated cost.

use std::fmt;

use crate::expr::PathExpr;
use crate::matrix::{FilterSpec, Representation};
use crate::store::MultiRelTensor;

use super::EvalError;

/// Longest product chain reordered by dynamic programming; longer chains
/// keep their written association.
const MAX_DP_CHAIN: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum PlanOp {
    Slice(String),
    Filter(FilterSpec<usize>),
    MatMul,
    Transpose,
    Hadamard,
    Not,
    Clip,
    VOut(u64),
    VIn(u64),
    Scale(f64),
    Add,
}

impl fmt::Display for PlanOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanOp::Slice(l) => write!(f, "slice {l}"),
            PlanOp::Filter(s) => write!(f, "filter {s:?}"),
            PlanOp::MatMul => f.write_str("matmul"),
            PlanOp::Transpose => f.write_str("transpose"),
            PlanOp::Hadamard => f.write_str("hadamard"),
            PlanOp::Not => f.write_str("not"),
            PlanOp::Clip => f.write_str("clip"),
            PlanOp::VOut(p) => write!(f, "vout {p}"),
            PlanOp::VIn(p) => write!(f, "vin {p}"),
            PlanOp::Scale(l) => write!(f, "scale {l}"),
            PlanOp::Add => f.write_str("add"),
        }
    }
}

/// One operation of a plan. `inputs` index earlier steps.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanStep {
    pub op: PlanOp,
    pub inputs: Vec<usize>,
    /// Expected storage form of the result.
    pub repr: Representation,
    pub est_nnz: f64,
    /// Estimated multiply-adds; nonzero only for products.
    pub est_flops: f64,
}

/// Operations in post-order; the last step is the result.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPlan {
    pub n: usize,
    pub steps: Vec<PlanStep>,
}

impl EvalPlan {
    pub fn root(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn total_flops(&self) -> f64 {
        self.steps.iter().map(|s| s.est_flops).sum()
    }

    /// Indices of product steps.
    pub fn products(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.steps.len()).filter(|&i| self.steps[i].op == PlanOp::MatMul)
    }
}

impl fmt::Display for EvalPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let inputs: Vec<String> = s.inputs.iter().map(|k| format!("%{k}")).collect();
            writeln!(
                f,
                "%{i} = {} {}  [{} nnz~{:.0} flops~{:.0}]",
                s.op,
                inputs.join(" "),
                s.repr,
                s.est_nnz,
                s.est_flops
            )?;
        }
        Ok(())
    }
}

/// Row and column nonzero counts, the statistics cost estimates use.
#[derive(Debug, Clone)]
struct Profile {
    rows: Vec<f64>,
    cols: Vec<f64>,
    complement: bool,
}

impl Profile {
    fn nnz(&self) -> f64 {
        self.rows.iter().sum()
    }

    fn uniform(n: usize, per_row: f64, complement: bool) -> Self {
        Profile {
            rows: vec![per_row; n],
            cols: vec![per_row; n],
            complement,
        }
    }

    fn transpose(self) -> Self {
        Profile {
            rows: self.cols,
            cols: self.rows,
            complement: self.complement,
        }
    }

    fn product(&self, b: &Profile) -> (Profile, f64) {
        let n = self.rows.len() as f64;
        let flops: f64 = self.cols.iter().zip(&b.rows).map(|(c, r)| c * r).sum();
        let (a_total, b_total): (f64, f64) = (self.cols.iter().sum(), b.rows.iter().sum());
        let fan_out = if a_total > 0.0 { flops / a_total } else { 0.0 };
        let fan_in = if b_total > 0.0 { flops / b_total } else { 0.0 };
        let p = Profile {
            rows: self.rows.iter().map(|r| (r * fan_out).min(n)).collect(),
            cols: b.cols.iter().map(|c| (c * fan_in).min(n)).collect(),
            complement: false,
        };
        (p, flops)
    }

    fn zip(&self, b: &Profile, f: impl Fn(f64, f64) -> f64, complement: bool) -> Profile {
        Profile {
            rows: self.rows.iter().zip(&b.rows).map(|(x, y)| f(*x, *y)).collect(),
            cols: self.cols.iter().zip(&b.cols).map(|(x, y)| f(*x, *y)).collect(),
            complement,
        }
    }
}

/// Expression with names resolved to ids.
#[derive(Debug, Clone)]
enum Node {
    Leaf(PlanOp),
    Unary(PlanOp, Box<Node>),
    Binary(PlanOp, Box<Node>, Box<Node>),
}

fn resolve(e: &PathExpr, t: &MultiRelTensor) -> Result<Node, EvalError> {
    let dict = t.vertices();
    let b = |x: &PathExpr| resolve(x, t).map(Box::new);
    Ok(match e {
        PathExpr::Slice(l) => {
            t.slice(l)?;
            Node::Leaf(PlanOp::Slice(l.clone()))
        }
        PathExpr::Filter(f) => Node::Leaf(PlanOp::Filter(
            f.try_map(|v| dict.id(v).ok_or_else(|| EvalError::UnknownVertex(v.clone())))?,
        )),
        PathExpr::MatMul(x, y) => Node::Binary(PlanOp::MatMul, b(x)?, b(y)?),
        PathExpr::Hadamard(x, y) => Node::Binary(PlanOp::Hadamard, b(x)?, b(y)?),
        PathExpr::Add(x, y) => Node::Binary(PlanOp::Add, b(x)?, b(y)?),
        PathExpr::Transpose(x) => Node::Unary(PlanOp::Transpose, b(x)?),
        PathExpr::Not(x) => Node::Unary(PlanOp::Not, b(x)?),
        PathExpr::Clip(x) => Node::Unary(PlanOp::Clip, b(x)?),
        PathExpr::VOut(x, p) => Node::Unary(PlanOp::VOut(*p), b(x)?),
        PathExpr::VIn(x, p) => Node::Unary(PlanOp::VIn(*p), b(x)?),
        PathExpr::Scale(s, x) => Node::Unary(PlanOp::Scale(s.get()), b(x)?),
    })
}

fn is_exact(node: &Node) -> bool {
    match node {
        Node::Leaf(_) => true,
        Node::Unary(PlanOp::Scale(l), x) => l.fract() == 0.0 && is_exact(x),
        Node::Unary(_, x) => is_exact(x),
        Node::Binary(_, x, y) => is_exact(x) && is_exact(y),
    }
}

fn row_or_col(node: &Node) -> Option<&FilterSpec<usize>> {
    match node {
        Node::Leaf(PlanOp::Filter(f @ (FilterSpec::Row(_) | FilterSpec::Col(_)))) => Some(f),
        _ => None,
    }
}

/// Moves row and column filters below the product they mask:
/// `(a . b) & R(i) = (a & R(i)) . b` and `(a . b) & C(j) = a . (b & C(j))`.
fn push_filters(node: Node) -> Node {
    match node {
        Node::Leaf(_) => node,
        Node::Unary(op, x) => Node::Unary(op, Box::new(push_filters(*x))),
        Node::Binary(PlanOp::Hadamard, x, y) => {
            let (x, y) = (push_filters(*x), push_filters(*y));
            let pushable = |p: &Node, f: &Node| {
                matches!(p, Node::Binary(PlanOp::MatMul, ..))
                    && row_or_col(f).is_some()
                    && is_exact(p)
            };
            let (prod, filter) = if pushable(&x, &y) {
                (x, y)
            } else if pushable(&y, &x) {
                (y, x)
            } else {
                return Node::Binary(PlanOp::Hadamard, Box::new(x), Box::new(y));
            };
            let Node::Binary(_, a, b) = prod else { unreachable!() };
            let mask = |m: Box<Node>| {
                Box::new(push_filters(Node::Binary(
                    PlanOp::Hadamard,
                    m,
                    Box::new(filter.clone()),
                )))
            };
            match row_or_col(&filter) {
                Some(FilterSpec::Row(_)) => Node::Binary(PlanOp::MatMul, mask(a), b),
                _ => Node::Binary(PlanOp::MatMul, a, mask(b)),
            }
        }
        Node::Binary(op, x, y) => {
            Node::Binary(op, Box::new(push_filters(*x)), Box::new(push_filters(*y)))
        }
    }
}

struct Builder<'a> {
    t: &'a MultiRelTensor,
    n: usize,
    steps: Vec<PlanStep>,
    profiles: Vec<Profile>,
}

impl Builder<'_> {
    fn push(&mut self, op: PlanOp, inputs: Vec<usize>, profile: Profile, flops: f64) -> usize {
        self.steps.push(PlanStep {
            op,
            inputs,
            repr: if profile.complement {
                Representation::BoolComplement
            } else {
                Representation::Sparse
            },
            est_nnz: profile.nnz(),
            est_flops: flops,
        });
        self.profiles.push(profile);
        self.steps.len() - 1
    }

    fn leaf_profile(&self, op: &PlanOp) -> Profile {
        let n = self.n;
        let nf = n as f64;
        match op {
            PlanOp::Slice(l) => {
                let mut p = Profile::uniform(n, 0.0, false);
                for &(i, j) in self.t.slice(l).expect("resolved").pairs() {
                    p.rows[i] += 1.0;
                    p.cols[j] += 1.0;
                }
                p
            }
            PlanOp::Filter(f) => match *f {
                FilterSpec::Identity => Profile::uniform(n, 1.0, false),
                FilterSpec::Ones => Profile::uniform(n, nf, true),
                FilterSpec::Zeros => Profile::uniform(n, 0.0, false),
                FilterSpec::Row(i) => {
                    let mut p = Profile::uniform(n, 0.0, false);
                    p.rows[i] = nf;
                    p.cols = vec![1.0; n];
                    p
                }
                FilterSpec::Col(j) => {
                    let mut p = Profile::uniform(n, 0.0, false);
                    p.cols[j] = nf;
                    p.rows = vec![1.0; n];
                    p
                }
                FilterSpec::Entry(i, j) => {
                    let mut p = Profile::uniform(n, 0.0, false);
                    p.rows[i] = 1.0;
                    p.cols[j] = 1.0;
                    p
                }
            },
            _ => unreachable!("not a leaf"),
        }
    }

    fn unary_profile(&self, op: &PlanOp, x: &Profile) -> Profile {
        let nf = self.n as f64;
        let full_lines = |sums: &[f64]| {
            let k = sums.iter().filter(|&&s| s > 0.0).count() as f64;
            let lines: Vec<f64> = sums.iter().map(|&s| if s > 0.0 { nf } else { 0.0 }).collect();
            (lines, vec![k; sums.len()], k > nf - k)
        };
        match op {
            PlanOp::Transpose => x.clone().transpose(),
            PlanOp::Not => Profile {
                rows: x.rows.iter().map(|r| nf - r).collect(),
                cols: x.cols.iter().map(|c| nf - c).collect(),
                complement: !x.complement,
            },
            PlanOp::Clip => x.clone(),
            PlanOp::Scale(_) => Profile {
                complement: false,
                ..x.clone()
            },
            PlanOp::VOut(_) => {
                let (rows, cols, complement) = full_lines(&x.rows);
                Profile {
                    rows,
                    cols,
                    complement,
                }
            }
            PlanOp::VIn(_) => {
                let (cols, rows, complement) = full_lines(&x.cols);
                Profile {
                    rows,
                    cols,
                    complement,
                }
            }
            _ => unreachable!("not unary"),
        }
    }

    /// Emits steps for `node`, returning the index of its result.
    fn emit(&mut self, node: &Node, reorder: bool) -> usize {
        match node {
            Node::Leaf(op) => {
                let p = self.leaf_profile(op);
                self.push(op.clone(), vec![], p, 0.0)
            }
            Node::Unary(op, x) => {
                let i = self.emit(x, reorder);
                let p = self.unary_profile(op, &self.profiles[i]);
                self.push(op.clone(), vec![i], p, 0.0)
            }
            Node::Binary(PlanOp::MatMul, ..) => {
                let mut factors = Vec::new();
                flatten_chain(node, &mut factors);
                let exact = reorder && factors.iter().all(|f| is_exact(f));
                let ids: Vec<usize> = factors.iter().map(|f| self.emit(f, reorder)).collect();
                if exact && ids.len() > 2 && ids.len() <= MAX_DP_CHAIN {
                    let order = self.best_order(&ids);
                    self.emit_order(&order, &ids)
                } else {
                    self.emit_written(node, &ids, &mut 0)
                }
            }
            Node::Binary(op, x, y) => {
                let (i, j) = (self.emit(x, reorder), self.emit(y, reorder));
                let (a, b) = (&self.profiles[i], &self.profiles[j]);
                let nf = self.n as f64;
                let p = match op {
                    PlanOp::Hadamard => a.zip(b, f64::min, a.complement && b.complement),
                    _ => a.zip(b, |x, y| (x + y).min(nf), false),
                };
                self.push(op.clone(), vec![i, j], p, 0.0)
            }
        }
    }

    fn product(&mut self, i: usize, j: usize) -> usize {
        let (p, flops) = self.profiles[i].product(&self.profiles[j]);
        self.push(PlanOp::MatMul, vec![i, j], p, flops)
    }

    /// Reproduces the association as written.
    fn emit_written(&mut self, node: &Node, ids: &[usize], next: &mut usize) -> usize {
        match node {
            Node::Binary(PlanOp::MatMul, x, y) => {
                let i = self.emit_written(x, ids, next);
                let j = self.emit_written(y, ids, next);
                self.product(i, j)
            }
            _ => {
                *next += 1;
                ids[*next - 1]
            }
        }
    }

    /// Classic matrix-chain dynamic program over estimated flops.
    fn best_order(&self, ids: &[usize]) -> Split {
        let k = ids.len();
        let mut cost = vec![vec![0.0f64; k]; k];
        let mut prof: Vec<Vec<Option<Profile>>> = vec![vec![None; k]; k];
        let mut split = vec![vec![0usize; k]; k];
        for (i, &id) in ids.iter().enumerate() {
            prof[i][i] = Some(self.profiles[id].clone());
        }
        for len in 2..=k {
            for i in 0..=k - len {
                let j = i + len - 1;
                let mut best: Option<(f64, usize, Profile)> = None;
                for s in i..j {
                    let (l, r) = (prof[i][s].as_ref().unwrap(), prof[s + 1][j].as_ref().unwrap());
                    let (p, flops) = l.product(r);
                    let c = cost[i][s] + cost[s + 1][j] + flops;
                    // strict comparison keeps the leftmost split on ties
                    if best.as_ref().map_or(true, |(b, _, _)| c < *b) {
                        best = Some((c, s, p));
                    }
                }
                let (c, s, p) = best.expect("nonempty range");
                cost[i][j] = c;
                split[i][j] = s;
                prof[i][j] = Some(p);
            }
        }
        fn build(split: &[Vec<usize>], i: usize, j: usize) -> Split {
            if i == j {
                Split::Factor(i)
            } else {
                let s = split[i][j];
                Split::Product(Box::new(build(split, i, s)), Box::new(build(split, s + 1, j)))
            }
        }
        build(&split, 0, k - 1)
    }

    fn emit_order(&mut self, order: &Split, ids: &[usize]) -> usize {
        match order {
            Split::Factor(i) => ids[*i],
            Split::Product(l, r) => {
                let i = self.emit_order(l, ids);
                let j = self.emit_order(r, ids);
                self.product(i, j)
            }
        }
    }
}

enum Split {
    Factor(usize),
    Product(Box<Split>, Box<Split>),
}

fn flatten_chain<'a>(node: &'a Node, out: &mut Vec<&'a Node>) {
    match node {
        Node::Binary(PlanOp::MatMul, x, y) => {
            flatten_chain(x, out);
            flatten_chain(y, out);
        }
        _ => out.push(node),
    }
}

/// Builds the evaluation plan for `e`.
///
/// Filter pushdown and product reassociation are applied only to subtrees
/// evaluated in exact integer arithmetic, so the planned result is
/// identical to [`evaluate_naive`](super::evaluate_naive).
pub fn plan(e: &PathExpr, t: &MultiRelTensor) -> Result<EvalPlan, EvalError> {
    let node = push_filters(resolve(e, t)?);
    Ok(build(&node, t, true))
}

/// The plan that evaluates `e` exactly as written.
pub fn naive_plan(e: &PathExpr, t: &MultiRelTensor) -> Result<EvalPlan, EvalError> {
    Ok(build(&resolve(e, t)?, t, false))
}

fn build(node: &Node, t: &MultiRelTensor, reorder: bool) -> EvalPlan {
    let mut b = Builder {
        t,
        n: t.n(),
        steps: Vec::new(),
        profiles: Vec::new(),
    };
    b.emit(node, reorder);
    EvalPlan {
        n: t.n(),
        steps: b.steps,
    }
}
