//! Randomized soundness checks for rewrite rules.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pattern::Bindings;
use super::rules::{Guard, RewriteRule};
use crate::eval::evaluate_naive;
use crate::expr::{PathExpr, Pattern, Scalar, Term};
use crate::matrix::FilterSpec;
use crate::store::MultiRelTensor;

/// Relative tolerance for comparing real-valued sides.
const TOLERANCE: f64 = 1e-9;

/// A binding under which the two sides of a rule evaluate differently.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub lhs: PathExpr,
    pub rhs: PathExpr,
    pub tensor: String,
}

#[derive(Default)]
struct Metas {
    exprs: Vec<String>,
    vertices: Vec<String>,
    scalars: Vec<String>,
    ints: Vec<String>,
}

fn push(v: &mut Vec<String>, m: &str) {
    if !v.iter().any(|x| x == m) {
        v.push(m.to_string());
    }
}

fn collect(p: &Pattern, out: &mut Metas) {
    match p {
        Pattern::Meta(m) => push(&mut out.exprs, m),
        Pattern::Slice(_) => {}
        Pattern::Filter(f) => {
            let _ = f.try_map(|t| -> Result<(), ()> {
                if let Term::Meta(m) = t {
                    push(&mut out.vertices, m);
                }
                Ok(())
            });
        }
        Pattern::MatMul(a, b) | Pattern::Hadamard(a, b) | Pattern::Add(a, b) => {
            collect(a, out);
            collect(b, out);
        }
        Pattern::Transpose(a) | Pattern::Not(a) | Pattern::Clip(a) => collect(a, out),
        Pattern::VOut(a, p) | Pattern::VIn(a, p) => {
            collect(a, out);
            if let Term::Meta(m) = p {
                push(&mut out.ints, m);
            }
        }
        Pattern::Scale(s, a) => {
            if let Term::Meta(m) = s {
                push(&mut out.scalars, m);
            }
            collect(a, out);
        }
    }
}

fn metas(r: &RewriteRule) -> Metas {
    let mut m = Metas::default();
    collect(&r.lhs, &mut m);
    m
}

const SCALARS: [f64; 3] = [0.0, 0.5, 2.0];
const INTS: [u64; 3] = [0, 1, 2];

fn vertex(k: usize) -> String {
    format!("v{k}")
}

/// Every assignment of the non-expression metavariables over `n` vertices.
fn enumerate_leaves(m: &Metas, n: usize) -> Vec<Bindings> {
    let mut out = vec![Bindings::default()];
    for v in &m.vertices {
        out = out
            .into_iter()
            .flat_map(|b| {
                (0..n).map(move |k| {
                    let mut b = b.clone();
                    b.vertices.insert(v.clone(), vertex(k));
                    b
                })
            })
            .collect();
    }
    for s in &m.scalars {
        out = out
            .into_iter()
            .flat_map(|b| {
                SCALARS.iter().map(move |&x| {
                    let mut b = b.clone();
                    b.scalars.insert(s.clone(), Scalar::new(x).expect("valid scalar"));
                    b
                })
            })
            .collect();
    }
    for i in &m.ints {
        out = out
            .into_iter()
            .flat_map(|b| {
                INTS.iter().map(move |&x| {
                    let mut b = b.clone();
                    b.ints.insert(i.clone(), x);
                    b
                })
            })
            .collect();
    }
    out
}

fn distinct_ok(r: &RewriteRule, b: &Bindings) -> bool {
    r.guards.iter().all(|g| match g {
        Guard::Distinct(i, j) => b.vertices.get(i) != b.vertices.get(j),
        Guard::Boolean(_) => true,
    })
}

/// Evaluates both sides under `b`. Both failing counts as agreement.
fn agree(r: &RewriteRule, b: &Bindings, t: &MultiRelTensor) -> Result<(), Counterexample> {
    let (Some(lhs), Some(rhs)) = (
        super::pattern::instantiate(&r.lhs, b),
        super::pattern::instantiate(&r.rhs, b),
    ) else {
        return Ok(());
    };
    let same = match (evaluate_naive(&lhs, t), evaluate_naive(&rhs, t)) {
        (Ok(x), Ok(y)) => {
            if x.is_exact() && y.is_exact() {
                x == y
            } else {
                x.approx_eq(&y, TOLERANCE)
            }
        }
        (Err(_), Err(_)) => true,
        _ => false,
    };
    if same {
        Ok(())
    } else {
        Err(Counterexample {
            lhs,
            rhs,
            tensor: t.to_tsv(),
        })
    }
}

fn tensor(n: usize, labels: &[String], edges: &[(usize, usize, usize)]) -> MultiRelTensor {
    let mut b = MultiRelTensor::builder();
    for k in 0..n {
        b.vertex(&vertex(k));
    }
    for l in labels {
        b.label(l);
    }
    for &(i, l, j) in edges {
        b.edge_ids(i, &labels[l], j);
    }
    b.build().expect("labels declared")
}

/// Every pair of 2×2 {0,1} slices bound to up to two metavariables.
fn exhaustive(r: &RewriteRule, m: &Metas) -> Result<(), Counterexample> {
    let k = m.exprs.len();
    let labels: Vec<String> = (0..k.max(1)).map(|i| format!("m{i}")).collect();
    let leaves = enumerate_leaves(m, 2);
    for code in 0..16usize.pow(k as u32) {
        let mut edges = Vec::new();
        for (l, _) in m.exprs.iter().enumerate() {
            let bits = (code >> (4 * l)) & 0xf;
            for cell in 0..4 {
                if bits >> cell & 1 == 1 {
                    edges.push((cell / 2, l, cell % 2));
                }
            }
        }
        let t = tensor(2, &labels, &edges);
        for leaf in &leaves {
            let mut b = leaf.clone();
            for (l, name) in m.exprs.iter().enumerate() {
                b.exprs.insert(name.clone(), PathExpr::slice(&labels[l]));
            }
            if distinct_ok(r, &b) && r.guards_hold(&b) {
                agree(r, &b, &t)?;
            }
        }
    }
    Ok(())
}

fn random_boolean(rng: &mut ChaCha8Rng, labels: &[String], n: usize) -> PathExpr {
    let s = |rng: &mut ChaCha8Rng| PathExpr::slice(labels.choose(rng).expect("labels"));
    let v = |rng: &mut ChaCha8Rng| vertex(rng.gen_range(0..n));
    match rng.gen_range(0..10) {
        0 | 1 => s(rng),
        2 => s(rng).t(),
        3 => s(rng).not(),
        4 => s(rng).matmul(s(rng)).clip(),
        5 => s(rng).vout(rng.gen_range(0..3)),
        6 => s(rng).vin(rng.gen_range(0..3)),
        7 => s(rng).hadamard(s(rng)),
        8 => PathExpr::Filter(match rng.gen_range(0..4) {
            0 => FilterSpec::Row(v(rng)),
            1 => FilterSpec::Col(v(rng)),
            2 => FilterSpec::Entry(v(rng), v(rng)),
            _ => FilterSpec::Identity,
        }),
        _ => s(rng).not().hadamard(s(rng)),
    }
}

fn random_any(rng: &mut ChaCha8Rng, labels: &[String], n: usize) -> PathExpr {
    let s = |rng: &mut ChaCha8Rng| PathExpr::slice(labels.choose(rng).expect("labels"));
    match rng.gen_range(0..6) {
        0 => s(rng).matmul(s(rng)),
        1 => s(rng).scale(2.0).add(s(rng)),
        2 => s(rng).scale(0.5),
        3 => s(rng).add(s(rng)),
        _ => random_boolean(rng, labels, n),
    }
}

fn random_trial(r: &RewriteRule, m: &Metas, rng: &mut ChaCha8Rng) -> Result<(), Counterexample> {
    let n = rng.gen_range(1..=8);
    let labels: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("s{i}")).collect();
    let density: f64 = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for l in 0..labels.len() {
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(density) {
                    edges.push((i, l, j));
                }
            }
        }
    }
    let t = tensor(n, &labels, &edges);
    let boolean: Vec<&String> = r
        .guards
        .iter()
        .filter_map(|g| match g {
            Guard::Boolean(x) => Some(x),
            Guard::Distinct(..) => None,
        })
        .collect();
    for _ in 0..8 {
        let mut b = Bindings::default();
        for e in &m.exprs {
            let x = if boolean.contains(&e) {
                random_boolean(rng, &labels, n)
            } else {
                random_any(rng, &labels, n)
            };
            b.exprs.insert(e.clone(), x);
        }
        for v in &m.vertices {
            b.vertices.insert(v.clone(), vertex(rng.gen_range(0..n)));
        }
        for s in &m.scalars {
            let x = rng.gen_range(0.0..3.0);
            b.scalars.insert(s.clone(), Scalar::new(x).expect("valid scalar"));
        }
        for i in &m.ints {
            b.ints.insert(i.clone(), rng.gen_range(0..4));
        }
        if distinct_ok(r, &b) && r.guards_hold(&b) {
            return agree(r, &b, &t);
        }
    }
    Ok(())
}

/// Checks `lhs = rhs` for a rule: exhaustively over 2×2 {0,1} slices when
/// it has at most two expression metavariables, then on `trials` random
/// tensors (n ≤ 8) with random subexpressions bound to its metavariables.
pub fn check_rule(r: &RewriteRule, trials: usize, seed: u64) -> Result<(), Counterexample> {
    let m = metas(r);
    if m.exprs.len() <= 2 {
        exhaustive(r, &m)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        random_trial(r, &m, &mut rng)?;
    }
    Ok(())
}

/// Whether the rule survived [`check_rule`] with a fixed seed.
pub fn verify_rule(r: &RewriteRule, trials: usize) -> bool {
    check_rule(r, trials, 0x5eed).is_ok()
}
