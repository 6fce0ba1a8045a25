//! Matching expressions against rule patterns and instantiating patterns.

use std::collections::HashMap;

use crate::expr::{PathExpr, Pattern, Scalar, Term};
use crate::matrix::FilterSpec;

/// Values bound to metavariables by a successful match.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    pub exprs: HashMap<String, PathExpr>,
    pub vertices: HashMap<String, String>,
    pub scalars: HashMap<String, Scalar>,
    pub ints: HashMap<String, u64>,
}

fn bind<T: Clone + PartialEq>(map: &mut HashMap<String, T>, t: &Term<T>, v: &T) -> bool {
    match t {
        Term::Lit(l) => l == v,
        Term::Meta(m) => match map.get(m) {
            Some(bound) => bound == v,
            None => {
                map.insert(m.clone(), v.clone());
                true
            }
        },
    }
}

fn filter_matches(p: &FilterSpec<Term<String>>, f: &FilterSpec<String>, b: &mut Bindings) -> bool {
    use FilterSpec::*;
    match (p, f) {
        (Row(x), Row(y)) | (Col(x), Col(y)) => bind(&mut b.vertices, x, y),
        (Entry(x1, x2), Entry(y1, y2)) => {
            bind(&mut b.vertices, x1, y1) && bind(&mut b.vertices, x2, y2)
        }
        (Identity, Identity) | (Ones, Ones) | (Zeros, Zeros) => true,
        _ => false,
    }
}

/// Matches `e` against `p` at the root, extending `b`. Repeated
/// metavariables must bind equal values. On failure `b` may hold partial
/// bindings.
pub fn match_into(p: &Pattern, e: &PathExpr, b: &mut Bindings) -> bool {
    match (p, e) {
        (Pattern::Meta(m), _) => match b.exprs.get(m) {
            Some(bound) => bound == e,
            None => {
                b.exprs.insert(m.clone(), e.clone());
                true
            }
        },
        (Pattern::Slice(x), PathExpr::Slice(y)) => x == y,
        (Pattern::Filter(x), PathExpr::Filter(y)) => filter_matches(x, y, b),
        (Pattern::MatMul(p1, p2), PathExpr::MatMul(e1, e2))
        | (Pattern::Hadamard(p1, p2), PathExpr::Hadamard(e1, e2))
        | (Pattern::Add(p1, p2), PathExpr::Add(e1, e2)) => {
            match_into(p1, e1, b) && match_into(p2, e2, b)
        }
        (Pattern::Transpose(p1), PathExpr::Transpose(e1))
        | (Pattern::Not(p1), PathExpr::Not(e1))
        | (Pattern::Clip(p1), PathExpr::Clip(e1)) => match_into(p1, e1, b),
        (Pattern::VOut(p1, t), PathExpr::VOut(e1, v)) | (Pattern::VIn(p1, t), PathExpr::VIn(e1, v)) => {
            bind(&mut b.ints, t, v) && match_into(p1, e1, b)
        }
        (Pattern::Scale(t, p1), PathExpr::Scale(s, e1)) => {
            bind(&mut b.scalars, t, s) && match_into(p1, e1, b)
        }
        _ => false,
    }
}

pub fn matches(p: &Pattern, e: &PathExpr) -> Option<Bindings> {
    let mut b = Bindings::default();
    match_into(p, e, &mut b).then_some(b)
}

fn term<T: Clone>(t: &Term<T>, map: &HashMap<String, T>) -> Option<T> {
    match t {
        Term::Lit(v) => Some(v.clone()),
        Term::Meta(m) => map.get(m).cloned(),
    }
}

/// Substitutes bindings into `p`. `None` if a metavariable is unbound.
pub fn instantiate(p: &Pattern, b: &Bindings) -> Option<PathExpr> {
    let r = |x: &Pattern| instantiate(x, b).map(Box::new);
    Some(match p {
        Pattern::Meta(m) => b.exprs.get(m)?.clone(),
        Pattern::Slice(l) => PathExpr::Slice(l.clone()),
        Pattern::Filter(f) => {
            PathExpr::Filter(f.try_map(|t| term(t, &b.vertices).ok_or(())).ok()?)
        }
        Pattern::MatMul(x, y) => PathExpr::MatMul(r(x)?, r(y)?),
        Pattern::Hadamard(x, y) => PathExpr::Hadamard(r(x)?, r(y)?),
        Pattern::Add(x, y) => PathExpr::Add(r(x)?, r(y)?),
        Pattern::Transpose(x) => PathExpr::Transpose(r(x)?),
        Pattern::Not(x) => PathExpr::Not(r(x)?),
        Pattern::Clip(x) => PathExpr::Clip(r(x)?),
        Pattern::VOut(x, t) => PathExpr::VOut(r(x)?, term(t, &b.ints)?),
        Pattern::VIn(x, t) => PathExpr::VIn(r(x)?, term(t, &b.ints)?),
        Pattern::Scale(t, x) => PathExpr::Scale(term(t, &b.scalars)?, r(x)?),
    })
}
