//! Evaluation of path expressions against a tensor.

mod plan;

use std::borrow::Cow;
use std::collections::HashMap;

use thiserror::Error;

pub use plan::{naive_plan, plan, EvalPlan, PlanOp, PlanStep};

use crate::expr::PathExpr;
use crate::matrix::{self, materialize_filter, KernelError, PathMatrix};
use crate::store::{MultiRelTensor, StoreError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Evaluates `e` on `t` using the cost-based plan, with independent
/// subtrees computed in parallel.
pub fn evaluate(e: &PathExpr, t: &MultiRelTensor) -> Result<PathMatrix, EvalError> {
    execute(&plan(e, t)?, t)
}

/// Evaluates `e` by direct recursion in the written association, one
/// operation at a time.
pub fn evaluate_naive(e: &PathExpr, t: &MultiRelTensor) -> Result<PathMatrix, EvalError> {
    let n = t.n();
    let r = |x: &PathExpr| evaluate_naive(x, t);
    Ok(match e {
        PathExpr::Slice(l) => t.slice(l)?.to_matrix(n),
        PathExpr::Filter(f) => {
            let f = f.try_map(|v| {
                t.vertices()
                    .id(v)
                    .ok_or_else(|| EvalError::UnknownVertex(v.clone()))
            })?;
            materialize_filter(&f, n)?
        }
        PathExpr::MatMul(a, b) => matrix::matmul(&r(a)?, &r(b)?)?,
        PathExpr::Hadamard(a, b) => matrix::hadamard(&r(a)?, &r(b)?)?,
        PathExpr::Add(a, b) => matrix::add(&r(a)?, &r(b)?)?,
        PathExpr::Transpose(a) => matrix::transpose(&r(a)?),
        PathExpr::Not(a) => matrix::not_(&r(a)?)?,
        PathExpr::Clip(a) => matrix::clip(&r(a)?),
        PathExpr::VOut(a, p) => matrix::vertex_out(&r(a)?, *p),
        PathExpr::VIn(a, p) => matrix::vertex_in(&r(a)?, *p),
        PathExpr::Scale(s, a) => matrix::scale(&r(a)?, s.get())?,
    })
}

/// Runs a plan produced for `t`.
pub fn execute(plan: &EvalPlan, t: &MultiRelTensor) -> Result<PathMatrix, EvalError> {
    let mut slices = HashMap::new();
    for s in &plan.steps {
        if let PlanOp::Slice(l) = &s.op {
            if !slices.contains_key(l) {
                slices.insert(l.clone(), t.slice(l)?.to_matrix(plan.n));
            }
        }
    }
    let ctx = Ctx {
        plan,
        slices: &slices,
    };
    ctx.run(plan.root()).map(Cow::into_owned)
}

struct Ctx<'a> {
    plan: &'a EvalPlan,
    slices: &'a HashMap<String, PathMatrix>,
}

impl<'a> Ctx<'a> {
    fn run(&self, idx: usize) -> Result<Cow<'a, PathMatrix>, EvalError> {
        let step = &self.plan.steps[idx];
        let n = self.plan.n;
        let value = match (&step.op, step.inputs.as_slice()) {
            (PlanOp::Slice(l), []) => return Ok(Cow::Borrowed(&self.slices[l])),
            (PlanOp::Filter(f), []) => materialize_filter(f, n)?,
            (op, &[i]) => {
                let a = self.run(i)?;
                match op {
                    PlanOp::Transpose => matrix::transpose(&a),
                    PlanOp::Not => matrix::not_(&a)?,
                    PlanOp::Clip => matrix::clip(&a),
                    PlanOp::VOut(p) => matrix::vertex_out(&a, *p),
                    PlanOp::VIn(p) => matrix::vertex_in(&a, *p),
                    PlanOp::Scale(l) => matrix::scale(&a, *l)?,
                    _ => unreachable!("malformed plan"),
                }
            }
            (op, &[i, j]) => {
                let (a, b) = rayon::join(|| self.run(i), || self.run(j));
                let (a, b) = (a?, b?);
                match op {
                    PlanOp::MatMul => matrix::matmul(&a, &b)?,
                    PlanOp::Hadamard => matrix::hadamard(&a, &b)?,
                    PlanOp::Add => matrix::add(&a, &b)?,
                    _ => unreachable!("malformed plan"),
                }
            }
            _ => unreachable!("malformed plan"),
        };
        Ok(Cow::Owned(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::matrix::Representation;
    use crate::store::parse_triples;

    fn fixture() -> MultiRelTensor {
        parse_triples(
            "h1\tauthored\ta1\nh1\tauthored\ta2\nh2\tauthored\ta2\nh2\tauthored\ta3\n\
             a1\tcites\ta3\nj1\tcontains\ta1\nj1\tcontains\ta3\nj1\tcategory\ts1\n",
        )
        .unwrap()
    }

    #[test]
    fn has_cited() {
        let t = fixture();
        let z = evaluate(&parse("A[authored] . A[cites] . A[authored]'").unwrap(), &t).unwrap();
        let (h1, h2) = (t.vertices().id("h1").unwrap(), t.vertices().id("h2").unwrap());
        assert_eq!(z.nnz(), 1);
        assert_eq!(z.get(h1, h2), 1.0);
    }

    #[test]
    fn unresolved_names() {
        let t = fixture();
        assert!(matches!(
            evaluate(&parse("A[knows]").unwrap(), &t),
            Err(EvalError::Store(StoreError::UnknownLabel { .. }))
        ));
        assert_eq!(
            evaluate(&parse("R(nobody)").unwrap(), &t).unwrap_err(),
            EvalError::UnknownVertex("nobody".into())
        );
    }

    #[test]
    fn single_slice_plan() {
        let t = fixture();
        let p = plan(&parse("A[cites]").unwrap(), &t).unwrap();
        assert_eq!(p.steps.len(), 1);
        assert_eq!(p.steps[0].op, PlanOp::Slice("cites".into()));
    }

    #[test]
    fn complement_stays_unmaterialized() {
        let t = fixture();
        let e = parse("A[authored] . A[authored]' & not(I)").unwrap();
        let p = plan(&e, &t).unwrap();
        let not = p.steps.iter().find(|s| s.op == PlanOp::Not).unwrap();
        assert_eq!(not.repr, Representation::BoolComplement);
        assert_eq!(evaluate(&e, &t).unwrap(), evaluate_naive(&e, &t).unwrap());
    }

    #[test]
    fn row_filter_is_pushed_below_product() {
        let t = fixture();
        let e = parse("A[authored] . A[authored]' & R(h1)").unwrap();
        let p = plan(&e, &t).unwrap();
        assert_eq!(p.steps.last().unwrap().op, PlanOp::MatMul);
        assert_eq!(evaluate(&e, &t).unwrap(), evaluate_naive(&e, &t).unwrap());
    }
}
