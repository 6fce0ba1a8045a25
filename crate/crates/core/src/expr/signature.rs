use std::fmt;

use super::PathExpr;
use crate::store::MultiRelTensor;

/// Domain and range classes of an expression. `None` means unconstrained:
/// filters are polymorphic, and unsigned slices are not checked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassPair {
    pub domain: Option<String>,
    pub range: Option<String>,
}

impl ClassPair {
    fn swap(self) -> Self {
        ClassPair {
            domain: self.range,
            range: self.domain,
        }
    }

    pub fn is_known(&self) -> bool {
        self.domain.is_some() && self.range.is_some()
    }
}

impl fmt::Display for ClassPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &Option<String>| c.clone().unwrap_or_else(|| "?".into());
        write!(f, "{} -> {}", show(&self.domain), show(&self.range))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subexpr: String,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, found {}",
            self.subexpr, self.expected, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureReport {
    pub ok: bool,
    pub derived: ClassPair,
    pub violations: Vec<Violation>,
}

/// Checks that products compose matching range and domain classes and that
/// Hadamard products and sums combine matrices of the same type.
///
/// Advisory only: an ill-typed product still evaluates, to a zero matrix.
pub fn check_signatures(e: &PathExpr, tensor: &MultiRelTensor) -> SignatureReport {
    let mut violations = Vec::new();
    let derived = infer(e, tensor, &mut violations);
    SignatureReport {
        ok: violations.is_empty(),
        derived,
        violations,
    }
}

fn unify(
    a: Option<String>,
    b: Option<String>,
    e: &PathExpr,
    what: &str,
    out: &mut Vec<Violation>,
) -> Option<String> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => {
            out.push(Violation {
                subexpr: e.to_string(),
                expected: format!("{what} {x}"),
                found: format!("{what} {y}"),
            });
            Some(x)
        }
        (a, b) => a.or(b),
    }
}

fn infer(e: &PathExpr, t: &MultiRelTensor, out: &mut Vec<Violation>) -> ClassPair {
    match e {
        PathExpr::Slice(l) => match t.signature(l) {
            Some(s) => ClassPair {
                domain: Some(s.domain.clone()),
                range: Some(s.range.clone()),
            },
            None => ClassPair::default(),
        },
        PathExpr::Filter(_) => ClassPair::default(),
        PathExpr::MatMul(a, b) => {
            let (x, y) = (infer(a, t, out), infer(b, t, out));
            if let (Some(r), Some(d)) = (&x.range, &y.domain) {
                if r != d {
                    out.push(Violation {
                        subexpr: e.to_string(),
                        expected: format!("domain {r}"),
                        found: format!("domain {d}"),
                    });
                }
            }
            ClassPair {
                domain: x.domain,
                range: y.range,
            }
        }
        PathExpr::Hadamard(a, b) | PathExpr::Add(a, b) => {
            let (x, y) = (infer(a, t, out), infer(b, t, out));
            ClassPair {
                domain: unify(x.domain, y.domain, e, "domain", out),
                range: unify(x.range, y.range, e, "range", out),
            }
        }
        PathExpr::Transpose(a) => infer(a, t, out).swap(),
        PathExpr::Not(a)
        | PathExpr::Clip(a)
        | PathExpr::VOut(a, _)
        | PathExpr::VIn(a, _)
        | PathExpr::Scale(_, a) => infer(a, t, out),
    }
}
