use std::fmt;

use crate::expr::PathExpr;

/// One rule application: the subexpression at `path` changed from `before`
/// to `after`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub rule: String,
    pub citation: String,
    /// Child indices from the root to the rewritten node.
    pub path: Vec<usize>,
    pub before: PathExpr,
    pub after: PathExpr,
}

/// The rule applications that took an input to its simplified form.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTrace {
    pub input: PathExpr,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayError {
    pub step: usize,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace step {} does not apply", self.step)
    }
}

impl std::error::Error for ReplayError {}

impl RuleTrace {
    pub fn new(input: PathExpr) -> Self {
        RuleTrace {
            input,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Rule names in application order.
    pub fn rules(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.rule.as_str()).collect()
    }

    /// The whole expression after each step, starting with the input.
    pub fn snapshots(&self) -> Result<Vec<PathExpr>, ReplayError> {
        let mut cur = self.input.clone();
        let mut out = vec![cur.clone()];
        for (k, s) in self.steps.iter().enumerate() {
            match cur.at_mut(&s.path) {
                Some(node) if *node == s.before => *node = s.after.clone(),
                _ => return Err(ReplayError { step: k }),
            }
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Re-applies every step to the input, checking that each `before`
    /// matches what is found at its path.
    pub fn replay(&self) -> Result<PathExpr, ReplayError> {
        Ok(self.snapshots()?.pop().expect("input present"))
    }

    /// Two-column derivation: each line shows the expression after a step
    /// and the rule and identity that justified it.
    pub fn derivation_table(&self) -> String {
        let Ok(snaps) = self.snapshots() else {
            return String::from("(trace does not replay)\n");
        };
        let exprs: Vec<String> = snaps.iter().map(|e| e.to_string()).collect();
        let width = exprs.iter().map(|s| s.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, e) in exprs.iter().enumerate() {
            let lead = if k == 0 { "  " } else { "= " };
            let pad = width - e.chars().count();
            let note = match k {
                0 => String::new(),
                _ => {
                    let s = &self.steps[k - 1];
                    format!(" {}: {}", s.rule, s.citation)
                }
            };
            out.push_str(&format!("{lead}{e}{} |{note}\n", " ".repeat(pad)));
        }
        out
    }
}
