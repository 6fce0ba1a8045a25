//! Rule-based simplification of path expressions.

mod engine;
mod pattern;
mod rules;
mod trace;
mod verify;

pub use engine::{cost, simplify};
pub use pattern::{instantiate, matches, Bindings};
pub use rules::{catalog, Guard, RewriteRule, Role};
pub use trace::{ReplayError, RuleTrace, TraceStep};
pub use verify::{check_rule, verify_rule, Counterexample};

/// Looks up a catalog rule by name.
pub fn find_rule(name: &str) -> Option<&'static RewriteRule> {
    catalog().iter().find(|r| r.name == name)
}
