//! The rule catalog. Each rule states the identity it applies.

use std::fmt;
use std::sync::LazyLock;

use super::pattern::{instantiate, matches, Bindings};
use crate::expr::{parse_pattern, PathExpr, Pattern};

/// Side condition on a match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard {
    /// The bound subexpression is syntactically {0,1}-valued.
    Boolean(String),
    /// The two vertex metavariables are bound to different vertices.
    Distinct(String, String),
}

/// How the simplifier uses a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Applied whenever it lowers the cost.
    Reduce,
    /// Cost-neutral normalization, applied when nothing reduces.
    Canonical,
    /// Never applied on its own; available to derivation macros and
    /// soundness checks.
    Auxiliary,
}

#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub name: String,
    /// The identity the rule applies, e.g. `c(Y ∘ Z) = c(Y) ∘ c(Z)`.
    pub citation: String,
    pub lhs: Pattern,
    pub rhs: Pattern,
    pub guards: Vec<Guard>,
    pub role: Role,
}

impl RewriteRule {
    /// # Panics
    /// If either side fails to parse as a pattern, or the right side uses a
    /// metavariable the left side does not bind.
    pub fn new(name: &str, citation: &str, lhs: &str, rhs: &str, guards: Vec<Guard>, role: Role) -> Self {
        let lhs = parse_pattern(lhs).unwrap_or_else(|e| panic!("rule {name}: {e}"));
        let rhs = parse_pattern(rhs).unwrap_or_else(|e| panic!("rule {name}: {e}"));
        let bound = lhs.metas();
        for m in rhs.metas() {
            assert!(bound.contains(&m), "rule {name}: `?{m}` unbound on the left");
        }
        RewriteRule {
            name: name.to_string(),
            citation: citation.to_string(),
            lhs,
            rhs,
            guards,
            role,
        }
    }

    pub fn guards_hold(&self, b: &Bindings) -> bool {
        self.guards.iter().all(|g| match g {
            Guard::Boolean(m) => b.exprs.get(m).is_some_and(PathExpr::is_boolean),
            Guard::Distinct(i, j) => b.vertices.get(i) != b.vertices.get(j),
        })
    }

    /// Rewrites `e` at its root if the left side matches and the guards hold.
    pub fn apply(&self, e: &PathExpr) -> Option<PathExpr> {
        let b = matches(&self.lhs, e)?;
        if !self.guards_hold(&b) {
            return None;
        }
        instantiate(&self.rhs, &b)
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.lhs, self.rhs)?;
        for g in &self.guards {
            match g {
                Guard::Boolean(m) => write!(f, " [?{m} boolean]")?,
                Guard::Distinct(i, j) => write!(f, " [?{i} != ?{j}]")?,
            }
        }
        Ok(())
    }
}

fn boolean(names: &[&str]) -> Vec<Guard> {
    names.iter().map(|n| Guard::Boolean(n.to_string())).collect()
}

static RULES: LazyLock<Vec<RewriteRule>> = LazyLock::new(|| {
    use Role::*;
    let none = Vec::new;
    let r = RewriteRule::new;
    vec![
        // transpose
        r("transpose-involution", "(Aᵀ)ᵀ = A", "?a''", "?a", none(), Reduce),
        r("row-transpose", "R_iᵀ = C_i", "R(?i)'", "C(?i)", none(), Reduce),
        r("col-transpose", "C_iᵀ = R_i", "C(?i)'", "R(?i)", none(), Reduce),
        r("entry-transpose", "E_{i,j}ᵀ = E_{j,i}", "E(?i, ?j)'", "E(?j, ?i)", none(), Reduce),
        r("identity-transpose", "Iᵀ = I", "I'", "I", none(), Reduce),
        r("ones-transpose", "1ᵀ = 1", "ONES'", "ONES", none(), Reduce),
        r("zero-transpose", "0ᵀ = 0", "ZERO'", "ZERO", none(), Reduce),
        // units and annihilators
        r("hadamard-unit", "A ∘ 1 = A", "?a & ONES", "?a", none(), Reduce),
        r("hadamard-unit-left", "1 ∘ A = A", "ONES & ?a", "?a", none(), Reduce),
        r("hadamard-zero", "A ∘ 0 = 0", "?a & ZERO", "ZERO", none(), Reduce),
        r("hadamard-zero-left", "0 ∘ A = 0", "ZERO & ?a", "ZERO", none(), Reduce),
        r("add-zero", "A + 0 = A", "?a + ZERO", "?a", none(), Reduce),
        r("add-zero-left", "0 + A = A", "ZERO + ?a", "?a", none(), Reduce),
        r("product-zero", "A · 0 = 0", "?a . ZERO", "ZERO", none(), Reduce),
        r("product-zero-left", "0 · A = 0", "ZERO . ?a", "ZERO", none(), Reduce),
        r("product-identity", "A · I = A", "?a . I", "?a", none(), Reduce),
        r("product-identity-left", "I · A = A", "I . ?a", "?a", none(), Reduce),
        r("scale-one", "1A = A", "1 * ?a", "?a", none(), Reduce),
        r("scale-zero", "0A = 0", "0 * ?a", "ZERO", none(), Reduce),
        r("scale-of-zero", "λ0 = 0", "?l * ZERO", "ZERO", none(), Reduce),
        // not and clip
        r("not-not", "n(n(A)) = A", "not(not(?a))", "?a", boolean(&["a"]), Reduce),
        r("not-zero", "n(0) = 1", "not(ZERO)", "ONES", none(), Reduce),
        r("not-ones", "n(1) = 0", "not(ONES)", "ZERO", none(), Reduce),
        r("clip-not", "c(n(A)) = n(A)", "clip(not(?a))", "not(?a)", none(), Reduce),
        r("clip-boolean", "c(A) = A", "clip(?a)", "?a", boolean(&["a"]), Reduce),
        r("not-clip", "n(c(A)) = n(A)", "not(clip(?a))", "not(?a)", boolean(&["a"]), Reduce),
        r("hadamard-idempotent", "A ∘ A = A", "?a & ?a", "?a", boolean(&["a"]), Reduce),
        r("complement", "A ∘ n(A) = 0", "?a & not(?a)", "ZERO", boolean(&["a"]), Reduce),
        r("complement-left", "n(A) ∘ A = 0", "not(?a) & ?a", "ZERO", boolean(&["a"]), Reduce),
        r("clip-merge", "c(Y) ∘ c(Z) = c(Y ∘ Z)", "clip(?y) & clip(?z)", "clip(?y & ?z)", none(), Reduce),
        r(
            "not-hadamard-merge",
            "c(n(A) + n(B)) = n(A ∘ B)",
            "clip(not(?a) + not(?b))",
            "not(?a & ?b)",
            boolean(&["a", "b"]),
            Reduce,
        ),
        r(
            "not-add-merge",
            "n(A) ∘ n(B) = n(c(A + B))",
            "not(?a) & not(?b)",
            "not(clip(?a + ?b))",
            boolean(&["a", "b"]),
            Reduce,
        ),
        // filter algebra
        r(
            "row-row-distinct",
            "R_i ∘ R_j = 0 for i ≠ j",
            "R(?i) & R(?j)",
            "ZERO",
            vec![Guard::Distinct("i".into(), "j".into())],
            Reduce,
        ),
        r(
            "col-col-distinct",
            "C_i ∘ C_j = 0 for i ≠ j",
            "C(?i) & C(?j)",
            "ZERO",
            vec![Guard::Distinct("i".into(), "j".into())],
            Reduce,
        ),
        r("row-col-entry", "R_i ∘ C_j = E_{i,j}", "R(?i) & C(?j)", "E(?i, ?j)", none(), Reduce),
        r("col-row-entry", "C_j ∘ R_i = E_{i,j}", "C(?j) & R(?i)", "E(?i, ?j)", none(), Reduce),
        r("vout-row", "v⁻(R_i) = R_i", "vout(R(?i))", "R(?i)", none(), Reduce),
        r("vin-col", "v⁺(C_i) = C_i", "vin(C(?i))", "C(?i)", none(), Reduce),
        r(
            "vertex-entry",
            "v⁺(E_{i,j}) ∘ v⁻(E_{i,j}) = E_{i,j}",
            "vin(E(?i, ?j)) & vout(E(?i, ?j))",
            "E(?i, ?j)",
            none(),
            Reduce,
        ),
        r(
            "vertex-entry-left",
            "v⁻(E_{i,j}) ∘ v⁺(E_{i,j}) = E_{i,j}",
            "vout(E(?i, ?j)) & vin(E(?i, ?j))",
            "E(?i, ?j)",
            none(),
            Reduce,
        ),
        // transpose fusion
        r("transpose-fuse", "Aᵀ ∘ Bᵀ = (A ∘ B)ᵀ", "?a' & ?b'", "(?a & ?b)'", none(), Reduce),
        r("product-transpose-fuse", "Aᵀ · Bᵀ = (B · A)ᵀ", "?a' . ?b'", "(?b . ?a)'", none(), Reduce),
        r("add-transpose-fuse", "Aᵀ + Bᵀ = (A + B)ᵀ", "?a' + ?b'", "(?a + ?b)'", none(), Reduce),
        // factoring
        r(
            "hadamard-factor",
            "(A ∘ C) + (B ∘ C) = (A + B) ∘ C",
            "?a & ?c + ?b & ?c",
            "(?a + ?b) & ?c",
            none(),
            Reduce,
        ),
        r(
            "hadamard-factor-left",
            "(A ∘ B) + (A ∘ C) = A ∘ (B + C)",
            "?a & ?b + ?a & ?c",
            "?a & (?b + ?c)",
            none(),
            Reduce,
        ),
        r("scale-factor", "λA + λB = λ(A + B)", "?l * ?a + ?l * ?b", "?l * (?a + ?b)", none(), Reduce),
        // canonical forms
        r("hadamard-associate", "A ∘ (B ∘ C) = (A ∘ B) ∘ C", "?a & (?b & ?c)", "?a & ?b & ?c", none(), Canonical),
        r("add-associate", "A + (B + C) = (A + B) + C", "?a + (?b + ?c)", "?a + ?b + ?c", none(), Canonical),
        r("scale-into-hadamard", "λ(A ∘ B) = (λA) ∘ B", "?l * (?a & ?b)", "?l * ?a & ?b", none(), Canonical),
        r("row-filter-lift", "R_i ∘ Aᵀ = (C_i ∘ A)ᵀ", "R(?i) & ?a'", "(C(?i) & ?a)'", none(), Canonical),
        r("row-filter-lift-right", "Aᵀ ∘ R_i = (A ∘ C_i)ᵀ", "?a' & R(?i)", "(?a & C(?i))'", none(), Canonical),
        r("col-filter-lift", "C_i ∘ Aᵀ = (R_i ∘ A)ᵀ", "C(?i) & ?a'", "(R(?i) & ?a)'", none(), Canonical),
        r("col-filter-lift-right", "Aᵀ ∘ C_i = (A ∘ R_i)ᵀ", "?a' & C(?i)", "(?a & R(?i))'", none(), Canonical),
        r(
            "entry-filter-lift",
            "E_{i,j} ∘ Aᵀ = (E_{j,i} ∘ A)ᵀ",
            "E(?i, ?j) & ?a'",
            "(E(?j, ?i) & ?a)'",
            none(),
            Canonical,
        ),
        r(
            "entry-filter-lift-right",
            "Aᵀ ∘ E_{i,j} = (A ∘ E_{j,i})ᵀ",
            "?a' & E(?i, ?j)",
            "(?a & E(?j, ?i))'",
            none(),
            Canonical,
        ),
        r("identity-filter-lift", "I ∘ Aᵀ = (I ∘ A)ᵀ", "I & ?a'", "(I & ?a)'", none(), Canonical),
        r("identity-filter-lift-right", "Aᵀ ∘ I = (A ∘ I)ᵀ", "?a' & I", "(?a & I)'", none(), Canonical),
        r("vin-transpose", "v⁺(Zᵀ, p) = v⁻(Z, p)ᵀ", "vin(?z', ?p)", "vout(?z, ?p)'", none(), Canonical),
        r("vout-transpose", "v⁻(Zᵀ, p) = v⁺(Z, p)ᵀ", "vout(?z', ?p)", "vin(?z, ?p)'", none(), Canonical),
        r("not-transpose", "n(Aᵀ) = n(A)ᵀ", "not(?a')", "not(?a)'", none(), Canonical),
        r("clip-transpose", "c(Aᵀ) = c(A)ᵀ", "clip(?a')", "clip(?a)'", none(), Canonical),
        r("scale-transpose", "λAᵀ = (λA)ᵀ", "?l * ?a'", "(?l * ?a)'", none(), Canonical),
        // auxiliary
        r("hadamard-commute", "A ∘ B = B ∘ A", "?a & ?b", "?b & ?a", none(), Auxiliary),
        r("hadamard-reassociate", "(A ∘ B) ∘ C = A ∘ (B ∘ C)", "?a & ?b & ?c", "?a & (?b & ?c)", none(), Auxiliary),
        r(
            "distribute",
            "A ∘ (B + C) = (A ∘ B) + (A ∘ C)",
            "?a & (?b + ?c)",
            "?a & ?b + ?a & ?c",
            none(),
            Auxiliary,
        ),
        r(
            "distribute-right",
            "(A + B) ∘ C = (A ∘ C) + (B ∘ C)",
            "(?a + ?b) & ?c",
            "?a & ?c + ?b & ?c",
            none(),
            Auxiliary,
        ),
        r("hadamard-scale-pull", "A ∘ λB = λ(A ∘ B)", "?a & ?l * ?b", "?l * (?a & ?b)", none(), Auxiliary),
        r("clip-split", "c(Y ∘ Z) = c(Y) ∘ c(Z)", "clip(?y & ?z)", "clip(?y) & clip(?z)", none(), Auxiliary),
        r(
            "not-hadamard-split",
            "n(A ∘ B) = c(n(A) + n(B))",
            "not(?a & ?b)",
            "clip(not(?a) + not(?b))",
            boolean(&["a", "b"]),
            Auxiliary,
        ),
        r(
            "not-add-split",
            "n(c(A + B)) = n(A) ∘ n(B)",
            "not(clip(?a + ?b))",
            "not(?a) & not(?b)",
            boolean(&["a", "b"]),
            Auxiliary,
        ),
        r("clip-intro", "A = c(A)", "?a", "clip(?a)", boolean(&["a"]), Auxiliary),
        r("clip-not-commute", "c(n(A)) = n(c(A))", "clip(not(?a))", "not(clip(?a))", boolean(&["a"]), Auxiliary),
        r("product-reversal", "(A · B)ᵀ = Bᵀ · Aᵀ", "(?a . ?b)'", "?b' . ?a'", none(), Auxiliary),
        r("row-as-transpose", "R_i = C_iᵀ", "R(?i)", "C(?i)'", none(), Auxiliary),
        r("col-as-transpose", "C_i = R_iᵀ", "C(?i)", "R(?i)'", none(), Auxiliary),
        r("vout-duality", "v⁻(Z, p) = v⁺(Zᵀ, p)ᵀ", "vout(?z, ?p)", "vin(?z', ?p)'", none(), Auxiliary),
        r("vin-duality", "v⁺(Z, p) = v⁻(Zᵀ, p)ᵀ", "vin(?z, ?p)", "vout(?z', ?p)'", none(), Auxiliary),
        r("vout-row-pull", "v⁻(Z ∘ R_i) = v⁻(Z) ∘ R_i", "vout(?z & R(?i), ?p)", "vout(?z, ?p) & R(?i)", none(), Auxiliary),
        r("vin-col-pull", "v⁺(Z ∘ C_i) = v⁺(Z) ∘ C_i", "vin(?z & C(?i), ?p)", "vin(?z, ?p) & C(?i)", none(), Auxiliary),
        r(
            "row-filter-pushdown",
            "(A · B) ∘ R_i = (A ∘ R_i) · B",
            "(?a . ?b) & R(?i)",
            "(?a & R(?i)) . ?b",
            none(),
            Auxiliary,
        ),
        r(
            "col-filter-pushdown",
            "(A · B) ∘ C_j = A · (B ∘ C_j)",
            "(?a . ?b) & C(?j)",
            "?a . (?b & C(?j))",
            none(),
            Auxiliary,
        ),
    ]
});

/// Every rule, in priority order.
pub fn catalog() -> &'static [RewriteRule] {
    &RULES
}

/// Looks a rule up by name.
///
/// # Panics
/// If no rule has that name.
pub fn rule(name: &str) -> &'static RewriteRule {
    RULES
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("no rule named {name}"))
}
