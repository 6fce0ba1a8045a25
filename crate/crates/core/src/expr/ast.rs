use std::fmt;
use std::hash::{Hash, Hasher};

use crate::matrix::FilterSpec;

/// A weight factor: finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Scalar(f64);

impl Scalar {
    pub fn new(v: f64) -> Option<Self> {
        // normalizes -0.0
        (v.is_finite() && v >= 0.0).then_some(Scalar(v + 0.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // shortest representation that parses back to the same value
        write!(f, "{}", self.0)
    }
}

/// A path expression over slices of a tensor. Vertices in filters are
/// referenced by name and resolved at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Slice(String),
    Filter(FilterSpec<String>),
    MatMul(Box<PathExpr>, Box<PathExpr>),
    Transpose(Box<PathExpr>),
    Hadamard(Box<PathExpr>, Box<PathExpr>),
    Not(Box<PathExpr>),
    Clip(Box<PathExpr>),
    VOut(Box<PathExpr>, u64),
    VIn(Box<PathExpr>, u64),
    Scale(Scalar, Box<PathExpr>),
    Add(Box<PathExpr>, Box<PathExpr>),
}

impl PathExpr {
    pub fn slice(label: impl Into<String>) -> Self {
        PathExpr::Slice(label.into())
    }

    pub fn filter(f: FilterSpec<String>) -> Self {
        PathExpr::Filter(f)
    }

    pub fn identity() -> Self {
        PathExpr::Filter(FilterSpec::Identity)
    }

    pub fn matmul(self, rhs: PathExpr) -> Self {
        PathExpr::MatMul(Box::new(self), Box::new(rhs))
    }

    pub fn hadamard(self, rhs: PathExpr) -> Self {
        PathExpr::Hadamard(Box::new(self), Box::new(rhs))
    }

    pub fn add(self, rhs: PathExpr) -> Self {
        PathExpr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn t(self) -> Self {
        PathExpr::Transpose(Box::new(self))
    }

    pub fn not(self) -> Self {
        PathExpr::Not(Box::new(self))
    }

    pub fn clip(self) -> Self {
        PathExpr::Clip(Box::new(self))
    }

    pub fn vout(self, p: u64) -> Self {
        PathExpr::VOut(Box::new(self), p)
    }

    pub fn vin(self, p: u64) -> Self {
        PathExpr::VIn(Box::new(self), p)
    }

    /// # Panics
    /// If `lambda` is negative or not finite.
    pub fn scale(self, lambda: f64) -> Self {
        let s = Scalar::new(lambda).expect("scale factor must be finite and nonnegative");
        PathExpr::Scale(s, Box::new(self))
    }

    /// Direct subexpressions, left to right.
    pub fn children(&self) -> Vec<&PathExpr> {
        use PathExpr::*;
        match self {
            Slice(_) | Filter(_) => vec![],
            Transpose(a) | Not(a) | Clip(a) | VOut(a, _) | VIn(a, _) | Scale(_, a) => vec![a],
            MatMul(a, b) | Hadamard(a, b) | Add(a, b) => vec![a, b],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut PathExpr> {
        use PathExpr::*;
        match self {
            Slice(_) | Filter(_) => vec![],
            Transpose(a) | Not(a) | Clip(a) | VOut(a, _) | VIn(a, _) | Scale(_, a) => vec![a],
            MatMul(a, b) | Hadamard(a, b) | Add(a, b) => vec![a, b],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Syntactic {0,1}-valuedness. Conservative: products, sums and scales
    /// are never considered boolean even when their value happens to be.
    pub fn is_boolean(&self) -> bool {
        use PathExpr::*;
        match self {
            Slice(_) | Filter(_) | Not(_) | Clip(_) | VOut(..) | VIn(..) => true,
            Transpose(a) => a.is_boolean(),
            Hadamard(a, b) => a.is_boolean() && b.is_boolean(),
            MatMul(..) | Add(..) | Scale(..) => false,
        }
    }

    /// True when no non-integral weight appears, so evaluation stays in
    /// exact integer arithmetic.
    pub fn is_integral(&self) -> bool {
        match self {
            PathExpr::Scale(s, a) => s.get().fract() == 0.0 && a.is_integral(),
            _ => self.children().iter().all(|c| c.is_integral()),
        }
    }

    /// Subexpression at a child-index path.
    pub fn at(&self, path: &[usize]) -> Option<&PathExpr> {
        match path.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.children().get(k)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut PathExpr> {
        match path.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.children_mut().into_iter().nth(k)?.at_mut(rest),
        }
    }

    /// Slice labels in first-occurrence order.
    pub fn labels(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let PathExpr::Slice(l) = e {
                if !out.contains(&l.as_str()) {
                    out.push(l.as_str());
                }
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a PathExpr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format(self))
    }
}

/// A literal or a metavariable in a rule pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term<T> {
    Lit(T),
    Meta(String),
}

/// [`PathExpr`] extended with metavariables (`?a`), used as rewrite-rule
/// patterns. `Meta` in expression position matches any subtree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Meta(String),
    Slice(String),
    Filter(FilterSpec<Term<String>>),
    MatMul(Box<Pattern>, Box<Pattern>),
    Transpose(Box<Pattern>),
    Hadamard(Box<Pattern>, Box<Pattern>),
    Not(Box<Pattern>),
    Clip(Box<Pattern>),
    VOut(Box<Pattern>, Term<u64>),
    VIn(Box<Pattern>, Term<u64>),
    Scale(Term<Scalar>, Box<Pattern>),
    Add(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    /// Converts to an expression if the pattern contains no metavariables.
    pub fn to_expr(&self) -> Option<PathExpr> {
        fn lit<T: Clone>(t: &Term<T>) -> Option<T> {
            match t {
                Term::Lit(v) => Some(v.clone()),
                Term::Meta(_) => None,
            }
        }
        let b = |p: &Pattern| p.to_expr().map(Box::new);
        Some(match self {
            Pattern::Meta(_) => return None,
            Pattern::Slice(l) => PathExpr::Slice(l.clone()),
            Pattern::Filter(f) => PathExpr::Filter(f.try_map(|t| lit(t).ok_or(())).ok()?),
            Pattern::MatMul(x, y) => PathExpr::MatMul(b(x)?, b(y)?),
            Pattern::Transpose(x) => PathExpr::Transpose(b(x)?),
            Pattern::Hadamard(x, y) => PathExpr::Hadamard(b(x)?, b(y)?),
            Pattern::Not(x) => PathExpr::Not(b(x)?),
            Pattern::Clip(x) => PathExpr::Clip(b(x)?),
            Pattern::VOut(x, p) => PathExpr::VOut(b(x)?, lit(p)?),
            Pattern::VIn(x, p) => PathExpr::VIn(b(x)?, lit(p)?),
            Pattern::Scale(s, x) => PathExpr::Scale(lit(s)?, b(x)?),
            Pattern::Add(x, y) => PathExpr::Add(b(x)?, b(y)?),
        })
    }

    /// Metavariable names in first-occurrence order, across all positions.
    pub fn metas(&self) -> Vec<String> {
        fn add(out: &mut Vec<String>, m: &str) {
            if !out.iter().any(|x| x == m) {
                out.push(m.to_string());
            }
        }
        fn go(p: &Pattern, out: &mut Vec<String>) {
            match p {
                Pattern::Meta(m) => add(out, m),
                Pattern::Slice(_) => {}
                Pattern::Filter(f) => {
                    let _ = f.try_map(|t| -> Result<(), ()> {
                        if let Term::Meta(m) = t {
                            add(out, m);
                        }
                        Ok(())
                    });
                }
                Pattern::MatMul(a, b) | Pattern::Hadamard(a, b) | Pattern::Add(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Pattern::Transpose(a) | Pattern::Not(a) | Pattern::Clip(a) => go(a, out),
                Pattern::VOut(a, p) | Pattern::VIn(a, p) => {
                    go(a, out);
                    if let Term::Meta(m) = p {
                        add(out, m);
                    }
                }
                Pattern::Scale(s, a) => {
                    if let Term::Meta(m) = s {
                        add(out, m);
                    }
                    go(a, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

impl From<&PathExpr> for Pattern {
    fn from(e: &PathExpr) -> Self {
        let b = |x: &PathExpr| Box::new(Pattern::from(x));
        match e {
            PathExpr::Slice(l) => Pattern::Slice(l.clone()),
            PathExpr::Filter(f) => Pattern::Filter(
                f.try_map(|v| Ok::<_, ()>(Term::Lit(v.clone())))
                    .expect("infallible"),
            ),
            PathExpr::MatMul(x, y) => Pattern::MatMul(b(x), b(y)),
            PathExpr::Transpose(x) => Pattern::Transpose(b(x)),
            PathExpr::Hadamard(x, y) => Pattern::Hadamard(b(x), b(y)),
            PathExpr::Not(x) => Pattern::Not(b(x)),
            PathExpr::Clip(x) => Pattern::Clip(b(x)),
            PathExpr::VOut(x, p) => Pattern::VOut(b(x), Term::Lit(*p)),
            PathExpr::VIn(x, p) => Pattern::VIn(b(x), Term::Lit(*p)),
            PathExpr::Scale(s, x) => Pattern::Scale(Term::Lit(*s), b(x)),
            PathExpr::Add(x, y) => Pattern::Add(b(x), b(y)),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format::format_pattern(self))
    }
}
