//! Cost-directed greedy simplification.

use super::rules::{catalog, rule, Role};
use super::trace::{RuleTrace, TraceStep};
use crate::expr::PathExpr;

/// Node count with products weighted 4 and Hadamard products 2.
pub fn cost(e: &PathExpr) -> usize {
    let own = match e {
        PathExpr::MatMul(..) => 4,
        PathExpr::Hadamard(..) => 2,
        _ => 1,
    };
    own + e.children().into_iter().map(cost).sum::<usize>()
}

fn preorder(e: &PathExpr) -> Vec<(Vec<usize>, &PathExpr)> {
    fn go<'a>(e: &'a PathExpr, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a PathExpr)>) {
        out.push((path.clone(), e));
        for (k, c) in e.children().into_iter().enumerate() {
            path.push(k);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

/// A candidate rewrite of the subtree at `path`, as a sequence of steps
/// with paths relative to that subtree.
struct Move {
    path: Vec<usize>,
    steps: Vec<TraceStep>,
    result: PathExpr,
}

/// Applies `name` at `rel` inside `cur`, recording the step.
fn step(cur: &mut PathExpr, steps: &mut Vec<TraceStep>, name: &str, rel: &[usize]) -> Option<()> {
    let r = rule(name);
    let node = cur.at_mut(rel)?;
    let after = r.apply(node)?;
    steps.push(TraceStep {
        rule: r.name.clone(),
        citation: r.citation.clone(),
        path: rel.to_vec(),
        before: node.clone(),
        after: after.clone(),
    });
    *node = after;
    Some(())
}

fn join(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

/// Removes a boolean filter `F` from inside `not(clip(Y & F))` when the
/// same `F` also masks the result: `N & F` with `N = not(clip(Y & F))`
/// becomes `not(clip(Y)) & F`. Runs as a chain of ordinary rule
/// applications: split the clip, expand the negation by De Morgan,
/// distribute `F` and cancel it against its complement.
fn filter_absorb(e: &PathExpr) -> Option<(Vec<TraceStep>, PathExpr)> {
    let PathExpr::Hadamard(l, f) = e else { return None };
    if !f.is_boolean() {
        return None;
    }
    let is_target = |n: &PathExpr| match n {
        PathExpr::Not(c) => match &**c {
            PathExpr::Clip(h) => match &**h {
                PathExpr::Hadamard(x, y) => **x == **f || **y == **f,
                _ => false,
            },
            _ => false,
        },
        _ => false,
    };
    let mut cur = e.clone();
    let mut steps = Vec::new();
    let q: Vec<usize> = if is_target(l) {
        vec![]
    } else {
        match &**l {
            PathExpr::Hadamard(_, n) if is_target(n) => {
                step(&mut cur, &mut steps, "hadamard-reassociate", &[])?;
                vec![1]
            }
            _ => return None,
        }
    };
    let n = join(&q, &[0]);
    let h = join(&n, &[0, 0]);
    if let PathExpr::Hadamard(x, _) = cur.at(&h)? {
        if **x == **f {
            step(&mut cur, &mut steps, "hadamard-commute", &h)?;
        }
    }
    step(&mut cur, &mut steps, "clip-split", &join(&n, &[0]))?;
    step(&mut cur, &mut steps, "clip-boolean", &join(&n, &[0, 1]))?;
    step(&mut cur, &mut steps, "not-hadamard-split", &n)?;
    // `not(F)` where `F = not(G)` collapses to `G`
    let cancelled = step(&mut cur, &mut steps, "not-not", &join(&n, &[0, 1])).is_some();
    step(&mut cur, &mut steps, "clip-intro", &join(&q, &[1]))?;
    step(&mut cur, &mut steps, "clip-merge", &q)?;
    step(&mut cur, &mut steps, "distribute-right", &join(&q, &[0]))?;
    let complement = if cancelled { "complement" } else { "complement-left" };
    step(&mut cur, &mut steps, complement, &join(&q, &[0, 1]))?;
    step(&mut cur, &mut steps, "add-zero", &join(&q, &[0]))?;
    step(&mut cur, &mut steps, "clip-boolean", &q)?;
    if !q.is_empty() {
        step(&mut cur, &mut steps, "hadamard-associate", &[])?;
    }
    Some((steps, cur))
}

fn single(path: &[usize], sub: &PathExpr, name: &str) -> Option<Move> {
    let mut cur = sub.clone();
    let mut steps = Vec::new();
    step(&mut cur, &mut steps, name, &[])?;
    Some(Move {
        path: path.to_vec(),
        steps,
        result: cur,
    })
}

/// The strictly cost-reducing move with the largest saving. Ties go to the
/// earliest node in pre-order, then to the earlier rule.
fn best_reduction(e: &PathExpr) -> Option<Move> {
    let mut best: Option<(isize, Move)> = None;
    for (path, sub) in preorder(e) {
        let before = cost(sub) as isize;
        let rules = catalog().iter().filter(|r| r.role == Role::Reduce);
        let singles = rules.filter_map(|r| single(&path, sub, &r.name));
        let macro_move = filter_absorb(sub).map(|(steps, result)| Move {
            path: path.clone(),
            steps,
            result,
        });
        for m in singles.chain(macro_move) {
            let delta = cost(&m.result) as isize - before;
            if delta < 0 && best.as_ref().map_or(true, |(d, _)| delta < *d) {
                best = Some((delta, m));
            }
        }
    }
    best.map(|(_, m)| m)
}

/// Commutes a Hadamard product when its commuted form already occurs
/// earlier in the expression, so equal subterms are spelled alike.
fn share_commute(path: &[usize], sub: &PathExpr, earlier: &[(Vec<usize>, &PathExpr)]) -> Option<Move> {
    let PathExpr::Hadamard(x, y) = sub else { return None };
    if matches!(**x, PathExpr::Hadamard(..)) || x == y {
        return None;
    }
    let swapped = PathExpr::Hadamard(y.clone(), x.clone());
    let seen = |t: &PathExpr| earlier.iter().any(|(_, n)| *n == t);
    if !seen(&swapped) || seen(sub) {
        return None;
    }
    single(path, sub, "hadamard-commute")
}

fn first_canonical(e: &PathExpr) -> Option<Move> {
    let nodes = preorder(e);
    for (k, (path, sub)) in nodes.iter().enumerate() {
        for r in catalog().iter().filter(|r| r.role == Role::Canonical) {
            if let Some(m) = single(path, sub, &r.name) {
                if cost(&m.result) <= cost(sub) {
                    return Some(m);
                }
            }
        }
        if let Some(m) = share_commute(path, sub, &nodes[..k]) {
            return Some(m);
        }
    }
    None
}

/// Simplifies `e` with the rule catalog.
///
/// Repeatedly applies the most cost-reducing rewrite; when none exists,
/// applies the first cost-neutral normalization (transposes lifted
/// outward, scales pushed into Hadamard products, left-associated chains,
/// shared subterms spelled alike), which may expose further reductions.
/// Stops when neither exists or after `max(16, nodes²)` rule applications.
/// The result never costs more than the input.
pub fn simplify(e: &PathExpr) -> (PathExpr, RuleTrace) {
    let budget = (e.node_count() * e.node_count()).max(16);
    let mut cur = e.clone();
    let mut trace = RuleTrace::new(e.clone());
    while trace.len() < budget {
        let Some(m) = best_reduction(&cur).or_else(|| first_canonical(&cur)) else {
            break;
        };
        if trace.len() + m.steps.len() > budget {
            break;
        }
        for mut s in m.steps {
            s.path = join(&m.path, &s.path);
            trace.steps.push(s);
        }
        *cur.at_mut(&m.path).expect("path from preorder") = m.result;
    }
    (cur, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn simp(s: &str) -> String {
        simplify(&parse(s).unwrap()).0.to_string()
    }

    #[test]
    fn costs() {
        assert_eq!(cost(&parse("A[x] . A[y] & I").unwrap()), 4 + 2 + 3);
    }

    #[test]
    fn filter_algebra() {
        assert_eq!(simp("R(a) & C(b)"), "E(a, b)");
        assert_eq!(simp("R(a) & R(b)"), "ZERO");
        assert_eq!(simp("R(a)''"), "R(a)");
        assert_eq!(simp("vin(E(a, b)) & vout(E(a, b))"), "E(a, b)");
        assert_eq!(simp("A[x] & ONES + ZERO"), "A[x]");
    }

    #[test]
    fn non_boolean_operands_keep_clip() {
        assert_eq!(simp("clip(A[x] . A[y])"), "clip(A[x] . A[y])");
        assert_eq!(simp("clip(A[x] & A[y]')"), "A[x] & A[y]'");
    }

    #[test]
    fn self_loop_filter_absorbed() {
        let x = "A[authored] . A[cites] . A[authored]'";
        let y = "A[authored] . A[authored]'";
        let input = parse(&format!("{x} & not(clip({y} & not(I))) & not(I)")).unwrap();
        let (out, trace) = simplify(&input);
        assert_eq!(out, parse(&format!("{x} & not(clip({y})) & not(I)")).unwrap());
        assert_eq!(cost(&input), 31);
        assert_eq!(cost(&out), 27);
        assert_eq!(trace.replay().unwrap(), out);
        assert!(trace.rules().contains(&"clip-split"));
        assert!(trace.rules().contains(&"not-hadamard-split"));
    }

    #[test]
    fn journal_reuse() {
        let out = simp(
            "(vout(C(socsci) & A[category]) & A[contains]) . A[cites] \
             . (A[contains]' & vin(R(socsci) & A[category]'))",
        );
        assert_eq!(
            out,
            "(vout(C(socsci) & A[category]) & A[contains]) . A[cites] \
             . (vout(C(socsci) & A[category]) & A[contains])'"
        );
    }

    #[test]
    fn merge_factoring() {
        let out = simp(
            "0.6 * (A[authored] . A[authored]' & not(I)) \
             + 0.4 * (A[developed] . A[developed]' & not(I))",
        );
        assert_eq!(
            out,
            "(0.6 * (A[authored] . A[authored]') + 0.4 * (A[developed] . A[developed]')) & not(I)"
        );
    }
}
