use super::ast::{Pattern, Term};
use super::lexer::is_ident_char;
use super::PathExpr;
use crate::matrix::FilterSpec;

// Binding strength, loosest first.
const ADD: u8 = 1;
const HAD: u8 = 2;
const MATMUL: u8 = 3;
const SCALE: u8 = 4;
const POSTFIX: u8 = 5;
const ATOM: u8 = 6;

/// Renders an expression in the concrete syntax accepted by
/// [`parse`](super::parse), with the minimum parentheses needed to parse
/// back to the same tree.
pub fn format(e: &PathExpr) -> String {
    format_pattern(&Pattern::from(e))
}

pub fn format_pattern(p: &Pattern) -> String {
    let mut out = String::new();
    write(p, &mut out);
    out
}

fn level(p: &Pattern) -> u8 {
    match p {
        Pattern::Add(..) => ADD,
        Pattern::Hadamard(..) => HAD,
        Pattern::MatMul(..) => MATMUL,
        Pattern::Scale(..) => SCALE,
        Pattern::Transpose(_) => POSTFIX,
        _ => ATOM,
    }
}

fn child(p: &Pattern, min: u8, out: &mut String) {
    if level(p) >= min {
        write(p, out);
    } else {
        out.push('(');
        write(p, out);
        out.push(')');
    }
}

fn name(s: &str, out: &mut String) {
    if !s.is_empty() && s.chars().all(is_ident_char) {
        out.push_str(s);
    } else {
        out.push('"');
        for c in s.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    }
}

fn vertex(t: &Term<String>, out: &mut String) {
    match t {
        Term::Lit(s) => name(s, out),
        Term::Meta(m) => {
            out.push('?');
            out.push_str(m);
        }
    }
}

fn write(p: &Pattern, out: &mut String) {
    let binary = |l: &Pattern, op: &str, r: &Pattern, lv: u8, out: &mut String| {
        child(l, lv, out);
        out.push_str(op);
        child(r, lv + 1, out);
    };
    let call = |f: &str, a: &Pattern, p: Option<&Term<u64>>, out: &mut String| {
        out.push_str(f);
        out.push('(');
        write(a, out);
        match p {
            Some(Term::Lit(0)) | None => {}
            Some(Term::Lit(p)) => out.push_str(&format!(", {p}")),
            Some(Term::Meta(m)) => out.push_str(&format!(", ?{m}")),
        }
        out.push(')');
    };
    match p {
        Pattern::Meta(m) => {
            out.push('?');
            out.push_str(m);
        }
        Pattern::Slice(l) => {
            out.push_str("A[");
            name(l, out);
            out.push(']');
        }
        Pattern::Filter(f) => match f {
            FilterSpec::Identity => out.push('I'),
            FilterSpec::Ones => out.push_str("ONES"),
            FilterSpec::Zeros => out.push_str("ZERO"),
            FilterSpec::Row(i) | FilterSpec::Col(i) => {
                out.push_str(if matches!(f, FilterSpec::Row(_)) { "R(" } else { "C(" });
                vertex(i, out);
                out.push(')');
            }
            FilterSpec::Entry(i, j) => {
                out.push_str("E(");
                vertex(i, out);
                out.push_str(", ");
                vertex(j, out);
                out.push(')');
            }
        },
        Pattern::Add(l, r) => binary(l, " + ", r, ADD, out),
        Pattern::Hadamard(l, r) => binary(l, " & ", r, HAD, out),
        Pattern::MatMul(l, r) => binary(l, " . ", r, MATMUL, out),
        Pattern::Scale(s, a) => {
            match s {
                Term::Lit(s) => out.push_str(&s.to_string()),
                Term::Meta(m) => {
                    out.push('?');
                    out.push_str(m);
                }
            }
            out.push_str(" * ");
            child(a, SCALE, out);
        }
        Pattern::Transpose(a) => {
            child(a, POSTFIX, out);
            out.push('\'');
        }
        Pattern::Not(a) => call("not", a, None, out),
        Pattern::Clip(a) => call("clip", a, None, out),
        Pattern::VOut(a, p) => call("vout", a, Some(p), out),
        Pattern::VIn(a, p) => call("vin", a, Some(p), out),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_pattern};
    use super::*;

    #[test]
    fn minimal_parentheses() {
        for s in [
            "A[authored] . A[authored]' & not(I)",
            "0.6 * (A[authored] . A[authored]' & not(I)) + 0.4 * (A[developed] . A[developed]' & not(I))",
            "(A[x] + A[y]) & A[z]",
            "A[x] . (A[y] . A[z])",
            "(A[x] . A[y])'",
            "(2 * A[x])'",
            "2 * 3 * A[x]",
            "vout(R(h1), 2) & vin(E(a, \"b c\"))",
            "clip(A[x] + A[y]) . ONES . ZERO",
        ] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
    }

    #[test]
    fn identity_prints_as_i() {
        assert_eq!(format(&PathExpr::identity()), "I");
    }

    #[test]
    fn nested_scale_keeps_precedence() {
        let e = PathExpr::slice("x").matmul(PathExpr::slice("y")).scale(0.5);
        assert_eq!(format(&e), "0.5 * (A[x] . A[y])");
        assert_eq!(parse(&format(&e)).unwrap(), e);
    }

    #[test]
    fn patterns_print_metas() {
        let p = parse_pattern("?l * ?a & R(?i)").unwrap();
        assert_eq!(format_pattern(&p), "?l * ?a & R(?i)");
    }
}
