mod common;

use pathweave::expr::{check_signatures, format, parse, parse_program, PathExpr, Scalar};
use pathweave::FilterSpec;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

const NAMES: [&str; 10] = ["a", "h1", "x-y", "has:part", "two words", "1st", "ONES", "let", "not", "é"];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES.to_vec()).prop_map(String::from)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        prop::sample::select(vec![0.0, 1.0, 0.5, 0.6, 2.0, 1e-20, 1e21, 123.456]),
        (prop::num::f64::POSITIVE | prop::num::f64::ZERO).prop_filter("finite", |v| v.is_finite()),
    ]
    .prop_map(|v| Scalar::new(v).unwrap())
}

fn leaf() -> impl Strategy<Value = PathExpr> {
    prop_oneof![
        4 => name().prop_map(PathExpr::Slice),
        1 => name().prop_map(|v| PathExpr::Filter(FilterSpec::Row(v))),
        1 => name().prop_map(|v| PathExpr::Filter(FilterSpec::Col(v))),
        1 => (name(), name()).prop_map(|(v, w)| PathExpr::Filter(FilterSpec::Entry(v, w))),
        1 => Just(PathExpr::identity()),
        1 => Just(PathExpr::Filter(FilterSpec::Ones)),
        1 => Just(PathExpr::Filter(FilterSpec::Zeros)),
    ]
}

fn expr() -> impl Strategy<Value = PathExpr> {
    leaf().prop_recursive(7, 64, 2, |inner| {
        let b = |e: PathExpr| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PathExpr::MatMul(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PathExpr::Hadamard(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PathExpr::Add(b(l), b(r))),
            inner.clone().prop_map(move |e| PathExpr::Transpose(b(e))),
            inner.clone().prop_map(move |e| PathExpr::Not(b(e))),
            inner.clone().prop_map(move |e| PathExpr::Clip(b(e))),
            (inner.clone(), 0u64..5).prop_map(move |(e, p)| PathExpr::VOut(b(e), p)),
            (inner.clone(), 0u64..5).prop_map(move |(e, p)| PathExpr::VIn(b(e), p)),
            (scalar(), inner).prop_map(move |(s, e)| PathExpr::Scale(s, b(e))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn format_round_trips(e in expr()) {
        prop_assert!(e.depth() <= 8);
        let text = format(&e);
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e);
    }
}

#[test]
fn worked_examples_round_trip() {
    for s in [
        "A[authored] . A[authored]' & not(I)",
        "0.6 * (A[authored] . A[authored]' & not(I)) + 0.4 * (A[developed] . A[developed]' & not(I))",
        common::MARKO_QUERY,
    ] {
        let e = parse(s).unwrap();
        assert_eq!(parse(&format(&e)).unwrap(), e);
    }
}

#[test]
fn merge_is_a_sum_of_scales() {
    let e = parse("0.6 * (A[authored] . A[authored]' & not(I)) + 0.4 * (A[developed] . A[developed]' & not(I))")
        .unwrap();
    let PathExpr::Add(l, r) = e else { panic!("not a sum") };
    assert!(matches!(*l, PathExpr::Scale(s, _) if s.get() == 0.6));
    assert!(matches!(*r, PathExpr::Scale(s, _) if s.get() == 0.4));
}

#[test]
fn minimal_parentheses() {
    assert_eq!(format(&parse("(A[x] . A[y]) . A[z]").unwrap()), "A[x] . A[y] . A[z]");
    assert_eq!(format(&parse("A[x] . (A[y] . A[z])").unwrap()), "A[x] . (A[y] . A[z])");
    assert_eq!(format(&parse("2 * (3 * A[x])").unwrap()), "2 * 3 * A[x]");
    assert_eq!(format(&parse("(2 * A[x]) . A[y]").unwrap()), "2 * A[x] . A[y]");
    assert_eq!(format(&parse("2 * (A[x] . A[y])").unwrap()), "2 * (A[x] . A[y])");
    assert_eq!(format(&parse("(A[x] + A[y])'").unwrap()), "(A[x] + A[y])'");
    assert_eq!(format(&parse("vout(I, 0)").unwrap()), "vout(I)");
    assert_eq!(format(&PathExpr::slice("two words")), "A[\"two words\"]");
}

#[test]
fn syntax_errors_carry_offsets() {
    let err = parse("A[authored .").unwrap_err();
    assert_eq!(err.offset, 11);
    assert!(err.to_string().starts_with("syntax error at offset 11"));
    assert_eq!(parse("frob(I)").unwrap_err().message, "unknown function `frob`");
    assert_eq!(parse("A[x] & ").unwrap_err().offset, 7);
    assert_eq!(parse("(A[x]").unwrap_err().offset, 5);
    assert!(parse("-1 * A[x]").is_err());
}

#[test]
fn programs() {
    let e = parse_program("let Y = A[authored] . A[authored]'\nlet X = A[authored] . A[cites] . A[authored]'\nX & not(clip(Y))").unwrap();
    assert_eq!(e.node_count(), 13);
    assert!(parse_program("let Y = A[x]\nlet Y = Y . Y\nY").is_ok());
}

#[test]
fn random_input_never_panics() {
    let pieces = [
        "A[", "]", "x", "(", ")", "'", ".", "&", "+", "*", "0.6", "1e3", "not", "clip", "vout", "vin", ",", "R(",
        "C(", "E(", "I", "ONES", "ZERO", "?a", "\"", "let", "=", "#", "\n", " ", "é", "\u{0}", "9999999999999999999999",
    ];
    let mut rng = common::rng(13);
    for _ in 0..100_000 {
        let k = rng.gen_range(0..12);
        let src: String = (0..k).map(|_| *pieces.choose(&mut rng).unwrap()).collect();
        for result in [parse(&src), parse_program(&src)] {
            if let Err(e) = result {
                assert!(e.offset <= src.len(), "{src:?} -> {e}");
            }
        }
    }
}

#[test]
fn signature_checking_on_fixture() {
    let t = common::fixture1();
    let ok = check_signatures(&parse("A[authored] . A[cites] . A[authored]'").unwrap(), &t);
    assert!(ok.ok);
    assert_eq!(ok.derived.to_string(), "H -> H");
    let bad = check_signatures(&parse("A[cites] . A[authored]").unwrap(), &t);
    assert!(!bad.ok);
    assert_eq!(bad.violations.len(), 1);
    assert_eq!(bad.violations[0].expected, "domain A");
    assert_eq!(bad.violations[0].found, "domain H");
    // advisory only: the ill-typed product still evaluates, to zero
    let z = pathweave::evaluate(&parse("A[cites] . A[authored]").unwrap(), &t).unwrap();
    assert_eq!(z.nnz(), 0);
    let filters = check_signatures(&parse("A[authored] & not(I)").unwrap(), &t);
    assert!(filters.ok);
    assert_eq!(filters.derived.to_string(), "H -> A");
}
