mod common;

use common::*;
use pathweave::store::{ingest_triples, parse_triples, StoreError};
use proptest::prelude::*;

#[test]
fn fixture_dimensions() {
    let t = fixture1();
    assert_eq!(t.n(), 7);
    // developed only has a signature
    assert_eq!(t.m(), 5);
    assert_eq!(t.edge_count(), 8);
    assert!(t.slice("developed").unwrap().is_empty());
    let names: Vec<&str> = t.vertices().names().iter().map(String::as_str).collect();
    assert_eq!(names, ["h1", "a1", "a2", "h2", "a3", "j1", "s1"]);
}

#[test]
fn slice_matrix_matches_triples() {
    let t = fixture1();
    let d = t.vertices();
    let m = t.slice("authored").unwrap().to_matrix(t.n());
    assert_eq!(m.nnz(), 4);
    for (h, a) in [("h1", "a1"), ("h1", "a2"), ("h2", "a2"), ("h2", "a3")] {
        assert_eq!(m.get(d.id(h).unwrap(), d.id(a).unwrap()), 1.0);
    }
    assert!(m.is_boolean());
}

#[test]
fn unknown_label_names_alternatives() {
    let err = fixture1().slice("wrote").unwrap_err();
    assert!(matches!(err, StoreError::UnknownLabel { ref label, .. } if label == "wrote"));
    assert!(err.to_string().contains("authored"));
}

#[test]
fn comments_and_blank_lines() {
    let t = parse_triples("# header\n\na\tp\tb\r\n").unwrap();
    assert_eq!(t.edge_count(), 1);
    assert_eq!(parse_triples("# only\n").unwrap_err(), StoreError::NoEdges);
}

#[test]
fn wrong_field_count() {
    let err = parse_triples("a\tp\tb\na\tp\n").unwrap_err();
    assert!(matches!(err, StoreError::Malformed { line: 2, .. }));
}

#[test]
fn empty_field_rejected() {
    let err = ingest_triples([("a", "", "b")]).unwrap_err();
    assert!(matches!(err, StoreError::Malformed { line: 1, .. }));
}

fn triples() -> impl Strategy<Value = Vec<(String, String, String)>> {
    let name = "[a-e][0-3]";
    let label = "[pqr]";
    prop::collection::vec((name, label, name), 1..40)
}

proptest! {
    #[test]
    fn tsv_round_trip(ts in triples()) {
        let t = ingest_triples(ts.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))).unwrap();
        let back = parse_triples(&t.to_tsv()).unwrap();
        // ids follow first appearance, so compare edge sets
        let (mut a, mut b) = (back.to_triples(), t.to_triples());
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert_eq!(back.n(), t.n());
    }

    #[test]
    fn duplicates_collapse(ts in triples()) {
        let doubled = ts.iter().chain(&ts).map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()));
        let t = ingest_triples(doubled).unwrap();
        let distinct: std::collections::BTreeSet<_> = ts.iter().collect();
        prop_assert_eq!(t.edge_count(), distinct.len());
    }
}
