//! Vertex dictionary and the three-way boolean tensor.
//!
//! A multi-relational network is stored as one boolean adjacency slice per
//! edge label, all indexed by a single shared [`VertexDictionary`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::matrix::PathMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StoreError {
    #[error("no edges")]
    NoEdges,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("unknown label `{label}` (available: {})", available.join(", "))]
    UnknownLabel { label: String, available: Vec<String> },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
}

/// Bijection between vertex names and dense ids assigned in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexDictionary {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VertexDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, assigning the next free id if it is new.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Domain and range classes of an edge label, e.g. `authored: H -> A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub domain: String,
    pub range: String,
}

impl Signature {
    pub fn new(domain: impl Into<String>, range: impl Into<String>) -> Self {
        Self {
            domain: domain.into(),
            range: range.into(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.range)
    }
}

/// One boolean adjacency slice: the edge set of a single label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSlice {
    label: String,
    pairs: BTreeSet<(usize, usize)>,
    signature: Option<Signature>,
}

impl EdgeSlice {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, tail: usize, head: usize) -> bool {
        self.pairs.contains(&(tail, head))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn signature(&self) -> Option<&Signature> {
        self.signature.as_ref()
    }

    /// The slice as an `n x n` {0,1} path matrix.
    pub fn to_matrix(&self, n: usize) -> PathMatrix {
        PathMatrix::from_pairs(n, self.pairs.iter().copied())
    }
}

/// The `n x n x m` boolean tensor over one vertex dictionary.
///
/// Immutable once built; use [`TensorBuilder`] or [`ingest_triples`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRelTensor {
    vertices: VertexDictionary,
    slices: BTreeMap<String, EdgeSlice>,
}

impl MultiRelTensor {
    pub fn builder() -> TensorBuilder {
        TensorBuilder::default()
    }

    pub fn vertices(&self) -> &VertexDictionary {
        &self.vertices
    }

    /// Order of every slice.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Number of slices.
    pub fn m(&self) -> usize {
        self.slices.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.slices.keys().map(String::as_str)
    }

    pub fn slices(&self) -> impl Iterator<Item = &EdgeSlice> {
        self.slices.values()
    }

    pub fn slice(&self, label: &str) -> Result<&EdgeSlice, StoreError> {
        self.slices
            .get(label)
            .ok_or_else(|| StoreError::UnknownLabel {
                label: label.to_string(),
                available: self.slices.keys().cloned().collect(),
            })
    }

    pub fn signature(&self, label: &str) -> Option<&Signature> {
        self.slices.get(label).and_then(|s| s.signature.as_ref())
    }

    pub fn edge_count(&self) -> usize {
        self.slices.values().map(EdgeSlice::len).sum()
    }

    /// Attaches signatures. A label with a signature but no edges becomes an
    /// empty slice, so expressions may name it.
    pub fn with_signatures<I>(mut self, sigs: I) -> Self
    where
        I: IntoIterator<Item = (String, Signature)>,
    {
        for (label, sig) in sigs {
            let slice = self.slices.entry(label.clone()).or_insert_with(|| EdgeSlice {
                label,
                pairs: BTreeSet::new(),
                signature: None,
            });
            slice.signature = Some(sig);
        }
        self
    }

    /// All edges as `(tail, label, head)` name triples, ordered by label then
    /// by tail and head id.
    pub fn to_triples(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for slice in self.slices.values() {
            for &(t, h) in &slice.pairs {
                out.push((
                    self.vertices.names[t].clone(),
                    slice.label.clone(),
                    self.vertices.names[h].clone(),
                ));
            }
        }
        out
    }

    /// Renders the tensor in the triple file format.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (t, l, h) in self.to_triples() {
            s.push_str(&format!("{t}\t{l}\t{h}\n"));
        }
        s
    }
}

/// Incremental tensor construction. Vertex ids are assigned first-seen across
/// all labels.
#[derive(Debug, Default, Clone)]
pub struct TensorBuilder {
    vertices: VertexDictionary,
    slices: BTreeMap<String, EdgeSlice>,
}

impl TensorBuilder {
    pub fn vertex(&mut self, name: &str) -> usize {
        self.vertices.intern(name)
    }

    /// Declares a label even if it ends up with no edges.
    pub fn label(&mut self, label: &str) -> &mut Self {
        self.slices
            .entry(label.to_string())
            .or_insert_with(|| EdgeSlice {
                label: label.to_string(),
                pairs: BTreeSet::new(),
                signature: None,
            });
        self
    }

    pub fn edge(&mut self, tail: &str, label: &str, head: &str) -> &mut Self {
        let t = self.vertices.intern(tail);
        let h = self.vertices.intern(head);
        self.edge_ids(t, label, h)
    }

    /// Adds an edge between already interned vertex ids.
    ///
    /// # Panics
    /// If either id has not been assigned by this builder.
    pub fn edge_ids(&mut self, tail: usize, label: &str, head: usize) -> &mut Self {
        assert!(
            tail < self.vertices.len() && head < self.vertices.len(),
            "vertex id out of range"
        );
        self.label(label);
        if let Some(slice) = self.slices.get_mut(label) {
            slice.pairs.insert((tail, head));
        }
        self
    }

    pub fn signature(&mut self, label: &str, sig: Signature) -> &mut Self {
        self.label(label);
        if let Some(slice) = self.slices.get_mut(label) {
            slice.signature = Some(sig);
        }
        self
    }

    pub fn build(self) -> Result<MultiRelTensor, StoreError> {
        if self.slices.is_empty() {
            return Err(StoreError::NoEdges);
        }
        Ok(MultiRelTensor {
            vertices: self.vertices,
            slices: self.slices,
        })
    }
}

/// Builds a tensor from `(tail, label, head)` triples. Duplicate triples
/// collapse into one edge.
pub fn ingest_triples<I, S>(lines: I) -> Result<MultiRelTensor, StoreError>
where
    I: IntoIterator<Item = (S, S, S)>,
    S: AsRef<str>,
{
    let mut builder = TensorBuilder::default();
    let mut any = false;
    for (idx, (tail, label, head)) in lines.into_iter().enumerate() {
        let (tail, label, head) = (tail.as_ref(), label.as_ref(), head.as_ref());
        for (field, value) in [("tail", tail), ("label", label), ("head", head)] {
            if value.is_empty() {
                return Err(StoreError::Malformed {
                    line: idx + 1,
                    reason: format!("empty {field}"),
                });
            }
        }
        builder.edge(tail, label, head);
        any = true;
    }
    if !any {
        return Err(StoreError::NoEdges);
    }
    builder.build()
}

/// Parses the tab-separated triple format: `tail<TAB>label<TAB>head`, one per
/// line, `#` lines and blank lines ignored.
pub fn parse_triples(text: &str) -> Result<MultiRelTensor, StoreError> {
    let mut builder = TensorBuilder::default();
    let mut any = false;
    for (idx, line) in text.lines().enumerate() {
        let Some(fields) = data_fields(line) else {
            continue;
        };
        let [tail, label, head] = fields_exact::<3>(&fields, idx + 1)?;
        builder.edge(tail, label, head);
        any = true;
    }
    if !any {
        return Err(StoreError::NoEdges);
    }
    builder.build()
}

/// Parses a signature file: `label<TAB>domainClass<TAB>rangeClass`.
pub fn parse_signatures(text: &str) -> Result<Vec<(String, Signature)>, StoreError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let Some(fields) = data_fields(line) else {
            continue;
        };
        let [label, domain, range] = fields_exact::<3>(&fields, idx + 1)?;
        out.push((label.to_string(), Signature::new(domain, range)));
    }
    Ok(out)
}

fn data_fields(line: &str) -> Option<Vec<&str>> {
    let line = line.trim_end_matches('\r');
    if line.trim().is_empty() || line.trim_start().starts_with('#') {
        return None;
    }
    Some(line.split('\t').collect())
}

fn fields_exact<'a, const N: usize>(
    fields: &[&'a str],
    line: usize,
) -> Result<[&'a str; N], StoreError> {
    if fields.len() != N {
        return Err(StoreError::Malformed {
            line,
            reason: format!("expected {N} tab-separated fields, found {}", fields.len()),
        });
    }
    let mut out = [""; N];
    for (i, f) in fields.iter().enumerate() {
        let f = f.trim();
        if f.is_empty() {
            return Err(StoreError::Malformed {
                line,
                reason: format!("field {} is empty", i + 1),
            });
        }
        out[i] = f;
    }
    Ok(out)
}

impl fmt::Display for MultiRelTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.n())?;
        writeln!(f, "labels: {}", self.m())?;
        for slice in self.slices.values() {
            write!(f, "  {}\t{} edges", slice.label, slice.len())?;
            if let Some(sig) = &slice.signature {
                write!(f, "\t{} -> {}", sig.domain, sig.range)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let t = ingest_triples([("h1", "authored", "a1")]).unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.m(), 1);
        let s = t.slice("authored").unwrap();
        assert_eq!(s.pairs().iter().copied().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn duplicates_collapse() {
        let t = ingest_triples([("h1", "authored", "a1"), ("h1", "authored", "a1")]).unwrap();
        assert_eq!(t.slice("authored").unwrap().len(), 1);
    }

    #[test]
    fn empty_input_is_an_error() {
        let none: Vec<(&str, &str, &str)> = vec![];
        assert_eq!(ingest_triples(none).unwrap_err(), StoreError::NoEdges);
        assert_eq!(parse_triples("# only a comment\n\n").unwrap_err(), StoreError::NoEdges);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_triples("a\tknows\tb\n# skip\nc\tknows\n").unwrap_err();
        assert!(matches!(err, StoreError::Malformed { line: 3, .. }), "{err:?}");
        let err = ingest_triples([("a", "x", "b"), ("a", "", "b")]).unwrap_err();
        assert!(matches!(err, StoreError::Malformed { line: 2, .. }));
    }

    #[test]
    fn ids_are_shared_across_labels() {
        let t = parse_triples("a\tp\tb\nb\tq\tc\n").unwrap();
        assert_eq!(t.vertices().id("a"), Some(0));
        assert_eq!(t.vertices().id("b"), Some(1));
        assert_eq!(t.vertices().id("c"), Some(2));
        assert!(t.slice("q").unwrap().contains(1, 2));
    }

    #[test]
    fn unknown_label_lists_available() {
        let t = parse_triples("a\tp\tb\nb\tq\tc\n").unwrap();
        let err = t.slice("knows").unwrap_err();
        assert_eq!(
            err,
            StoreError::UnknownLabel {
                label: "knows".into(),
                available: vec!["p".into(), "q".into()]
            }
        );
        assert!(err.to_string().contains("p, q"));
    }

    #[test]
    fn signatures_parse_and_attach() {
        let t = parse_triples("h\tauthored\ta\n").unwrap();
        let sigs = parse_signatures("# sigs\nauthored\tH\tA\n").unwrap();
        let t = t.with_signatures(sigs);
        assert_eq!(t.signature("authored"), Some(&Signature::new("H", "A")));
        let t = t.with_signatures(vec![("developed".into(), Signature::new("H", "P"))]);
        assert_eq!(t.m(), 2);
        assert!(t.slice("developed").unwrap().is_empty());
    }
}
