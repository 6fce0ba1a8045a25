use std::collections::HashMap;

use super::AnalysisError;
use crate::matrix::PathMatrix;
use crate::store::VertexDictionary;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Scalar,
    Categorical,
}

/// A value per vertex id; `None` where the property is unknown.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexProperty {
    Scalar(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl VertexProperty {
    /// Reads `vertex<TAB>value` lines. Blank lines and `#` comments are
    /// skipped, as are vertices the dictionary does not know.
    pub fn parse(text: &str, dict: &VertexDictionary, kind: PropertyKind) -> Result<Self, AnalysisError> {
        let mut scalars = vec![None; dict.len()];
        let mut labels = vec![None; dict.len()];
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |reason: &str| AnalysisError::Malformed {
                line,
                reason: reason.to_string(),
            };
            let (name, value) = raw
                .split_once('\t')
                .ok_or_else(|| malformed("expected vertex<TAB>value"))?;
            let (name, value) = (name.trim(), value.trim());
            let Some(id) = dict.id(name) else { continue };
            if scalars[id].is_some() || labels[id].is_some() {
                return Err(malformed("duplicate vertex"));
            }
            match kind {
                PropertyKind::Scalar => {
                    let v: f64 = value.parse().map_err(|_| malformed("value is not a number"))?;
                    if !v.is_finite() {
                        return Err(malformed("value is not finite"));
                    }
                    scalars[id] = Some(v);
                }
                PropertyKind::Categorical => labels[id] = Some(value.to_string()),
            }
        }
        Ok(match kind {
            PropertyKind::Scalar => VertexProperty::Scalar(scalars),
            PropertyKind::Categorical => VertexProperty::Categorical(labels),
        })
    }
}

/// Nonzero entries with their share of the total weight.
fn weighted_entries(z: &PathMatrix) -> Result<Vec<(usize, usize, f64)>, AnalysisError> {
    let entries: Vec<_> = z.entries().collect();
    let total: f64 = entries.iter().map(|e| e.2).sum();
    if entries.is_empty() || total <= 0.0 {
        return Err(AnalysisError::Empty);
    }
    Ok(entries.into_iter().map(|(i, j, w)| (i, j, w / total)).collect())
}

fn lookup<T: Clone>(values: &[Option<T>], v: usize) -> Result<T, AnalysisError> {
    values
        .get(v)
        .cloned()
        .flatten()
        .ok_or(AnalysisError::MissingProperty(v))
}

/// Weighted Pearson correlation between the property at the tail and at
/// the head of each nonzero entry of `z`, with entries weighted by their
/// share of the total. Unit weights give the plain edge correlation.
pub fn assortativity_scalar(z: &PathMatrix, values: &[Option<f64>]) -> Result<f64, AnalysisError> {
    let entries = weighted_entries(z)?;
    let (mut mj, mut mk, mut jj, mut kk, mut jk) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(i, j, w) in &entries {
        let (x, y) = (lookup(values, i)?, lookup(values, j)?);
        mj += w * x;
        mk += w * y;
        jj += w * x * x;
        kk += w * y * y;
        jk += w * x * y;
    }
    let var_j = jj - mj * mj;
    let var_k = kk - mk * mk;
    // cancellation leaves rounding noise where the variance is truly zero
    let degenerate = |var: f64, second: f64| var <= 1e-12 * second;
    if degenerate(var_j, jj) || degenerate(var_k, kk) {
        return Err(AnalysisError::DegenerateProperty);
    }
    Ok(((jk - mj * mk) / (var_j * var_k).sqrt()).clamp(-1.0, 1.0))
}

/// Newman's categorical assortativity with edge counts replaced by shares
/// of total path weight.
pub fn assortativity_categorical(z: &PathMatrix, labels: &[Option<String>]) -> Result<f64, AnalysisError> {
    let entries = weighted_entries(z)?;
    let mut tails: HashMap<&str, f64> = HashMap::new();
    let mut heads: HashMap<&str, f64> = HashMap::new();
    let mut within = 0.0;
    for &(i, j, w) in &entries {
        let a = labels.get(i).and_then(Option::as_deref).ok_or(AnalysisError::MissingProperty(i))?;
        let b = labels.get(j).and_then(Option::as_deref).ok_or(AnalysisError::MissingProperty(j))?;
        *tails.entry(a).or_default() += w;
        *heads.entry(b).or_default() += w;
        if a == b {
            within += w;
        }
    }
    let mut categories: Vec<&&str> = tails.keys().collect();
    categories.sort();
    let expected: f64 = categories
        .into_iter()
        .map(|a| tails[*a] * heads.get(*a).copied().unwrap_or(0.0))
        .sum();
    if 1.0 - expected <= 1e-12 {
        return Err(AnalysisError::DegenerateCategory);
    }
    Ok((within - expected) / (1.0 - expected))
}
