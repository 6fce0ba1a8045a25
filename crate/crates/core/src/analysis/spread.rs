use super::pagerank::normalized_rows;
use super::{AnalysisError, EnergyVector};
use crate::matrix::PathMatrix;

/// Pushes energy along row-normalized `z` for `steps` rounds. Each round
/// multiplies by `decay` and zeroes entries below `threshold`. Returns the
/// total energy that passed through each vertex, seed included. Energy
/// reaching a vertex without out-weight stops there.
pub fn spreading_activation(
    z: &PathMatrix,
    seed: &EnergyVector,
    steps: usize,
    decay: f64,
    threshold: f64,
) -> Result<EnergyVector, AnalysisError> {
    let n = z.n();
    if seed.len() != n {
        return Err(AnalysisError::LengthMismatch {
            expected: n,
            found: seed.len(),
        });
    }
    if !(0.0..=1.0).contains(&decay) {
        return Err(AnalysisError::InvalidParameter(format!("decay must be in [0, 1], got {decay}")));
    }
    if !(threshold >= 0.0) {
        return Err(AnalysisError::InvalidParameter(format!(
            "threshold must be nonnegative, got {threshold}"
        )));
    }
    let rows = normalized_rows(z);
    let mut pi = seed.values.clone();
    let mut total = pi.clone();
    for _ in 0..steps {
        let mut next = vec![0.0; n];
        for (i, row) in rows.iter().enumerate() {
            if let (Some(r), true) = (row, pi[i] != 0.0) {
                r.iter().for_each(|&(j, p)| next[j] += decay * pi[i] * p);
            }
        }
        next.iter_mut().filter(|x| **x < threshold).for_each(|x| *x = 0.0);
        total.iter_mut().zip(&next).for_each(|(t, x)| *t += x);
        pi = next;
    }
    Ok(EnergyVector::new(total))
}
