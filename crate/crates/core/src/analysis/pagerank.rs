use super::{AnalysisError, EnergyVector};
use crate::matrix::PathMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    /// Weight on following paths; `1 - delta` teleports uniformly.
    pub delta: f64,
    /// Stop once successive iterates differ by less than this in L2.
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            delta: 0.85,
            epsilon: 1e-12,
            max_iters: 10_000,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(AnalysisError::InvalidParameter(format!(
                "delta must be in (0, 1], got {}",
                self.delta
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(AnalysisError::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Row-normalized out-weights. `None` for rows with no out-weight.
pub(crate) fn normalized_rows(z: &PathMatrix) -> Vec<Option<Vec<(usize, f64)>>> {
    (0..z.n())
        .map(|i| {
            let row = z.row(i);
            let total: f64 = row.iter().map(|&(_, w)| w).sum();
            (total > 0.0).then(|| row.into_iter().map(|(j, w)| (j, w / total)).collect())
        })
        .collect()
}

/// The dense chain `delta * P1 + (1 - delta) * P2`: `P1` row-normalizes
/// `z` with rows lacking out-weight made uniform, `P2` is uniform. For
/// inspection on small matrices.
pub fn merged_matrix(z: &PathMatrix, delta: f64) -> Vec<Vec<f64>> {
    let n = z.n();
    let uniform = 1.0 / n as f64;
    normalized_rows(z)
        .into_iter()
        .map(|row| {
            let mut out = vec![(1.0 - delta) * uniform; n];
            match row {
                Some(r) => r.into_iter().for_each(|(j, p)| out[j] += delta * p),
                None => out.iter_mut().for_each(|x| *x += delta * uniform),
            }
            out
        })
        .collect()
}

/// Stationary energy of the merged chain by power iteration from the
/// uniform vector. The result is normalized to unit L1 norm.
pub fn pagerank(z: &PathMatrix, cfg: &PageRankConfig) -> Result<EnergyVector, AnalysisError> {
    cfg.validate()?;
    let n = z.n();
    if n == 0 {
        return Err(AnalysisError::InvalidParameter("empty matrix".into()));
    }
    let rows = normalized_rows(z);
    let uniform = 1.0 / n as f64;
    let mut pi = vec![uniform; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let mut dangling = 0.0;
        let mut next = vec![0.0; n];
        for (i, row) in rows.iter().enumerate() {
            match row {
                Some(r) => r.iter().for_each(|&(j, p)| next[j] += cfg.delta * pi[i] * p),
                None => dangling += pi[i],
            }
        }
        let mass: f64 = pi.iter().sum();
        let spread = (cfg.delta * dangling + (1.0 - cfg.delta) * mass) * uniform;
        next.iter_mut().for_each(|x| *x += spread);
        residual = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        pi = next;
        if residual < cfg.epsilon {
            let total: f64 = pi.iter().sum();
            pi.iter_mut().for_each(|x| *x /= total);
            return Ok(EnergyVector::new(pi));
        }
    }
    Err(AnalysisError::NotConverged {
        iterations: cfg.max_iters,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_is_uniform() {
        let z = PathMatrix::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let pi = pagerank(&z, &PageRankConfig::default()).unwrap();
        for v in pi.values {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn merged_rows_sum_to_one() {
        let z = PathMatrix::from_entries(3, [(0, 1, 2.0), (0, 2, 1.0)]).unwrap();
        for row in merged_matrix(&z, 0.85) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_delta() {
        let cfg = PageRankConfig {
            delta: 0.0,
            ..Default::default()
        };
        assert!(pagerank(&PathMatrix::identity(2), &cfg).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let z = PathMatrix::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let cfg = PageRankConfig {
            max_iters: 0,
            ..Default::default()
        };
        assert!(matches!(pagerank(&z, &cfg), Err(AnalysisError::NotConverged { .. })));
    }
}
