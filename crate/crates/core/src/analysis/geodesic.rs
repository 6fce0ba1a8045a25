use std::collections::VecDeque;

use rayon::prelude::*;

use crate::matrix::PathMatrix;

/// Hop-count geodesics over the nonzero pattern of a path matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicResult {
    /// `distances[i][j]`; `None` when `j` is unreachable from `i`.
    pub distances: Vec<Vec<Option<u32>>>,
    /// Longest distance from each vertex; `None` if some vertex is
    /// unreachable from it.
    pub eccentricity: Vec<Option<u32>>,
    pub radius: Option<u32>,
    pub diameter: Option<u32>,
    /// Mean distance to the reachable vertices other than itself.
    pub closeness: Vec<Option<f64>>,
    /// Number of other vertices reachable.
    pub reach: Vec<usize>,
}

impl GeodesicResult {
    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        self.distances[i][j]
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued vertices have a distance") + 1;
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Breadth-first distances from every vertex, following entries of `z`
/// with nonzero value regardless of weight. Sources run in parallel.
pub fn shortest_paths(z: &PathMatrix) -> GeodesicResult {
    let n = z.n();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| z.row(i).into_iter().map(|(j, _)| j).collect())
        .collect();
    let distances: Vec<Vec<Option<u32>>> = (0..n).into_par_iter().map(|s| bfs(&adj, s)).collect();

    let mut eccentricity = Vec::with_capacity(n);
    let mut closeness = Vec::with_capacity(n);
    let mut reach = Vec::with_capacity(n);
    for (i, row) in distances.iter().enumerate() {
        let others = row.iter().enumerate().filter(|&(j, _)| j != i);
        let reached: Vec<u32> = others.filter_map(|(_, d)| *d).collect();
        let complete = reached.len() + 1 == n;
        eccentricity.push(complete.then(|| reached.iter().copied().max().unwrap_or(0)));
        closeness.push(
            (!reached.is_empty())
                .then(|| reached.iter().map(|&d| d as f64).sum::<f64>() / reached.len() as f64),
        );
        reach.push(reached.len());
    }
    let finite = eccentricity.iter().flatten().copied();
    GeodesicResult {
        radius: finite.clone().min(),
        diameter: finite.max(),
        distances,
        eccentricity,
        closeness,
        reach,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle() {
        let z = PathMatrix::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let g = shortest_paths(&z);
        assert_eq!(g.distance(0, 2), Some(2));
        assert_eq!(g.radius, Some(2));
        assert_eq!(g.diameter, Some(2));
        assert_eq!(g.closeness, vec![Some(1.5); 3]);
    }

    #[test]
    fn identity_has_no_eccentricity() {
        let g = shortest_paths(&PathMatrix::identity(3));
        assert_eq!(g.eccentricity, vec![None; 3]);
        assert_eq!(g.radius, None);
        assert_eq!(g.closeness, vec![None; 3]);
        assert_eq!(g.distance(1, 1), Some(0));
    }

    #[test]
    fn weights_are_ignored() {
        let z = PathMatrix::from_entries(2, [(0, 1, 7.5)]).unwrap();
        assert_eq!(shortest_paths(&z).distance(0, 1), Some(1));
    }
}
