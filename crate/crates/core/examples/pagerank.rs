//! PageRank of humans on the weighted has-cited path matrix.

use pathweave::analysis::{pagerank, PageRankConfig};
use pathweave::{evaluate, parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(&parse("A[authored] . A[cites] . A[authored]'").unwrap(), &g).unwrap();
    let pi = pagerank(&z, &PageRankConfig::default()).unwrap();

    let mut ranked: Vec<(&str, f64)> = g
        .vertices()
        .names()
        .iter()
        .zip(&pi.values)
        .filter(|(name, _)| ["marko", "alice", "bob", "carol", "dana"].contains(&name.as_str()))
        .map(|(n, &v)| (n.as_str(), v))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (name, score) in ranked {
        println!("{name:<6} {score:.4}");
    }
    println!("sum over all vertices: {:.12}", pi.l1());
}
