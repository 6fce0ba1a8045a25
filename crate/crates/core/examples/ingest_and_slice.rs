//! Load a triple file into a tensor and pull out one relation.

use pathweave::store::parse_signatures;
use pathweave::{evaluate, parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv"))
        .unwrap()
        .with_signatures(parse_signatures(include_str!("data/bibliography_signatures.tsv")).unwrap());
    println!("{} vertices, {} labels, {} edges", g.n(), g.m(), g.edge_count());
    for s in g.slices() {
        let sig = s.signature().map(|s| s.to_string()).unwrap_or_default();
        println!("  {:<10} {:>3} edges  {sig}", s.label(), s.len());
    }

    let cites = evaluate(&parse("A[cites]").unwrap(), &g).unwrap();
    println!("\nA[cites] as a path matrix ({} nonzero):", cites.nnz());
    print!("{}", cites.to_tsv(g.vertices()));
}
