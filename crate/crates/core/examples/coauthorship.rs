//! Coauthorship from the authored relation: walk to an article and back,
//! then drop the diagonal.

use pathweave::{evaluate, parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();

    let shared = parse("A[authored] . A[authored]'").unwrap();
    let coauthors = parse("A[authored] . A[authored]' & not(I)").unwrap();

    let z = evaluate(&shared, &g).unwrap();
    let marko = g.vertices().id("marko").unwrap();
    println!("marko has {} articles", z.get(marko, marko));

    println!("\ncoauthor pairs, weighted by shared articles:");
    print!("{}", evaluate(&coauthors, &g).unwrap().to_tsv(g.vertices()));
}
