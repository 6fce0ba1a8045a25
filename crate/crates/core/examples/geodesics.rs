//! Hop distances over the citation graph and the vertex statistics derived
//! from them.

use pathweave::analysis::{shortest_paths, Report};
use pathweave::{evaluate, parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(&parse("A[cites]").unwrap(), &g).unwrap();
    let geo = shortest_paths(&z);
    let d = g.vertices();
    let (p1, p6) = (d.id("p1").unwrap(), d.id("p6").unwrap());
    println!("p1 -> p6: {:?} hops", geo.distance(p1, p6));
    println!("p6 -> p1: {:?} hops\n", geo.distance(p6, p1));
    print!("{}", Report::geodesics(&geo, d).to_tsv());
}
