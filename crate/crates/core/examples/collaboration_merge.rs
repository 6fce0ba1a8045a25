//! Weighted merge of two collaboration relations, with the shared
//! diagonal filter factored out by the rewriter.

use pathweave::{evaluate, format, parse, parse_triples, simplify};

fn main() {
    let e = parse(
        "0.6 * (A[authored] . A[authored]' & not(I)) + 0.4 * (A[developed] . A[developed]' & not(I))",
    )
    .unwrap();
    let (s, trace) = simplify(&e);
    println!("{}\n  => {}", format(&e), format(&s));
    print!("{}", trace.derivation_table());

    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(&s, &g).unwrap();
    println!("\ncollaboration strength:");
    print!("{}", z.to_tsv(g.vertices()));
    println!("max difference to unsimplified: {:e}", z.max_abs_diff(&evaluate(&e, &g).unwrap()));
}
