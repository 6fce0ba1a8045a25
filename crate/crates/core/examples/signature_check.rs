//! Domain and range checking of expressions against label signatures.

use pathweave::expr::check_signatures;
use pathweave::store::parse_signatures;
use pathweave::{parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv"))
        .unwrap()
        .with_signatures(parse_signatures(include_str!("data/bibliography_signatures.tsv")).unwrap());
    for src in [
        "A[authored] . A[cites] . A[authored]'",
        "A[contains] . A[authored]",
        "A[authored] & A[developed]",
        "R(marko) . A[authored]",
    ] {
        let r = check_signatures(&parse(src).unwrap(), &g);
        println!("{src}\n  type {}", r.derived);
        for v in &r.violations {
            println!("  violation: {v}");
        }
    }
}
