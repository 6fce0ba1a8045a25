//! Simplify a self-loop filter and print each rewrite with the identity it
//! applies. Both forms evaluate to the same matrix.

use pathweave::{evaluate, parse_program, parse_triples, simplify};

const QUERY: &str = "
let X = A[authored] . A[cites] . A[authored]'
let Y = A[authored] . A[authored]'
X & not(clip(Y & not(I))) & not(I)
";

fn main() {
    let e = parse_program(QUERY).unwrap();
    let (s, trace) = simplify(&e);
    print!("{}", trace.derivation_table());
    println!("\n{} rewrites, replay ok: {}", trace.len(), trace.replay().as_ref() == Ok(&s));

    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let (a, b) = (evaluate(&e, &g).unwrap(), evaluate(&s, &g).unwrap());
    assert_eq!(a, b);
    println!("cited a non-coauthor:");
    print!("{}", b.to_tsv(g.vertices()));
}
