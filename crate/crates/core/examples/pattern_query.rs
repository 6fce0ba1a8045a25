//! Articles cited by marko's articles, not written by marko and published
//! in joi. Rows are marko's citing articles, columns the answers.

use pathweave::{evaluate, parse_program, parse_triples};

const QUERY: &str = "
let Mine = (C(marko) & A[authored]') . A[authored] & I
let Others = A[cites] & not(vout(C(marko) & A[authored]')')
let InJoi = (C(joi) & A[contains]') . A[contains] & I
clip(Mine . Others . InJoi)
";

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(&parse_program(QUERY).unwrap(), &g).unwrap();
    for (i, j, _) in z.entries() {
        let name = |k| g.vertices().name(k).unwrap();
        println!("{} cites {}", name(i), name(j));
    }
}
