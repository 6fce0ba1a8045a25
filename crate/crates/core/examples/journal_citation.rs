//! Citations between articles of social-science journals. The rewriter
//! turns the trailing column filter into the transpose of the leading row
//! filter, so the subterm is shared.

use pathweave::{evaluate, format, parse, parse_triples, simplify};

fn main() {
    let e = parse(
        "(vout(C(socsci) & A[category]) & A[contains]) . A[cites] \
         . (A[contains]' & vin(R(socsci) & A[category]'))",
    )
    .unwrap();
    let (s, trace) = simplify(&e);
    println!("before: {}\nafter:  {}", format(&e), format(&s));
    println!("rules:  {}", trace.rules().join(", "));

    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(&s, &g).unwrap();
    assert_eq!(z, evaluate(&e, &g).unwrap());
    println!("\njournal-to-journal citations:");
    print!("{}", z.to_tsv(g.vertices()));
}
