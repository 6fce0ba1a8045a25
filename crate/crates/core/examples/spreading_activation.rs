//! Spread energy from marko across the coauthorship matrix with decay and
//! a cutoff.

use pathweave::analysis::{spreading_activation, EnergyVector};
use pathweave::{evaluate, parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(&parse("A[authored] . A[authored]' & not(I)").unwrap(), &g).unwrap();
    let seed = EnergyVector::unit(g.n(), g.vertices().id("marko").unwrap());
    for (decay, threshold) in [(1.0, 0.0), (0.5, 0.0), (0.5, 0.1)] {
        let e = spreading_activation(&z, &seed, 4, decay, threshold).unwrap();
        println!("decay {decay}, threshold {threshold}");
        for (name, v) in g.vertices().names().iter().zip(&e.values) {
            if *v > 0.0 {
                println!("  {name:<6} {v:.4}");
            }
        }
    }
}
