//! Do humans collaborate with people of the same field, and of similar
//! seniority?

use pathweave::analysis::{assortativity_categorical, assortativity_scalar, PropertyKind, VertexProperty};
use pathweave::{evaluate, parse, parse_triples};

fn main() {
    let g = parse_triples(include_str!("data/bibliography.tsv")).unwrap();
    let z = evaluate(
        &parse("(A[authored] . A[authored]' + A[developed] . A[developed]') & not(I)").unwrap(),
        &g,
    )
    .unwrap();

    let VertexProperty::Categorical(field) =
        VertexProperty::parse(include_str!("data/field.tsv"), g.vertices(), PropertyKind::Categorical).unwrap()
    else {
        unreachable!()
    };
    let VertexProperty::Scalar(years) =
        VertexProperty::parse(include_str!("data/seniority.tsv"), g.vertices(), PropertyKind::Scalar).unwrap()
    else {
        unreachable!()
    };
    println!("field:     r = {:+.4}", assortativity_categorical(&z, &field).unwrap());
    println!("seniority: r = {:+.4}", assortativity_scalar(&z, &years).unwrap());
}
