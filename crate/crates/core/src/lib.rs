//! Path algebra over multi-relational networks.
//!
//! A labeled edge set is stored as an `n x n x m` boolean tensor
//! ([`store::MultiRelTensor`]). Path expressions ([`expr::PathExpr`]) compose
//! its slices with matrix product, transpose, Hadamard filters, weighting and
//! merging to derive a single-relational path matrix
//! ([`matrix::PathMatrix`]), which the [`analysis`] module feeds to geodesic,
//! PageRank, spreading activation and assortativity algorithms. The
//! [`rewrite`] module simplifies expressions with algebraic identities before
//! evaluation.
//!
//! ```
//! use pathweave::{evaluate, parse, parse_triples};
//!
//! let g = parse_triples("h1\tauthored\ta1\nh2\tauthored\ta1\n").unwrap();
//! let coauthors = parse("A[authored] . A[authored]' & not(I)").unwrap();
//! let z = evaluate(&coauthors, &g).unwrap();
//! assert_eq!(z.get(0, 2), 1.0);
//! ```

pub mod analysis;
pub mod cli;
pub mod eval;
pub mod expr;
pub mod matrix;
pub mod rewrite;
pub mod store;
pub mod util;

pub use eval::{evaluate, evaluate_naive, plan, EvalError, EvalPlan};
pub use expr::{format, parse, parse_program, PathExpr};
pub use matrix::{FilterSpec, KernelError, PathMatrix};
pub use rewrite::{simplify, RewriteRule, RuleTrace};
pub use store::{ingest_triples, parse_triples, MultiRelTensor, StoreError, VertexDictionary};
