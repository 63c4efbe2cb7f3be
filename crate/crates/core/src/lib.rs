//! Betweenness relations of finite order-theoretic trees.
//!
//! * [`structure`]: ternary betweenness structures and their text format.
//! * [`axioms`]: the axioms A1–A8 and class membership.
//! * [`poset`]: finite partial orders, O-trees, join-trees and join-completion.
//! * [`witness`]: the join-tree built from a laminar family that witnesses
//!   induced betweenness.
//! * [`structuring`]: partitions of O-trees into lines.
//! * [`geometry`]: exact planar drawings as trees of half-lines.
//! * [`oracle`]: brute-force ground truth and random generators.
//! * [`corpus`]: worked examples and truncations of infinite ones.
//!
//! ```
//! use betweenness::{classify, corpus, tree_of_c, verify_witness};
//!
//! let s = corpus::s8();
//! let report = classify(&s);
//! assert!(report.ibqt && !report.qt);
//! let w = tree_of_c(&s, s.id("0")?)?;
//! assert!(verify_witness(&s, &w.tree, &w.embedding)?.holds);
//! # Ok::<(), betweenness::Error>(())
//! ```

pub mod axioms;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod poset;
pub mod structure;
pub mod structuring;
mod text;
pub mod witness;

pub use axioms::{check_axiom, classify, AxiomId, ClassReport, IboScreen};
pub use error::{Error, Result};
pub use poset::{FinitePoset, OTreeKind};
pub use structure::{BetweennessStructure, Triple, Verdict, Witness};
pub use structuring::Structuring;
pub use witness::{tree_of_c, verify_witness, WitnessTree};
