//! Hyperedge-replacement graph grammars with generalized predictive
//! shift-reduce parsing, memoization and a CYK baseline.

pub mod bench;
pub mod bundled;
pub mod cfa;
pub mod cyk;
pub mod engine;
pub mod grammar;
pub mod hypergraph;
pub mod memo;

pub use cfa::{build_cfa, conflicts, dump_cfa, Cfa};
pub use grammar::{parse_grammar, Grammar, Rule};
pub use hypergraph::{EdgeSet, Hypergraph, Label, Literal, NodeId};
pub use engine::{parse, Outcome, ParseConfig, ParseResult, ParseSession, Strategy};
pub use memo::{MemoPair, MemoStore};
pub use cyk::{cyk_items, cyk_parse, CykItem, CykResult};
