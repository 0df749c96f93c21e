//! Exact subgraph isomorphism enumeration that groups interchangeable
//! solutions into classes.
//!
//! A [`Problem`] pairs a small *template* graph with a larger *world*
//! graph. [`solve`] enumerates every injective map of template vertices to
//! world vertices that preserves all template edges (with multiplicity, per
//! channel). Instead of listing each map, the search branches once per
//! class of interchangeable world vertices and reports [`SolutionClass`]es,
//! each with an exact [`BigCount`] of the maps it stands for.
//!
//! ```
//! use symmatch::{fixtures, solve, EquivalenceMode, Problem, SearchLimits};
//!
//! let (template, world) = fixtures::toy();
//! let problem = Problem::new(template, world, true)?;
//! let mut classes = Vec::new();
//! let report = solve(&problem, EquivalenceMode::FE, SearchLimits::default(), |c| classes.push(c.clone()));
//! assert_eq!(report.representative_count, 2);
//! assert_eq!(report.total_count.to_string(), "18");
//! # Ok::<(), symmatch::Error>(())
//! ```

pub mod candidate;
mod classes;
pub mod count;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod reporting;
pub mod search;

pub use candidate::{CandidateSets, NodeCover, PartialMatch};
pub use count::BigCount;
pub use equivalence::{find_equivalence_classes, structurally_equivalent, Partition};
pub use error::{Error, ParseError, Result};
pub use graph::{parse_lad, parse_multiplex_edgelist, Graph, GraphBuilder, Problem};
pub use search::{count, solve, EquivalenceMode, SearchLimits, SearchReport, SearchStatus, SolutionClass};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/structural-equivalence.md")]
    mod structural_equivalence {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/candidate-equivalence.md")]
    mod candidate_equivalence {}
    #[doc = include_str!("../../../book/src/node-cover.md")]
    mod node_cover {}
    #[doc = include_str!("../../../book/src/reporting.md")]
    mod reporting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
