//! Consistency checks, consistent extensions and total completions for pairs
//! of transitive relations on finite sets and for pairs of rational cones.
//!
//! Two transitive relations are chain-consistent when no circular chain of
//! links drawn from either contains a strict link. Consistent pairs admit a
//! common total preorder extending both; inconsistent pairs come with a
//! replayable witness chain. The same question for vector preorders is
//! answered exactly on finitely generated cones.

pub mod cli;
pub mod cone;
pub mod consistency;
mod dd;
pub mod io;
mod linalg;
pub mod market;
pub mod oracle;
pub mod pareto;
pub mod rational;
pub mod relation;

pub use cone::{Comparison, Cone, ConeError, Membership, PathVerdict, PathWitness, Side};
pub use consistency::{Chain, ConsistencyError, ConsistencyVerdict, LinkTag};
pub use market::{Market, MarketError, TradeChain, TradeLink};
pub use pareto::Improvement;
pub use rational::{RationalFunctional, RationalVector};
pub use relation::{PropertyReport, Relation, RelationError, Universe};
