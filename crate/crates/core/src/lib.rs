//! Reasoning over more-or-less CP-nets: multi-valued conditional preference
//! networks whose variables are monotonic with a single break point.

pub mod analysis;
pub mod bench;
pub mod dominance;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod parse;
pub mod reasoning;
pub mod structure;

pub use analysis::{categories, check_monotonic, check_more_or_less, Category, MlReport, MonotonicityReport};
pub use dominance::{dominates, dominates_naive, DominanceResult, MoreOrLessNet, RepMap, SearchOptions};
pub use error::{Error, Result};
pub use model::{Condition, CpNet, Cpt, CptRow, Direction, Domain, IntervalSet, Outcome, Ranking, Value, VarId, Variable};
pub use reasoning::{can_order_before, optimize, order_outcomes};
pub use parse::{parse_cpnet, parse_cpnet_unchecked, serialize_cpnet};
pub use structure::{validate_structure, StructureReport};
