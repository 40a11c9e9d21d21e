//! Worst-case split routings: the search model and its LP export, a
//! solver-free checker for it, an internal heuristic search, and the
//! catalog of known bad routings.

pub mod catalog;
pub mod check;
pub mod lp;
pub mod milp;
pub mod search;

pub use catalog::builtin_instances;
pub use check::max_feasible_objective;
pub use lp::{export_lp, read_lp, write_lp};
pub use milp::{build_milp, MilpModel};
pub use search::{heuristic_search, SearchConfig, SearchResult};
