//! Ring loading: exact rational routings, greedy patterns, bounded rounding of
//! split routings, exhaustive optima, boosting and adversarial search.

pub mod adversary;
pub mod boost;
pub mod error;
pub mod exact;
pub mod greedy;
pub mod pattern;
pub mod rational;
pub mod reduce;
pub mod rounding;
pub mod routing;

pub use error::{Error, Result};
pub use greedy::{backward_greedy, forward_greedy, is_greedy, is_proper, Direction};
pub use pattern::Pattern;
pub use rational::Rational;
pub use routing::{CrossingRouting, Demand, LoadDelta, LoadProfile, RingInstance};
pub use rounding::{
    closeness, crossover, induced_patterns, round_main, round_medium, round_upper, round_via_induced, ssw_round,
    BoundedRounding, Method, Source,
};
pub use boost::{boost, verify_boost, BoostReport, BoostedInstance};
pub use exact::{
    min_additive_performance, optimal_unsplittable, optimal_unsplittable_boosted, split_optimum_boosted,
    split_optimum_crossing,
};
pub use reduce::{classify_delta, to_crossing_form, uncross_parallel, GeneralSplitRouting, Reduced, ReductionTrace};
