//! The k-stochastic path problem on acyclic multi-weighted graphs.

mod convex;
pub mod coverage;
mod dag;
mod decide;
mod fptas;
mod pareto;
mod reduction;
mod spg;

pub use convex::convex_pareto_2;
pub use dag::{path_value, DagBuilder, Edge, EdgeId, MultiWeightedDag, PathRecord, VertexId, WeightVector};
pub use decide::{
    approximate_value, decide_stochastic_path, decide_stochastic_path_with_budget, emptiness_2ambiguous,
    ApproxValue, DEFAULT_FRONTIER_BUDGET,
};
pub use fptas::epsilon_convex_pareto;
pub use pareto::{exact_pareto, ParetoSet};
pub use reduction::{reduce_to_dag, AmbiguityCheck, ReductionOptions, AUTO_CHECK_STATES};
pub use spg::{parse_dag, serialize_dag};
