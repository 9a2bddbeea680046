//! Finitely ambiguous probabilistic automata.
//!
//! The crate provides exact semantics for probabilistic automata with rational
//! transition probabilities, a decision procedure for their ambiguity class,
//! witness-length bounds together with the matching word-shortening
//! procedures, and the reduction of `k`-ambiguous automata to the
//! `k`-stochastic path problem on multi-weighted DAGs. On top of the reduction
//! sit an exact Pareto frontier, an `ε`-Pareto approximation (value
//! approximation within a factor `1 + ε`) and a convex Pareto curve for two
//! objectives (exact emptiness for 2-ambiguous automata).
//!
//! All algorithms are generic over a [`Scalar`]; decision procedures are meant
//! to be run with the exact [`Rational`] instantiation, for which the aliases
//! below exist. `f64` works for quick numerical exploration.

pub mod ambiguity;
pub mod automaton;
mod error;
pub mod generators;
pub mod scalar;
pub mod stochpath;
pub mod witness;

pub use ambiguity::{
    ambiguity_profile, classify, classify_with, is_k_ambiguous, is_k_ambiguous_within, AmbiguityClass,
    ClassifyOptions,
};
pub use automaton::{
    parse_automaton, serialize_automaton, AutomatonBuilder, Letter, ProbabilisticAutomaton, Run, State, Word,
};
pub use error::{Error, Result};
pub use scalar::{format_rational, parse_rational, Scalar};
pub use stochpath::{
    approximate_value, convex_pareto_2, decide_stochastic_path, emptiness_2ambiguous, epsilon_convex_pareto,
    exact_pareto, path_value, reduce_to_dag, MultiWeightedDag, ParetoSet, PathRecord, ReductionOptions,
    WeightVector,
};
pub use witness::{
    exhaustive_emptiness, exhaustive_value, shorten_witness_finite, shorten_witness_k, witness_bound,
    WitnessMode, WitnessReport,
};

/// Exact arbitrary-precision rational, the scalar every decision procedure uses.
pub type Rational = num_rational::BigRational;

/// Probabilistic automaton over exact rationals.
pub type Automaton = ProbabilisticAutomaton<Rational>;
/// Probabilistic automaton over `f64`, for approximate exploration only.
pub type FloatAutomaton = ProbabilisticAutomaton<f64>;

/// Multi-weighted DAG over exact rationals.
pub type Dag = MultiWeightedDag<Rational>;
/// Pareto set over exact rationals.
pub type RationalParetoSet = ParetoSet<Rational>;

/// Upper bound on the number of search nodes an exhaustive procedure may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn unlimited() -> Self {
        Budget(u64::MAX)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}
