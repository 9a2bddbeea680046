//! Threshold and value algorithms built on the Pareto curves.

use super::convex::convex_pareto_2;
use super::dag::{MultiWeightedDag, PathRecord};
use super::fptas::epsilon_convex_pareto;
use super::pareto::exact_pareto;
use super::reduction::{reduce_to_dag, ReductionOptions};
use crate::automaton::{ProbabilisticAutomaton, Word};
use crate::error::Result;
use crate::scalar::Scalar;

/// Default cap on the exact frontier size at one vertex.
pub const DEFAULT_FRONTIER_BUDGET: usize = 100_000;

/// Whether some source–target path has `val(π) > c`, with such a path.
///
/// Uses the convex curve when `k = 2` and the exact curve otherwise; the
/// maximum of the component sum over a convex curve is attained at a member.
pub fn decide_stochastic_path<S: Scalar>(
    dag: &MultiWeightedDag<S>,
    c: &S,
) -> Result<(bool, Option<PathRecord<S>>)> {
    decide_stochastic_path_with_budget(dag, c, DEFAULT_FRONTIER_BUDGET)
}

pub fn decide_stochastic_path_with_budget<S: Scalar>(
    dag: &MultiWeightedDag<S>,
    c: &S,
    frontier_budget: usize,
) -> Result<(bool, Option<PathRecord<S>>)> {
    let curve = if dag.k() == 2 {
        convex_pareto_2(dag)?
    } else {
        exact_pareto(dag, frontier_budget)?
    };
    match curve.best() {
        Some(best) if best.value() > *c => Ok((true, Some(best.clone()))),
        _ => Ok((false, None)),
    }
}

/// Result of the approximation scheme: `output ≤ val(P) ≤ (1+ε)·output`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxValue<S> {
    pub output: S,
    /// A word with `P(word) ≥ output`, absent when `output = 0` and no path exists.
    pub word: Option<Word>,
}

/// Approximates the value of a k-ambiguous automaton within a factor `1+ε`.
pub fn approximate_value<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    k: usize,
    epsilon: &S,
    opts: &ReductionOptions,
) -> Result<ApproxValue<S>> {
    let dag = reduce_to_dag(p, k, opts)?;
    let curve = epsilon_convex_pareto(&dag, epsilon)?;
    Ok(match curve.best() {
        Some(best) => ApproxValue {
            output: best.value(),
            word: Some(dag.word_of_path(best)),
        },
        None => ApproxValue {
            output: S::zero(),
            word: None,
        },
    })
}

/// Emptiness of `{w : P(w) > c}` for a 2-ambiguous automaton, with a witness.
pub fn emptiness_2ambiguous<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    c: &S,
    opts: &ReductionOptions,
) -> Result<(bool, Option<Word>)> {
    let dag = reduce_to_dag(p, 2, opts)?;
    let (found, path) = decide_stochastic_path(&dag, c)?;
    Ok((found, path.map(|path| dag.word_of_path(&path))))
}
