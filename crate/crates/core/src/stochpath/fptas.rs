//! ε-approximate Pareto curves by geometric bucketing of the frontier DP.

use std::collections::HashMap;

use super::dag::MultiWeightedDag;
use super::pareto::{dominance_filter, frontier_dp, Label, ParetoSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Slack against rounding in the float logarithms used for bucketing.
const GRID_SLACK: f64 = 1e-6;

/// A set `C` of paths such that every source–target path `π` has some
/// `π' ∈ C` with `p_i(π) ≤ (1+ε)·p_i(π')` for every component `i`.
///
/// Components are bucketed on a geometric grid of ratio `1+δ` with
/// `(1+δ)^L ≤ 1+ε`, `L` the number of edges on a longest path; each vertex
/// keeps one label per bucket tuple (the one of largest component sum).
pub fn epsilon_convex_pareto<S: Scalar>(dag: &MultiWeightedDag<S>, epsilon: &S) -> Result<ParetoSet<S>> {
    if !epsilon.is_positive_value() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let Some(longest) = dag.longest_path_edges() else {
        return Ok(ParetoSet::from_members(Vec::new()));
    };
    let step = (S::one() + epsilon.clone()).ln_f64() / longest.max(1) as f64 * (1.0 - GRID_SLACK);
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Precondition(format!(
            "ε is too small for the grid ({step})"
        )));
    }
    let paths = frontier_dp(dag, |_, candidates| Ok(bucket(candidates, step)))?;
    let kept = dominance_filter(paths, |p| &p.weight);
    Ok(ParetoSet::from_members(kept))
}

fn bucket<S: Scalar>(candidates: Vec<Label<S>>, step: f64) -> Vec<Label<S>> {
    let mut slot: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut reps: Vec<(Label<S>, S)> = Vec::new();
    for label in candidates {
        let key: Vec<i64> = label
            .weight
            .components()
            .iter()
            .map(|x| {
                if x.is_positive_value() {
                    (x.ln_f64() / step).floor() as i64
                } else {
                    i64::MIN
                }
            })
            .collect();
        let sum = label.weight.sum();
        match slot.get(&key) {
            Some(&i) => {
                if sum > reps[i].1 {
                    reps[i] = (label, sum);
                }
            }
            None => {
                slot.insert(key, reps.len());
                reps.push((label, sum));
            }
        }
    }
    dominance_filter(reps.into_iter().map(|(l, _)| l).collect(), |l: &Label<S>| {
        &l.weight
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_dag, RandomDagOptions};
    use crate::stochpath::coverage::epsilon_covers;
    use crate::stochpath::{exact_pareto, DagBuilder, WeightVector};
    use crate::{parse_rational, Rational};

    #[test]
    fn single_edge() {
        let mut b = DagBuilder::new(2);
        let s = b.vertex("s");
        let t = b.vertex("t");
        let w = WeightVector::new(vec![
            parse_rational("1/3").unwrap(),
            parse_rational("2/3").unwrap(),
        ]);
        b.edge(s, t, w.clone(), None);
        let g = b.build(s, t).unwrap();
        let c = epsilon_convex_pareto(&g, &parse_rational("1/2").unwrap()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.members()[0].weight, w);
    }

    #[test]
    fn rejects_non_positive_epsilon() {
        let g = random_dag(&RandomDagOptions::default(), 1);
        assert!(epsilon_convex_pareto(&g, &Rational::from_integer(0.into())).is_err());
    }

    #[test]
    fn covers_every_path_on_random_dags() {
        let opts = RandomDagOptions {
            vertices: 8,
            parallel: true,
            zero_rate: 0.1,
            ..Default::default()
        };
        for eps in ["1/2", "1/10"] {
            let eps = parse_rational(eps).unwrap();
            for seed in 0..30 {
                let g = random_dag(&opts, seed);
                let c = epsilon_convex_pareto(&g, &eps).unwrap();
                for p in g.all_paths(100_000).unwrap() {
                    assert!(epsilon_covers(&c, &p.weight, &eps).is_some(), "seed {seed}");
                }
                let exact = exact_pareto(&g, 100_000).unwrap().max_value().unwrap();
                let approx = c.max_value().unwrap();
                assert!(approx.clone() * (Rational::from_integer(1.into()) + eps.clone()) >= exact);
                assert!(approx <= exact);
            }
        }
    }
}
