//! Convex Pareto curves for two objectives, by divide-and-conquer
//! scalarisation in log space.

use super::dag::{EdgeId, MultiWeightedDag, PathRecord, WeightVector};
use super::pareto::{dominance_filter, trace_back, Label, ParetoSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative width of the tie band for float score comparisons.
const MARGIN: f64 = 1e-9;
/// Cap on the labels kept at one vertex during a scalarised pass.
const LABEL_CAP: usize = 200_000;

struct Scored<S> {
    path: PathRecord<S>,
    score: f64,
}

/// Convex Pareto curve of a 2-weighted DAG.
///
/// Every source–target path is weakly dominated by a member, or (when both
/// of its components are positive) by a log-space mixture
/// `(A_1^λ B_1^{1−λ}, A_2^λ B_2^{1−λ})` of two positive members.
/// Scores are compared in floating point; every candidate within a small
/// margin of the best is kept, and the final set is filtered exactly.
pub fn convex_pareto_2<S: Scalar>(dag: &MultiWeightedDag<S>) -> Result<ParetoSet<S>> {
    if dag.k() != 2 {
        return Err(Error::Unsupported(format!(
            "convex Pareto curves need k = 2, got k = {}",
            dag.k()
        )));
    }
    let search = Search::new(dag);
    let mut members: Vec<PathRecord<S>> = Vec::new();

    // Axis queries cover paths with a zero component.
    for dir in [(1.0, 0.0), (0.0, 1.0)] {
        members.extend(search.query(dir, false)?.into_iter().map(|c| c.path));
    }

    let first = search.query((1.0, 0.0), true)?;
    let second = search.query((0.0, 1.0), true)?;
    let a = lex_max(&first, 0);
    let b = lex_max(&second, 1);
    members.extend(first.iter().chain(&second).map(|c| c.path.clone()));
    if let (Some(a), Some(b)) = (a, b) {
        if a.weight != b.weight {
            search.refine(a, b, &mut members, 0)?;
        }
    }

    if members.is_empty() {
        // every path has a zero in each component
        members.extend(any_path(dag));
    }

    let kept = dominance_filter(members, |p| &p.weight);
    Ok(ParetoSet::from_members(kept))
}

fn any_path<S: Scalar>(dag: &MultiWeightedDag<S>) -> Option<PathRecord<S>> {
    let mut back: Vec<Option<Option<EdgeId>>> = vec![None; dag.num_vertices()];
    back[dag.source()] = Some(None);
    for &v in dag.topological_order() {
        if back[v].is_none() {
            continue;
        }
        for &e in dag.out_edges(v) {
            back[dag.edge(e).to].get_or_insert(Some(e));
        }
    }
    let mut edges = Vec::new();
    let mut at = dag.target();
    while let Some(e) = back[at]? {
        edges.push(e);
        at = dag.edge(e).from;
    }
    edges.reverse();
    dag.path(edges).ok()
}

/// Exact lexicographic maximum by `(p_first, p_other)`.
fn lex_max<S: Scalar>(cands: &[Scored<S>], first: usize) -> Option<PathRecord<S>> {
    let other = 1 - first;
    let mut best: Option<&PathRecord<S>> = None;
    for c in cands {
        let w = &c.path.weight;
        let better = match best {
            None => true,
            Some(b) => {
                let (x, y) = (w.component(first), b.weight.component(first));
                x > y || (x == y && w.component(other) > b.weight.component(other))
            }
        };
        if better {
            best = Some(&c.path);
        }
    }
    best.cloned()
}

struct Search<'a, S> {
    dag: &'a MultiWeightedDag<S>,
    logs: Vec<[f64; 2]>,
    /// Bound on `Σ |ln w|` along any path, per component.
    scale: [f64; 2],
}

impl<'a, S: Scalar> Search<'a, S> {
    fn new(dag: &'a MultiWeightedDag<S>) -> Self {
        let logs: Vec<[f64; 2]> = dag
            .edges()
            .iter()
            .map(|e| [e.weight.component(0).ln_f64(), e.weight.component(1).ln_f64()])
            .collect();
        let depth = dag.longest_path_edges().unwrap_or(0).max(1) as f64;
        let mut scale = [0.0f64; 2];
        for l in &logs {
            for i in 0..2 {
                if l[i].is_finite() {
                    scale[i] = scale[i].max(-l[i]);
                }
            }
        }
        Search {
            dag,
            logs,
            scale: [scale[0] * depth + 1.0, scale[1] * depth + 1.0],
        }
    }

    fn margin(&self, dir: (f64, f64)) -> f64 {
        MARGIN * (dir.0 * self.scale[0] + dir.1 * self.scale[1])
    }

    fn edge_score(&self, e: EdgeId, dir: (f64, f64), positive_only: bool) -> Option<f64> {
        let l = self.logs[e];
        let mut score = 0.0;
        for (coef, x) in [(dir.0, l[0]), (dir.1, l[1])] {
            if !x.is_finite() {
                if coef > 0.0 || positive_only {
                    return None;
                }
            } else {
                score += coef * x;
            }
        }
        Some(score)
    }

    fn weight_score(&self, w: &WeightVector<S>, dir: (f64, f64)) -> f64 {
        dir.0 * w.component(0).ln_f64() + dir.1 * w.component(1).ln_f64()
    }

    /// Paths maximising `α·ln p_1 + β·ln p_2`, together with every path
    /// whose score is within the margin of the maximum.
    fn query(&self, dir: (f64, f64), positive_only: bool) -> Result<Vec<Scored<S>>> {
        let dag = self.dag;
        let m = self.margin(dir);
        let n = dag.num_vertices();
        let mut frontier: Vec<Vec<Label<S>>> = vec![Vec::new(); n];
        let mut scores: Vec<Vec<f64>> = vec![Vec::new(); n];
        for &v in dag.topological_order() {
            let mut cands: Vec<(Label<S>, f64)> = Vec::new();
            if v == dag.source() {
                cands.push((
                    Label {
                        weight: WeightVector::ones(2),
                        back: None,
                    },
                    0.0,
                ));
            }
            for &e in dag.in_edges(v) {
                let Some(es) = self.edge_score(e, dir, positive_only) else {
                    continue;
                };
                let edge = dag.edge(e);
                for (i, l) in frontier[edge.from].iter().enumerate() {
                    cands.push((
                        Label {
                            weight: l.weight.product(&edge.weight),
                            back: Some((e, i)),
                        },
                        scores[edge.from][i] + es,
                    ));
                }
            }
            let band = if v == dag.target() { m } else { 2.0 * m };
            let kept = keep_near_best(cands, band);
            if kept.len() > LABEL_CAP {
                return Err(Error::BudgetExceeded {
                    what: "convex curve labels",
                    limit: LABEL_CAP as u64,
                });
            }
            (frontier[v], scores[v]) = kept.into_iter().unzip();
        }
        let t = dag.target();
        Ok((0..frontier[t].len())
            .map(|i| Scored {
                path: PathRecord {
                    edges: trace_back(dag, &frontier, t, i),
                    weight: frontier[t][i].weight.clone(),
                },
                score: scores[t][i],
            })
            .collect())
    }

    /// Adds the hull vertices strictly above the segment `a b` (in log
    /// space), recursing on the two halves of each new vertex.
    fn refine(
        &self,
        a: PathRecord<S>,
        b: PathRecord<S>,
        members: &mut Vec<PathRecord<S>>,
        depth: usize,
    ) -> Result<()> {
        let la = [a.weight.component(0).ln_f64(), a.weight.component(1).ln_f64()];
        let lb = [b.weight.component(0).ln_f64(), b.weight.component(1).ln_f64()];
        let (alpha, beta) = (lb[1] - la[1], la[0] - lb[0]);
        let norm = alpha.hypot(beta);
        if !(alpha > 0.0 && beta > 0.0 && norm.is_finite()) || depth > 64 {
            return Ok(());
        }
        let dir = (alpha / norm, beta / norm);
        let cands = self.query(dir, true)?;
        let Some(top) = cands.iter().max_by(|x, y| x.score.total_cmp(&y.score)) else {
            return Ok(());
        };
        let base = self
            .weight_score(&a.weight, dir)
            .max(self.weight_score(&b.weight, dir));
        if top.score <= base + self.margin(dir) / 2.0
            || top.path.weight == a.weight
            || top.path.weight == b.weight
        {
            members.extend(cands.into_iter().map(|c| c.path));
            return Ok(());
        }
        let c = top.path.clone();
        members.extend(cands.into_iter().map(|c| c.path));
        self.refine(a, c.clone(), members, depth + 1)?;
        self.refine(c, b, members, depth + 1)
    }
}

/// Keeps the candidates within `band` of the best score, dropping repeated
/// weight vectors.
fn keep_near_best<S: Scalar>(cands: Vec<(Label<S>, f64)>, band: f64) -> Vec<(Label<S>, f64)> {
    let best = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let mut kept: Vec<(Label<S>, f64)> = Vec::new();
    for c in cands {
        if c.1 >= best - band && !kept.iter().any(|k| k.0.weight == c.0.weight) {
            kept.push(c);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_dag, RandomDagOptions};
    use crate::stochpath::coverage::{convex_coverage, Coverage};
    use crate::stochpath::DagBuilder;
    use crate::{parse_rational, Rational};

    fn parallel(weights: &[(&str, &str)]) -> MultiWeightedDag<Rational> {
        let mut b = DagBuilder::new(2);
        let s = b.vertex("s");
        let t = b.vertex("t");
        for (x, y) in weights {
            let w = WeightVector::new(vec![parse_rational(x).unwrap(), parse_rational(y).unwrap()]);
            b.edge(s, t, w, None);
        }
        b.build(s, t).unwrap()
    }

    fn weights(set: &ParetoSet<Rational>) -> Vec<(String, String)> {
        set.iter()
            .map(|m| {
                (
                    crate::format_rational(m.weight.component(0)),
                    crate::format_rational(m.weight.component(1)),
                )
            })
            .collect()
    }

    #[test]
    fn log_concave_middle_point_is_kept() {
        let g = parallel(&[("9/10", "1/10"), ("1/2", "1/2"), ("1/10", "9/10")]);
        let c = convex_pareto_2(&g).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn dominated_point_is_dropped() {
        let g = parallel(&[("1/2", "1/4"), ("1/4", "1/2"), ("1/4", "1/4")]);
        let c = convex_pareto_2(&g).unwrap();
        assert_eq!(
            weights(&c),
            vec![("1/2".into(), "1/4".into()), ("1/4".into(), "1/2".into())]
        );
    }

    #[test]
    fn point_under_the_log_segment_is_dropped() {
        // (1/4, 1/4) lies below the geometric mean (3/10, 3/10) of the outer points.
        let g = parallel(&[("9/10", "1/10"), ("1/4", "1/4"), ("1/10", "9/10")]);
        assert_eq!(convex_pareto_2(&g).unwrap().len(), 2);
    }

    #[test]
    fn zero_components_are_covered() {
        let g = parallel(&[("0", "1"), ("1/2", "1/2"), ("1", "0")]);
        let c = convex_pareto_2(&g).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn all_zero_paths_still_give_a_member() {
        let g = parallel(&[("0", "0"), ("1/2", "0")]);
        let c = convex_pareto_2(&g).unwrap();
        assert_eq!(weights(&c), vec![("1/2".into(), "0/1".into())]);
        let g = parallel(&[("0", "0")]);
        assert_eq!(convex_pareto_2(&g).unwrap().len(), 1);
    }

    #[test]
    fn requires_two_objectives() {
        let g = random_dag(
            &RandomDagOptions {
                k: 3,
                ..Default::default()
            },
            0,
        );
        assert!(matches!(convex_pareto_2(&g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn covers_every_path_on_random_dags() {
        let opts = RandomDagOptions {
            vertices: 8,
            parallel: true,
            zero_rate: 0.1,
            ..Default::default()
        };
        for seed in 0..40 {
            let g = random_dag(&opts, seed);
            let c = convex_pareto_2(&g).unwrap();
            for m in c.iter() {
                assert_eq!(g.path(m.edges.clone()).unwrap().weight, m.weight);
            }
            for p in g.all_paths(100_000).unwrap() {
                let cov = convex_coverage(&c, &p.weight, 1_000_000);
                assert!(
                    matches!(cov, Coverage::Pointwise(_) | Coverage::Mixture { .. }),
                    "seed {seed}: {cov:?}"
                );
            }
        }
    }
}
