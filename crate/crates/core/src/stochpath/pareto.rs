//! Pareto sets and the exact frontier dynamic program.

use std::cmp::Ordering;

use super::dag::{EdgeId, MultiWeightedDag, PathRecord, VertexId, WeightVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A set of source–target paths, canonically sorted by descending weight
/// (first component first), without duplicate weight vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoSet<S> {
    members: Vec<PathRecord<S>>,
}

impl<S: Scalar> ParetoSet<S> {
    /// Sorts canonically and drops repeated weight vectors (keeping the first).
    pub fn from_members(mut members: Vec<PathRecord<S>>) -> Self {
        members.sort_by(|a, b| descending(&a.weight, &b.weight));
        members.dedup_by(|a, b| a.weight == b.weight);
        ParetoSet { members }
    }

    pub fn members(&self) -> &[PathRecord<S>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PathRecord<S>> {
        self.members.iter()
    }

    /// Member of maximum value; the first in canonical order among ties.
    pub fn best(&self) -> Option<&PathRecord<S>> {
        let mut best: Option<(&PathRecord<S>, S)> = None;
        for m in &self.members {
            let v = m.value();
            match &best {
                Some((_, bv)) if v <= *bv => {}
                _ => best = Some((m, v)),
            }
        }
        best.map(|(m, _)| m)
    }

    pub fn max_value(&self) -> Option<S> {
        self.best().map(PathRecord::value)
    }

    /// Members not weakly dominated by another member.
    pub fn dominance_filtered(&self) -> Self {
        let kept = dominance_filter(self.members.clone(), |m| &m.weight);
        ParetoSet::from_members(kept)
    }
}

fn descending<S: Scalar>(a: &WeightVector<S>, b: &WeightVector<S>) -> Ordering {
    for (x, y) in a.components().iter().zip(b.components()) {
        match y.partial_cmp(x) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Keeps the elements whose weight is not weakly dominated by an earlier
/// kept element, removing earlier ones that a later element dominates.
/// Equal weights keep the first occurrence.
pub(crate) fn dominance_filter<T, S: Scalar>(
    items: Vec<T>,
    weight: impl Fn(&T) -> &WeightVector<S>,
) -> Vec<T> {
    let mut kept: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        let w = weight(&item);
        if kept.iter().any(|k| w.dominated_by(weight(k))) {
            continue;
        }
        kept.retain(|k| !weight(k).dominated_by(w));
        kept.push(item);
    }
    kept
}

#[derive(Clone, Debug)]
pub(crate) struct Label<S> {
    pub weight: WeightVector<S>,
    pub back: Option<(EdgeId, usize)>,
}

/// Frontier DP in topological order. `prune` turns the candidate labels
/// arriving at a vertex into the labels kept there; the kept labels at the
/// target are returned as paths.
pub(crate) fn frontier_dp<S: Scalar>(
    dag: &MultiWeightedDag<S>,
    mut prune: impl FnMut(VertexId, Vec<Label<S>>) -> Result<Vec<Label<S>>>,
) -> Result<Vec<PathRecord<S>>> {
    let n = dag.num_vertices();
    let mut frontier: Vec<Vec<Label<S>>> = vec![Vec::new(); n];
    for &v in dag.topological_order() {
        let mut candidates = Vec::new();
        if v == dag.source() {
            candidates.push(Label {
                weight: WeightVector::ones(dag.k()),
                back: None,
            });
        }
        for &e in dag.in_edges(v) {
            let edge = dag.edge(e);
            for (i, l) in frontier[edge.from].iter().enumerate() {
                candidates.push(Label {
                    weight: l.weight.product(&edge.weight),
                    back: Some((e, i)),
                });
            }
        }
        if !candidates.is_empty() {
            frontier[v] = prune(v, candidates)?;
        }
    }
    let t = dag.target();
    Ok((0..frontier[t].len())
        .map(|i| PathRecord {
            edges: trace_back(dag, &frontier, t, i),
            weight: frontier[t][i].weight.clone(),
        })
        .collect())
}

pub(crate) fn trace_back<S: Scalar>(
    dag: &MultiWeightedDag<S>,
    frontier: &[Vec<Label<S>>],
    mut v: VertexId,
    mut i: usize,
) -> Vec<EdgeId> {
    let mut edges = Vec::new();
    while let Some((e, j)) = frontier[v][i].back {
        edges.push(e);
        v = dag.edge(e).from;
        i = j;
    }
    edges.reverse();
    edges
}

/// Exact Pareto curve: every source–target path is weakly dominated by a
/// member and no member dominates another.
///
/// Worst-case exponential; `frontier_budget` caps the number of labels kept
/// at any vertex.
pub fn exact_pareto<S: Scalar>(dag: &MultiWeightedDag<S>, frontier_budget: usize) -> Result<ParetoSet<S>> {
    let paths = frontier_dp(dag, |_, candidates| {
        let kept = dominance_filter(candidates, |l: &Label<S>| &l.weight);
        if kept.len() > frontier_budget {
            return Err(Error::BudgetExceeded {
                what: "Pareto frontier",
                limit: frontier_budget as u64,
            });
        }
        Ok(kept)
    })?;
    Ok(ParetoSet::from_members(paths))
}
