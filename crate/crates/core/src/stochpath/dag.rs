use std::collections::HashMap;
use std::fmt;

use crate::automaton::Letter;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type VertexId = usize;
pub type EdgeId = usize;

/// A `k`-tuple of probabilities, combined componentwise along paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector<S>(Vec<S>);

impl<S: Scalar> WeightVector<S> {
    pub fn new(components: Vec<S>) -> Self {
        WeightVector(components)
    }

    /// The neutral element `(1, …, 1)`.
    pub fn ones(k: usize) -> Self {
        WeightVector(vec![S::one(); k])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[S] {
        &self.0
    }

    pub fn component(&self, i: usize) -> &S {
        &self.0[i]
    }

    /// Componentwise product.
    pub fn product(&self, other: &Self) -> Self {
        WeightVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        )
    }

    /// Sum of the components: the value of a path with this weight.
    pub fn sum(&self) -> S {
        self.0.iter().fold(S::zero(), |acc, x| acc + x.clone())
    }

    /// `self ≤ other` componentwise.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Scalar::is_positive_value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: WeightVector<S>,
    /// Letter read by the automaton transition this edge simulates, if any.
    pub label: Option<Letter>,
}

/// Acyclic multigraph whose edges carry `k`-dimensional probability vectors,
/// with a distinguished source and target.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiWeightedDag<S> {
    k: usize,
    names: Vec<String>,
    edges: Vec<Edge<S>>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    source: VertexId,
    target: VertexId,
    topo: Vec<VertexId>,
}

impl<S: Scalar> MultiWeightedDag<S> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge<S> {
        &self.edges[e]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[v]
    }

    /// Vertices in a topological order.
    pub fn topological_order(&self) -> &[VertexId] {
        &self.topo
    }

    /// Maximum number of edges on a source–target path, `None` if the target
    /// is unreachable.
    pub fn longest_path_edges(&self) -> Option<usize> {
        let mut depth: Vec<Option<usize>> = vec![None; self.names.len()];
        depth[self.source] = Some(0);
        for &v in &self.topo {
            let Some(d) = depth[v] else { continue };
            for &e in &self.out[v] {
                let t = self.edges[e].to;
                depth[t] = Some(depth[t].map_or(d + 1, |x| x.max(d + 1)));
            }
        }
        depth[self.target]
    }

    /// Every source–target path, by depth-first enumeration. Exponential; for
    /// small instances and test oracles.
    pub fn all_paths(&self, limit: usize) -> Result<Vec<PathRecord<S>>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.paths_from(
            self.source,
            WeightVector::ones(self.k),
            &mut stack,
            &mut out,
            limit,
        )?;
        Ok(out)
    }

    fn paths_from(
        &self,
        v: VertexId,
        weight: WeightVector<S>,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<PathRecord<S>>,
        limit: usize,
    ) -> Result<()> {
        if v == self.target {
            if out.len() >= limit {
                return Err(Error::BudgetExceeded {
                    what: "path enumeration",
                    limit: limit as u64,
                });
            }
            out.push(PathRecord {
                edges: stack.clone(),
                weight: weight.clone(),
            });
        }
        for &e in &self.out[v] {
            stack.push(e);
            let w = weight.product(&self.edges[e].weight);
            self.paths_from(self.edges[e].to, w, stack, out, limit)?;
            stack.pop();
        }
        Ok(())
    }

    /// Letters along a path, skipping unlabelled edges.
    pub fn word_of_path(&self, path: &PathRecord<S>) -> Vec<Letter> {
        path.edges.iter().filter_map(|&e| self.edges[e].label).collect()
    }

    /// Builds the record of a sequence of consecutive edges.
    pub fn path(&self, edges: Vec<EdgeId>) -> Result<PathRecord<S>> {
        let mut weight = WeightVector::ones(self.k);
        let mut at = edges.first().map(|&e| self.edges[e].from);
        for &e in &edges {
            let edge = self
                .edges
                .get(e)
                .ok_or_else(|| Error::InvalidGraph(format!("no edge {e}")))?;
            if Some(edge.from) != at {
                return Err(Error::InvalidGraph("edges are not consecutive".into()));
            }
            weight = weight.product(&edge.weight);
            at = Some(edge.to);
        }
        Ok(PathRecord { edges, weight })
    }
}

impl<S: Scalar> fmt::Display for MultiWeightedDag<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-weighted DAG with {} vertices and {} edges",
            self.k,
            self.names.len(),
            self.edges.len()
        )
    }
}

/// A path with its componentwise-product weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PathRecord<S> {
    pub edges: Vec<EdgeId>,
    pub weight: WeightVector<S>,
}

impl<S: Scalar> PathRecord<S> {
    /// `Σ_i p_i(π)`.
    pub fn value(&self) -> S {
        self.weight.sum()
    }
}

/// `val(π)` of a path record.
pub fn path_value<S: Scalar>(path: &PathRecord<S>) -> S {
    path.value()
}

#[derive(Clone, Debug)]
pub struct DagBuilder<S> {
    k: usize,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge<S>>,
}

impl<S: Scalar> DagBuilder<S> {
    pub fn new(k: usize) -> Self {
        DagBuilder {
            k,
            names: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    /// Index of the named vertex, declaring it if needed.
    pub fn vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        if let Some(&v) = self.index.get(&name) {
            return v;
        }
        self.names.push(name.clone());
        self.index.insert(name, self.names.len() - 1);
        self.names.len() - 1
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lookup(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn edge(
        &mut self,
        from: VertexId,
        to: VertexId,
        weight: WeightVector<S>,
        label: Option<Letter>,
    ) -> EdgeId {
        self.edges.push(Edge {
            from,
            to,
            weight,
            label,
        });
        self.edges.len() - 1
    }

    /// Validates arity, weight range and acyclicity.
    pub fn build(self, source: VertexId, target: VertexId) -> Result<MultiWeightedDag<S>> {
        let n = self.names.len();
        if source >= n || target >= n {
            return Err(Error::InvalidGraph("source or target is not a vertex".into()));
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (id, e) in self.edges.iter().enumerate() {
            if e.weight.arity() != self.k {
                return Err(Error::InvalidGraph(format!(
                    "edge {} → {} has {} weights, expected {}",
                    self.names[e.from],
                    self.names[e.to],
                    e.weight.arity(),
                    self.k
                )));
            }
            if e.weight
                .components()
                .iter()
                .any(|w| *w < S::zero() || *w > S::one())
            {
                return Err(Error::InvalidGraph(format!(
                    "edge {} → {} has a weight outside [0, 1]",
                    self.names[e.from], self.names[e.to]
                )));
            }
            out[e.from].push(id);
            inc[e.to].push(id);
        }
        // Kahn's algorithm
        let mut indegree: Vec<usize> = inc.iter().map(Vec::len).collect();
        let mut ready: Vec<VertexId> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            topo.push(v);
            for &e in out[v].iter().rev() {
                let t = self.edges[e].to;
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(t);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::InvalidGraph("the edge relation has a cycle".into()));
        }
        Ok(MultiWeightedDag {
            k: self.k,
            names: self.names,
            edges: self.edges,
            out,
            inc,
            source,
            target,
            topo,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_rational, Rational};

    fn w(parts: &[&str]) -> WeightVector<Rational> {
        WeightVector::new(parts.iter().map(|p| parse_rational(p).unwrap()).collect())
    }

    #[test]
    fn running_example_path() {
        let mut b = DagBuilder::new(2);
        let (s, p, q, t) = (b.vertex("s"), b.vertex("p"), b.vertex("q"), b.vertex("t"));
        let e1 = b.edge(s, p, w(&["2/5", "3/5"]), None);
        let e2 = b.edge(p, q, w(&["9/10", "1/10"]), None);
        let e3 = b.edge(q, t, w(&["9/10", "9/10"]), None);
        let g = b.build(s, t).unwrap();
        let path = g.path(vec![e1, e2, e3]).unwrap();
        assert_eq!(path.weight, w(&["81/250", "27/500"]));
        assert_eq!(path_value(&path), parse_rational("189/500").unwrap());
    }

    #[test]
    fn empty_and_zero_paths() {
        let mut b = DagBuilder::<Rational>::new(3);
        let s = b.vertex("s");
        let t = b.vertex("t");
        let e = b.edge(s, t, w(&["0", "0", "0"]), None);
        let g = b.build(s, t).unwrap();
        let empty = g.path(vec![]).unwrap();
        assert_eq!(empty.value(), parse_rational("3").unwrap());
        assert_eq!(g.path(vec![e]).unwrap().value(), parse_rational("0").unwrap());
    }

    #[test]
    fn cycles_and_bad_weights_are_rejected() {
        let mut b = DagBuilder::<Rational>::new(1);
        let (x, y) = (b.vertex("x"), b.vertex("y"));
        b.edge(x, y, w(&["1/2"]), None);
        b.edge(y, x, w(&["1/2"]), None);
        assert!(b.build(x, y).is_err());

        let mut b = DagBuilder::<Rational>::new(1);
        let (x, y) = (b.vertex("x"), b.vertex("y"));
        b.edge(x, y, w(&["3/2"]), None);
        assert!(b.build(x, y).is_err());

        let mut b = DagBuilder::<Rational>::new(2);
        let (x, y) = (b.vertex("x"), b.vertex("y"));
        b.edge(x, y, w(&["1/2"]), None);
        assert!(b.build(x, y).is_err());
    }

    #[test]
    fn non_consecutive_path_is_rejected() {
        let mut b = DagBuilder::<Rational>::new(1);
        let (x, y, z) = (b.vertex("x"), b.vertex("y"), b.vertex("z"));
        let e1 = b.edge(x, y, w(&["1/2"]), None);
        let _e2 = b.edge(y, z, w(&["1/2"]), None);
        let g = b.build(x, z).unwrap();
        assert!(g.path(vec![e1, e1]).is_err());
        assert_eq!(g.longest_path_edges(), Some(2));
        assert_eq!(g.all_paths(10).unwrap().len(), 1);
    }
}
