use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph { n, edges }
    }

    /// Graph from 0-indexed unordered pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// The graph whose edge set is the bitmask `mask` over pairs `i < j` in
    /// lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    g.edges.insert((i, j));
                }
                bit += 1;
            }
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {}", i + 1)));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge {} {} outside 1..={}",
                i + 1,
                j + 1,
                self.n
            )));
        }
        self.edges.insert((i.min(j), i.max(j)));
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Size of a largest clique by enumeration of all vertex subsets.
    pub fn max_clique_brute_force(&self) -> usize {
        assert!(self.n < 32, "subset enumeration limited to n < 32");
        let mut best = 0;
        for mask in 0u32..(1 << self.n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let members: Vec<usize> = (0..self.n).filter(|i| mask >> i & 1 == 1).collect();
            let clique = members
                .iter()
                .enumerate()
                .all(|(x, &i)| members[x + 1..].iter().all(|&j| self.has_edge(i, j)));
            if clique {
                best = size;
            }
        }
        best
    }
}

/// Parses the `.g` format: `graph <n>` then `edge i j` lines, 1-indexed.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::syntax(line_no, format!("expected a number, got `{t}`")))
        };
        match (tokens.as_slice(), graph.as_mut()) {
            ([], _) => {}
            (["graph", n], None) => graph = Some(Graph::empty(num(n)?)),
            (["edge", i, j], Some(g)) => {
                let (i, j) = (num(i)?, num(j)?);
                if i == 0 || j == 0 {
                    return Err(Error::syntax(line_no, "vertices are 1-indexed"));
                }
                g.add_edge(i - 1, j - 1)
                    .map_err(|e| Error::syntax(line_no, e.to_string()))?;
            }
            (_, None) => return Err(Error::syntax(line_no, "expected header `graph <n>`")),
            _ => return Err(Error::syntax(line_no, "expected `edge <i> <j>`")),
        }
    }
    graph.ok_or_else(|| Error::syntax(1, "expected header `graph <n>`"))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n);
    for (i, j) in g.edges() {
        let _ = writeln!(out, "edge {} {}", i + 1, j + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_serialize() {
        let g = parse_graph("graph 4\nedge 1 2\nedge 3 2 # reversed\n").unwrap();
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        assert_eq!(serialize_graph(&g), "graph 4\nedge 1 2\nedge 2 3\n");
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_self_loops_and_bad_indices() {
        assert!(parse_graph("graph 3\nedge 2 2\n").is_err());
        assert!(parse_graph("graph 3\nedge 0 1\n").is_err());
        assert!(parse_graph("graph 3\nedge 1 4\n").is_err());
        assert!(parse_graph("edge 1 2\n").is_err());
        assert!(Graph::empty(2).add_edge(1, 1).is_err());
    }

    #[test]
    fn max_clique_small_cases() {
        assert_eq!(Graph::empty(4).max_clique_brute_force(), 1);
        assert_eq!(Graph::complete(5).max_clique_brute_force(), 5);
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.max_clique_brute_force(), 3);
        assert_eq!(Graph::empty(0).max_clique_brute_force(), 0);
    }

    #[test]
    fn masks_enumerate_all_graphs() {
        let total: usize = (0..64u64).map(|m| Graph::from_mask(4, m).edges().count()).sum();
        assert_eq!(total, 6 * 32);
    }
}
