//! Degree of ambiguity: the number of accepting runs per word.
//!
//! Only the support of the automaton matters, so everything here works on the
//! trimmed automaton and ignores probabilities.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::automaton::{ProbabilisticAutomaton, State};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Budget;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbiguityClass {
    Unambiguous,
    /// At most `k` accepting runs per word. `k` is `None` when the search for
    /// the exact bound hit `cap` or the budget.
    FinitelyAmbiguous {
        k: Option<usize>,
        cap: usize,
    },
    PolynomiallyAmbiguous,
    ExponentiallyAmbiguous,
}

impl AmbiguityClass {
    pub fn tag(&self) -> &'static str {
        match self {
            AmbiguityClass::Unambiguous => "unambiguous",
            AmbiguityClass::FinitelyAmbiguous { .. } => "finitely-ambiguous",
            AmbiguityClass::PolynomiallyAmbiguous => "polynomially-ambiguous",
            AmbiguityClass::ExponentiallyAmbiguous => "exponentially-ambiguous",
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            AmbiguityClass::Unambiguous | AmbiguityClass::FinitelyAmbiguous { .. }
        )
    }

    /// The exact ambiguity bound when known.
    pub fn degree(&self) -> Option<usize> {
        match self {
            AmbiguityClass::Unambiguous => Some(1),
            AmbiguityClass::FinitelyAmbiguous { k, .. } => *k,
            _ => None,
        }
    }
}

impl fmt::Display for AmbiguityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbiguityClass::FinitelyAmbiguous { k: Some(k), .. } => write!(f, "{} (k = {k})", self.tag()),
            AmbiguityClass::FinitelyAmbiguous { k: None, cap } => {
                write!(f, "{} (k unknown, searched up to {cap})", self.tag())
            }
            _ => f.write_str(self.tag()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Largest `k` tried when computing the exact bound; `n²` by default.
    pub max_k: Option<usize>,
    /// Node budget for each product search.
    pub budget: Budget,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_k: None,
            budget: Budget(2_000_000),
        }
    }
}

/// Support NFA: `succ[q][a]` lists the positive successors.
struct Support {
    n: usize,
    letters: usize,
    initial: Vec<State>,
    accepting: Vec<bool>,
    succ: Vec<Vec<Vec<State>>>,
}

impl Support {
    fn of<S: Scalar>(p: &ProbabilisticAutomaton<S>) -> Self {
        let t = p.trim();
        let n = t.num_states();
        let letters = t.alphabet().len();
        Support {
            n,
            letters,
            initial: t.initial().iter().map(|(q, _)| *q).collect(),
            accepting: (0..n).map(|q| t.is_accepting(q)).collect(),
            succ: (0..n)
                .map(|q| {
                    (0..letters)
                        .map(|a| t.successors(q, a).iter().map(|(r, _)| *r).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Strongly connected component index of every state, and whether that
    /// component contains a cycle.
    fn components(&self) -> (Vec<usize>, Vec<bool>) {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.n).map(|_| g.add_node(())).collect();
        let mut self_loop = vec![false; self.n];
        for q in 0..self.n {
            for row in &self.succ[q] {
                for &r in row {
                    g.update_edge(nodes[q], nodes[r], ());
                    self_loop[q] |= q == r;
                }
            }
        }
        let sccs = tarjan_scc(&g);
        let mut comp = vec![0; self.n];
        let mut cyclic = vec![false; sccs.len()];
        for (c, members) in sccs.iter().enumerate() {
            for v in members {
                comp[v.index()] = c;
            }
            cyclic[c] = members.len() > 1 || self_loop[members[0].index()];
        }
        (comp, cyclic)
    }

    /// Some state has two distinct cycles on the same word.
    fn has_eda(&self) -> bool {
        let n = self.n;
        let mut g = DiGraph::<(), ()>::with_capacity(n * n, 0);
        let nodes: Vec<_> = (0..n * n).map(|_| g.add_node(())).collect();
        for p in 0..n {
            for q in 0..n {
                for a in 0..self.letters {
                    for &p2 in &self.succ[p][a] {
                        for &q2 in &self.succ[q][a] {
                            g.add_edge(nodes[p * n + q], nodes[p2 * n + q2], ());
                        }
                    }
                }
            }
        }
        tarjan_scc(&g).iter().any(|scc| {
            let diag = scc.iter().any(|v| v.index() / n == v.index() % n);
            let off = scc.iter().any(|v| v.index() / n != v.index() % n);
            diag && off && scc.len() > 1
        })
    }

    /// States `p ≠ q` and a word `v` with runs `p →v p`, `p →v q`, `q →v q`.
    fn has_ida(&self, budget: Budget) -> Result<bool> {
        let n = self.n;
        let (comp, cyclic) = self.components();
        let reach = self.reachability();
        let mut visited = 0u64;
        for p in 0..n {
            if !cyclic[comp[p]] {
                continue;
            }
            for q in 0..n {
                if q == p || !cyclic[comp[q]] || !reach[p][q] || comp[p] == comp[q] {
                    continue;
                }
                // BFS in the triple product from (p, p, q) to (p, q, q); the
                // first component stays in p's component, the last in q's.
                let start = (p, p, q);
                let mut seen = HashSet::from([start]);
                let mut queue = VecDeque::from([start]);
                while let Some((x, y, z)) = queue.pop_front() {
                    visited += 1;
                    if visited > budget.0 {
                        return Err(Error::BudgetExceeded {
                            what: "ambiguity search",
                            limit: budget.0,
                        });
                    }
                    for a in 0..self.letters {
                        for &x2 in self.succ[x][a].iter().filter(|&&r| comp[r] == comp[p]) {
                            for &y2 in self.succ[y][a].iter().filter(|&&r| reach[p][r] && reach[r][q]) {
                                for &z2 in self.succ[z][a].iter().filter(|&&r| comp[r] == comp[q]) {
                                    let next = (x2, y2, z2);
                                    if next == (p, q, q) {
                                        return Ok(true);
                                    }
                                    if seen.insert(next) {
                                        queue.push_back(next);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    /// `reach[p][q]`: `q` reachable from `p` in zero or more steps.
    fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|p| {
                let mut seen = vec![false; self.n];
                seen[p] = true;
                let mut stack = vec![p];
                while let Some(q) = stack.pop() {
                    for row in &self.succ[q] {
                        for &r in row {
                            if !seen[r] {
                                seen[r] = true;
                                stack.push(r);
                            }
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// Search for `k+1` pairwise distinct accepting runs on a common word.
    fn exceeds(&self, k: usize, budget: Budget) -> Result<bool> {
        let m = k + 1;
        let full: u64 = if m * (m - 1) / 2 >= 64 {
            return Err(Error::Unsupported(format!(
                "k = {k} is too large for the product search"
            )));
        } else {
            (1u64 << (m * (m - 1) / 2)) - 1
        };
        let bit = |i: usize, j: usize| 1u64 << (i * m - i * (i + 1) / 2 + (j - i - 1));
        let mask_of = |t: &[State]| {
            let mut mask = 0;
            for i in 0..m {
                for j in i + 1..m {
                    if t[i] != t[j] {
                        mask |= bit(i, j);
                    }
                }
            }
            mask
        };
        let accepted = |t: &[State], mask: u64| mask == full && t.iter().all(|&q| self.accepting[q]);

        let mut seen: HashSet<(Vec<State>, u64)> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut push = |t: Vec<State>, mask: u64, queue: &mut VecDeque<_>| {
            let key = (t, mask);
            if !seen.contains(&key) {
                seen.insert(key.clone());
                queue.push_back(key);
            }
        };
        for_each_tuple(&vec![&self.initial[..]; m], |t| {
            let mask = mask_of(t);
            push(t.to_vec(), mask, &mut queue);
        });
        let mut visited = 0u64;
        while let Some((t, mask)) = queue.pop_front() {
            if accepted(&t, mask) {
                return Ok(true);
            }
            visited += 1;
            if visited > budget.0 {
                return Err(Error::BudgetExceeded {
                    what: "ambiguity search",
                    limit: budget.0,
                });
            }
            for a in 0..self.letters {
                let lists: Vec<&[State]> = t.iter().map(|&q| &self.succ[q][a][..]).collect();
                for_each_tuple(&lists, |next| {
                    let m2 = mask | mask_of(next);
                    push(next.to_vec(), m2, &mut queue);
                });
            }
        }
        Ok(false)
    }
}

fn for_each_tuple(lists: &[&[State]], mut f: impl FnMut(&[State])) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    let mut cur: Vec<State> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                cur[pos] = lists[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            cur[pos] = lists[pos][0];
        }
    }
}

/// True iff no word has `k+1` pairwise distinct accepting runs.
pub fn is_k_ambiguous<S: Scalar>(p: &ProbabilisticAutomaton<S>, k: usize) -> bool {
    is_k_ambiguous_within(p, k, Budget::unlimited()).expect("unlimited budget")
}

/// [`is_k_ambiguous`] with a bound on the number of product states visited.
pub fn is_k_ambiguous_within<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    k: usize,
    budget: Budget,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    Ok(!Support::of(p).exceeds(k, budget)?)
}

/// Exponential, polynomial or finite ambiguity, with the exact bound in the
/// finite case.
pub fn classify<S: Scalar>(p: &ProbabilisticAutomaton<S>) -> AmbiguityClass {
    classify_with(p, &ClassifyOptions::default())
}

pub fn classify_with<S: Scalar>(p: &ProbabilisticAutomaton<S>, opts: &ClassifyOptions) -> AmbiguityClass {
    let support = Support::of(p);
    let n = support.n;
    if n == 0 {
        return AmbiguityClass::Unambiguous;
    }
    if support.has_eda() {
        return AmbiguityClass::ExponentiallyAmbiguous;
    }
    // Without EDA the IDA search is the only remaining distinction; if it
    // runs out of budget we fall through to the bounded search, which will
    // report an unknown bound.
    if let Ok(true) = support.has_ida(opts.budget) {
        return AmbiguityClass::PolynomiallyAmbiguous;
    }
    let cap = opts.max_k.unwrap_or(n * n).max(1);
    for k in 1..=cap {
        match support.exceeds(k, opts.budget) {
            Ok(false) if k == 1 => return AmbiguityClass::Unambiguous,
            Ok(false) => return AmbiguityClass::FinitelyAmbiguous { k: Some(k), cap },
            Ok(true) => {}
            Err(_) => break,
        }
    }
    AmbiguityClass::FinitelyAmbiguous { k: None, cap }
}

/// For each length `ℓ ≤ max_len`, the largest number of accepting runs on a
/// word of length `ℓ` (saturating at `u128::MAX`).
pub fn ambiguity_profile<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    max_len: usize,
    budget: Budget,
) -> Result<Vec<(usize, u128)>> {
    let n = p.num_states();
    let letters = p.alphabet().len();
    let mut start = vec![0u128; n];
    for (q, _) in p.initial() {
        start[*q] = 1;
    }
    let mut best = vec![0u128; max_len + 1];
    let mut visited = 0u64;
    let mut stack = vec![(start, 0usize)];
    while let Some((counts, len)) = stack.pop() {
        visited += 1;
        if visited > budget.0 {
            return Err(Error::BudgetExceeded {
                what: "word enumeration",
                limit: budget.0,
            });
        }
        let accepted = p
            .accepting_states()
            .fold(0u128, |acc, q| acc.saturating_add(counts[q]));
        best[len] = best[len].max(accepted);
        if len == max_len {
            continue;
        }
        for a in 0..letters {
            let mut next = vec![0u128; n];
            for q in 0..n {
                if counts[q] == 0 {
                    continue;
                }
                for (r, _) in p.successors(q, a) {
                    next[*r] = next[*r].saturating_add(counts[q]);
                }
            }
            stack.push((next, len + 1));
        }
    }
    Ok(best.into_iter().enumerate().collect())
}
