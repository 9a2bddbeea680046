//! From k-ambiguous automata to k-weighted DAGs.

use std::collections::{HashMap, VecDeque};

use super::dag::{DagBuilder, MultiWeightedDag, VertexId, WeightVector};
use crate::ambiguity::is_k_ambiguous;
use crate::automaton::{ProbabilisticAutomaton, State};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Whether to verify k-ambiguity before reducing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AmbiguityCheck {
    /// Check when the trimmed automaton has at most [`AUTO_CHECK_STATES`] states.
    #[default]
    Auto,
    Always,
    /// Trust the caller.
    Trust,
}

pub const AUTO_CHECK_STATES: usize = 16;

#[derive(Clone, Debug)]
pub struct ReductionOptions {
    /// Maximum word length simulated; `n^k` (useful states) by default.
    pub length_bound: Option<u64>,
    /// Largest accepted `k`.
    pub max_k: usize,
    pub ambiguity_check: AmbiguityCheck,
    pub vertex_budget: u64,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            length_bound: None,
            max_k: 3,
            ambiguity_check: AmbiguityCheck::Auto,
            vertex_budget: 2_000_000,
        }
    }
}

type Key = (Vec<State>, u64, u64);

fn pair_bit(i: usize, j: usize, k: usize) -> u64 {
    // index of the pair (i, j), i < j, in lexicographic order
    let idx = i * k - i * (i + 1) / 2 + (j - i - 1);
    1 << idx
}

fn distinctness(tuple: &[State], k: usize) -> u64 {
    let mut m = 0;
    for i in 0..k {
        for j in i + 1..k {
            if tuple[i] != tuple[j] {
                m |= pair_bit(i, j, k);
            }
        }
    }
    m
}

/// Calls `f` on every choice of one element from each list.
fn for_each_choice<T>(lists: &[&[T]], mut f: impl FnMut(&[&T]) -> Result<()>) -> Result<()> {
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; lists.len()];
    loop {
        let pick: Vec<&T> = idx.iter().zip(lists).map(|(&i, l)| &l[i]).collect();
        f(&pick)?;
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// The k-weighted DAG simulating `k` runs of `p` in parallel.
///
/// Vertices are `(q_1, …, q_k, ℓ, M)` where `ℓ` is the number of letters
/// read and `M` records which pairs of runs have diverged. A target edge
/// gives component `i` weight 1 iff `q_i` is accepting and run `i` differs
/// from every run `j < i`. For a k-ambiguous automaton, the best path value
/// equals the value of the automaton (up to the length bound). Only the
/// part reachable from the source is built.
pub fn reduce_to_dag<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    k: usize,
    opts: &ReductionOptions,
) -> Result<MultiWeightedDag<S>> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if k > opts.max_k {
        return Err(Error::Unsupported(format!(
            "k = {k} exceeds the supported maximum {}; raise the limit to override",
            opts.max_k
        )));
    }
    let check = match opts.ambiguity_check {
        AmbiguityCheck::Always => true,
        AmbiguityCheck::Auto => p.trim().num_states() <= AUTO_CHECK_STATES,
        AmbiguityCheck::Trust => false,
    };
    if check && !is_k_ambiguous(p, k) {
        return Err(Error::Precondition(format!("the automaton is not {k}-ambiguous")));
    }

    let live = p.co_reachable_states();
    let useful = p.useful_states().iter().filter(|&&u| u).count() as u64;
    let bound = opts
        .length_bound
        .unwrap_or_else(|| useful.checked_pow(k as u32).unwrap_or(u64::MAX));

    let mut b = DagBuilder::new(k);
    let s = b.vertex("s");
    let t = b.vertex("t");
    let mut ids: HashMap<Key, VertexId> = HashMap::new();
    let mut queue: VecDeque<(Key, VertexId)> = VecDeque::new();
    let mut visit = |key: Key, b: &mut DagBuilder<S>, queue: &mut VecDeque<(Key, VertexId)>| {
        if let Some(&v) = ids.get(&key) {
            return Ok(v);
        }
        if ids.len() as u64 >= opts.vertex_budget {
            return Err(Error::BudgetExceeded {
                what: "reduction vertices",
                limit: opts.vertex_budget,
            });
        }
        let names: Vec<String> = key.0.iter().map(ToString::to_string).collect();
        let v = b.vertex(format!("({})@{}:{:b}", names.join(","), key.1, key.2));
        ids.insert(key.clone(), v);
        queue.push_back((key, v));
        Ok(v)
    };

    let init: Vec<(State, S)> = p
        .initial()
        .iter()
        .filter(|(q, m)| live[*q] && m.is_positive_value())
        .cloned()
        .collect();
    let init_lists: Vec<&[(State, S)]> = vec![&init[..]; k];
    for_each_choice(&init_lists, |pick| {
        let tuple: Vec<State> = pick.iter().map(|x| x.0).collect();
        let weight = WeightVector::new(pick.iter().map(|x| x.1.clone()).collect());
        let mask = distinctness(&tuple, k);
        let v = visit((tuple, 0, mask), &mut b, &mut queue)?;
        b.edge(s, v, weight, None);
        Ok(())
    })?;

    while let Some(((tuple, len, mask), v)) = queue.pop_front() {
        let accept = WeightVector::new(
            (0..k)
                .map(|i| {
                    let distinct = (0..i).all(|j| mask & pair_bit(j, i, k) != 0);
                    if p.is_accepting(tuple[i]) && distinct {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
                .collect(),
        );
        b.edge(v, t, accept, None);
        if len >= bound {
            continue;
        }
        let mut seen: Vec<(VertexId, WeightVector<S>)> = Vec::new();
        for a in 0..p.alphabet().len() {
            let succ: Vec<Vec<(State, S)>> = tuple
                .iter()
                .map(|&q| {
                    p.successors(q, a)
                        .iter()
                        .filter(|(r, _)| live[*r])
                        .cloned()
                        .collect()
                })
                .collect();
            let lists: Vec<&[(State, S)]> = succ.iter().map(Vec::as_slice).collect();
            for_each_choice(&lists, |pick| {
                let next: Vec<State> = pick.iter().map(|x| x.0).collect();
                let weight = WeightVector::new(pick.iter().map(|x| x.1.clone()).collect());
                let m = mask | distinctness(&next, k);
                let to = visit((next, len + 1, m), &mut b, &mut queue)?;
                if !seen.iter().any(|(u, w)| *u == to && *w == weight) {
                    seen.push((to, weight.clone()));
                    b.edge(v, to, weight, Some(a));
                }
                Ok(())
            })?;
        }
    }
    b.build(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bin_automaton, random_k_ambiguous};
    use crate::stochpath::{exact_pareto, ParetoSet};
    use crate::witness::exhaustive_value;
    use crate::{Automaton, Budget, Rational};
    use num_traits::Zero;

    fn best(dag: &MultiWeightedDag<Rational>) -> Rational {
        exact_pareto(dag, 1_000_000)
            .unwrap()
            .max_value()
            .unwrap_or_else(Rational::zero)
    }

    #[test]
    fn pair_bits_are_distinct() {
        let k = 4;
        let mut all = 0;
        for i in 0..k {
            for j in i + 1..k {
                let bit = pair_bit(i, j, k);
                assert_eq!(all & bit, 0);
                all |= bit;
            }
        }
        assert_eq!(all, 0b11_1111);
    }

    #[test]
    fn refuses_large_k_and_ambiguous_inputs() {
        let p = random_k_ambiguous(4, 2, 1);
        assert!(matches!(
            reduce_to_dag(&p, 4, &ReductionOptions::default()),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            reduce_to_dag(&bin_automaton(), 2, &ReductionOptions::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn no_accepting_states_gives_zero() {
        let text = "pa v1\nalphabet a\nstates x\ninitial x 1\ntrans x a x 1/2\n";
        let p: Automaton = crate::parse_automaton(text).unwrap();
        let g = reduce_to_dag(&p, 1, &ReductionOptions::default()).unwrap();
        for path in g.all_paths(1000).unwrap() {
            assert!(path.value().is_zero());
        }
    }

    #[test]
    fn max_path_value_equals_automaton_value() {
        for seed in 0..25 {
            let p = random_k_ambiguous(3, 2, seed);
            let n = p.trim().num_states() as u64;
            let g = reduce_to_dag(&p, 2, &ReductionOptions::default()).unwrap();
            let (val, _) = exhaustive_value(&p, (n * n) as usize, Budget::DEFAULT).unwrap();
            assert_eq!(best(&g), val, "seed {seed}");
            // every path value is realised by its word
            for path in g.all_paths(200_000).unwrap() {
                let word = g.word_of_path(&path);
                assert!(path.value() <= p.acceptance_probability(&word).unwrap());
            }
        }
    }

    #[test]
    fn deterministic_case_is_exact() {
        let p = random_k_ambiguous(4, 1, 3);
        let g = reduce_to_dag(&p, 1, &ReductionOptions::default()).unwrap();
        let n = p.trim().num_states();
        let (val, _) = exhaustive_value(&p, n, Budget::DEFAULT).unwrap();
        let set: ParetoSet<Rational> = exact_pareto(&g, 1000).unwrap();
        assert_eq!(set.max_value().unwrap_or_else(Rational::zero), val);
    }
}
