//! Witness lengths: bounds, the two shortening procedures, and exhaustive
//! search over bounded-length words.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::automaton::{Letter, ProbabilisticAutomaton, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    /// The automaton is `k`-ambiguous: bound `n^k`.
    KAmbiguous(usize),
    /// The automaton is finitely ambiguous: bound `(n+1)!`.
    FinitelyAmbiguous,
}

/// Length bound for a witness, `n` being the number of useful states.
pub fn witness_bound<S: Scalar>(p: &ProbabilisticAutomaton<S>, mode: WitnessMode) -> BigUint {
    let n = p.trim().num_states();
    match mode {
        WitnessMode::KAmbiguous(k) => BigUint::from(n).pow(k as u32),
        WitnessMode::FinitelyAmbiguous => (1..=n + 1).map(BigUint::from).product(),
    }
}

fn fits(len: usize, bound: &BigUint) -> bool {
    BigUint::from(len) <= *bound
}

/// Shortens `w` to length at most `n^k` without decreasing its probability.
///
/// Repeatedly cuts a factor on which every accepting run starts and ends in
/// the same state. Fails when `w` has more than `k` accepting runs.
pub fn shorten_witness_k<S: Scalar>(p: &ProbabilisticAutomaton<S>, k: usize, w: &[Letter]) -> Result<Word> {
    Ok(shorten_witness_k_steps(p, k, w)?
        .pop()
        .expect("at least the input"))
}

/// The successive words of [`shorten_witness_k`], starting with `w`.
pub fn shorten_witness_k_steps<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    k: usize,
    w: &[Letter],
) -> Result<Vec<Word>> {
    let bound = witness_bound(p, WitnessMode::KAmbiguous(k));
    let mut steps = vec![w.to_vec()];
    let mut word = w.to_vec();
    while !fits(word.len(), &bound) {
        let runs = p
            .accepting_runs_capped(&word, k)?
            .ok_or_else(|| Error::Precondition(format!("the word has more than {k} accepting runs")))?;
        if runs.is_empty() {
            word.clear();
        } else {
            let tuple = |j: usize| -> Vec<usize> { runs.iter().map(|(r, _)| r.states[j]).collect() };
            let (i, j) = first_repeat(word.len() + 1, tuple).ok_or_else(|| {
                Error::Precondition(format!("no repeated run tuple in a word longer than {bound}"))
            })?;
            word.drain(i..j);
        }
        steps.push(word.clone());
    }
    Ok(steps)
}

/// First pair `i < j` (smallest `j`) with equal keys among positions `0..len`.
fn first_repeat<K: PartialEq>(len: usize, key: impl Fn(usize) -> K) -> Option<(usize, usize)> {
    let mut seen: Vec<K> = Vec::new();
    for j in 0..len {
        let kj = key(j);
        if let Some(i) = seen.iter().position(|k| *k == kj) {
            return Some((i, j));
        }
        seen.push(kj);
    }
    None
}

/// Shortens `w` to length at most `(n+1)!` without decreasing its
/// probability, for a finitely ambiguous automaton.
///
/// At each position the states lying on an accepting run are ordered by the
/// probability of reaching them (ties by index); a factor between two
/// positions with the same ordered set is cut.
pub fn shorten_witness_finite<S: Scalar>(p: &ProbabilisticAutomaton<S>, w: &[Letter]) -> Result<Word> {
    Ok(shorten_witness_finite_steps(p, w)?
        .pop()
        .expect("at least the input"))
}

/// The successive words of [`shorten_witness_finite`], starting with `w`.
pub fn shorten_witness_finite_steps<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    w: &[Letter],
) -> Result<Vec<Word>> {
    let bound = witness_bound(p, WitnessMode::FinitelyAmbiguous);
    let mut steps = vec![w.to_vec()];
    let mut word = w.to_vec();
    while !fits(word.len(), &bound) {
        let (i, j) = finite_cut(p, &word)?;
        word.drain(i..j);
        steps.push(word.clone());
    }
    Ok(steps)
}

fn finite_cut<S: Scalar>(p: &ProbabilisticAutomaton<S>, word: &[Letter]) -> Result<(usize, usize)> {
    let n = p.num_states();
    let alive = p.co_reachable_along(word);
    let mut forward = vec![p.initial_vector()];
    for &a in word {
        let next = p.step(forward.last().expect("non-empty"), a);
        forward.push(next);
    }
    let member = |i: usize, q: usize| forward[i][q].is_positive_value() && alive[i][q];
    let signature = |i: usize| -> Vec<usize> {
        let mut r: Vec<usize> = (0..n).filter(|&q| member(i, q)).collect();
        r.sort_by(|&x, &y| {
            forward[i][x]
                .partial_cmp(&forward[i][y])
                .unwrap_or(Ordering::Equal)
                .then(x.cmp(&y))
        });
        r
    };
    let (i, j) = first_repeat(word.len() + 1, signature)
        .ok_or_else(|| Error::Precondition("no repeated signature".into()))?;

    // Over the cut factor the participating states must be permuted, each
    // with a single run; anything else pumps into unbounded ambiguity.
    for q in (0..n).filter(|&q| member(i, q)) {
        let mut counts = vec![0u128; n];
        counts[q] = 1;
        for (t, &a) in word[i..j].iter().enumerate() {
            let mut next = vec![0u128; n];
            for s in 0..n {
                if counts[s] == 0 {
                    continue;
                }
                for (r, _) in p.successors(s, a) {
                    if member(i + t + 1, *r) {
                        next[*r] = next[*r].saturating_add(counts[s]);
                    }
                }
            }
            counts = next;
        }
        if counts.iter().sum::<u128>() != 1 {
            return Err(Error::Precondition(
                "the automaton is not finitely ambiguous: a state has several runs over a pumpable factor"
                    .into(),
            ));
        }
    }
    Ok((i, j))
}

/// Calls `visit(word, vector)` on every word of length at most `max_len`
/// in depth-first lexicographic order; `visit` returns whether to descend.
fn explore<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    max_len: usize,
    budget: Budget,
    mut visit: impl FnMut(&[Letter], &[S]) -> bool,
) -> Result<()> {
    let letters = p.alphabet().len();
    let mut word: Word = Vec::new();
    let mut vectors = vec![p.initial_vector()];
    // next letter to try at each depth
    let mut next: Vec<usize> = vec![0];
    let mut visited = 1u64;
    let mut descend = visit(&word, &vectors[0]) && max_len > 0;
    if !descend {
        return Ok(());
    }
    loop {
        let depth = word.len();
        if next[depth] >= letters || !descend {
            descend = true;
            if depth == 0 {
                return Ok(());
            }
            word.pop();
            vectors.pop();
            next.pop();
            continue;
        }
        let a = next[depth];
        next[depth] += 1;
        let v = p.step(&vectors[depth], a);
        if v.iter().all(|x| !x.is_positive_value()) {
            continue;
        }
        visited += 1;
        if visited > budget.0 {
            return Err(Error::BudgetExceeded {
                what: "word enumeration",
                limit: budget.0,
            });
        }
        word.push(a);
        let go = visit(&word, &v) && word.len() < max_len;
        vectors.push(v);
        next.push(0);
        if !go {
            descend = false;
        }
    }
}

fn mass<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

/// Exact maximum of `P(w)` over `|w| ≤ max_len`, with the shortlex-first
/// maximiser.
pub fn exhaustive_value<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    max_len: usize,
    budget: Budget,
) -> Result<(S, Word)> {
    let mut best = S::zero();
    let mut best_word: Word = Vec::new();
    let mut first = true;
    explore(p, max_len, budget, |w, v| {
        let value = p.accepted_mass(v);
        if first || value > best || (value == best && w.len() < best_word.len()) {
            best = value;
            best_word = w.to_vec();
            first = false;
        }
        // the mass still in flight bounds every extension
        let rest = mass(v);
        rest > best || (rest == best && w.len() + 1 < best_word.len())
    })?;
    Ok((best, best_word))
}

/// Outcome of a bounded emptiness search.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport<S> {
    pub word: Option<Word>,
    /// `P(word)` when a word was found.
    pub value: Option<S>,
    pub bound_used: usize,
    /// The whole bounded space was searched.
    pub exhausted: bool,
}

/// Shortlex-first word of length at most `max_len` with `P(w) > c`.
pub fn exhaustive_emptiness<S: Scalar>(
    p: &ProbabilisticAutomaton<S>,
    c: &S,
    max_len: usize,
    budget: Budget,
) -> Result<WitnessReport<S>> {
    let mut spent = 0u64;
    for len in 0..=max_len {
        let mut found: Option<(Word, S)> = None;
        let mut used = 0u64;
        let remaining = Budget(budget.0.saturating_sub(spent));
        explore(p, len, remaining, |w, v| {
            used += 1;
            if found.is_some() {
                return false;
            }
            if w.len() == len {
                let value = p.accepted_mass(v);
                if value > *c {
                    found = Some((w.to_vec(), value));
                }
                return false;
            }
            mass(v) > *c
        })
        .map_err(|e| match e {
            Error::BudgetExceeded { what, .. } => Error::BudgetExceeded {
                what,
                limit: budget.0,
            },
            e => e,
        })?;
        spent += used;
        if let Some((word, value)) = found {
            return Ok(WitnessReport {
                word: Some(word),
                value: Some(value),
                bound_used: max_len,
                exhausted: false,
            });
        }
    }
    Ok(WitnessReport {
        word: None,
        value: None,
        bound_used: max_len,
        exhausted: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        bin_automaton, clique_automaton, dfa_intersection_automaton, modulo_counter_dfa, random_k_ambiguous,
        Graph,
    };
    use crate::{parse_automaton, parse_rational, Automaton, Rational};
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    /// Maximum by plain enumeration of `Σ^{≤L}` in shortlex order.
    fn brute_value(p: &Automaton, max_len: usize) -> (Rational, Word) {
        let letters = p.alphabet().len();
        let mut best = (p.acceptance_probability(&[]).unwrap(), vec![]);
        let mut layer: Vec<Word> = vec![vec![]];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..letters).map(move |a| {
                        let mut x = w.clone();
                        x.push(a);
                        x
                    })
                })
                .collect();
            for w in &layer {
                let v = p.acceptance_probability(w).unwrap();
                if v > best.0 {
                    best = (v, w.clone());
                }
            }
        }
        best
    }

    #[test]
    fn bounds() {
        let p = random_k_ambiguous(4, 2, 0);
        let n = p.trim().num_states();
        assert_eq!(
            witness_bound(&p, WitnessMode::KAmbiguous(2)),
            BigUint::from(n * n)
        );
        let three = parse_automaton(
            "pa v1\nalphabet a\nstates x y z\ninitial x 1\naccept z\ntrans x a y 1\ntrans y a z 1\n",
        )
        .unwrap();
        assert_eq!(
            witness_bound(&three, WitnessMode::FinitelyAmbiguous),
            BigUint::from(24u32)
        );
        let one = modulo_counter_dfa(1);
        for k in 1..5 {
            assert_eq!(witness_bound(&one, WitnessMode::KAmbiguous(k)), BigUint::one());
        }
    }

    #[test]
    fn value_examples() {
        let k3 = clique_automaton(&Graph::complete(3));
        let (v, w) = exhaustive_value(&k3, 3, Budget::DEFAULT).unwrap();
        assert_eq!(v, r("1/4"));
        assert_eq!(k3.format_word(&w), "111");
        let bin = bin_automaton();
        let (v, w) = exhaustive_value(&bin, 4, Budget::DEFAULT).unwrap();
        assert_eq!((v, bin.format_word(&w)), (r("15/16"), "1111".to_string()));
        let empty = parse_automaton("pa v1\nalphabet a\nstates x\ninitial x 1\ntrans x a x 1\n").unwrap();
        assert_eq!(exhaustive_value(&empty, 5, Budget::DEFAULT).unwrap().0, r("0"));
    }

    #[test]
    fn value_matches_brute_force() {
        for seed in 0..40 {
            let p = crate::generators::random_automaton(3, 2, seed);
            let (v, w) = exhaustive_value(&p, 6, Budget::DEFAULT).unwrap();
            let (bv, bw) = brute_value(&p, 6);
            assert_eq!(v, bv, "seed {seed}");
            assert_eq!(w, bw, "seed {seed}");
        }
    }

    #[test]
    fn emptiness_examples() {
        let bin = bin_automaton();
        let rep = exhaustive_emptiness(&bin, &r("1/2"), 2, Budget::DEFAULT).unwrap();
        assert_eq!(bin.format_word(rep.word.as_ref().unwrap()), "11");
        assert_eq!(rep.value, Some(r("3/4")));
        let none = exhaustive_emptiness(&bin, &r("1"), 6, Budget::DEFAULT).unwrap();
        assert!(none.exhausted && none.word.is_none());

        let p = dfa_intersection_automaton(&[modulo_counter_dfa(2), modulo_counter_dfa(3)]).unwrap();
        let rep = exhaustive_emptiness(&p, &r("999/1000"), 6, Budget::DEFAULT).unwrap();
        // both counters accept the empty word
        assert_eq!(rep.word, Some(vec![]));
    }

    #[test]
    fn budget_is_enforced() {
        let bin = bin_automaton();
        assert!(matches!(
            exhaustive_value(&bin, 20, Budget(100)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    fn random_word(rng: &mut ChaCha8Rng, letters: usize, len: usize) -> Word {
        (0..len).map(|_| rng.gen_range(0..letters)).collect()
    }

    #[test]
    fn k_shortening_never_loses_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..100 {
            let p = random_k_ambiguous(3, 2, seed);
            let n = p.trim().num_states();
            let w = random_word(&mut rng, 2, n * n + 3);
            let steps = shorten_witness_k_steps(&p, 2, &w).unwrap();
            let out = steps.last().unwrap();
            assert!(out.len() <= n * n);
            for pair in steps.windows(2) {
                let before = p.acceptance_probability(&pair[0]).unwrap();
                let after = p.acceptance_probability(&pair[1]).unwrap();
                assert!(after >= before, "seed {seed}");
            }
        }
    }

    #[test]
    fn short_words_are_unchanged() {
        let p = random_k_ambiguous(3, 2, 4);
        let w = vec![0, 1];
        assert_eq!(shorten_witness_k(&p, 2, &w).unwrap(), w);
        assert_eq!(shorten_witness_finite(&p, &w).unwrap(), w);
    }

    #[test]
    fn k_shortening_rejects_too_many_runs() {
        let bin = bin_automaton();
        let w = bin.parse_word("11111111111").unwrap();
        assert!(matches!(
            shorten_witness_k(&bin, 1, &w),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn finite_shortening_never_loses_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for seed in 0..60 {
            let p = random_k_ambiguous(2, 2, seed);
            let n = p.trim().num_states();
            let bound: usize = (1..=n + 1).product();
            let extra = rng.gen_range(0..10);
            let w = random_word(&mut rng, 2, bound + 1 + extra);
            let steps = shorten_witness_finite_steps(&p, &w).unwrap();
            assert!(steps.last().unwrap().len() <= bound);
            for pair in steps.windows(2) {
                assert!(pair[1].len() < pair[0].len());
                let before = p.acceptance_probability(&pair[0]).unwrap();
                let after = p.acceptance_probability(&pair[1]).unwrap();
                assert!(after >= before, "seed {seed}");
            }
        }
    }

    #[test]
    fn finite_shortening_detects_pumping() {
        let bin = bin_automaton();
        let w = bin.parse_word("1111111111").unwrap();
        assert!(matches!(
            shorten_witness_finite(&bin, &w),
            Err(Error::Precondition(_))
        ));
    }
}
