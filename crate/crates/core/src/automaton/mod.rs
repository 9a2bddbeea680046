//! Probabilistic automata with sub-stochastic transition rows and an initial
//! sub-distribution, and their exact semantics.

mod text;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use text::{parse_automaton, serialize_automaton};

/// Index of a state in declaration order.
pub type State = usize;
/// Index of a letter in declaration order.
pub type Letter = usize;
pub type Word = Vec<Letter>;

/// A finite automaton whose transitions carry probabilities.
///
/// Rows `Δ(q, a)` and the initial vector are sub-distributions; zero entries
/// are never stored. Values of this type are immutable once built, see
/// [`AutomatonBuilder`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilisticAutomaton<S> {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: Vec<(State, S)>,
    // delta[q][a], sorted by target state
    delta: Vec<Vec<Vec<(State, S)>>>,
    accepting: Vec<bool>,
}

/// A run: `states[0] states[1] ... states[n]` over `word[0] ... word[n-1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub states: Vec<State>,
    pub word: Word,
}

impl<S: Scalar> ProbabilisticAutomaton<S> {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_index(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<Letter> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Initial sub-distribution as `(state, mass)` pairs in state order.
    pub fn initial(&self) -> &[(State, S)] {
        &self.initial
    }

    pub fn initial_mass(&self, q: State) -> S {
        self.initial
            .iter()
            .find(|(p, _)| *p == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(S::zero)
    }

    /// Successors of `q` on `a` with positive probability, sorted by state.
    pub fn successors(&self, q: State, a: Letter) -> &[(State, S)] {
        &self.delta[q][a]
    }

    pub fn probability(&self, q: State, a: Letter, target: State) -> S {
        self.delta[q][a]
            .iter()
            .find(|(p, _)| *p == target)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.states.len()).filter(|&q| self.accepting[q])
    }

    /// True when every row has at most one successor and the initial
    /// distribution is a single state with mass one, with all probabilities one.
    pub fn is_deterministic(&self) -> bool {
        let single_initial = self.initial.len() == 1 && self.initial[0].1 == S::one();
        single_initial
            && self
                .delta
                .iter()
                .flatten()
                .all(|row| row.len() <= 1 && row.iter().all(|(_, p)| *p == S::one()))
    }

    fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&a| a >= self.alphabet.len()) {
            Some(a) => Err(Error::UnknownLetter(format!("#{a}"))),
            None => Ok(()),
        }
    }

    /// Dense initial row vector.
    pub fn initial_vector(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.states.len()];
        for (q, m) in &self.initial {
            v[*q] = m.clone();
        }
        v
    }

    /// One step of row-vector propagation: `v · Δ(a)`.
    pub fn step(&self, v: &[S], a: Letter) -> Vec<S> {
        let mut next = vec![S::zero(); self.states.len()];
        for (q, mass) in v.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (p, prob) in &self.delta[q][a] {
                next[*p] = next[*p].clone() + mass.clone() * prob.clone();
            }
        }
        next
    }

    /// Vector reached after reading `word` from `start`.
    pub fn propagate_from(&self, start: Vec<S>, word: &[Letter]) -> Result<Vec<S>> {
        self.check_word(word)?;
        Ok(word.iter().fold(start, |v, &a| self.step(&v, a)))
    }

    /// Distribution over states after reading `word`.
    pub fn propagate(&self, word: &[Letter]) -> Result<Vec<S>> {
        self.propagate_from(self.initial_vector(), word)
    }

    /// Mass of `v` on accepting states.
    pub fn accepted_mass(&self, v: &[S]) -> S {
        v.iter()
            .enumerate()
            .filter(|(q, _)| self.accepting[*q])
            .fold(S::zero(), |acc, (_, m)| acc + m.clone())
    }

    /// `P(w)`: the probability of accepting `word`.
    pub fn acceptance_probability(&self, word: &[Letter]) -> Result<S> {
        Ok(self.accepted_mass(&self.propagate(word)?))
    }

    /// `alive[i][q]`: some positive-probability path reads `word[i..]` from `q`
    /// into an accepting state.
    pub(crate) fn co_reachable_along(&self, word: &[Letter]) -> Vec<Vec<bool>> {
        let n = self.states.len();
        let mut alive = vec![vec![false; n]; word.len() + 1];
        alive[word.len()] = self.accepting.clone();
        for i in (0..word.len()).rev() {
            for q in 0..n {
                alive[i][q] = self.delta[q][word[i]].iter().any(|(p, _)| alive[i + 1][*p]);
            }
        }
        alive
    }

    /// All accepting runs over `word`, lexicographic in state indices, each
    /// with its probability (initial mass included).
    pub fn accepting_runs(&self, word: &[Letter]) -> Result<Vec<(Run, S)>> {
        Ok(self
            .accepting_runs_capped(word, usize::MAX)?
            .expect("uncapped enumeration"))
    }

    /// Like [`Self::accepting_runs`] but gives up (returns `None`) as soon as
    /// more than `cap` runs exist.
    pub fn accepting_runs_capped(&self, word: &[Letter], cap: usize) -> Result<Option<Vec<(Run, S)>>> {
        self.check_word(word)?;
        let alive = self.co_reachable_along(word);
        let mut runs = Vec::new();
        let mut stack = Vec::with_capacity(word.len() + 1);
        for (q, mass) in &self.initial {
            if !alive[0][*q] {
                continue;
            }
            stack.push(*q);
            let ok = self.extend_runs(word, &alive, &mut stack, mass.clone(), &mut runs, cap);
            stack.pop();
            if !ok {
                return Ok(None);
            }
        }
        Ok(Some(runs))
    }

    fn extend_runs(
        &self,
        word: &[Letter],
        alive: &[Vec<bool>],
        stack: &mut Vec<State>,
        prob: S,
        runs: &mut Vec<(Run, S)>,
        cap: usize,
    ) -> bool {
        let i = stack.len() - 1;
        if i == word.len() {
            if runs.len() == cap {
                return false;
            }
            runs.push((
                Run {
                    states: stack.clone(),
                    word: word.to_vec(),
                },
                prob,
            ));
            return true;
        }
        let q = stack[i];
        for (p, pr) in &self.delta[q][word[i]] {
            if !alive[i + 1][*p] {
                continue;
            }
            stack.push(*p);
            let ok = self.extend_runs(word, alive, stack, prob.clone() * pr.clone(), runs, cap);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    /// Probability of a single run, `None` if it is not a positive-probability
    /// accepting run.
    pub fn run_probability(&self, run: &Run) -> Option<S> {
        let (&first, rest) = run.states.split_first()?;
        if run.word.len() != rest.len() || !self.accepting[*run.states.last()?] {
            return None;
        }
        let mut p = self.initial_mass(first);
        let mut q = first;
        for (&a, &next) in run.word.iter().zip(rest) {
            p = p * self.probability(q, a, next);
            q = next;
        }
        p.is_positive_value().then_some(p)
    }

    /// States reachable from an initial state through positive transitions.
    pub fn reachable_states(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut seen = vec![false; n];
        let mut stack: Vec<State> = self.initial.iter().map(|(q, _)| *q).collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for row in &self.delta[q] {
                for (p, _) in row {
                    if !seen[*p] {
                        seen[*p] = true;
                        stack.push(*p);
                    }
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn co_reachable_states(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut preds: Vec<Vec<State>> = vec![Vec::new(); n];
        for (q, rows) in self.delta.iter().enumerate() {
            for row in rows {
                for (p, _) in row {
                    preds[*p].push(q);
                }
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<State> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// States both reachable and co-reachable.
    pub fn useful_states(&self) -> Vec<bool> {
        let r = self.reachable_states();
        let c = self.co_reachable_states();
        r.into_iter().zip(c).map(|(a, b)| a && b).collect()
    }

    /// Restriction to the useful states, keeping declaration order.
    pub fn trim(&self) -> Self {
        self.restrict(&self.useful_states())
    }

    fn restrict(&self, keep: &[bool]) -> Self {
        let mut index = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                index[q] = states.len();
                states.push(name.clone());
            }
        }
        let initial = self
            .initial
            .iter()
            .filter(|(q, _)| keep[*q])
            .map(|(q, m)| (index[*q], m.clone()))
            .collect();
        let delta = (0..self.states.len())
            .filter(|&q| keep[q])
            .map(|q| {
                self.delta[q]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .filter(|(p, _)| keep[*p])
                            .map(|(p, m)| (index[*p], m.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let accepting = (0..self.states.len())
            .filter(|&q| keep[q])
            .map(|q| self.accepting[q])
            .collect();
        ProbabilisticAutomaton {
            states,
            alphabet: self.alphabet.clone(),
            initial,
            delta,
            accepting,
        }
    }

    /// Equivalent automaton with a single fresh initial state of mass one.
    ///
    /// The fresh state comes first and carries the row `Σ_q initial(q)·Δ(q, a)`
    /// on every letter `a`, so acceptance probabilities agree on every
    /// non-empty word. It is accepting only when `preserve_epsilon` is set and
    /// the initial sub-distribution puts positive mass on an accepting state;
    /// the empty word is then accepted with probability one, which matches the
    /// original exactly when that mass was one.
    pub fn normalize_initial(&self, preserve_epsilon: bool) -> Self {
        let mut fresh = String::from("init");
        while self.states.contains(&fresh) {
            fresh.push('\'');
        }
        let shift = |q: State| q + 1;
        let mut states = vec![fresh];
        states.extend(self.states.iter().cloned());

        let fresh_rows = (0..self.alphabet.len())
            .map(|a| {
                let mut row: BTreeMap<State, S> = BTreeMap::new();
                for (q, m) in &self.initial {
                    for (p, pr) in &self.delta[*q][a] {
                        let e = row.entry(shift(*p)).or_insert_with(S::zero);
                        *e = e.clone() + m.clone() * pr.clone();
                    }
                }
                row.into_iter().filter(|(_, m)| !m.is_zero()).collect()
            })
            .collect();
        let mut delta = vec![fresh_rows];
        delta.extend(self.delta.iter().map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|(p, m)| (shift(*p), m.clone())).collect())
                .collect()
        }));

        let eps_mass = self
            .initial
            .iter()
            .any(|(q, m)| self.accepting[*q] && m.is_positive_value());
        let mut accepting = vec![preserve_epsilon && eps_mass];
        accepting.extend(self.accepting.iter().copied());

        ProbabilisticAutomaton {
            states,
            alphabet: self.alphabet.clone(),
            initial: vec![(0, S::one())],
            delta,
            accepting,
        }
    }

    /// Converts every probability with `f`, e.g. to evaluate in floating point.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ProbabilisticAutomaton<T> {
        ProbabilisticAutomaton {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            initial: self.initial.iter().map(|(q, m)| (*q, f(m))).collect(),
            delta: self
                .delta
                .iter()
                .map(|rows| {
                    rows.iter()
                        .map(|row| row.iter().map(|(p, m)| (*p, f(m))).collect())
                        .collect()
                })
                .collect(),
            accepting: self.accepting.clone(),
        }
    }

    /// Parses a word: letters separated by commas or whitespace, or, when no
    /// separator occurs, one letter per character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        let lookup = |tok: &str| {
            self.letter_index(tok)
                .ok_or_else(|| Error::UnknownLetter(tok.to_string()))
        };
        if text.contains(|c: char| c == ',' || c.is_whitespace()) {
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(lookup)
                .collect()
        } else {
            text.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect()
        }
    }

    /// Inverse of [`Self::parse_word`]: letters concatenated when all are
    /// single characters, comma-separated otherwise.
    pub fn format_word(&self, word: &[Letter]) -> String {
        let single = self.alphabet.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&a| self.alphabet[a].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(",")
        }
    }
}

impl<S: Scalar> fmt::Display for ProbabilisticAutomaton<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "automaton with {} states over {} letters",
            self.states.len(),
            self.alphabet.len()
        )
    }
}

/// Incremental construction of a [`ProbabilisticAutomaton`] with validation.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder<S> {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: BTreeMap<State, S>,
    delta: BTreeMap<(State, Letter, State), S>,
    accepting: Vec<bool>,
}

impl<S: Scalar> Default for AutomatonBuilder<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> AutomatonBuilder<S> {
    pub fn new() -> Self {
        AutomatonBuilder {
            states: Vec::new(),
            alphabet: Vec::new(),
            initial: BTreeMap::new(),
            delta: BTreeMap::new(),
            accepting: Vec::new(),
        }
    }

    /// Index of the named state, declaring it if needed.
    pub fn state(&mut self, name: impl Into<String>) -> State {
        let name = name.into();
        if let Some(q) = self.states.iter().position(|s| *s == name) {
            return q;
        }
        self.states.push(name);
        self.accepting.push(false);
        self.states.len() - 1
    }

    /// Index of the named letter, declaring it if needed.
    pub fn letter(&mut self, name: impl Into<String>) -> Letter {
        let name = name.into();
        if let Some(a) = self.alphabet.iter().position(|s| *s == name) {
            return a;
        }
        self.alphabet.push(name);
        self.alphabet.len() - 1
    }

    pub fn lookup_state(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    pub fn lookup_letter(&self, name: &str) -> Option<Letter> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&mut self, q: State, mass: S) -> Result<&mut Self> {
        check_probability(&mass)?;
        if self.initial.contains_key(&q) {
            return Err(Error::InvalidAutomaton(format!(
                "duplicate initial mass for state `{}`",
                self.states[q]
            )));
        }
        self.initial.insert(q, mass);
        Ok(self)
    }

    /// Adds `Δ(from, a)(to) = prob`. Each triple may be set at most once.
    pub fn transition(&mut self, from: State, a: Letter, to: State, prob: S) -> Result<&mut Self> {
        check_probability(&prob)?;
        if self.delta.contains_key(&(from, a, to)) {
            return Err(Error::InvalidAutomaton(format!(
                "duplicate transition `{} {} {}`",
                self.states[from], self.alphabet[a], self.states[to]
            )));
        }
        self.delta.insert((from, a, to), prob);
        Ok(self)
    }

    pub fn accept(&mut self, q: State) -> &mut Self {
        self.accepting[q] = true;
        self
    }

    /// Validates the sub-distribution invariants and drops zero entries.
    pub fn build(self) -> Result<ProbabilisticAutomaton<S>> {
        let n = self.states.len();
        let m = self.alphabet.len();
        let total = self.initial.values().fold(S::zero(), |a, b| a + b.clone());
        if total > S::one() {
            return Err(Error::InvalidAutomaton(
                "initial distribution sums to more than 1".into(),
            ));
        }
        let initial = self.initial.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let mut delta = vec![vec![Vec::new(); m]; n];
        for ((q, a, p), prob) in self.delta {
            if !prob.is_zero() {
                delta[q][a].push((p, prob));
            }
        }
        for (q, rows) in delta.iter().enumerate() {
            for (a, row) in rows.iter().enumerate() {
                let sum = row.iter().fold(S::zero(), |acc, (_, p)| acc + p.clone());
                if sum > S::one() {
                    return Err(Error::InvalidAutomaton(format!(
                        "row sum exceeds 1 for state `{}` on letter `{}`",
                        self.states[q], self.alphabet[a]
                    )));
                }
            }
        }
        Ok(ProbabilisticAutomaton {
            states: self.states,
            alphabet: self.alphabet,
            initial,
            delta,
            accepting: self.accepting,
        })
    }
}

fn check_probability<S: Scalar>(p: &S) -> Result<()> {
    if *p < S::zero() || *p > S::one() {
        return Err(Error::InvalidAutomaton(format!(
            "probability {p:?} outside [0, 1]"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        bin_automaton, clique_automaton, isolation_instance, random_automaton, Graph, Homomorphism,
    };
    use crate::{parse_rational, Automaton, Rational};
    use num_traits::{One, Zero};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn all_words(alphabet: usize, max_len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..alphabet {
                    let mut v: Word = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn run_sum(p: &Automaton, w: &[Letter]) -> Rational {
        p.accepting_runs(w)
            .unwrap()
            .into_iter()
            .fold(Rational::zero(), |acc, (_, pr)| acc + pr)
    }

    #[test]
    fn bin_101_is_five_eighths() {
        let p = bin_automaton();
        let w = p.parse_word("101").unwrap();
        assert_eq!(p.acceptance_probability(&w).unwrap(), q("5/8"));
    }

    #[test]
    fn empty_word_single_initial() {
        let p = bin_automaton();
        assert_eq!(p.acceptance_probability(&[]).unwrap(), Rational::zero());
        let mut b = AutomatonBuilder::<Rational>::new();
        let s = b.state("s");
        b.letter("a");
        b.initial(s, Rational::one()).unwrap();
        b.accept(s);
        let p = b.build().unwrap();
        assert_eq!(p.acceptance_probability(&[]).unwrap(), Rational::one());
    }

    #[test]
    fn unknown_letter_is_rejected() {
        let p = bin_automaton();
        assert!(matches!(
            p.acceptance_probability(&[7]),
            Err(Error::UnknownLetter(_))
        ));
        assert!(matches!(p.parse_word("12"), Err(Error::UnknownLetter(_))));
        assert!(p.accepting_runs(&[2]).is_err());
    }

    #[test]
    fn bin_11_has_two_runs() {
        let p = bin_automaton();
        let runs = p.accepting_runs(&p.parse_word("11").unwrap()).unwrap();
        assert_eq!(runs.len(), 2);
        assert!(runs.windows(2).all(|r| r[0].0 < r[1].0));
        for (run, pr) in &runs {
            assert_eq!(p.run_probability(run).as_ref(), Some(pr));
        }
    }

    #[test]
    fn triangle_clique_runs() {
        let p = clique_automaton(&Graph::complete(3));
        let runs = p.accepting_runs(&p.parse_word("111").unwrap()).unwrap();
        assert_eq!(runs.len(), 3);
        assert!(runs.iter().all(|(_, pr)| *pr == q("1/12")));
    }

    #[test]
    fn propagation_matches_run_enumeration_on_random_automata() {
        for seed in 0..30 {
            let p = random_automaton(1 + (seed as usize % 5), 2, seed);
            for w in all_words(2, 5) {
                assert_eq!(
                    p.acceptance_probability(&w).unwrap(),
                    run_sum(&p, &w),
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn propagation_is_a_monoid_action() {
        let p = random_automaton(4, 2, 11);
        for w in all_words(2, 3) {
            for v in all_words(2, 2) {
                let mut wv = w.clone();
                wv.extend(&v);
                let direct = p.propagate(&wv).unwrap();
                let staged = p.propagate_from(p.propagate(&w).unwrap(), &v).unwrap();
                assert_eq!(direct, staged);
                let mass = direct.iter().fold(Rational::zero(), |a, b| a + b);
                assert!(mass <= Rational::one());
            }
        }
    }

    #[test]
    fn trim_removes_isolated_state_and_is_idempotent() {
        let mut b = AutomatonBuilder::<Rational>::new();
        let s = b.state("s");
        let lonely = b.state("lonely");
        let a = b.letter("a");
        b.initial(s, Rational::one()).unwrap();
        b.transition(s, a, s, q("1/2")).unwrap();
        b.accept(s).accept(lonely);
        let p = b.build().unwrap();
        let t = p.trim();
        assert_eq!(t.num_states(), 1);
        assert_eq!(t.state_names(), &["s".to_string()]);
        assert_eq!(t.trim(), t);
    }

    #[test]
    fn trim_preserves_semantics() {
        for seed in 0..20 {
            let p = random_automaton(5, 2, 100 + seed);
            let t = p.trim();
            assert_eq!(t.trim(), t);
            for w in all_words(2, 6) {
                assert_eq!(
                    p.acceptance_probability(&w).unwrap(),
                    t.acceptance_probability(&w).unwrap()
                );
            }
        }
    }

    #[test]
    fn normalize_single_initial() {
        let p = bin_automaton();
        let n = p.normalize_initial(false);
        assert_eq!(n.num_states(), 4);
        assert_eq!(n.initial().len(), 1);
        for w in all_words(2, 5).into_iter().filter(|w| !w.is_empty()) {
            assert_eq!(
                n.acceptance_probability(&w).unwrap(),
                p.acceptance_probability(&w).unwrap()
            );
        }
    }

    #[test]
    fn normalize_isolation_instance() {
        let phi1 = Homomorphism::parse("a=1,b=01").unwrap();
        let phi2 = Homomorphism::parse("a=10,b=0").unwrap();
        let p = isolation_instance(&phi1, &phi2).unwrap();
        let n = p.normalize_initial(false);
        for w in all_words(2, 5).into_iter().filter(|w| !w.is_empty()) {
            assert_eq!(
                n.acceptance_probability(&w).unwrap(),
                p.acceptance_probability(&w).unwrap()
            );
            assert_eq!(
                n.accepting_runs(&w).unwrap().len(),
                p.accepting_runs(&w).unwrap().len()
            );
        }
    }

    #[test]
    fn normalize_epsilon_flag() {
        let mut b = AutomatonBuilder::<Rational>::new();
        let s = b.state("s");
        b.letter("a");
        b.initial(s, Rational::one()).unwrap();
        b.accept(s);
        let p = b.build().unwrap();
        assert_eq!(
            p.normalize_initial(false).acceptance_probability(&[]).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            p.normalize_initial(true).acceptance_probability(&[]).unwrap(),
            Rational::one()
        );
    }

    #[test]
    fn builder_rejects_overfull_rows() {
        let mut b = AutomatonBuilder::<Rational>::new();
        let s = b.state("q");
        let r = b.state("r");
        let a = b.letter("a");
        b.transition(s, a, s, q("2/3")).unwrap();
        b.transition(s, a, r, q("2/3")).unwrap();
        let err = b.build().unwrap_err();
        assert!(err.to_string().contains("row sum exceeds 1"));
    }

    #[test]
    fn builder_rejects_duplicates_and_out_of_range() {
        let mut b = AutomatonBuilder::<Rational>::new();
        let s = b.state("q");
        let a = b.letter("a");
        b.transition(s, a, s, q("1/3")).unwrap();
        assert!(b.transition(s, a, s, q("1/3")).is_err());
        assert!(b.transition(s, a, s, q("3/2")).is_err());
        assert!(b.initial(s, q("-1/2")).is_err());
    }

    #[test]
    fn zero_entries_are_not_stored() {
        let mut b = AutomatonBuilder::<Rational>::new();
        let s = b.state("q");
        let a = b.letter("a");
        b.transition(s, a, s, Rational::zero()).unwrap();
        let p = b.build().unwrap();
        assert!(p.successors(s, a).is_empty());
    }

    #[test]
    fn float_instantiation_tracks_rational() {
        let p = bin_automaton();
        let f = p.map_scalar(crate::Scalar::to_f64);
        let w = p.parse_word("1101").unwrap();
        let exact = crate::Scalar::to_f64(&p.acceptance_probability(&w).unwrap());
        assert!((f.acceptance_probability(&w).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn word_formatting_round_trips() {
        let p = bin_automaton();
        let w = p.parse_word("0110").unwrap();
        assert_eq!(p.format_word(&w), "0110");
        assert_eq!(p.parse_word("0,1, 1").unwrap(), vec![0, 1, 1]);
        assert_eq!(p.parse_word("").unwrap(), Vec::<Letter>::new());
    }
}
