//! Seeded random fixtures. The same seed always yields the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::One;

use super::disjoint_union;
use crate::automaton::AutomatonBuilder;
use crate::scalar::rational_from_ratio;
use crate::stochpath::{DagBuilder, WeightVector};
use crate::{Automaton, Dag, Rational};

fn letter_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// Random sub-stochastic automaton with `n` states over `letters` letters.
///
/// Rows have between zero and two successors; the initial distribution has
/// one or two states. No ambiguity bound is implied.
pub fn random_automaton(n: usize, letters: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(1);
    let mut b = AutomatonBuilder::new();
    let states: Vec<_> = (0..n).map(|i| b.state(format!("q{i}"))).collect();
    for l in letter_names(letters.max(1)) {
        b.letter(l);
    }
    let init_count = if n > 1 && rng.gen_bool(0.3) { 2 } else { 1 };
    let mut init: Vec<usize> = states.clone();
    init.shuffle(&mut rng);
    let weights = random_split(&mut rng, init_count, true);
    for (q, w) in init.into_iter().zip(weights) {
        b.initial(q, w).expect("valid mass");
    }
    for &q in &states {
        if rng.gen_bool(0.45) {
            b.accept(q);
        }
        for a in 0..letters.max(1) {
            let degree = match rng.gen_range(0..10) {
                0..=1 => 0,
                2..=6 => 1,
                _ => 2,
            }
            .min(n);
            let mut targets = states.clone();
            targets.shuffle(&mut rng);
            let weights = random_split(&mut rng, degree, false);
            for (t, w) in targets.into_iter().zip(weights) {
                b.transition(q, a, t, w).expect("fresh triple");
            }
        }
    }
    b.build().expect("rows are sub-distributions")
}

/// `count` positive rationals with sum at most one (exactly one if `full`).
fn random_split(rng: &mut ChaCha8Rng, count: usize, full: bool) -> Vec<Rational> {
    if count == 0 {
        return Vec::new();
    }
    let parts: Vec<u64> = (0..count).map(|_| rng.gen_range(1..=4)).collect();
    let slack = if full { 0 } else { rng.gen_range(0..=2) };
    let den: u64 = parts.iter().sum::<u64>() + slack;
    parts.into_iter().map(|p| rational_from_ratio(p, den)).collect()
}

fn random_probability(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(1..=6u64);
    let num = rng.gen_range(1..=den);
    rational_from_ratio(num, den)
}

/// Disjoint union of `min(n, k)` random trimmed weighted DFAs over `{a, b}`
/// with `n` states in total, each with initial mass `1/min(n, k)`. By
/// construction every word has at most `k` accepting runs.
pub fn random_k_ambiguous(n: usize, k: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts_count = n.min(k).max(1);
    let total = n.max(parts_count);
    let weight = rational_from_ratio(1, parts_count as u64);
    let parts: Vec<(Automaton, Rational)> = (0..parts_count)
        .map(|i| {
            let size = total / parts_count + usize::from(i < total % parts_count);
            (random_dfa(&mut rng, size), weight.clone())
        })
        .collect();
    disjoint_union(&parts, "c").expect("components share the alphabet {a, b}")
}

fn random_dfa(rng: &mut ChaCha8Rng, size: usize) -> Automaton {
    for _ in 0..64 {
        let mut b = AutomatonBuilder::new();
        let states: Vec<_> = (0..size).map(|i| b.state(format!("s{i}"))).collect();
        let letters: Vec<_> = letter_names(2).into_iter().map(|l| b.letter(l)).collect();
        b.initial(states[0], Rational::one()).expect("unit mass");
        for &q in &states {
            if rng.gen_bool(0.5) {
                b.accept(q);
            }
            for &a in &letters {
                if rng.gen_bool(0.85) {
                    let t = states[rng.gen_range(0..size)];
                    b.transition(q, a, t, random_probability(rng))
                        .expect("fresh triple");
                }
            }
        }
        let dfa = b.build().expect("single successor per row").trim();
        if !dfa.initial().is_empty() {
            return dfa;
        }
    }
    let mut b = AutomatonBuilder::new();
    let s = b.state("s0");
    b.initial(s, Rational::one()).expect("unit mass");
    b.accept(s);
    for l in letter_names(2) {
        let a = b.letter(l);
        b.transition(s, a, s, rational_from_ratio(1, 2))
            .expect("fresh triple");
    }
    b.build().expect("one-state DFA")
}

#[derive(Clone, Debug)]
pub struct RandomDagOptions {
    pub vertices: usize,
    pub k: usize,
    /// Probability of an edge `i → j` for `i < j`.
    pub density: f64,
    /// Allow a second parallel edge between the same pair.
    pub parallel: bool,
    /// Probability that a weight component is exactly zero.
    pub zero_rate: f64,
}

impl Default for RandomDagOptions {
    fn default() -> Self {
        RandomDagOptions {
            vertices: 6,
            k: 2,
            density: 0.5,
            parallel: false,
            zero_rate: 0.0,
        }
    }
}

/// Random DAG on vertices `v0 … v{n−1}` (in topological order) with source
/// `v0` and target `v{n−1}`; the chain `v0 → v1 → …` is always present so a
/// source–target path exists.
pub fn random_dag(opts: &RandomDagOptions, seed: u64) -> Dag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = opts.vertices.max(2);
    let mut b = DagBuilder::new(opts.k);
    let ids: Vec<_> = (0..n).map(|i| b.vertex(format!("v{i}"))).collect();
    let weight = |rng: &mut ChaCha8Rng| {
        WeightVector::new(
            (0..opts.k)
                .map(|_| {
                    if rng.gen_bool(opts.zero_rate) {
                        rational_from_ratio(0, 1)
                    } else {
                        let den = rng.gen_range(2..=10u64);
                        rational_from_ratio(rng.gen_range(1..=den), den)
                    }
                })
                .collect(),
        )
    };
    for i in 0..n {
        for j in i + 1..n {
            let copies = if j == i + 1 || rng.gen_bool(opts.density) {
                1 + usize::from(opts.parallel && rng.gen_bool(0.3))
            } else {
                0
            };
            for _ in 0..copies {
                let w = weight(&mut rng);
                b.edge(ids[i], ids[j], w, None);
            }
        }
    }
    b.build(ids[0], ids[n - 1]).expect("edges go forward")
}
