//! Instance families: the `bin` automaton and its homomorphic lifts, the
//! isolation instance, the clique automaton, DFA-intersection automata, and
//! seeded random fixtures.

mod graph;
mod random;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::automaton::{AutomatonBuilder, State};
use crate::error::{Error, Result};
use crate::{Automaton, Rational};

pub use graph::{parse_graph, serialize_graph, Graph};
pub use random::{random_automaton, random_dag, random_k_ambiguous, RandomDagOptions};

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Three-state automaton over `{0, 1}` computing `bin(a_1…a_n) = Σ a_i / 2^i`.
///
/// From `wait` every letter keeps half of the mass in `wait`; the other half
/// moves to the absorbing sink `acc` on `1` and to the absorbing sink `rej`
/// on `0`.
pub fn bin_automaton() -> Automaton {
    let mut b = AutomatonBuilder::new();
    let wait = b.state("wait");
    let acc = b.state("acc");
    let rej = b.state("rej");
    let zero = b.letter("0");
    let one = b.letter("1");
    b.initial(wait, Rational::one()).expect("valid mass");
    b.accept(acc);
    for a in [zero, one] {
        b.transition(wait, a, wait, half()).expect("fresh triple");
        b.transition(acc, a, acc, Rational::one()).expect("fresh triple");
        b.transition(rej, a, rej, Rational::one()).expect("fresh triple");
    }
    b.transition(wait, zero, rej, half()).expect("fresh triple");
    b.transition(wait, one, acc, half()).expect("fresh triple");
    b.build().expect("bin automaton is well-formed")
}

/// `bin(w)` for a word over `{0, 1}` given as bits.
pub fn bin_value(bits: &[u8]) -> Rational {
    let mut value = Rational::zero();
    let mut weight = half();
    for &b in bits {
        if b == 1 {
            value += weight.clone();
        }
        weight *= half();
    }
    value
}

/// A homomorphism from a source alphabet into `{0, 1}*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    images: Vec<(String, Vec<u8>)>,
}

impl Homomorphism {
    pub fn new(images: Vec<(String, Vec<u8>)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (letter, bits) in &images {
            if !seen.insert(letter) {
                return Err(Error::Precondition(format!("letter `{letter}` mapped twice")));
            }
            if bits.iter().any(|&b| b > 1) {
                return Err(Error::Precondition(format!("image of `{letter}` is not binary")));
            }
        }
        Ok(Homomorphism { images })
    }

    /// Parses `a=10,b=0` (an empty image is written `a=`).
    pub fn parse(spec: &str) -> Result<Self> {
        let mut images = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (letter, image) = part
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("expected `letter=bits`, got `{part}`")))?;
            let bits = image
                .trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::Precondition(format!("image `{image}` is not binary"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            images.push((letter.trim().to_string(), bits));
        }
        Homomorphism::new(images)
    }

    pub fn letters(&self) -> impl Iterator<Item = &str> {
        self.images.iter().map(|(l, _)| l.as_str())
    }

    pub fn image(&self, letter: &str) -> Option<&[u8]> {
        self.images
            .iter()
            .find(|(l, _)| l == letter)
            .map(|(_, b)| b.as_slice())
    }

    /// Multiplicative extension to words given as letter names.
    pub fn apply<'a>(&self, word: impl IntoIterator<Item = &'a str>) -> Option<Vec<u8>> {
        let mut out = Vec::new();
        for l in word {
            out.extend_from_slice(self.image(l)?);
        }
        Some(out)
    }
}

/// Lifts `base` (over `{0, 1}`) along `phi`: reading `a` simulates reading
/// `phi(a)`. With `complement` the accepting set is complemented.
pub fn homomorphism_lift(base: &Automaton, phi: &Homomorphism, complement: bool) -> Result<Automaton> {
    let bit_letter = |name: &str| {
        base.letter_index(name)
            .ok_or_else(|| Error::Precondition("base automaton must be over the alphabet {0, 1}".into()))
    };
    if base.alphabet().len() != 2 {
        return Err(Error::Precondition(
            "base automaton must be over the alphabet {0, 1}".into(),
        ));
    }
    let bits = [bit_letter("0")?, bit_letter("1")?];
    let n = base.num_states();

    let mut b = AutomatonBuilder::new();
    for name in base.state_names() {
        b.state(name.clone());
    }
    for (q, m) in base.initial() {
        b.initial(*q, m.clone())?;
    }
    for q in 0..n {
        if base.is_accepting(q) != complement {
            b.accept(q);
        }
    }
    for (letter, image) in &phi.images {
        if image.is_empty() {
            return Err(Error::Precondition(format!("image of `{letter}` is empty")));
        }
        let a = b.letter(letter.clone());
        for q in 0..n {
            // row of q through the product of the bit matrices along the image
            let mut row: BTreeMap<State, Rational> = BTreeMap::from([(q, Rational::one())]);
            for &bit in image {
                let mut next: BTreeMap<State, Rational> = BTreeMap::new();
                for (p, mass) in &row {
                    for (r, pr) in base.successors(*p, bits[bit as usize]) {
                        *next.entry(*r).or_insert_with(Rational::zero) += mass * pr;
                    }
                }
                row = next;
            }
            for (r, pr) in row {
                b.transition(q, a, r, pr)?;
            }
        }
    }
    b.build()
}

/// Disjoint union of automata over the same alphabet; component `i` gets the
/// initial distribution of its automaton scaled by `weights[i]`. State names
/// are prefixed with `prefix{i}.`.
pub fn disjoint_union(parts: &[(Automaton, Rational)], prefix: &str) -> Result<Automaton> {
    let Some((first, _)) = parts.first() else {
        return Err(Error::Precondition("disjoint union of no automata".into()));
    };
    let mut letters: Vec<&String> = first.alphabet().iter().collect();
    letters.sort();
    let mut b = AutomatonBuilder::new();
    for l in first.alphabet() {
        b.letter(l.clone());
    }
    for (i, (p, weight)) in parts.iter().enumerate() {
        let mut other: Vec<&String> = p.alphabet().iter().collect();
        other.sort();
        if other != letters {
            return Err(Error::Precondition(format!(
                "alphabet mismatch between component 1 and component {}",
                i + 1
            )));
        }
        let ids: Vec<State> = p
            .state_names()
            .iter()
            .map(|s| b.state(format!("{prefix}{}.{s}", i + 1)))
            .collect();
        for (q, m) in p.initial() {
            b.initial(ids[*q], m * weight)?;
        }
        for q in p.accepting_states() {
            b.accept(ids[q]);
        }
        for (a, name) in p.alphabet().iter().enumerate() {
            let target_letter = b.lookup_letter(name).expect("same alphabet");
            for q in 0..p.num_states() {
                for (r, pr) in p.successors(q, a) {
                    b.transition(ids[q], target_letter, ids[*r], pr.clone())?;
                }
            }
        }
    }
    b.build()
}

/// The isolation instance: for every non-empty `w`,
/// `P(w) = ½ (bin(φ1(w)) + 1 − bin(φ2(w)))`.
pub fn isolation_instance(phi1: &Homomorphism, phi2: &Homomorphism) -> Result<Automaton> {
    let mut l1: Vec<&str> = phi1.letters().collect();
    let mut l2: Vec<&str> = phi2.letters().collect();
    l1.sort_unstable();
    l2.sort_unstable();
    if l1 != l2 {
        return Err(Error::Precondition(
            "homomorphisms have different source alphabets".into(),
        ));
    }
    let bin = bin_automaton();
    let left = homomorphism_lift(&bin, phi1, false)?;
    let right = homomorphism_lift(&bin, phi2, true)?;
    disjoint_union(&[(left, half()), (right, half())], "p")
}

/// The clique automaton `P_G`: `MaxClique(G) = n·2^(n−1)·val(P_G)`.
///
/// States `v{i},{j}` for `i ∈ [1, n]`, `j ∈ [0, n]`; the `i`-th chain reads
/// `n` letters. At position `j = i` it needs letter `1` (probability 1);
/// elsewhere letter `0` passes with probability ½, and letter `1` passes with
/// probability ½ only when `{i, j}` is an edge.
pub fn clique_automaton(g: &Graph) -> Automaton {
    let n = g.num_vertices();
    let mut b = AutomatonBuilder::new();
    let zero = b.letter("0");
    let one = b.letter("1");
    let mut id = vec![vec![0; n + 1]; n + 1];
    for i in 1..=n {
        for j in 0..=n {
            id[i][j] = b.state(format!("v{i},{j}"));
        }
    }
    let init = Rational::new(1.into(), (n.max(1) as i64).into());
    for i in 1..=n {
        b.initial(id[i][0], init.clone()).expect("mass 1/n");
        b.accept(id[i][n]);
        for j in 1..=n {
            let (from, to) = (id[i][j - 1], id[i][j]);
            if i == j {
                b.transition(from, one, to, Rational::one())
                    .expect("fresh triple");
            } else {
                b.transition(from, zero, to, half()).expect("fresh triple");
                if g.has_edge(i - 1, j - 1) {
                    b.transition(from, one, to, half()).expect("fresh triple");
                }
            }
        }
    }
    b.build().expect("clique automaton is well-formed")
}

/// Union of `N` DFAs with initial mass `1/N` each: some word has probability
/// one iff the DFAs have a common word.
pub fn dfa_intersection_automaton(dfas: &[Automaton]) -> Result<Automaton> {
    if dfas.is_empty() {
        return Err(Error::Precondition("at least one DFA is required".into()));
    }
    for (i, d) in dfas.iter().enumerate() {
        if !d.is_deterministic() {
            return Err(Error::Precondition(format!(
                "automaton {} is not deterministic",
                i + 1
            )));
        }
    }
    let w = Rational::new(1.into(), (dfas.len() as i64).into());
    let parts: Vec<(Automaton, Rational)> = dfas.iter().map(|d| (d.clone(), w.clone())).collect();
    disjoint_union(&parts, "d")
}

/// DFA over `{a}` accepting the words whose length is a multiple of `m`.
pub fn modulo_counter_dfa(m: usize) -> Automaton {
    let mut b = AutomatonBuilder::new();
    let a = b.letter("a");
    let states: Vec<State> = (0..m.max(1)).map(|i| b.state(format!("c{i}"))).collect();
    b.initial(states[0], Rational::one()).expect("unit mass");
    b.accept(states[0]);
    for i in 0..states.len() {
        b.transition(states[i], a, states[(i + 1) % states.len()], Rational::one())
            .expect("fresh triple");
    }
    b.build().expect("counter DFA is well-formed")
}
