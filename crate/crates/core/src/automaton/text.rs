//! The line-oriented `pa v1` text format.
//!
//! ```text
//! pa v1
//! alphabet 0 1
//! states wait acc rej
//! initial wait 1/1
//! accept acc
//! trans wait 1 acc 1/2
//! ```
//!
//! `#` starts a comment. Serialization emits rationals in lowest terms and
//! everything in declaration order, so it is byte-for-byte reproducible.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{AutomatonBuilder, ProbabilisticAutomaton};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;
use num_traits::One;

pub fn parse_automaton(text: &str) -> Result<ProbabilisticAutomaton<Rational>> {
    let mut b = AutomatonBuilder::<Rational>::new();
    let mut header_seen = false;
    let mut row_sums: HashMap<(usize, usize), Rational> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        if !header_seen {
            if tokens != ["pa", "v1"] {
                return Err(Error::syntax(line_no, "expected header `pa v1`"));
            }
            header_seen = true;
            continue;
        }
        let state = |b: &AutomatonBuilder<Rational>, name: &str| {
            b.lookup_state(name)
                .ok_or_else(|| Error::syntax(line_no, format!("unknown state `{name}`")))
        };
        let rational = |tok: &str| {
            parse_rational(tok).map_err(|_| Error::syntax(line_no, format!("bad rational `{tok}`")))
        };
        let at_line = |e: Error| match e {
            Error::InvalidAutomaton(m) => Error::syntax(line_no, m),
            other => other,
        };
        match keyword {
            "alphabet" => {
                for &a in args {
                    if b.lookup_letter(a).is_some() {
                        return Err(Error::syntax(line_no, format!("duplicate letter `{a}`")));
                    }
                    b.letter(a);
                }
            }
            "states" => {
                for &s in args {
                    if b.lookup_state(s).is_some() {
                        return Err(Error::syntax(line_no, format!("duplicate state `{s}`")));
                    }
                    b.state(s);
                }
            }
            "initial" => {
                let [q, p] = args else {
                    return Err(Error::syntax(line_no, "expected `initial <state> <num>/<den>`"));
                };
                let q = state(&b, q)?;
                let p = rational(p)?;
                b.initial(q, p).map_err(at_line)?;
            }
            "accept" => {
                for &s in args {
                    let q = state(&b, s)?;
                    b.accept(q);
                }
            }
            "trans" => {
                let [from, a, to, p] = args else {
                    return Err(Error::syntax(
                        line_no,
                        "expected `trans <state> <letter> <state> <num>/<den>`",
                    ));
                };
                let from = state(&b, from)?;
                let to = state(&b, to)?;
                let a = b
                    .lookup_letter(a)
                    .ok_or_else(|| Error::syntax(line_no, format!("unknown letter `{a}`")))?;
                let p = rational(p)?;
                b.transition(from, a, to, p.clone()).map_err(at_line)?;
                let sum = row_sums.entry((from, a)).or_default();
                *sum += p;
                if *sum > Rational::one() {
                    return Err(Error::syntax(
                        line_no,
                        format!(
                            "row sum exceeds 1 for state `{}` on letter `{}`",
                            args[0], args[1]
                        ),
                    ));
                }
            }
            other => {
                return Err(Error::syntax(line_no, format!("unknown directive `{other}`")));
            }
        }
    }
    if !header_seen {
        return Err(Error::syntax(1, "expected header `pa v1`"));
    }
    b.build()
}

pub fn serialize_automaton(p: &ProbabilisticAutomaton<Rational>) -> String {
    let mut out = String::from("pa v1\n");
    let line = |out: &mut String, keyword: &str, items: &[String]| {
        out.push_str(keyword);
        for it in items {
            out.push(' ');
            out.push_str(it);
        }
        out.push('\n');
    };
    line(&mut out, "alphabet", p.alphabet());
    line(&mut out, "states", p.state_names());
    let names = p.state_names();
    for (q, m) in p.initial() {
        let _ = writeln!(out, "initial {} {}", names[*q], format_rational(m));
    }
    let acc: Vec<String> = p.accepting_states().map(|q| names[q].clone()).collect();
    if !acc.is_empty() {
        line(&mut out, "accept", &acc);
    }
    for q in 0..p.num_states() {
        for a in 0..p.alphabet().len() {
            for (t, m) in p.successors(q, a) {
                let _ = writeln!(
                    out,
                    "trans {} {} {} {}",
                    names[q],
                    p.alphabet()[a],
                    names[*t],
                    format_rational(m)
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bin_automaton, random_automaton};
    use proptest::prelude::*;

    const BIN: &str = "\
pa v1
# the bin automaton
alphabet 0 1
states wait acc rej
initial wait 1/1
accept acc
trans wait 0 wait 1/2
trans wait 0 rej 1/2
trans wait 1 wait 1/2
trans wait 1 acc 2/4   # not in lowest terms on purpose
trans acc 0 acc 1/1
trans acc 1 acc 1/1
trans rej 0 rej 1/1
trans rej 1 rej 1/1
";

    #[test]
    fn parses_bin_file() {
        let p = parse_automaton(BIN).unwrap();
        assert_eq!(p.num_states(), 3);
        assert_eq!(p.alphabet().len(), 2);
        assert_eq!(p, bin_automaton());
        let w = p.parse_word("101").unwrap();
        assert_eq!(
            p.acceptance_probability(&w).unwrap(),
            parse_rational("5/8").unwrap()
        );
    }

    #[test]
    fn round_trip_of_constructed_automaton() {
        let p = bin_automaton();
        let text = serialize_automaton(&p);
        assert_eq!(parse_automaton(&text).unwrap(), p);
        assert!(text.contains("trans wait 1 acc 1/2\n"));
    }

    #[test]
    fn overfull_row_is_reported() {
        let text = "pa v1\nalphabet a\nstates q r\ntrans q a q 2/3\ntrans q a r 2/3\n";
        let err = parse_automaton(text).unwrap_err();
        assert!(err.to_string().contains("row sum exceeds 1"), "{err}");
        assert!(matches!(err, Error::Syntax { line: 5, .. }), "{err:?}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("pa v2\n", 1, "header"),
            (
                "pa v1\nalphabet a\nstates q\ntrans q a z 1/2\n",
                4,
                "unknown state `z`",
            ),
            (
                "pa v1\nalphabet a\nstates q\ntrans q b q 1/2\n",
                4,
                "unknown letter `b`",
            ),
            (
                "pa v1\nalphabet a\nstates q\ntrans q a q 1/2\ntrans q a q 1/3\n",
                5,
                "duplicate transition",
            ),
            ("pa v1\nstates q\ninitial q x\n", 3, "bad rational"),
            ("pa v1\nstates q\nfoo q\n", 3, "unknown directive"),
            ("pa v1\nstates q q\n", 2, "duplicate state"),
            (
                "pa v1\nstates q\ninitial q 1/2\ninitial q 1/2\n",
                4,
                "duplicate initial",
            ),
            ("pa v1\nstates q\ninitial q 3/2\n", 3, "outside"),
        ];
        for (text, line, needle) in cases {
            match parse_automaton(text) {
                Err(Error::Syntax { line: l, message }) => {
                    assert_eq!(l, line, "{text}");
                    assert!(message.contains(needle), "{message}");
                }
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(parse_automaton("").is_err());
    }

    proptest! {
        #[test]
        fn serialization_is_idempotent(n in 1usize..6, letters in 1usize..4, seed in any::<u64>()) {
            let p = random_automaton(n, letters, seed);
            let once = serialize_automaton(&p);
            let reparsed = parse_automaton(&once).unwrap();
            prop_assert_eq!(&reparsed, &p);
            prop_assert_eq!(serialize_automaton(&reparsed), once);
        }
    }
}
