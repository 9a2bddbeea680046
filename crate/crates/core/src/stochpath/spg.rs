//! The `spg v1` text format for multi-weighted DAGs.
//!
//! ```text
//! spg v1 k=2
//! vertex s p t
//! source s
//! target t
//! edge s p 2/5 3/5
//! edge p t 9/10 1/10
//! ```

use std::fmt::Write as _;

use super::dag::{DagBuilder, MultiWeightedDag, WeightVector};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

pub fn parse_dag(text: &str) -> Result<MultiWeightedDag<Rational>> {
    let mut builder: Option<DagBuilder<Rational>> = None;
    let mut source = None;
    let mut target = None;
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        let Some(b) = builder.as_mut() else {
            let k = match tokens.as_slice() {
                ["spg", "v1", k] => k.strip_prefix("k=").and_then(|k| k.parse::<usize>().ok()),
                _ => None,
            };
            match k {
                Some(k) if k > 0 => builder = Some(DagBuilder::new(k)),
                _ => return Err(Error::syntax(line_no, "expected header `spg v1 k=<K>`")),
            }
            continue;
        };
        let vertex = |b: &DagBuilder<Rational>, name: &str| {
            b.lookup(name)
                .ok_or_else(|| Error::syntax(line_no, format!("unknown vertex `{name}`")))
        };
        match (keyword, args) {
            ("vertex", names) => {
                for &name in names {
                    if b.lookup(name).is_some() {
                        return Err(Error::syntax(line_no, format!("duplicate vertex `{name}`")));
                    }
                    b.vertex(name);
                }
            }
            ("source", [v]) => source = Some(vertex(b, v)?),
            ("target", [v]) => target = Some(vertex(b, v)?),
            ("edge", [from, to, weights @ ..]) => {
                let (from, to) = (vertex(b, from)?, vertex(b, to)?);
                let weights = weights
                    .iter()
                    .map(|w| {
                        parse_rational(w).map_err(|_| Error::syntax(line_no, format!("bad rational `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if weights.len() != b.k() {
                    return Err(Error::syntax(
                        line_no,
                        format!("expected {} weights, got {}", b.k(), weights.len()),
                    ));
                }
                b.edge(from, to, WeightVector::new(weights), None);
            }
            _ => {
                return Err(Error::syntax(
                    line_no,
                    format!("unexpected `{}`", tokens.join(" ")),
                ))
            }
        }
    }
    let b = builder.ok_or_else(|| Error::syntax(1, "expected header `spg v1 k=<K>`"))?;
    let source = source.ok_or_else(|| Error::syntax(last_line, "missing `source`"))?;
    let target = target.ok_or_else(|| Error::syntax(last_line, "missing `target`"))?;
    b.build(source, target)
}

pub fn serialize_dag(g: &MultiWeightedDag<Rational>) -> String {
    let names = g.vertex_names();
    let mut out = format!("spg v1 k={}\n", g.k());
    for chunk in names.chunks(16) {
        let _ = writeln!(out, "vertex {}", chunk.join(" "));
    }
    let _ = writeln!(out, "source {}", names[g.source()]);
    let _ = writeln!(out, "target {}", names[g.target()]);
    for e in g.edges() {
        let weights: Vec<String> = e.weight.components().iter().map(format_rational).collect();
        let _ = writeln!(
            out,
            "edge {} {} {}",
            names[e.from],
            names[e.to],
            weights.join(" ")
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_dag, RandomDagOptions};

    const EXAMPLE: &str = "spg v1 k=2\n# running example\nvertex s p q t\nsource s\ntarget t\n\
        edge s p 2/5 3/5\nedge p q 9/10 1/10\nedge q t 9/10 9/10\n";

    #[test]
    fn parses_running_example() {
        let g = parse_dag(EXAMPLE).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.k()), (4, 3, 2));
        let p = g.all_paths(10).unwrap();
        assert_eq!(format_rational(&p[0].value()), "189/500");
    }

    #[test]
    fn round_trip() {
        for seed in 0..10 {
            let opts = RandomDagOptions {
                parallel: true,
                zero_rate: 0.2,
                ..Default::default()
            };
            let g = random_dag(&opts, seed);
            let text = serialize_dag(&g);
            let back = parse_dag(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(serialize_dag(&back), text);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("spg v2 k=2\n", 1),
            ("spg v1 k=2\nvertex s t\nedge s x 1 1\n", 3),
            ("spg v1 k=2\nvertex s t\nedge s t 1/2\n", 3),
            ("spg v1 k=1\nvertex s s\n", 2),
            ("spg v1 k=1\nvertex s t\nedge s t 1/0\n", 3),
            ("spg v1 k=1\nvertex s t\nsource s\n", 3),
        ];
        for (text, line) in cases {
            match parse_dag(text) {
                Err(Error::Syntax { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_dag("spg v1 k=1\nvertex s t\nsource s\ntarget t\nedge t s 1\nedge s t 1\n"),
            Err(Error::InvalidGraph(_))
        ));
    }
}
