use std::path::Path;

use num_traits::{One, ToPrimitive};

use pba::generators::{
    bin_automaton, clique_automaton, dfa_intersection_automaton, isolation_instance, parse_graph,
    random_k_ambiguous, Homomorphism,
};
use pba::stochpath::{parse_dag, serialize_dag};
use pba::witness::{shorten_witness_k, witness_bound};
use pba::{
    ambiguity_profile, approximate_value, classify_with, convex_pareto_2, emptiness_2ambiguous,
    epsilon_convex_pareto, exact_pareto, exhaustive_emptiness, is_k_ambiguous_within, parse_automaton,
    reduce_to_dag, serialize_automaton, shorten_witness_finite, AmbiguityClass, Automaton, Budget,
    ClassifyOptions, Rational, ReductionOptions, WitnessMode,
};

use crate::export::{curve_csv, curve_svg};
use crate::report::Report;
use crate::{
    read_file, write_file, Answer, CliError, CliResult, Command, EmptinessArgs, Family, KCap, Method,
    ParetoArgs, ShortenArgs, EXIT_NEGATIVE, EXIT_OK,
};

pub(crate) fn dispatch(command: Command, budget: Budget) -> CliResult<Answer> {
    match command {
        Command::Classify { file, max_k, profile } => classify(&file, max_k, profile, budget),
        Command::Emptiness(args) => emptiness(&args, budget),
        Command::Value {
            file,
            k,
            epsilon,
            cap,
        } => value(&file, k, &epsilon, &cap, budget),
        Command::Pareto(args) => pareto(&args, budget),
        Command::Reduce {
            file,
            k,
            output,
            length_bound,
            cap,
        } => {
            let p = load_automaton(&file)?;
            let mut opts = reduction_options(&cap, budget);
            opts.length_bound = length_bound;
            let dag = reduce_to_dag(&p, k, &opts)?;
            let text = serialize_dag(&dag);
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    let mut report = Report::default();
                    report
                        .text("k", k.to_string())
                        .text("vertices", dag.num_vertices().to_string())
                        .text("edges", dag.num_edges().to_string());
                    Ok(answer(report))
                }
                None => Ok(Answer {
                    report: Report::default(),
                    raw: Some(text),
                    code: EXIT_OK,
                }),
            }
        }
        Command::Generate { output, family } => {
            let text = serialize_automaton(&generate(family)?);
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(answer(Report::default()))
                }
                None => Ok(Answer {
                    report: Report::default(),
                    raw: Some(text),
                    code: EXIT_OK,
                }),
            }
        }
        Command::Shorten(args) => shorten(&args),
    }
}

fn answer(report: Report) -> Answer {
    Answer {
        report,
        raw: None,
        code: EXIT_OK,
    }
}

fn load_automaton(path: &Path) -> CliResult<Automaton> {
    parse_automaton(&read_file(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn reduction_options(cap: &KCap, budget: Budget) -> ReductionOptions {
    let defaults = ReductionOptions::default();
    ReductionOptions {
        max_k: cap.allow_k.map_or(defaults.max_k, |k| k.max(defaults.max_k)),
        vertex_budget: budget.0,
        ..defaults
    }
}

fn frontier_budget(budget: Budget) -> usize {
    budget.0.try_into().unwrap_or(usize::MAX)
}

fn classify(path: &Path, max_k: Option<usize>, profile: Option<usize>, budget: Budget) -> CliResult<Answer> {
    let p = load_automaton(path)?;
    let class = classify_with(&p, &ClassifyOptions { max_k, budget });
    let mut report = Report::default();
    report.text("class", class.tag());
    if let AmbiguityClass::FinitelyAmbiguous { k, cap } = class {
        match k {
            Some(k) => report.text("k", k.to_string()),
            None => report
                .text("k", "unknown")
                .text("searched_up_to", cap.to_string()),
        };
    }
    if let Some(len) = profile {
        let rows = ambiguity_profile(&p, len, budget)?;
        let mut csv = String::from("length,max_runs\n");
        for (l, runs) in rows {
            report.porcelain_only("profile", format!("{l},{runs}"));
            csv.push_str(&format!("{l},{runs}\n"));
        }
        report.appendix(&csv);
    }
    Ok(answer(report))
}

/// Smallest `k ≤ limit` for which the automaton is k-ambiguous.
fn smallest_k(p: &Automaton, limit: usize, budget: Budget) -> CliResult<Option<usize>> {
    for k in 1..=limit {
        if is_k_ambiguous_within(p, k, budget)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn emptiness(args: &EmptinessArgs, budget: Budget) -> CliResult<Answer> {
    let p = load_automaton(&args.file)?;
    let c = &args.threshold;
    let opts = reduction_options(&args.cap, budget);
    let method = match args.method {
        Method::Auto if args.max_len.is_some() => Method::Exhaustive,
        Method::Auto => {
            if is_k_ambiguous_within(&p, 2, budget)? {
                Method::Convex2
            } else if smallest_k(&p, opts.max_k, budget)?.is_some() {
                Method::Exact
            } else {
                Method::Exhaustive
            }
        }
        m => m,
    };
    let mut report = Report::default();
    report.text("method", method_name(method));
    let (found, word, complete) = match method {
        Method::Convex2 => {
            let (found, word) = emptiness_2ambiguous(&p, c, &opts)?;
            (found, word, true)
        }
        Method::Exact => {
            let k = match args.k {
                Some(k) => k,
                None => smallest_k(&p, opts.max_k, budget)?.ok_or_else(|| {
                    CliError::Core(pba::Error::Precondition(format!(
                        "the automaton is not k-ambiguous for any k ≤ {}",
                        opts.max_k
                    )))
                })?,
            };
            report.text("k", k.to_string());
            let dag = reduce_to_dag(&p, k, &opts)?;
            let curve = exact_pareto(&dag, frontier_budget(budget))?;
            match curve.best() {
                Some(best) if best.value() > *c => (true, Some(dag.word_of_path(best)), true),
                _ => (false, None, true),
            }
        }
        Method::Exhaustive | Method::Auto => {
            let class = classify_with(&p, &ClassifyOptions { max_k: None, budget });
            let mode = match class.degree() {
                Some(k) => Some(WitnessMode::KAmbiguous(k)),
                None => class.is_finite().then_some(WitnessMode::FinitelyAmbiguous),
            };
            let bound = mode.and_then(|m| witness_bound(&p, m).to_usize());
            let max_len = match (args.max_len, bound) {
                (Some(l), _) => l,
                (None, Some(b)) => b,
                (None, None) => {
                    return Err(CliError::Usage(format!(
                        "the automaton is {}; pass --max-len to bound the search",
                        class.tag()
                    )))
                }
            };
            report.text("max_len", max_len.to_string());
            let found = exhaustive_emptiness(&p, c, max_len, budget)?;
            let complete = bound.is_some_and(|b| max_len >= b);
            (found.word.is_some(), found.word, complete)
        }
    };
    match (found, word) {
        (true, Some(w)) => {
            let value = p.acceptance_probability(&w)?;
            report
                .text("result", "SAT")
                .text("witness", show_word(&p, &w))
                .text("length", w.len().to_string())
                .number("value", &value);
            Ok(answer(report))
        }
        _ if complete => {
            report.text("result", "UNSAT");
            Ok(Answer {
                report,
                raw: None,
                code: EXIT_NEGATIVE,
            })
        }
        _ => Err(CliError::Incomplete(format!(
            "no word of length at most {} has probability above {}, but that length is below any proven witness bound",
            args.max_len.unwrap_or_default(),
            pba::format_rational(c)
        ))),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Exhaustive => "exhaustive",
        Method::Convex2 => "convex2",
        Method::Exact => "exact",
    }
}

fn show_word(p: &Automaton, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        p.format_word(w)
    }
}

fn value(path: &Path, k: usize, epsilon: &Rational, cap: &KCap, budget: Budget) -> CliResult<Answer> {
    let p = load_automaton(path)?;
    let out = approximate_value(&p, k, epsilon, &reduction_options(cap, budget))?;
    let mut report = Report::default();
    report
        .number("output", &out.output)
        .number("upper_bound", &(out.output.clone() * (Rational::one() + epsilon)));
    if let Some(w) = &out.word {
        report
            .text("witness", show_word(&p, w))
            .number("witness_value", &p.acceptance_probability(w)?);
    }
    Ok(answer(report))
}

fn pareto(args: &ParetoArgs, budget: Budget) -> CliResult<Answer> {
    let dag = parse_dag(&read_file(&args.file)?).map_err(|source| CliError::Input {
        path: args.file.clone(),
        source,
    })?;
    let algo = &args.algorithm;
    let (name, curve) = if algo.convex2 {
        ("convex2", convex_pareto_2(&dag)?)
    } else if let Some(eps) = &algo.epsilon {
        ("epsilon", epsilon_convex_pareto(&dag, eps)?)
    } else {
        ("exact", exact_pareto(&dag, frontier_budget(budget))?)
    };
    if let Some(path) = &args.csv {
        write_file(path, &curve_csv(&curve, dag.k()))?;
    }
    if let Some(path) = &args.svg {
        write_file(path, &curve_svg(&curve))?;
    }
    let mut report = Report::default();
    report
        .text("algorithm", name)
        .text("k", dag.k().to_string())
        .text("members", curve.len().to_string());
    for m in curve.iter() {
        let weights: Vec<String> = m.weight.components().iter().map(pba::format_rational).collect();
        report.text(
            "member",
            format!("{} {}", weights.join(" "), pba::format_rational(&m.value())),
        );
    }
    if let Some(best) = curve.max_value() {
        report.number("max_value", &best);
    }
    Ok(answer(report))
}

fn generate(family: Family) -> CliResult<Automaton> {
    Ok(match family {
        Family::Bin => bin_automaton(),
        Family::Clique { graph } => {
            let g =
                parse_graph(&read_file(&graph)?).map_err(|source| CliError::Input { path: graph, source })?;
            clique_automaton(&g)
        }
        Family::Isolation { phi1, phi2 } => {
            isolation_instance(&Homomorphism::parse(&phi1)?, &Homomorphism::parse(&phi2)?)?
        }
        Family::DfaIntersect { files } => {
            let dfas = files
                .iter()
                .map(|f| load_automaton(f))
                .collect::<CliResult<Vec<_>>>()?;
            dfa_intersection_automaton(&dfas)?
        }
        Family::Random { n, k, seed } => {
            if n == 0 || k == 0 {
                return Err(CliError::Usage("--n and --k must be positive".into()));
            }
            random_k_ambiguous(n, k, seed)
        }
    })
}

fn shorten(args: &ShortenArgs) -> CliResult<Answer> {
    let p = load_automaton(&args.file)?;
    let w = p.parse_word(&args.word)?;
    let (short, mode) = match args.mode.k {
        Some(k) => (shorten_witness_k(&p, k, &w)?, WitnessMode::KAmbiguous(k)),
        None => (shorten_witness_finite(&p, &w)?, WitnessMode::FinitelyAmbiguous),
    };
    let mut report = Report::default();
    report
        .text("word", show_word(&p, &short))
        .text("length", short.len().to_string())
        .text("bound", witness_bound(&p, mode).to_string())
        .number("value_before", &p.acceptance_probability(&w)?)
        .number("value_after", &p.acceptance_probability(&short)?);
    Ok(answer(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pba::stochpath::AmbiguityCheck;

    #[test]
    fn allow_k_never_lowers_the_default_cap() {
        let opts = reduction_options(&KCap { allow_k: Some(1) }, Budget::DEFAULT);
        assert_eq!(opts.max_k, ReductionOptions::default().max_k);
        let opts = reduction_options(&KCap { allow_k: Some(5) }, Budget::DEFAULT);
        assert_eq!(opts.max_k, 5);
        assert!(matches!(opts.ambiguity_check, AmbiguityCheck::Auto));
    }
}
