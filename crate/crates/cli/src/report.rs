use std::fmt::Write as _;

use pba::scalar::format_decimal;
use pba::{format_rational, Rational};

const DECIMAL_DIGITS: usize = 20;

enum Value {
    Text(String),
    Number(Rational),
    /// Omitted from human output.
    Porcelain(String),
}

/// Ordered facts produced by a command, rendered either for people or as
/// `key<TAB>value` lines.
#[derive(Default)]
pub struct Report {
    facts: Vec<(String, Value)>,
    /// Free-form trailer shown only in human mode.
    appendix: String,
}

impl Report {
    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.facts.push((key.to_string(), Value::Text(value.into())));
        self
    }

    pub fn number(&mut self, key: &str, value: &Rational) -> &mut Self {
        self.facts.push((key.to_string(), Value::Number(value.clone())));
        self
    }

    pub fn porcelain_only(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.facts.push((key.to_string(), Value::Porcelain(value.into())));
        self
    }

    pub fn appendix(&mut self, text: &str) {
        self.appendix.push_str(text);
    }

    pub fn render(&self, porcelain: bool) -> String {
        let mut out = String::new();
        for (key, value) in &self.facts {
            let _ = match (value, porcelain) {
                (Value::Text(t) | Value::Porcelain(t), true) => writeln!(out, "{key}\t{t}"),
                (Value::Porcelain(_), false) => Ok(()),
                (Value::Number(r), true) => writeln!(out, "{key}\t{}", format_rational(r)),
                (Value::Text(t), false) => writeln!(out, "{key}: {t}"),
                (Value::Number(r), false) => writeln!(
                    out,
                    "{key}: {} (~{})",
                    format_rational(r),
                    format_decimal(r, DECIMAL_DIGITS)
                ),
            };
        }
        if !porcelain {
            out.push_str(&self.appendix);
        }
        out
    }
}
