//! Exact coverage checks for approximate and convex Pareto curves.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dag::WeightVector;
use super::pareto::ParetoSet;
use crate::Rational;

/// How a weight vector is covered by a curve.
#[derive(Clone, Debug, PartialEq)]
pub enum Coverage {
    /// Componentwise dominated by the member at this index.
    Pointwise(usize),
    /// Dominated by the log-space mixture `A^λ B^{1−λ}` of members `a`, `b`.
    Mixture {
        a: usize,
        b: usize,
        lambda: Rational,
    },
    NotCovered,
    /// A mixture looked feasible but could not be certified within the
    /// denominator cap.
    Indeterminate,
}

/// Index of a member `π'` with `w_i ≤ (1+ε)·p_i(π')` for all `i`.
pub fn epsilon_covers(
    set: &ParetoSet<Rational>,
    w: &WeightVector<Rational>,
    epsilon: &Rational,
) -> Option<usize> {
    let factor = Rational::one() + epsilon;
    set.iter().position(|m| {
        w.components()
            .iter()
            .zip(m.weight.components())
            .all(|(x, y)| *x <= factor.clone() * y)
    })
}

/// Decides convex coverage of a 2-dimensional weight by a curve, exactly.
///
/// Mixture weights are searched as the simplest rational in the interval
/// suggested by float logarithms, then verified by comparing integer powers:
/// `p^D ≤ A^N · B^{D−N}` for `λ = N/D`.
pub fn convex_coverage(
    set: &ParetoSet<Rational>,
    w: &WeightVector<Rational>,
    denominator_cap: u64,
) -> Coverage {
    if let Some(i) = set.iter().position(|m| w.dominated_by(&m.weight)) {
        return Coverage::Pointwise(i);
    }
    if w.arity() != 2 || !w.is_positive() {
        return Coverage::NotCovered;
    }
    let positive: Vec<usize> = (0..set.len())
        .filter(|&i| set.members()[i].weight.is_positive())
        .collect();
    let lx = logs(w);
    let mut undecided = false;
    for (n, &i) in positive.iter().enumerate() {
        for &j in &positive[n + 1..] {
            let (a, b) = (&set.members()[i].weight, &set.members()[j].weight);
            let Some((lo, hi)) = lambda_interval(&logs(a), &logs(b), &lx) else {
                continue;
            };
            let mut found = false;
            for (l, h) in [(lo, hi), shrink(lo, hi, 0.25), shrink(lo, hi, 0.45)] {
                let Some((num, den)) = simplest_between(l, h, denominator_cap) else {
                    continue;
                };
                if mixture_dominates(a, b, w, num, den) {
                    return Coverage::Mixture {
                        a: i,
                        b: j,
                        lambda: Rational::new(BigInt::from(num), BigInt::from(den)),
                    };
                }
                found = true;
            }
            if found || hi - lo > 0.0 {
                undecided = true;
            }
        }
    }
    if undecided {
        Coverage::Indeterminate
    } else {
        Coverage::NotCovered
    }
}

fn logs(w: &WeightVector<Rational>) -> [f64; 2] {
    use crate::scalar::Scalar;
    [w.component(0).ln_f64(), w.component(1).ln_f64()]
}

fn shrink(lo: f64, hi: f64, f: f64) -> (f64, f64) {
    let d = (hi - lo) * f;
    (lo + d, hi - d)
}

/// Float interval of `λ ∈ [0, 1]` with `x ≤ λ a + (1−λ) b` componentwise.
/// A slightly negative width is tolerated so that exact checks can decide.
fn lambda_interval(a: &[f64; 2], b: &[f64; 2], x: &[f64; 2]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for i in 0..2 {
        let d = a[i] - b[i];
        let r = x[i] - b[i];
        if d > 0.0 {
            lo = lo.max(r / d);
        } else if d < 0.0 {
            hi = hi.min(r / d);
        } else if r > 1e-12 {
            return None;
        }
    }
    if lo > hi + 1e-9 {
        None
    } else {
        Some((lo.min(hi), hi.max(lo)))
    }
}

/// Simplest fraction `n/d` in `[lo, hi] ⊆ [0, 1]`, by continued fractions.
fn simplest_between(lo: f64, hi: f64, cap: u64) -> Option<(u64, u64)> {
    fn go(lo: f64, hi: f64, depth: usize) -> Option<(u128, u128)> {
        if depth > 64 || !lo.is_finite() || !hi.is_finite() {
            return None;
        }
        let c = lo.ceil();
        if c <= hi {
            return Some((c as u128, 1));
        }
        let f = lo.floor();
        let (n, d) = go(1.0 / (hi - f), 1.0 / (lo - f), depth + 1)?;
        Some(((f as u128).checked_mul(n)?.checked_add(d)?, n))
    }
    let (n, d) = go(lo.max(0.0), hi.min(1.0), 0)?;
    if d > cap as u128 || n > d {
        return None;
    }
    Some((n as u64, d as u64))
}

/// Exact test of `x_i^D ≤ a_i^N · b_i^{D−N}` for both components.
fn mixture_dominates(
    a: &WeightVector<Rational>,
    b: &WeightVector<Rational>,
    x: &WeightVector<Rational>,
    num: u64,
    den: u64,
) -> bool {
    let (Ok(n), Ok(d)) = (u32::try_from(num), u32::try_from(den)) else {
        return false;
    };
    (0..2).all(|i| {
        let (p, q, r) = (x.component(i), a.component(i), b.component(i));
        if p.is_negative() || p.is_zero() {
            return true;
        }
        let lhs = p.numer().pow(d) * q.denom().pow(n) * r.denom().pow(d - n);
        let rhs = q.numer().pow(n) * r.numer().pow(d - n) * p.denom().pow(d);
        lhs <= rhs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_rational;
    use crate::stochpath::PathRecord;

    fn w(x: &str, y: &str) -> WeightVector<Rational> {
        WeightVector::new(vec![parse_rational(x).unwrap(), parse_rational(y).unwrap()])
    }

    fn set(points: &[(&str, &str)]) -> ParetoSet<Rational> {
        ParetoSet::from_members(
            points
                .iter()
                .map(|(x, y)| PathRecord {
                    edges: vec![],
                    weight: w(x, y),
                })
                .collect(),
        )
    }

    #[test]
    fn simplest_fractions() {
        assert_eq!(simplest_between(0.3, 0.4, 100), Some((1, 3)));
        assert_eq!(simplest_between(0.0, 0.2, 100), Some((0, 1)));
        assert_eq!(simplest_between(0.49, 0.51, 100), Some((1, 2)));
        assert_eq!(simplest_between(0.333, 0.3334, 2), None);
    }

    #[test]
    fn geometric_mean_is_covered_by_mixture() {
        let c = set(&[("1/2", "1/8"), ("1/8", "1/2")]);
        match convex_coverage(&c, &w("1/4", "1/4"), 1000) {
            Coverage::Mixture { lambda, .. } => assert_eq!(lambda, parse_rational("1/2").unwrap()),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            convex_coverage(&c, &w("3/10", "3/10"), 1000),
            Coverage::NotCovered
        );
    }

    #[test]
    fn pointwise_and_epsilon() {
        let c = set(&[("1/2", "1/2")]);
        assert_eq!(convex_coverage(&c, &w("1/3", "0"), 10), Coverage::Pointwise(0));
        let eps = parse_rational("1/10").unwrap();
        assert_eq!(epsilon_covers(&c, &w("11/20", "1/2"), &eps), Some(0));
        assert_eq!(epsilon_covers(&c, &w("56/100", "1/2"), &eps), None);
    }
}
