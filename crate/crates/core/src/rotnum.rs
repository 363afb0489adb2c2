//! Rotation-number estimates and continued fractions.
//!
//! The estimate is the Birkhoff average `(F^n(x) - x) / n` of a lift, computed
//! by sequential iteration (the word is never expanded). Irrationality is
//! never asserted: an estimate is only flagged as *looking* rational when a
//! convergent `p/q` matches it and a period-`q` orbit closes numerically.

use serde::Serialize;

use crate::circle::{circle_distance, wrap, POINT_TOL};
use crate::word::MapWord;

/// Depth of the continued-fraction screen.
pub const CF_DEPTH: usize = 40;
const CF_REMAINDER: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rationality {
    LooksRational { p: u64, q: u64 },
    NoPeriodFound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationEstimate {
    /// Estimate in `[0, 1)`.
    pub value: f64,
    pub n_iter: u64,
    pub base_point: f64,
    /// `2 / n_iter`.
    pub error_bound: f64,
    /// Leading partial quotients of `value`.
    pub continued_fraction: Vec<u64>,
    pub rationality: Rationality,
}

/// Sequential lift iteration from `x0`; returns `(F^n(x0) - x0, F^n(x0) mod 1)`.
fn displacement(f: &MapWord, n: u64, x0: f64) -> (f64, f64) {
    let start = wrap(x0);
    let mut x = start;
    let mut turns: i64 = 0;
    for _ in 0..n {
        let y = f.lift_eval(x);
        let k = y.floor();
        turns += k as i64;
        x = y - k;
    }
    (turns as f64 + (x - start), x)
}

pub fn rotation_number(f: &MapWord, n_iter: u64) -> RotationEstimate {
    rotation_number_from(f, n_iter, 0.0)
}

pub fn rotation_number_from(f: &MapWord, n_iter: u64, x0: f64) -> RotationEstimate {
    let n = n_iter.max(1);
    let (disp, end) = displacement(f, n, x0);
    let value = wrap(disp / n as f64);
    let error_bound = 2.0 / n as f64;
    let continued_fraction = continued_fraction(value, CF_DEPTH);
    let rationality = screen_rational(f, value, error_bound, end);
    RotationEstimate {
        value,
        n_iter: n,
        base_point: wrap(x0),
        error_bound,
        continued_fraction,
        rationality,
    }
}

/// Partial quotients `[a_1, a_2, ...]` of `alpha in [0, 1)` (the integer part
/// is dropped), stopping at `depth` terms or when the remainder falls below 1e-12.
pub fn continued_fraction(alpha: f64, depth: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = alpha - alpha.floor();
    while out.len() < depth && x > CF_REMAINDER {
        let y = 1.0 / x;
        let a = y.floor();
        let mut r = y - a;
        let mut a = a as u64;
        if 1.0 - r < CF_REMAINDER * y {
            a += 1;
            r = 0.0;
        }
        out.push(a);
        x = r;
    }
    out
}

/// Convergents `p/q` of a partial-quotient list.
pub fn convergents(cf: &[u64]) -> Vec<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1u64, 0u64, 0u64, 1u64);
    let mut out = Vec::new();
    for &a in cf {
        let p = a.saturating_mul(p1).saturating_add(p0);
        let q = a.saturating_mul(q1).saturating_add(q0);
        out.push((p, q));
        (p0, q0, p1, q1) = (p1, q1, p, q);
    }
    out
}

fn screen_rational(f: &MapWord, value: f64, bound: f64, x: f64) -> Rationality {
    let mut candidates = vec![(0u64, 1u64)];
    candidates.extend(convergents(&continued_fraction(value, CF_DEPTH)));
    for (p, q) in candidates {
        if q == 0 || q > 100_000 {
            continue;
        }
        if circle_distance(value, p as f64 / q as f64) > bound {
            continue;
        }
        let (disp, _) = displacement(f, q, x);
        if (disp - p as f64).abs() <= POINT_TOL || circle_distance(disp, 0.0) <= POINT_TOL {
            let p = p % q;
            return Rationality::LooksRational { p, q };
        }
    }
    Rationality::NoPeriodFound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{exponential_elementary, rotation};
    use crate::elementary::ElementaryMap;

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(continued_fraction(0.5, 40), vec![2]);
        assert_eq!(continued_fraction(0.75, 40), vec![1, 3]);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let cf = continued_fraction(golden, 30);
        assert_eq!(cf.len(), 30);
        assert!(cf.iter().all(|&a| a == 1));
        assert!(continued_fraction(0.0, 10).is_empty());
    }

    #[test]
    fn convergents_of_golden() {
        let c = convergents(&[1, 1, 1, 1, 1]);
        assert_eq!(c, vec![(1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]);
    }

    #[test]
    fn rotation_estimate() {
        let r = rotation_number(&rotation(0.618034), 100_000);
        assert!((r.value - 0.618034).abs() <= 2e-5);
        assert_eq!(r.error_bound, 2e-5);
        assert_eq!(r.rationality, Rationality::NoPeriodFound);
    }

    #[test]
    fn rational_rotation_is_flagged() {
        let r = rotation_number(&rotation(0.375), 1000);
        assert_eq!(r.rationality, Rationality::LooksRational { p: 3, q: 8 });
        // a one-break map with a fixed point
        let e = MapWord::single(exponential_elementary(2.0, 0.0).unwrap());
        let r = rotation_number_from(&e, 5000, 0.4);
        assert_eq!(r.rationality, Rationality::LooksRational { p: 0, q: 1 });
    }

    #[test]
    fn lift_iteration_matches_iterated_word() {
        let f =
            MapWord::single(ElementaryMap::pl(vec![0.0, 0.3], vec![2.0, 4.0 / 7.0], 0.3).unwrap());
        let n = 50;
        let (disp, end) = displacement(&f, n as u64, 0.0);
        assert!(circle_distance(f.iterate(n).eval_f64(0.0), end) < 1e-12);
        assert!(circle_distance(disp, end) < 1e-12);
    }
}
