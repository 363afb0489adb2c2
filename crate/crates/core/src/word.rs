//! Composition words over elementary letters.
//!
//! A [`MapWord`] `[l_1, ..., l_m]` denotes `l_1 o l_2 o ... o l_m`; letters are
//! applied right to left. Words are never simplified: evaluation walks the
//! chain, which keeps mixed PL / quadratic / exponential composites exact up to
//! rounding.

use std::sync::Arc;

use crate::circle::{circle_distance, wrap, CirclePoint, Tolerances, POINT_TOL};
use crate::elementary::ElementaryMap;

/// One letter of a word: an elementary map or its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Letter {
    pub map: Arc<ElementaryMap>,
    pub inverse: bool,
}

impl Letter {
    pub fn forward(map: ElementaryMap) -> Self {
        Letter {
            map: Arc::new(map),
            inverse: false,
        }
    }

    pub fn inverse_of(map: ElementaryMap) -> Self {
        Letter {
            map: Arc::new(map),
            inverse: true,
        }
    }

    pub fn flipped(&self) -> Self {
        Letter {
            map: Arc::clone(&self.map),
            inverse: !self.inverse,
        }
    }

    #[inline]
    pub fn lift(&self, x: f64) -> f64 {
        if self.inverse {
            self.map.inverse_lift(x)
        } else {
            self.map.lift(x)
        }
    }

    #[inline]
    pub fn inverse_lift(&self, y: f64) -> f64 {
        if self.inverse {
            self.map.lift(y)
        } else {
            self.map.inverse_lift(y)
        }
    }

    pub fn breaks(&self) -> Vec<f64> {
        if self.inverse {
            self.map.inverse_breaks()
        } else {
            self.map.breaks()
        }
    }

    /// One-sided derivatives at a point of `[0, 1)`.
    pub fn one_sided(&self, x: f64, tau: f64) -> (f64, f64) {
        if self.inverse {
            // orientation preserving: left germs map to left germs
            let pre = wrap(self.map.inverse_lift(x));
            let (l, r) = self.map.one_sided(pre, tau);
            (1.0 / l, 1.0 / r)
        } else {
            self.map.one_sided(x, tau)
        }
    }
}

/// `(point, Df_-, Df_+, Df_- / Df_+)` at one candidate break.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BreakRecord {
    pub point: CirclePoint,
    pub d_minus: f64,
    pub d_plus: f64,
    pub jump: f64,
}

impl BreakRecord {
    pub fn is_genuine(&self, jump_tol: f64) -> bool {
        (self.jump - 1.0).abs() > jump_tol
    }
}

/// A finite composition of elementary letters, applied right to left.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MapWord {
    letters: Vec<Letter>,
}

impl MapWord {
    pub fn identity() -> Self {
        MapWord::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        MapWord { letters }
    }

    pub fn single(map: ElementaryMap) -> Self {
        MapWord {
            letters: vec![Letter::forward(map)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_piecewise_linear(&self) -> bool {
        self.letters.iter().all(|l| l.map.is_piecewise_linear())
    }

    /// Word for `self o other`.
    pub fn compose(&self, other: &MapWord) -> MapWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        MapWord { letters }
    }

    pub fn invert(&self) -> MapWord {
        MapWord {
            letters: self.letters.iter().rev().map(Letter::flipped).collect(),
        }
    }

    /// `self^n`; negative powers iterate the inverse word.
    pub fn iterate(&self, n: i64) -> MapWord {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let reps = n.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        MapWord { letters }
    }

    /// `h o self o h^{-1}`.
    pub fn conjugate_by(&self, h: &MapWord) -> MapWord {
        h.compose(self).compose(&h.invert())
    }

    fn raw_lift(&self, x: f64) -> f64 {
        self.letters.iter().rev().fold(x, |acc, l| l.lift(acc))
    }

    /// Lift pinned so that its value at 0 lies in `[0, 1)`.
    pub fn lift_eval(&self, x: f64) -> f64 {
        let shift = self.raw_lift(0.0).floor();
        self.raw_lift(x) - shift
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let y = self
            .letters
            .iter()
            .rev()
            .fold(wrap(x), |acc, l| wrap(l.lift(acc)));
        wrap(y)
    }

    pub fn eval(&self, x: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.eval_f64(x.value()))
    }

    pub fn inverse_eval_f64(&self, y: f64) -> f64 {
        self.letters
            .iter()
            .fold(wrap(y), |acc, l| wrap(l.inverse_lift(acc)))
    }

    pub fn one_sided_derivatives(&self, x: CirclePoint) -> (f64, f64) {
        self.one_sided_derivatives_with(x, POINT_TOL)
    }

    /// Chain rule over the letters, left and right germs tracked separately.
    pub fn one_sided_derivatives_with(&self, x: CirclePoint, tau: f64) -> (f64, f64) {
        let mut p = x.value();
        let (mut dm, mut dp) = (1.0, 1.0);
        for l in self.letters.iter().rev() {
            let (a, b) = l.one_sided(p, tau);
            dm *= a;
            dp *= b;
            p = wrap(l.lift(p));
        }
        (dm, dp)
    }

    pub fn jump(&self, x: CirclePoint) -> f64 {
        self.jump_with(x, POINT_TOL)
    }

    pub fn jump_with(&self, x: CirclePoint, tau: f64) -> f64 {
        let (l, r) = self.one_sided_derivatives_with(x, tau);
        l / r
    }

    pub fn break_record(&self, x: CirclePoint, tau: f64) -> BreakRecord {
        let (d_minus, d_plus) = self.one_sided_derivatives_with(x, tau);
        BreakRecord {
            point: x,
            d_minus,
            d_plus,
            jump: d_minus / d_plus,
        }
    }

    pub fn candidate_breaks(&self) -> Vec<CirclePoint> {
        self.candidate_breaks_with(POINT_TOL)
    }

    /// Every letter's breaks pulled back through the letters acting before
    /// it, deduplicated up to `tau`. A superset of the genuine break set.
    pub fn candidate_breaks_with(&self, tau: f64) -> Vec<CirclePoint> {
        let mut pts = Vec::new();
        let m = self.letters.len();
        for j in 0..m {
            for b in self.letters[j].breaks() {
                let x = self.letters[j + 1..]
                    .iter()
                    .fold(b, |acc, l| wrap(l.inverse_lift(acc)));
                pts.push(x);
            }
        }
        dedup_circle(pts, tau)
    }

    /// Records at all candidate breaks whose jump passes `tol.jump`.
    pub fn genuine_breaks(&self, tol: &Tolerances) -> Vec<BreakRecord> {
        self.candidate_breaks_with(tol.point)
            .into_iter()
            .map(|x| self.break_record(x, tol.point))
            .filter(|r| r.is_genuine(tol.jump))
            .collect()
    }
}

/// Sorts points and merges those within `tau` of each other, wrapping at 1.
pub fn dedup_circle(mut pts: Vec<f64>, tau: f64) -> Vec<CirclePoint> {
    pts.iter_mut().for_each(|p| *p = wrap(*p));
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(&q) if p - q <= tau => {}
            _ => out.push(p),
        }
    }
    if out.len() > 1 && circle_distance(out[0], *out.last().unwrap()) <= tau {
        out.pop();
    }
    out.into_iter().map(CirclePoint::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(a: f64) -> MapWord {
        MapWord::single(ElementaryMap::rotation(a))
    }

    fn two_arc() -> MapWord {
        MapWord::single(ElementaryMap::pl(vec![0.0, 0.3], vec![2.0, 4.0 / 7.0], 0.3).unwrap())
    }

    #[test]
    fn identity_and_rotations() {
        let id = MapWord::identity();
        assert_eq!(id.eval_f64(0.25), 0.25);
        assert_eq!(id.lift_eval(2.25), 2.25);
        assert_eq!(id.one_sided_derivatives(CirclePoint::new(0.4)), (1.0, 1.0));
        assert!((rot(0.3).eval_f64(0.9) - 0.2).abs() < 1e-15);
        assert!((rot(0.3).lift_eval(1.9) - 2.2).abs() < 1e-15);
        assert!((rot(0.3).compose(&rot(0.4)).eval_f64(0.5) - 0.2).abs() < 1e-15);
        assert!((rot(0.3).invert().eval_f64(0.1) - 0.8).abs() < 1e-15);
        let four = rot(0.25).iterate(4);
        for k in 0..10 {
            let x = k as f64 / 10.0;
            assert!(circle_distance(four.eval_f64(x), x) < 1e-15);
        }
    }

    #[test]
    fn exponential_closed_forms() {
        let e = MapWord::single(ElementaryMap::exponential(2.0, 0.0).unwrap());
        let expected = 2f64.sqrt() - 1.0;
        assert!((e.eval_f64(0.5) - expected).abs() < 1e-15);
        assert!((e.invert().eval_f64(expected) - 0.5).abs() < 1e-15);
        let (l, r) = e.one_sided_derivatives(CirclePoint::ZERO);
        assert!((l - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
        assert!((r - std::f64::consts::LN_2).abs() < 1e-14);
        assert!((e.jump(CirclePoint::ZERO) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_closed_forms() {
        let q = MapWord::single(ElementaryMap::quadratic(2.0, 0.0).unwrap());
        assert!((q.lift_eval(0.5) - 7.0 / 12.0).abs() < 1e-15);
        let (l, r) = q.one_sided_derivatives(CirclePoint::ZERO);
        assert!((l - 2.0 / 3.0).abs() < 1e-15);
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
        assert!((q.jump(CirclePoint::ZERO) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn smooth_point_of_pl_has_unit_jump() {
        assert_eq!(two_arc().jump(CirclePoint::new(0.5)), 1.0);
    }

    #[test]
    fn chain_rule_on_composite_jumps() {
        // u: jump 3 at 0, v: jump 2 at 0 with v(0) = 0
        let u = MapWord::single(ElementaryMap::pl(vec![0.0, 0.5], vec![0.5, 1.5], 0.0).unwrap());
        let v = MapWord::single(
            ElementaryMap::pl(vec![0.0, 0.5], vec![2.0 / 3.0, 4.0 / 3.0], 0.0).unwrap(),
        );
        assert!((u.jump(CirclePoint::ZERO) - 3.0).abs() < 1e-14);
        assert!((v.jump(CirclePoint::ZERO) - 2.0).abs() < 1e-14);
        assert!((u.compose(&v).jump(CirclePoint::ZERO) - 6.0).abs() < 1e-13);
    }

    #[test]
    fn candidate_breaks_pull_back() {
        assert!(MapWord::identity().candidate_breaks().is_empty());
        let u = ElementaryMap::exponential(3.0, 0.25).unwrap();
        let l = ElementaryMap::pl(vec![0.6, 0.9], vec![0.5, 17.0 / 14.0], 0.6).unwrap();
        let w = MapWord::from_letters(vec![Letter::forward(l), Letter::forward(u.clone())]);
        let c = w.candidate_breaks();
        let uinv_b: Vec<f64> = [0.6, 0.9]
            .iter()
            .map(|&b| wrap(u.inverse_lift(b)))
            .collect();
        assert_eq!(c.len(), 3);
        for x in [0.25, uinv_b[0], uinv_b[1]] {
            assert!(c.iter().any(|p| circle_distance(p.value(), x) < 1e-12));
        }
    }

    #[test]
    fn dedup_wraps_across_zero() {
        let d = dedup_circle(vec![0.5, 1e-12, 1.0 - 1e-12, 0.5 + 1e-11], 1e-9);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn iterate_negative_is_inverse() {
        let f = two_arc();
        assert_eq!(f.iterate(-1), f.invert());
        assert!(f.iterate(0).is_empty());
    }
}
