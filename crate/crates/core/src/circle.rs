use std::fmt;

use serde::{Deserialize, Serialize};

/// Default point-identity tolerance.
pub const POINT_TOL: f64 = 1e-9;
/// Default threshold for calling a jump a genuine break.
pub const JUMP_TOL: f64 = 1e-8;
/// Default acceptance threshold for reduction residuals.
pub const REDUCE_TOL: f64 = 1e-8;

/// A point of the circle `R/Z`, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0.0);

    pub fn new(x: f64) -> Self {
        CirclePoint(wrap(x))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Arc-length distance on the circle, at most 1/2.
    pub fn distance(self, other: CirclePoint) -> f64 {
        circle_distance(self.0, other.0)
    }

    pub fn approx_eq(self, other: CirclePoint, tau: f64) -> bool {
        self.distance(other) <= tau
    }
}

impl From<f64> for CirclePoint {
    fn from(x: f64) -> Self {
        CirclePoint::new(x)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Reduces `x` mod 1 into `[0, 1)`.
#[inline]
pub fn wrap(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[inline]
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(1.0 - d)
}

/// Tolerances shared by the analysis and reduction code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Two points closer than this are the same point.
    pub point: f64,
    /// A jump `s` is a genuine break iff `|s - 1| > jump`.
    pub jump: f64,
    /// Residual bound for reductions and the Case 1 / Case 2 dispatch.
    pub reduce: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            point: POINT_TOL,
            jump: JUMP_TOL,
            reduce: REDUCE_TOL,
        }
    }
}

impl Tolerances {
    pub fn is_break(&self, jump: f64) -> bool {
        (jump - 1.0).abs() > self.jump
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("point", self.point),
            ("jump", self.jump),
            ("reduce", self.reduce),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance `{name}` must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_into_unit_interval() {
        assert_eq!(CirclePoint::new(1.25).value(), 0.25);
        assert!((CirclePoint::new(-0.1).value() - 0.9).abs() < 1e-15);
        assert_eq!(CirclePoint::new(-1e-18).value(), 0.0);
        assert_eq!(CirclePoint::new(3.0).value(), 0.0);
    }

    #[test]
    fn distance_wraps_around() {
        let a = CirclePoint::new(0.05);
        let b = CirclePoint::new(0.95);
        assert!((a.distance(b) - 0.1).abs() < 1e-15);
        assert!(a.approx_eq(CirclePoint::new(1.05 - 1e-12), 1e-9));
    }

    #[test]
    fn tolerances_reject_nonpositive() {
        let t = Tolerances {
            jump: 0.0,
            ..Default::default()
        };
        assert!(t.validate().is_err());
        assert!(Tolerances::default().validate().is_ok());
    }
}
