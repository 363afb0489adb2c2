//! Elementary letters: PL maps, rotations, and the rotated one-break
//! quadratic and exponential maps.
//!
//! Every letter is an orientation-preserving circle homeomorphism given by a
//! closed-form lift, a closed-form inverse lift and closed-form one-sided
//! derivatives.

use crate::circle::{circle_distance, wrap};
use crate::error::BuildError;

/// Smallest admissible `|sigma - 1|` for the one-break families.
pub const SIGMA_GUARD: f64 = 1e-6;

const CLOSURE_TOL: f64 = 1e-9;

/// A piecewise-linear circle homeomorphism.
///
/// `slopes[j]` is the slope on the arc `[breaks[j], breaks[j + 1])`, the last
/// arc wrapping around to `breaks[0] + 1`. `anchor` is the lift value at
/// `breaks[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlMap {
    breaks: Vec<f64>,
    slopes: Vec<f64>,
    anchor: f64,
    // offsets[j] = breaks[j] - breaks[0], with a trailing 1.0
    offsets: Vec<f64>,
    // lift increments from breaks[0]; cumulative[j] pairs with offsets[j]
    cumulative: Vec<f64>,
}

impl PlMap {
    pub fn new(breaks: Vec<f64>, slopes: Vec<f64>, anchor: f64) -> Result<Self, BuildError> {
        if breaks.is_empty() {
            return Err(BuildError::InvalidBreaks("no break points".into()));
        }
        if breaks.len() != slopes.len() {
            return Err(BuildError::InvalidPl(format!(
                "{} breaks but {} slopes",
                breaks.len(),
                slopes.len()
            )));
        }
        check_breaks(&breaks)?;
        if let Some(&s) = slopes.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(BuildError::SlopeNotPositive { slope: s });
        }
        if !anchor.is_finite() {
            return Err(BuildError::InvalidPl(format!(
                "anchor {anchor} is not finite"
            )));
        }
        let b0 = breaks[0];
        let mut offsets: Vec<f64> = breaks.iter().map(|b| b - b0).collect();
        offsets.push(1.0);
        let mut cumulative = Vec::with_capacity(offsets.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for (j, s) in slopes.iter().enumerate() {
            acc += s * (offsets[j + 1] - offsets[j]);
            cumulative.push(acc);
        }
        if (acc - 1.0).abs() > CLOSURE_TOL {
            return Err(BuildError::InvalidPl(format!(
                "slopes integrate to {acc} over one turn, expected 1"
            )));
        }
        Ok(PlMap {
            breaks,
            slopes,
            anchor,
            offsets,
            cumulative,
        })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// `sum_j slope_j * arc_j`; equals 1 up to rounding.
    pub fn closure(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Same map post-composed with the rotation by `shift`.
    pub fn shifted(&self, shift: f64) -> PlMap {
        PlMap {
            anchor: self.anchor + shift,
            ..self.clone()
        }
    }

    fn arc_of_offset(&self, r: f64) -> usize {
        let arcs = self.slopes.len();
        (self.offsets.partition_point(|&o| o <= r).max(1) - 1).min(arcs - 1)
    }

    fn lift(&self, x: f64) -> f64 {
        let t = x - self.breaks[0];
        let n = t.floor();
        let r = t - n;
        let j = self.arc_of_offset(r);
        self.anchor + n + self.cumulative[j] + self.slopes[j] * (r - self.offsets[j])
    }

    fn inverse_lift(&self, y: f64) -> f64 {
        let z = y - self.anchor;
        let n = z.floor();
        let r = z - n;
        let arcs = self.slopes.len();
        let j = (self.cumulative.partition_point(|&c| c <= r).max(1) - 1).min(arcs - 1);
        self.breaks[0] + n + self.offsets[j] + (r - self.cumulative[j]) / self.slopes[j]
    }

    fn one_sided(&self, x: f64, tau: f64) -> (f64, f64) {
        let n = self.breaks.len();
        if let Some(j) = self
            .breaks
            .iter()
            .position(|&b| circle_distance(b, x) <= tau)
        {
            return (self.slopes[(j + n - 1) % n], self.slopes[j]);
        }
        let r = wrap(x - self.breaks[0]);
        let s = self.slopes[self.arc_of_offset(r)];
        (s, s)
    }

    /// Jump `left slope / right slope` at each listed break.
    pub fn jumps(&self) -> Vec<f64> {
        let n = self.slopes.len();
        (0..n)
            .map(|j| self.slopes[(j + n - 1) % n] / self.slopes[j])
            .collect()
    }
}

pub(crate) fn check_breaks(breaks: &[f64]) -> Result<(), BuildError> {
    for (j, &b) in breaks.iter().enumerate() {
        if !(0.0..1.0).contains(&b) {
            return Err(BuildError::InvalidBreaks(format!(
                "break {b} outside [0, 1)"
            )));
        }
        if j > 0 && breaks[j - 1] >= b {
            return Err(BuildError::InvalidBreaks(format!(
                "{} is not below {}",
                breaks[j - 1],
                b
            )));
        }
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<(), BuildError> {
    if !(sigma > 0.0 && sigma.is_finite()) || (sigma - 1.0).abs() < SIGMA_GUARD {
        return Err(BuildError::DegenerateSigma { sigma });
    }
    Ok(())
}

/// One invertible building block of a [`crate::MapWord`].
#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryMap {
    Pl(PlMap),
    /// `x -> x + alpha`.
    Rotation {
        alpha: f64,
    },
    /// `R_c o g_sigma o R_c^{-1}` with the quadratic lift
    /// `g(x) = ((1 - sigma) x^2 + 2 sigma x) / (1 + sigma)` on `[0, 1)`.
    /// Its jump at `center` is `1 / sigma`.
    Quadratic {
        sigma: f64,
        center: f64,
    },
    /// `R_c o h_sigma o R_c^{-1}` with `h(x) = (sigma^x - 1) / (sigma - 1)`.
    /// Its jump at `center` is `sigma`.
    Exponential {
        sigma: f64,
        center: f64,
    },
}

impl ElementaryMap {
    pub fn pl(breaks: Vec<f64>, slopes: Vec<f64>, anchor: f64) -> Result<Self, BuildError> {
        Ok(ElementaryMap::Pl(PlMap::new(breaks, slopes, anchor)?))
    }

    pub fn rotation(alpha: f64) -> Self {
        ElementaryMap::Rotation { alpha: wrap(alpha) }
    }

    pub fn quadratic(sigma: f64, center: f64) -> Result<Self, BuildError> {
        check_sigma(sigma)?;
        Ok(ElementaryMap::Quadratic {
            sigma,
            center: wrap(center),
        })
    }

    pub fn exponential(sigma: f64, center: f64) -> Result<Self, BuildError> {
        check_sigma(sigma)?;
        Ok(ElementaryMap::Exponential {
            sigma,
            center: wrap(center),
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ElementaryMap::Pl(_) => "pl",
            ElementaryMap::Rotation { .. } => "rotation",
            ElementaryMap::Quadratic { .. } => "quad",
            ElementaryMap::Exponential { .. } => "exp",
        }
    }

    /// True for PL maps and rotations.
    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self, ElementaryMap::Pl(_) | ElementaryMap::Rotation { .. })
    }

    /// Lift of the map; increasing, commutes with integer translation.
    pub fn lift(&self, x: f64) -> f64 {
        match self {
            ElementaryMap::Pl(p) => p.lift(x),
            ElementaryMap::Rotation { alpha } => x + alpha,
            ElementaryMap::Quadratic { sigma, center } => {
                center + periodic(x - center, |t| quad_base(*sigma, t))
            }
            ElementaryMap::Exponential { sigma, center } => {
                center + periodic(x - center, |t| exp_base(*sigma, t))
            }
        }
    }

    pub fn inverse_lift(&self, y: f64) -> f64 {
        match self {
            ElementaryMap::Pl(p) => p.inverse_lift(y),
            ElementaryMap::Rotation { alpha } => y - alpha,
            ElementaryMap::Quadratic { sigma, center } => {
                center + periodic(y - center, |t| quad_base_inv(*sigma, t))
            }
            ElementaryMap::Exponential { sigma, center } => {
                center + periodic(y - center, |t| exp_base_inv(*sigma, t))
            }
        }
    }

    /// Break points of the map itself (a superset of the genuine ones).
    pub fn breaks(&self) -> Vec<f64> {
        match self {
            ElementaryMap::Pl(p) => p.breaks.clone(),
            ElementaryMap::Rotation { .. } => Vec::new(),
            ElementaryMap::Quadratic { center, .. } | ElementaryMap::Exponential { center, .. } => {
                vec![*center]
            }
        }
    }

    /// Break points of the inverse map: images of [`Self::breaks`].
    pub fn inverse_breaks(&self) -> Vec<f64> {
        self.breaks()
            .into_iter()
            .map(|b| wrap(self.lift(b)))
            .collect()
    }

    /// `(Df_-(x), Df_+(x))`. A point within `tau` of a break is treated as
    /// the break itself.
    pub fn one_sided(&self, x: f64, tau: f64) -> (f64, f64) {
        match self {
            ElementaryMap::Pl(p) => p.one_sided(x, tau),
            ElementaryMap::Rotation { .. } => (1.0, 1.0),
            ElementaryMap::Quadratic { sigma, center } => {
                if circle_distance(x, *center) <= tau {
                    (2.0 / (1.0 + sigma), 2.0 * sigma / (1.0 + sigma))
                } else {
                    let d = quad_base_deriv(*sigma, wrap(x - center));
                    (d, d)
                }
            }
            ElementaryMap::Exponential { sigma, center } => {
                if circle_distance(x, *center) <= tau {
                    let k = sigma.ln() / (sigma - 1.0);
                    (sigma * k, k)
                } else {
                    let d = exp_base_deriv(*sigma, wrap(x - center));
                    (d, d)
                }
            }
        }
    }
}

fn periodic(t: f64, base: impl Fn(f64) -> f64) -> f64 {
    let n = t.floor();
    let r = t - n;
    if r >= 1.0 {
        n + 1.0 + base(0.0)
    } else {
        n + base(r)
    }
}

fn quad_base(sigma: f64, t: f64) -> f64 {
    ((1.0 - sigma) * t * t + 2.0 * sigma * t) / (1.0 + sigma)
}

// Rationalized root of (1 - s) t^2 + 2 s t - (1 + s) y = 0; no cancellation
// when s is close to 1.
fn quad_base_inv(sigma: f64, y: f64) -> f64 {
    let disc = sigma * sigma + (1.0 - sigma * sigma) * y;
    (1.0 + sigma) * y / (sigma + disc.sqrt())
}

fn quad_base_deriv(sigma: f64, t: f64) -> f64 {
    (2.0 * (1.0 - sigma) * t + 2.0 * sigma) / (1.0 + sigma)
}

fn exp_base(sigma: f64, t: f64) -> f64 {
    let l = sigma.ln();
    (t * l).exp_m1() / l.exp_m1()
}

fn exp_base_inv(sigma: f64, y: f64) -> f64 {
    let l = sigma.ln();
    (y * l.exp_m1()).ln_1p() / l
}

fn exp_base_deriv(sigma: f64, t: f64) -> f64 {
    let l = sigma.ln();
    (t * l).exp() * l / l.exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pl_rejects_bad_data() {
        assert!(matches!(
            PlMap::new(vec![0.5, 0.2], vec![1.0, 1.0], 0.0),
            Err(BuildError::InvalidBreaks(_))
        ));
        assert!(matches!(
            PlMap::new(vec![0.0, 0.5], vec![1.0, -1.0], 0.0),
            Err(BuildError::SlopeNotPositive { .. })
        ));
        assert!(matches!(
            PlMap::new(vec![0.0, 0.5], vec![1.0, 1.5], 0.0),
            Err(BuildError::InvalidPl(_))
        ));
        assert!(PlMap::new(vec![], vec![], 0.0).is_err());
    }

    #[test]
    fn degenerate_sigma_rejected() {
        assert!(ElementaryMap::exponential(1.0 + 1e-7, 0.0).is_err());
        assert!(ElementaryMap::quadratic(-2.0, 0.0).is_err());
        assert!(ElementaryMap::quadratic(f64::NAN, 0.0).is_err());
        assert!(ElementaryMap::exponential(1.0 + 2e-6, 0.0).is_ok());
    }

    #[test]
    fn pl_lift_and_inverse() {
        // slope 2 on [0, 0.3), 4/7 on [0.3, 1), f(0) = 0.3
        let p = PlMap::new(vec![0.0, 0.3], vec![2.0, 4.0 / 7.0], 0.3).unwrap();
        assert!((p.lift(0.3) - 0.9).abs() < 1e-15);
        assert!((p.lift(1.0) - 1.3).abs() < 1e-15);
        assert!((p.lift(-0.7) + 0.1).abs() < 1e-12);
        for &x in &[0.0, 0.1, 0.3, 0.55, 0.999, 2.4, -3.2] {
            assert!((p.inverse_lift(p.lift(x)) - x).abs() < 1e-12, "{x}");
        }
        let j = p.jumps();
        assert!((j[0] - 2.0 / 7.0).abs() < 1e-15);
        assert!((j[1] - 3.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_inverse_is_stable_near_one() {
        for &s in &[1.0 + 2e-6, 1.0 - 2e-6, 0.2, 7.0] {
            let q = ElementaryMap::quadratic(s, 0.3).unwrap();
            for k in 0..50 {
                let x = k as f64 / 50.0 + 0.003;
                let y = q.lift(x);
                assert!((q.inverse_lift(y) - x).abs() < 1e-13, "sigma {s} x {x}");
            }
        }
    }

    #[test]
    fn one_break_families_at_the_break() {
        let e = ElementaryMap::exponential(2.0, 0.0).unwrap();
        let (l, r) = e.one_sided(0.0, 1e-9);
        assert!((l - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((r - 2f64.ln()).abs() < 1e-15);
        let q = ElementaryMap::quadratic(2.0, 0.0).unwrap();
        let (l, r) = q.one_sided(1.0 - 1e-12, 1e-9);
        assert!((l - 2.0 / 3.0).abs() < 1e-15);
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
    }
}
