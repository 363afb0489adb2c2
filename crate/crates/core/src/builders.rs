//! Constructors for the explicit maps used by the reduction: PL maps with
//! prescribed breaks and jumps, the one-break quadratic and exponential maps,
//! two-break PL maps, and golden-instance synthesis.

use crate::circle::{wrap, CirclePoint, Tolerances};
use crate::elementary::{check_breaks, ElementaryMap, PlMap, SIGMA_GUARD};
use crate::error::BuildError;
use crate::word::{Letter, MapWord};

/// Default relative tolerance on the product of prescribed jumps.
pub const JUMP_PRODUCT_TOL: f64 = 1e-12;

/// Breaks `b_0 < ... < b_n` with jumps `s_0, ..., s_n` (product 1) and the
/// point the resulting map must fix.
#[derive(Debug, Clone, PartialEq)]
pub struct PlSpec {
    pub breaks: Vec<f64>,
    pub jumps: Vec<f64>,
    pub fixed_point: f64,
}

impl PlSpec {
    /// Spec fixing the first break.
    pub fn new(breaks: Vec<f64>, jumps: Vec<f64>) -> Self {
        let fixed_point = breaks.first().copied().unwrap_or(0.0);
        PlSpec {
            breaks,
            jumps,
            fixed_point,
        }
    }

    pub fn with_fixed_point(mut self, p: f64) -> Self {
        self.fixed_point = wrap(p);
        self
    }
}

/// PL circle homeomorphism with the prescribed breaks and jumps.
///
/// With `lambda_0` the slope of the wrap-around arc `[b_n, b_0 + 1)`, the slope
/// on `[b_j, b_{j+1})` is `lambda_0 / (s_0 ... s_j)` and
/// `1 / lambda_0 = sum_{j<n} (s_0 ... s_j)^{-1} (b_{j+1} - b_j) + (b_0 + 1 - b_n)`.
/// The last jump is never used directly: it is forced to
/// `(s_0 ... s_{n-1})^{-1}`, which absorbs rounding in the input product.
pub fn build_pl_from_jumps(spec: &PlSpec) -> Result<ElementaryMap, BuildError> {
    build_pl_from_jumps_tol(spec, JUMP_PRODUCT_TOL)
}

pub fn build_pl_from_jumps_tol(spec: &PlSpec, tol: f64) -> Result<ElementaryMap, BuildError> {
    Ok(ElementaryMap::Pl(build_pl_map(spec, tol)?))
}

pub(crate) fn build_pl_map(spec: &PlSpec, tol: f64) -> Result<PlMap, BuildError> {
    if spec.breaks.is_empty() {
        let p = spec.fixed_point;
        return PlMap::new(vec![wrap(p)], vec![1.0], wrap(p));
    }
    if spec.breaks.len() != spec.jumps.len() {
        return Err(BuildError::InvalidPl(format!(
            "{} breaks but {} jumps",
            spec.breaks.len(),
            spec.jumps.len()
        )));
    }
    check_breaks(&spec.breaks)?;
    if let Some(&s) = spec.jumps.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(BuildError::SlopeNotPositive { slope: s });
    }
    let product: f64 = spec.jumps.iter().product();
    if (product - 1.0).abs() > tol {
        return Err(BuildError::JumpProductNotOne { product });
    }
    let b = &spec.breaks;
    let n = b.len() - 1;
    // prefix[j] = s_0 ... s_j
    let mut prefix = Vec::with_capacity(n);
    let mut acc = 1.0;
    for s in &spec.jumps[..n] {
        acc *= s;
        prefix.push(acc);
    }
    let mut denom = b[0] + 1.0 - b[n];
    for j in 0..n {
        denom += (b[j + 1] - b[j]) / prefix[j];
    }
    let lambda0 = 1.0 / denom;
    let mut slopes: Vec<f64> = prefix.iter().map(|p| lambda0 / p).collect();
    slopes.push(lambda0);
    let map = PlMap::new(b.clone(), slopes, b[0])?;
    // post-compose with a rotation so that the requested point is fixed
    let p = b[0] + wrap(spec.fixed_point - b[0]);
    let image = ElementaryMap::Pl(map.clone()).lift(p);
    Ok(map.shifted(p - image))
}

/// One-break map with jump `target_jump` at `center`, from the quadratic family.
///
/// The quadratic lift with parameter `sigma` has jump `1 / sigma`, so the
/// parameter used is `1 / target_jump`.
pub fn quadratic_elementary(target_jump: f64, center: f64) -> Result<ElementaryMap, BuildError> {
    check_target(target_jump)?;
    ElementaryMap::quadratic(1.0 / target_jump, center)
}

/// One-break map with jump `sigma` at `center`, from the exponential family.
pub fn exponential_elementary(sigma: f64, center: f64) -> Result<ElementaryMap, BuildError> {
    check_target(sigma)?;
    ElementaryMap::exponential(sigma, center)
}

fn check_target(s: f64) -> Result<(), BuildError> {
    if !(s > 0.0 && s.is_finite()) || (s - 1.0).abs() < SIGMA_GUARD {
        return Err(BuildError::DegenerateSigma { sigma: s });
    }
    Ok(())
}

pub fn rotation(alpha: f64) -> MapWord {
    MapWord::single(ElementaryMap::rotation(alpha))
}

/// PL map with `f(0) = c`, slope `s1` on `[0, c)` and `(1 - s1 c) / (1 - c)` on
/// `[c, 1)`. Its breaks are `0` and `f(0) = c`.
pub fn two_break_pl(c: f64, s1: f64) -> Result<ElementaryMap, BuildError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(BuildError::InvalidBreaks(format!(
            "c = {c} must lie in (0, 1)"
        )));
    }
    if !(s1 > 0.0 && s1.is_finite()) {
        return Err(BuildError::SlopeNotPositive { slope: s1 });
    }
    let s2 = (1.0 - s1 * c) / (1.0 - c);
    if s2 <= 0.0 {
        return Err(BuildError::SlopeNotPositive { slope: s2 });
    }
    ElementaryMap::pl(vec![0.0, c], vec![s1, s2], c)
}

/// Non-PL map with exactly two breaks, `0` and `f(0) = target`, carrying jumps
/// `jump_at_zero` and `jump_at_image`:
/// `R_beta o E(jump_at_image, E_1(target)) o E_1` with `E_1 = E(jump_at_zero, 0)`.
pub fn two_break_exponential(
    target: f64,
    jump_at_zero: f64,
    jump_at_image: f64,
) -> Result<MapWord, BuildError> {
    let first = exponential_elementary(jump_at_zero, 0.0)?;
    let c2 = wrap(first.lift(target));
    let second = exponential_elementary(jump_at_image, c2)?;
    let beta = target - second.lift(0.0);
    Ok(MapWord::from_letters(vec![
        Letter::forward(ElementaryMap::rotation(beta)),
        Letter::forward(second),
        Letter::forward(first),
    ]))
}

/// `R_beta o L` with `L` from [`build_pl_from_jumps`]: a PL map with the
/// prescribed breaks and jumps and a rotation number that is not forced to 0.
pub fn rotated_pl(spec: &PlSpec, beta: f64) -> Result<MapWord, BuildError> {
    Ok(MapWord::from_letters(vec![
        Letter::forward(ElementaryMap::rotation(beta)),
        Letter::forward(build_pl_from_jumps(spec)?),
    ]))
}

/// A map `f = h0^{-1} o F0 o h0` together with the data that produced it.
#[derive(Debug, Clone)]
pub struct SynthesizedInstance {
    pub f: MapWord,
    pub h0: MapWord,
    pub f0: MapWord,
}

/// Golden instance: `f := h0^{-1} o F0 o h0`, conjugate to the smooth `F0`.
pub fn synthesize_instance(h0: &MapWord, f0: &MapWord) -> Result<SynthesizedInstance, BuildError> {
    let count = f0.genuine_breaks(&Tolerances::default()).len();
    if count > 0 {
        return Err(BuildError::NotSmooth { count });
    }
    Ok(SynthesizedInstance {
        f: f0.conjugate_by(&h0.invert()),
        h0: h0.clone(),
        f0: f0.clone(),
    })
}

/// `R_c o m o R_c^{-1}` as a word.
pub fn rotation_conjugate(m: &MapWord, c: f64) -> MapWord {
    m.conjugate_by(&rotation(c))
}

/// Where the builders' maps send `x`; convenience for tests and reports.
pub fn image(m: &ElementaryMap, x: f64) -> CirclePoint {
    CirclePoint::new(m.lift(x))
}
