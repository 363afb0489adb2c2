//! Conjugators that move every break of a map onto prescribed orbit slots.
//!
//! Given connections `[c_i, ..., f^{N_i}(c_i)]` and shifts `k_i`, the reduced
//! map `F = h o f o h^{-1}` has at most one break per connection, at
//! `h(f^{k_i}(c_i))`, carrying the orbit product of that connection.
//!
//! * When `sigma(f) = 1` a single PL map `L` suffices ([`reduce_case1`]).
//! * Otherwise a one-break quadratic or exponential map `u` first corrects
//!   `sigma`, and `h = L o u` ([`reduce_case2`]).

use log::debug;
use serde::{Deserialize, Serialize};

use crate::builders::{
    build_pl_from_jumps_tol, exponential_elementary, quadratic_elementary, PlSpec,
};
use crate::circle::{circle_distance, wrap, CirclePoint, Tolerances};
use crate::elementary::ElementaryMap;
use crate::error::ReductionError;
use crate::jumps::{
    check_k_vector, has_d_property, jumps_report, orbit_connections, pi_invariant, sigma_invariant,
    sigma_ki, ConnectionReport, InvariantSheet, DEFAULT_N_MAX,
};
use crate::rotnum::{rotation_number, RotationEstimate};
use crate::word::{BreakRecord, Letter, MapWord};

/// Grid size for the conjugacy identity check.
pub const CONJUGACY_GRID: usize = 1000;
/// Grid size for the rotation checks of the two-break shortcut.
pub const ROTATION_GRID: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ConjugatorFamily {
    /// Piecewise linear only; fails when `sigma(f) != 1`.
    Pl,
    /// PL composed with a quadratic one-break map.
    Pq,
    /// PL composed with an exponential one-break map.
    #[default]
    Pe,
}

impl ConjugatorFamily {
    pub fn name(self) -> &'static str {
        match self {
            ConjugatorFamily::Pl => "pl",
            ConjugatorFamily::Pq => "pq",
            ConjugatorFamily::Pe => "pe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionConfig {
    pub tol: Tolerances,
    pub n_max: usize,
    /// Family for the correcting map when `sigma(f) != 1`. `Pl` forbids it.
    pub family: ConjugatorFamily,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            tol: Tolerances::default(),
            n_max: DEFAULT_N_MAX,
            family: ConjugatorFamily::Pe,
        }
    }
}

impl ReductionConfig {
    pub fn with_family(mut self, family: ConjugatorFamily) -> Self {
        self.family = family;
        self
    }
}

/// A predicted break of the reduced map and what was measured there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedBreak {
    pub connection: usize,
    pub offset: i64,
    pub point: CirclePoint,
    pub predicted: f64,
    pub measured: f64,
}

impl PredictedBreak {
    pub fn error(&self) -> f64 {
        (self.measured - self.predicted).abs()
    }
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub conjugator: MapWord,
    /// `conjugator o f o conjugator^{-1}`, never simplified.
    pub reduced: MapWord,
    pub family: ConjugatorFamily,
    pub connections: Vec<ConnectionReport>,
    pub invariants: InvariantSheet,
    pub predicted: Vec<PredictedBreak>,
    pub measured: Vec<BreakRecord>,
    /// Largest `|measured - predicted|` over predicted points.
    pub residual: f64,
    /// Largest `|jump - 1|` over the other candidate breaks of the reduced map.
    pub spurious_residual: f64,
    /// Largest circle distance between `F(h(x))` and `h(f(x))` on a grid.
    pub conjugacy_residual: f64,
    /// `sigma` of the intermediate map in the corrected case.
    pub intermediate_sigma: Option<f64>,
    /// A point the conjugator is built to fix, when there is one.
    pub fixed_point: Option<CirclePoint>,
}

impl ReductionResult {
    pub fn max_jump_residual(&self) -> f64 {
        self.residual.max(self.spurious_residual)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.residual <= tol && self.spurious_residual <= tol && self.conjugacy_residual <= tol
    }
}

fn orbit_point(f: &MapWord, f_inv: &MapWord, x: f64, k: i64) -> f64 {
    let step = if k < 0 { f_inv } else { f };
    (0..k.unsigned_abs()).fold(wrap(x), |acc, _| step.eval_f64(acc))
}

// `f^k(x)` for `k = lo..=hi`
fn orbit_segment(f: &MapWord, f_inv: &MapWord, x: f64, lo: i64, hi: i64) -> Vec<f64> {
    let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    let mut p = orbit_point(f, f_inv, x, lo);
    for _ in lo..=hi {
        out.push(p);
        p = f.eval_f64(p);
    }
    out
}

struct Slot {
    connection: usize,
    offset: i64,
    point: f64,
    jump: f64,
}

/// The PL map with jumps `sigma_{k,i}` at `f^k(c_i)` fixing `anchor`, and the
/// points `f^{k_i}(c_i)`.
fn pl_corrector(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    anchor: f64,
    tol: &Tolerances,
) -> Result<(ElementaryMap, Vec<f64>), ReductionError> {
    let f_inv = f.invert();
    let mut slots = Vec::new();
    let mut targets = Vec::with_capacity(conns.len());
    for (i, (c, &k_i)) in conns.iter().zip(k_vector).enumerate() {
        let lo = k_i.min(0);
        let hi = k_i.max(c.last_offset);
        let pts = orbit_segment(f, &f_inv, c.representative.value(), lo, hi);
        for (idx, k) in (lo..=hi).enumerate() {
            slots.push(Slot {
                connection: i,
                offset: k,
                point: pts[idx],
                jump: sigma_ki(c, k_i, k),
            });
        }
        targets.push(pts[(k_i - lo) as usize]);
    }
    slots.sort_by(|a, b| a.point.total_cmp(&b.point));
    for (a, b) in slots.iter().zip(slots.iter().cycle().skip(1)) {
        if slots.len() > 1 && circle_distance(a.point, b.point) <= tol.point {
            return Err(ReductionError::BreakCollision {
                point: a.point,
                conn_a: a.connection,
                offset_a: a.offset,
                conn_b: b.connection,
                offset_b: b.offset,
            });
        }
    }
    let spec = PlSpec {
        breaks: slots.iter().map(|s| s.point).collect(),
        jumps: slots.iter().map(|s| s.jump).collect(),
        fixed_point: wrap(anchor),
    };
    let l = build_pl_from_jumps_tol(&spec, tol.reduce)?;
    Ok((l, targets))
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| j as f64 / n as f64)
}

fn conjugacy_residual(f: &MapWord, h: &MapWord, reduced: &MapWord) -> f64 {
    grid(CONJUGACY_GRID)
        .map(|x| circle_distance(reduced.eval_f64(h.eval_f64(x)), h.eval_f64(f.eval_f64(x))))
        .fold(0.0, f64::max)
}

struct Assembly<'a> {
    f: &'a MapWord,
    conjugator: MapWord,
    family: ConjugatorFamily,
    connections: Vec<ConnectionReport>,
    invariants: InvariantSheet,
    // (connection, offset, point in the reduced coordinates, predicted jump)
    predicted: Vec<(usize, i64, f64, f64)>,
    intermediate_sigma: Option<f64>,
    fixed_point: Option<CirclePoint>,
}

fn measure_predictions(
    reduced: &MapWord,
    raw: &[(usize, i64, f64, f64)],
    tol: &Tolerances,
) -> (Vec<PredictedBreak>, f64, f64) {
    let predicted: Vec<PredictedBreak> = raw
        .iter()
        .map(|&(connection, offset, point, jump)| {
            let point = CirclePoint::new(point);
            PredictedBreak {
                connection,
                offset,
                point,
                predicted: jump,
                measured: reduced.jump_with(point, tol.point),
            }
        })
        .collect();
    let residual = predicted
        .iter()
        .map(PredictedBreak::error)
        .fold(0.0, f64::max);
    let spurious_residual = reduced
        .candidate_breaks_with(tol.point)
        .into_iter()
        .filter(|x| predicted.iter().all(|p| !p.point.approx_eq(*x, tol.point)))
        .map(|x| (reduced.jump_with(x, tol.point) - 1.0).abs())
        .fold(0.0, f64::max);
    (predicted, residual, spurious_residual)
}

fn finish(a: Assembly<'_>, tol: &Tolerances) -> ReductionResult {
    let reduced = a.f.conjugate_by(&a.conjugator);
    let (predicted, residual, spurious_residual) = measure_predictions(&reduced, &a.predicted, tol);
    let measured = jumps_report(&reduced, tol);
    let conjugacy_residual = conjugacy_residual(a.f, &a.conjugator, &reduced);
    debug!(
        "reduction ({}): residual {residual:e}, spurious {spurious_residual:e}, conjugacy {conjugacy_residual:e}",
        a.family.name()
    );
    ReductionResult {
        conjugator: a.conjugator,
        reduced,
        family: a.family,
        connections: a.connections,
        invariants: a.invariants,
        predicted,
        measured,
        residual,
        spurious_residual,
        conjugacy_residual,
        intermediate_sigma: a.intermediate_sigma,
        fixed_point: a.fixed_point,
    }
}

fn sheet(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    tol: &Tolerances,
) -> Result<InvariantSheet, ReductionError> {
    Ok(has_d_property(f, conns, k_vector, tol)?.1)
}

fn case1(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    anchor: f64,
    tol: &Tolerances,
) -> Result<ReductionResult, ReductionError> {
    let invariants = sheet(f, conns, k_vector, tol)?;
    if (invariants.sigma - 1.0).abs() > tol.reduce {
        return Err(ReductionError::SigmaNotOne {
            sigma: invariants.sigma,
        });
    }
    let (l, targets) = pl_corrector(f, conns, k_vector, anchor, tol)?;
    let predicted = conns
        .iter()
        .zip(k_vector)
        .zip(&targets)
        .enumerate()
        .map(|(i, ((c, &k), &t))| (i, k, wrap(l.lift(t)), c.orbit_product))
        .collect();
    Ok(finish(
        Assembly {
            f,
            conjugator: MapWord::single(l),
            family: ConjugatorFamily::Pl,
            connections: conns.to_vec(),
            invariants,
            predicted,
            intermediate_sigma: None,
            fixed_point: Some(CirclePoint::new(anchor)),
        },
        tol,
    ))
}

/// PL reduction for `sigma(f) = 1`; the conjugator fixes 0.
pub fn reduce_case1(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    tol: &Tolerances,
) -> Result<ReductionResult, ReductionError> {
    check_k_vector(conns, k_vector)?;
    case1(f, conns, k_vector, 0.0, tol)
}

fn correcting_map(
    family: ConjugatorFamily,
    sigma: f64,
    center: f64,
) -> Result<ElementaryMap, ReductionError> {
    Ok(match family {
        ConjugatorFamily::Pq => quadratic_elementary(sigma, center)?,
        _ => exponential_elementary(sigma, center)?,
    })
}

fn case2(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    family: ConjugatorFamily,
    normalize: bool,
    tol: &Tolerances,
) -> Result<ReductionResult, ReductionError> {
    let invariants = sheet(f, conns, k_vector, tol)?;
    let sigma = invariants.sigma;
    if (sigma - 1.0).abs() <= tol.reduce || conns.is_empty() {
        return Err(ReductionError::SigmaIsOne { sigma });
    }
    if family == ConjugatorFamily::Pl {
        return Err(ReductionError::SigmaNotOne { sigma });
    }
    let f_inv = f.invert();
    let first = &conns[0];
    let center = orbit_point(
        f,
        &f_inv,
        first.representative.value(),
        first.last_offset + 1,
    );
    let u = correcting_map(family, sigma, center)?;
    let u_word = MapWord::single(u.clone());
    let f1 = f.conjugate_by(&u_word);

    // connections of the corrected map, following the orbits of f
    let mut conns1 = Vec::with_capacity(conns.len());
    let mut targets1 = Vec::with_capacity(conns.len());
    for (i, (c, &k_i)) in conns.iter().zip(k_vector).enumerate() {
        let n = c.last_offset + if i == 0 { 1 } else { 0 };
        let jumps = orbit_segment(f, &f_inv, c.representative.value(), 0, n)
            .into_iter()
            .map(|x| f1.jump_with(CirclePoint::new(u.lift(x)), tol.point))
            .collect();
        let rep = CirclePoint::new(u.lift(c.representative.value()));
        conns1.push(ConnectionReport::from_jumps(rep, jumps, tol.jump));
        targets1.push(orbit_point(f, &f_inv, c.representative.value(), k_i));
    }
    let sigma1 = sigma_invariant(&conns1, k_vector)?;
    if (sigma1 - 1.0).abs() > tol.reduce {
        return Err(ReductionError::CorrectionMismatch { sigma: sigma1 });
    }
    let anchor = if normalize { center } else { 0.0 };
    let (l, _) = pl_corrector(&f1, &conns1, k_vector, anchor, tol)?;
    let predicted = conns
        .iter()
        .zip(k_vector)
        .zip(&targets1)
        .enumerate()
        .map(|(i, ((c, &k), &t))| (i, k, wrap(l.lift(u.lift(t))), c.orbit_product))
        .collect();
    let conjugator = MapWord::single(l).compose(&u_word);
    Ok(finish(
        Assembly {
            f,
            conjugator,
            family,
            connections: conns.to_vec(),
            invariants,
            predicted,
            intermediate_sigma: Some(sigma1),
            fixed_point: normalize.then(|| CirclePoint::new(center)),
        },
        tol,
    ))
}

/// Reduction for `sigma(f) != 1`: a one-break map of `family` with jump
/// `sigma(f)` at `f^{N_0 + 1}(c_0)` corrects `sigma`, then the PL step runs on
/// the corrected map.
pub fn reduce_case2(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    family: ConjugatorFamily,
    tol: &Tolerances,
) -> Result<ReductionResult, ReductionError> {
    check_k_vector(conns, k_vector)?;
    case2(f, conns, k_vector, family, false, tol)
}

fn dispatch(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    cfg: &ReductionConfig,
    normalize: bool,
) -> Result<ReductionResult, ReductionError> {
    check_k_vector(conns, k_vector)?;
    let sigma = sigma_invariant(conns, k_vector)?;
    if (sigma - 1.0).abs() <= cfg.tol.reduce {
        case1(f, conns, k_vector, 0.0, &cfg.tol)
    } else {
        case2(f, conns, k_vector, cfg.family, normalize, &cfg.tol)
    }
}

/// Moves the breaks of connection `i` onto `f^{k_i}(c_i)`, choosing the PL
/// or corrected construction from `sigma(f)`.
pub fn reduce_to_prescribed(
    f: &MapWord,
    k_vector: &[i64],
    cfg: &ReductionConfig,
) -> Result<ReductionResult, ReductionError> {
    let conns = orbit_connections(f, cfg.n_max, &cfg.tol)?;
    dispatch(f, &conns, k_vector, cfg, false)
}

fn d_property_connections(
    f: &MapWord,
    cfg: &ReductionConfig,
) -> Result<Vec<ConnectionReport>, ReductionError> {
    let conns = orbit_connections(f, cfg.n_max, &cfg.tol)?;
    let k = vec![0; conns.len()];
    let (ok, sheet) = has_d_property(f, &conns, &k, &cfg.tol)?;
    if !ok {
        return Err(ReductionError::DPropertyFails {
            orbit_products: sheet.orbit_products,
        });
    }
    Ok(conns)
}

/// Conjugates a map whose orbit products are all 1 to a map without breaks.
/// Refuses every other map: no piecewise smooth conjugacy to a diffeomorphism
/// exists for it.
pub fn conjugate_to_diffeo(
    f: &MapWord,
    cfg: &ReductionConfig,
) -> Result<ReductionResult, ReductionError> {
    let conns = d_property_connections(f, cfg)?;
    let k = vec![0; conns.len()];
    dispatch(f, &conns, &k, cfg, false)
}

/// As [`conjugate_to_diffeo`], with a conjugator that has a fixed point and
/// hence rotation number 0.
pub fn normalize_rotation_zero(
    f: &MapWord,
    cfg: &ReductionConfig,
) -> Result<ReductionResult, ReductionError> {
    let conns = d_property_connections(f, cfg)?;
    let k = vec![0; conns.len()];
    dispatch(f, &conns, &k, cfg, true)
}

/// Conjugator for a map with exactly two breaks `b` and `f(b)`:
/// `h = R_{f(b)} o E_s^{-1} o R_{f(b)}^{-1}` with `E_s` the exponential
/// one-break map and `s` the reciprocal of the orbit weight. `h` cancels the
/// break at `f(b)` and leaves the orbit product at `h(b)`.
pub fn two_break_conjugator(
    f: &MapWord,
    cfg: &ReductionConfig,
) -> Result<ReductionResult, ReductionError> {
    let tol = &cfg.tol;
    let records = jumps_report(f, tol);
    if records.len() != 2 {
        return Err(ReductionError::NotTwoBreakForm(format!(
            "expected 2 breaks, found {}",
            records.len()
        )));
    }
    let conns = orbit_connections(f, cfg.n_max, tol)?;
    if conns.len() != 1 || conns[0].last_offset != 1 {
        return Err(ReductionError::NotTwoBreakForm(
            "the breaks are not of the form b, f(b)".into(),
        ));
    }
    let conn = &conns[0];
    let b = conn.representative.value();
    let b_next = f.eval_f64(b);
    let weight = pi_invariant(conn);
    let e = exponential_elementary(1.0 / weight, b_next)?;
    let conjugator = MapWord::from_letters(vec![Letter::inverse_of(e)]);
    let invariants = sheet(f, &conns, &[0], tol)?;
    let predicted = vec![(0, 0, conjugator.eval_f64(b), conn.orbit_product)];
    Ok(finish(
        Assembly {
            f,
            conjugator,
            family: ConjugatorFamily::Pe,
            connections: conns.clone(),
            invariants,
            predicted,
            intermediate_sigma: None,
            fixed_point: Some(CirclePoint::new(b_next)),
        },
        tol,
    ))
}

/// Check of a triple `(f, h, F)` that does not care how `h` was built: the
/// breaks of `F` should sit at `h(f^{k_i}(c_i))` with jump equal to the orbit
/// product of connection `i`, and `F o h = h o f` on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct TripleCheck {
    pub connections: Vec<ConnectionReport>,
    pub predicted: Vec<PredictedBreak>,
    pub measured: Vec<BreakRecord>,
    pub residual: f64,
    pub spurious_residual: f64,
    pub conjugacy_residual: f64,
    pub grid_points: usize,
}

impl TripleCheck {
    pub fn within(&self, tol: f64) -> bool {
        self.residual <= tol && self.spurious_residual <= tol && self.conjugacy_residual <= tol
    }
}

pub fn verify_triple(
    f: &MapWord,
    h: &MapWord,
    reduced: &MapWord,
    k_vector: &[i64],
    n_max: usize,
    tol: &Tolerances,
) -> Result<TripleCheck, ReductionError> {
    let conns = orbit_connections(f, n_max, tol)?;
    check_k_vector(&conns, k_vector)?;
    let f_inv = f.invert();
    let raw: Vec<(usize, i64, f64, f64)> = conns
        .iter()
        .zip(k_vector)
        .enumerate()
        .map(|(i, (c, &k))| {
            let x = orbit_point(f, &f_inv, c.representative.value(), k);
            (i, k, h.eval_f64(x), c.orbit_product)
        })
        .collect();
    let (predicted, residual, spurious_residual) = measure_predictions(reduced, &raw, tol);
    Ok(TripleCheck {
        connections: conns,
        predicted,
        measured: jumps_report(reduced, tol),
        residual,
        spurious_residual,
        conjugacy_residual: conjugacy_residual(f, h, reduced),
        grid_points: CONJUGACY_GRID,
    })
}

/// How close the reduced two-break PL map is to a rotation.
#[derive(Debug, Clone, Serialize)]
pub struct RotationReport {
    /// Image of 0 under the reduced map.
    pub translation: f64,
    pub rho_original: RotationEstimate,
    pub rho_reduced: RotationEstimate,
    /// Largest `|DF - 1|` over both one-sided derivatives on the grid.
    pub sup_derivative_deviation: f64,
    /// Largest distance between `F(x)` and `x + rho` with `rho` estimated from `f`.
    pub sup_distance_to_rotation: f64,
    pub grid_points: usize,
}

/// For a PL map with two breaks `b`, `f(b)`, the two-break conjugator turns
/// it into a rotation; the report measures how exactly.
pub fn two_break_to_rotation(
    f: &MapWord,
    cfg: &ReductionConfig,
    n_iter: u64,
) -> Result<(ReductionResult, RotationReport), ReductionError> {
    if !f.is_piecewise_linear() {
        return Err(ReductionError::NotTwoBreakForm(
            "the map is not piecewise linear".into(),
        ));
    }
    let result = two_break_conjugator(f, cfg)?;
    let reduced = &result.reduced;
    let rho_original = rotation_number(f, n_iter);
    let rho_reduced = rotation_number(reduced, n_iter);
    let mut sup_derivative_deviation: f64 = 0.0;
    let mut sup_distance_to_rotation: f64 = 0.0;
    for x in grid(ROTATION_GRID) {
        let (dm, dp) = reduced.one_sided_derivatives_with(CirclePoint::new(x), cfg.tol.point);
        sup_derivative_deviation = sup_derivative_deviation
            .max((dm - 1.0).abs())
            .max((dp - 1.0).abs());
        sup_distance_to_rotation = sup_distance_to_rotation
            .max(circle_distance(reduced.eval_f64(x), x + rho_original.value));
    }
    let report = RotationReport {
        translation: reduced.eval_f64(0.0),
        rho_original,
        rho_reduced,
        sup_derivative_deviation,
        sup_distance_to_rotation,
        grid_points: ROTATION_GRID,
    };
    Ok((result, report))
}
