//! Exact rational backend for PL circle homeomorphisms.
//!
//! [`RationalPL`] is closed under composition, inversion and powers, and is
//! kept in a canonical form (only genuine breaks, lift pinned by
//! `lift(0) in [0, 1)`), so group laws can be checked by structural equality.
//! The module also carries an exact rerun of the prescribed-break reduction
//! for PL input, used as the reference for the floating-point pipeline.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::circle::circle_distance;
use crate::elementary::ElementaryMap;
use crate::error::{ExactError, MapSpecError};
use crate::mapspec::{LetterDoc, MapSpecDoc, Real};
use crate::word::MapWord;

pub type Q = BigRational;

/// Cap on exact iteration depth; denominators grow geometrically.
pub const MAX_EXACT_DEPTH: u64 = 64;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q`, integers and decimal literals (with optional exponent) exactly.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, d)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let d = parse_rational(d)?;
        return if d.is_zero() { None } else { Some(p / d) };
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().ok()?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(numer);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -v } else { v })
}

/// A PL circle homeomorphism with rational breaks, slopes and anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPL {
    // genuine breaks; empty for a rotation
    breaks: Vec<Q>,
    // arc start points: `breaks`, or [0] for a rotation
    points: Vec<Q>,
    slopes: Vec<Q>,
    // lift value at points[0]
    anchor: Q,
    // lift increments from points[0] at each point, trailing total 1
    cumulative: Vec<Q>,
}

impl RationalPL {
    pub fn identity() -> Self {
        Self::rotation(Q::zero())
    }

    pub fn rotation(alpha: Q) -> Self {
        let a = frac(&alpha);
        RationalPL {
            breaks: Vec::new(),
            points: vec![Q::zero()],
            slopes: vec![Q::one()],
            anchor: a,
            cumulative: vec![Q::zero(), Q::one()],
        }
    }

    /// Validates and canonicalizes. `slopes[j]` acts on `[breaks[j], breaks[j+1])`
    /// and `anchor` is the lift value at `breaks[0]`.
    pub fn new(breaks: Vec<Q>, slopes: Vec<Q>, anchor: Q) -> Result<Self, ExactError> {
        if breaks.is_empty() {
            return Err(ExactError::InvalidBreaks("no break points".into()));
        }
        if breaks.len() != slopes.len() {
            return Err(ExactError::InvalidSlopes(format!(
                "{} breaks, {} slopes",
                breaks.len(),
                slopes.len()
            )));
        }
        let zero = Q::zero();
        let one = Q::one();
        for (j, b) in breaks.iter().enumerate() {
            if b < &zero || b >= &one || (j > 0 && &breaks[j - 1] >= b) {
                return Err(ExactError::InvalidBreaks(format_rational(b)));
            }
        }
        if let Some(s) = slopes.iter().find(|s| !s.is_positive()) {
            return Err(ExactError::InvalidSlopes(format_rational(s)));
        }
        let raw = Arcs::new(breaks, slopes, anchor);
        let total = raw.cumulative.last().unwrap().clone();
        if total != one {
            return Err(ExactError::Closure(format_rational(&total)));
        }
        Ok(raw.canonical())
    }

    /// Genuine break points, sorted in `[0, 1)`.
    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }

    /// Slopes on the arcs starting at each break (a single `1` for rotations).
    pub fn slopes(&self) -> &[Q] {
        &self.slopes
    }

    /// Lift value at the first break (at 0 for rotations).
    pub fn anchor(&self) -> &Q {
        &self.anchor
    }

    pub fn is_rotation(&self) -> bool {
        self.breaks.is_empty()
    }

    fn arcs(&self) -> ArcsRef<'_> {
        ArcsRef {
            points: &self.points,
            slopes: &self.slopes,
            anchor: &self.anchor,
            cumulative: &self.cumulative,
        }
    }

    pub fn lift(&self, x: &Q) -> Q {
        self.arcs().lift(x)
    }

    pub fn inverse_lift(&self, y: &Q) -> Q {
        self.arcs().inverse_lift(y)
    }

    /// Image of `x` reduced to `[0, 1)`.
    pub fn eval(&self, x: &Q) -> Q {
        frac(&self.lift(x))
    }

    pub fn inverse_eval(&self, y: &Q) -> Q {
        frac(&self.inverse_lift(y))
    }

    /// Slope on `[x, x + eps)`.
    pub fn slope_right(&self, x: &Q) -> Q {
        let a = self.arcs();
        a.slopes[a.arc_at(x)].clone()
    }

    /// `(break, Df_- / Df_+)` for every genuine break.
    pub fn jumps(&self) -> Vec<(Q, Q)> {
        let n = self.slopes.len();
        self.breaks
            .iter()
            .enumerate()
            .map(|(j, b)| (b.clone(), &self.slopes[(j + n - 1) % n] / &self.slopes[j]))
            .collect()
    }

    /// Jump at an arbitrary point (exactly 1 off the break set).
    pub fn jump_at(&self, x: &Q) -> Q {
        let x = frac(x);
        self.jumps()
            .into_iter()
            .find(|(b, _)| *b == x)
            .map(|(_, s)| s)
            .unwrap_or_else(Q::one)
    }

    /// Product of all jumps.
    pub fn pi_s(&self) -> Q {
        self.jumps()
            .into_iter()
            .fold(Q::one(), |acc, (_, s)| acc * s)
    }

    /// `self o other`, computed exactly.
    pub fn compose(&self, other: &RationalPL) -> RationalPL {
        let mut pts: Vec<Q> = other.points.clone();
        pts.extend(self.points.iter().map(|b| other.inverse_eval(b)));
        pts.sort();
        pts.dedup();
        let slopes = pts
            .iter()
            .map(|p| other.slope_right(p) * self.slope_right(&other.eval(p)))
            .collect();
        let anchor = self.lift(&other.lift(&pts[0]));
        Arcs::new(pts, slopes, anchor).canonical()
    }

    pub fn invert(&self) -> RationalPL {
        let n = self.points.len();
        let images: Vec<Q> = self.points.iter().map(|p| self.lift(p)).collect();
        let start = (0..n)
            .min_by(|&a, &b| frac(&images[a]).cmp(&frac(&images[b])))
            .unwrap();
        let order: Vec<usize> = (0..n).map(|k| (start + k) % n).collect();
        let pts: Vec<Q> = order.iter().map(|&j| frac(&images[j])).collect();
        let slopes: Vec<Q> = order.iter().map(|&j| self.slopes[j].recip()).collect();
        let anchor = &self.points[start] - images[start].floor();
        Arcs::new(pts, slopes, anchor).canonical()
    }

    /// `self^n` for `|n| <= MAX_EXACT_DEPTH`.
    pub fn pow(&self, n: i64) -> Result<RationalPL, ExactError> {
        let depth = n.unsigned_abs();
        if depth > MAX_EXACT_DEPTH {
            return Err(ExactError::DepthExceeded {
                depth,
                cap: MAX_EXACT_DEPTH,
            });
        }
        let base = if n < 0 { self.invert() } else { self.clone() };
        Ok((0..depth).fold(RationalPL::identity(), |acc, _| acc.compose(&base)))
    }

    /// Floating-point PL letter with the same data.
    pub fn to_elementary(&self) -> ElementaryMap {
        if self.is_rotation() {
            return ElementaryMap::rotation(to_f64(&self.anchor));
        }
        ElementaryMap::pl(
            self.breaks.iter().map(to_f64).collect(),
            self.slopes.iter().map(to_f64).collect(),
            to_f64(&self.anchor),
        )
        .expect("rounded canonical PL data stays valid")
    }

    pub fn to_word(&self) -> MapWord {
        MapWord::single(self.to_elementary())
    }

    /// Map-spec letter with `p/q` literals.
    pub fn to_letter_doc(&self) -> LetterDoc {
        let r = |x: &Q| Real(format_rational(x));
        if self.is_rotation() {
            LetterDoc::Rotation {
                alpha: r(&self.anchor),
                inverse: false,
            }
        } else {
            LetterDoc::Pl {
                breaks: self.breaks.iter().map(r).collect(),
                slopes: self.slopes.iter().map(r).collect(),
                anchor: r(&self.anchor),
                inverse: false,
            }
        }
    }

    pub fn to_doc(&self) -> MapSpecDoc {
        MapSpecDoc {
            word: vec![self.to_letter_doc()],
            provenance: None,
        }
    }
}

struct Arcs {
    points: Vec<Q>,
    slopes: Vec<Q>,
    anchor: Q,
    cumulative: Vec<Q>,
}

impl Arcs {
    fn new(points: Vec<Q>, slopes: Vec<Q>, anchor: Q) -> Self {
        let cumulative = cumulative(&points, &slopes);
        Arcs {
            points,
            slopes,
            anchor,
            cumulative,
        }
    }

    fn as_ref(&self) -> ArcsRef<'_> {
        ArcsRef {
            points: &self.points,
            slopes: &self.slopes,
            anchor: &self.anchor,
            cumulative: &self.cumulative,
        }
    }

    /// Drops points without a genuine jump and pins the lift.
    fn canonical(self) -> RationalPL {
        let n = self.points.len();
        let keep: Vec<usize> = (0..n)
            .filter(|&j| self.slopes[(j + n - 1) % n] != self.slopes[j])
            .collect();
        let view = self.as_ref();
        let shift = view.lift(&Q::zero()).floor();
        if keep.is_empty() {
            return RationalPL::rotation(view.lift(&Q::zero()));
        }
        let breaks: Vec<Q> = keep.iter().map(|&j| self.points[j].clone()).collect();
        let slopes: Vec<Q> = keep.iter().map(|&j| self.slopes[j].clone()).collect();
        let anchor = view.lift(&breaks[0]) - shift;
        let cumulative = cumulative(&breaks, &slopes);
        RationalPL {
            points: breaks.clone(),
            breaks,
            slopes,
            anchor,
            cumulative,
        }
    }
}

fn cumulative(points: &[Q], slopes: &[Q]) -> Vec<Q> {
    let n = points.len();
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Q::zero();
    out.push(acc.clone());
    for j in 0..n {
        let end = if j + 1 < n {
            points[j + 1].clone()
        } else {
            &points[0] + Q::one()
        };
        acc += &slopes[j] * (end - &points[j]);
        out.push(acc.clone());
    }
    out
}

struct ArcsRef<'a> {
    points: &'a [Q],
    slopes: &'a [Q],
    anchor: &'a Q,
    cumulative: &'a [Q],
}

impl ArcsRef<'_> {
    fn offset(&self, j: usize) -> Q {
        if j < self.points.len() {
            &self.points[j] - &self.points[0]
        } else {
            Q::one()
        }
    }

    fn arc_at(&self, x: &Q) -> usize {
        let r = frac(&(x - &self.points[0]));
        let n = self.points.len();
        (0..n).rev().find(|&j| self.offset(j) <= r).unwrap_or(0)
    }

    fn lift(&self, x: &Q) -> Q {
        let t = x - &self.points[0];
        let n = t.floor();
        let r = &t - &n;
        let j = self.arc_at(x);
        self.anchor + n + &self.cumulative[j] + &self.slopes[j] * (r - self.offset(j))
    }

    fn inverse_lift(&self, y: &Q) -> Q {
        let z = y - self.anchor;
        let n = z.floor();
        let r = &z - &n;
        let arcs = self.slopes.len();
        let j = (0..arcs)
            .rev()
            .find(|&j| self.cumulative[j] <= r)
            .unwrap_or(0);
        &self.points[0] + n + self.offset(j) + (r - &self.cumulative[j]) / &self.slopes[j]
    }
}

/// Composes a word of exact PL / rotation letters into one [`RationalPL`].
pub fn exact_from_docs(letters: &[LetterDoc]) -> Result<RationalPL, MapSpecError> {
    let parse = |r: &Real| parse_rational(&r.0).ok_or_else(|| MapSpecError::BadNumber(r.0.clone()));
    let mut acc = RationalPL::identity();
    for (index, l) in letters.iter().enumerate() {
        let m = match l {
            LetterDoc::Pl {
                breaks,
                slopes,
                anchor,
                ..
            } => {
                let breaks = breaks.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
                let slopes = slopes.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
                RationalPL::new(breaks, slopes, parse(anchor)?).map_err(|e| {
                    MapSpecError::NotExact {
                        index,
                        reason: e.to_string(),
                    }
                })?
            }
            LetterDoc::Rotation { alpha, .. } => RationalPL::rotation(parse(alpha)?),
            LetterDoc::Exp { .. } | LetterDoc::Quad { .. } => {
                return Err(MapSpecError::NotExact {
                    index,
                    reason: "transcendental letter".into(),
                })
            }
        };
        let m = if l.inverse() { m.invert() } else { m };
        acc = acc.compose(&m);
    }
    Ok(acc)
}

/// Exact counterpart of [`crate::builders::build_pl_from_jumps`].
pub fn exact_pl_from_jumps(
    breaks: &[Q],
    jumps: &[Q],
    fixed_point: &Q,
) -> Result<RationalPL, ExactError> {
    if breaks.is_empty() {
        return Ok(RationalPL::identity());
    }
    if breaks.len() != jumps.len() {
        return Err(ExactError::InvalidSlopes(format!(
            "{} breaks, {} jumps",
            breaks.len(),
            jumps.len()
        )));
    }
    let product = jumps.iter().fold(Q::one(), |acc, s| acc * s);
    if !product.is_one() {
        return Err(ExactError::JumpProductNotOne(format_rational(&product)));
    }
    let n = breaks.len() - 1;
    let mut prefix = Vec::with_capacity(n);
    let mut acc = Q::one();
    for s in &jumps[..n] {
        acc *= s;
        prefix.push(acc.clone());
    }
    let mut denom = &breaks[0] + Q::one() - &breaks[n];
    for j in 0..n {
        denom += (&breaks[j + 1] - &breaks[j]) / &prefix[j];
    }
    let lambda0 = denom.recip();
    let mut slopes: Vec<Q> = prefix.iter().map(|p| &lambda0 / p).collect();
    slopes.push(lambda0);
    let base = RationalPL::new(breaks.to_vec(), slopes, breaks[0].clone())?;
    let shift = frac(fixed_point) - base.eval(fixed_point);
    Ok(RationalPL::rotation(shift).compose(&base))
}

/// Maximal connection found by exact iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConnection {
    pub representative: Q,
    /// `a_k` for offsets `0..=N`; 1 where the orbit point is not a break.
    pub jumps: Vec<Q>,
}

impl ExactConnection {
    pub fn a(&self, k: i64) -> Q {
        if k < 0 || k as usize >= self.jumps.len() {
            Q::one()
        } else {
            self.jumps[k as usize].clone()
        }
    }

    pub fn last_offset(&self) -> i64 {
        self.jumps.len() as i64 - 1
    }

    pub fn orbit_product(&self) -> Q {
        self.jumps.iter().fold(Q::one(), |acc, s| acc * s)
    }
}

/// Groups the breaks of `f` by exact forward iteration up to `n_max` steps.
/// Connections are sorted by representative.
pub fn exact_connections(f: &RationalPL, n_max: usize) -> Vec<ExactConnection> {
    let jumps: BTreeMap<Q, Q> = f.jumps().into_iter().collect();
    let index: BTreeMap<&Q, usize> = jumps.keys().enumerate().map(|(i, b)| (b, i)).collect();
    let m = jumps.len();
    // parent[i] = (j, k): break i sits k steps after break j
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; m];
    for (i, b) in jumps.keys().enumerate() {
        let mut x = b.clone();
        for k in 1..=n_max {
            x = f.eval(&x);
            if let Some(&j) = index.get(&x) {
                if j != i && parent[j].is_none() {
                    parent[j] = Some((i, k));
                }
                break;
            }
        }
    }
    let breaks: Vec<&Q> = jumps.keys().collect();
    let mut out = Vec::new();
    for root in (0..m).filter(|&i| parent[i].is_none()) {
        let mut members = vec![(root, 0usize)];
        loop {
            let (last, off) = *members.last().unwrap();
            match (0..m).find(|&j| parent[j].map(|(p, _)| p) == Some(last)) {
                Some(j) => members.push((j, off + parent[j].unwrap().1)),
                None => break,
            }
        }
        let n = members.last().unwrap().1;
        let mut a = vec![Q::one(); n + 1];
        for (idx, off) in &members {
            a[*off] = jumps[breaks[*idx]].clone();
        }
        out.push(ExactConnection {
            representative: breaks[root].clone(),
            jumps: a,
        });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    out
}

/// The per-slot factor of the reduction bookkeeping for one connection:
/// `prod_{j >= k} a_j` if `k > k_i`, else `(prod_{j < k} a_j)^{-1}`.
pub fn exact_sigma_ki(conn: &ExactConnection, k_i: i64, k: i64) -> Q {
    let n = conn.last_offset();
    if k > k_i {
        (k.max(0)..=n).fold(Q::one(), |acc, j| acc * conn.a(j))
    } else {
        (0..k.min(n + 1))
            .fold(Q::one(), |acc, j| acc * conn.a(j))
            .recip()
    }
}

/// Double product of [`exact_sigma_ki`] over all slots and connections.
pub fn exact_sigma(conns: &[ExactConnection], k_vector: &[i64]) -> Q {
    conns.iter().zip(k_vector).fold(Q::one(), |acc, (c, &k_i)| {
        let lo = k_i.min(0);
        let hi = k_i.max(c.last_offset());
        (lo..=hi).fold(acc, |acc, k| acc * exact_sigma_ki(c, k_i, k))
    })
}

/// Exact PL reduction: `L` and `F = L o f o L^{-1}` with all breaks of `F`
/// at `L(f^{k_i}(c_i))`.
#[derive(Debug, Clone)]
pub struct ExactReduction {
    pub conjugator: RationalPL,
    pub reduced: RationalPL,
    pub connections: Vec<ExactConnection>,
    /// `(L(f^{k_i}(c_i)), orbit product of connection i)`.
    pub predicted: Vec<(Q, Q)>,
}

/// Exact rerun of the PL branch of the prescribed-break reduction.
pub fn exact_reduce_case1(
    f: &RationalPL,
    k_vector: &[i64],
    n_max: usize,
) -> Result<ExactReduction, ExactError> {
    let conns = exact_connections(f, n_max);
    if conns.len() != k_vector.len() {
        return Err(ExactError::KVectorLength {
            expected: conns.len(),
            got: k_vector.len(),
        });
    }
    let sigma = exact_sigma(&conns, k_vector);
    if !sigma.is_one() {
        return Err(ExactError::SigmaNotOne(format_rational(&sigma)));
    }
    let f_inv = f.invert();
    let mut slots: BTreeMap<Q, Q> = BTreeMap::new();
    let mut targets = Vec::new();
    for (c, &k_i) in conns.iter().zip(k_vector) {
        let lo = k_i.min(0);
        let hi = k_i.max(c.last_offset());
        let mut x = c.representative.clone();
        for _ in lo..0 {
            x = f_inv.eval(&x);
        }
        for k in lo..=hi {
            if k == k_i {
                targets.push((x.clone(), c.orbit_product()));
            }
            let s = exact_sigma_ki(c, k_i, k);
            if slots.insert(x.clone(), s).is_some() {
                return Err(ExactError::Collision(format_rational(&x)));
            }
            x = f.eval(&x);
        }
    }
    let (pts, jumps): (Vec<Q>, Vec<Q>) = slots.into_iter().unzip();
    let l = exact_pl_from_jumps(&pts, &jumps, &Q::zero())?;
    let reduced = l.compose(f).compose(&l.invert());
    let predicted = targets.into_iter().map(|(x, p)| (l.eval(&x), p)).collect();
    Ok(ExactReduction {
        conjugator: l,
        reduced,
        connections: conns,
        predicted,
    })
}

/// Float-versus-exact comparison of a PL word.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OracleReport {
    pub grid_points: usize,
    pub max_deviation: f64,
    /// `(break, exact jump, float jump)`.
    pub jump_table: Vec<(f64, f64, f64)>,
    pub max_jump_error: f64,
}

/// Compares `eval(w, .)` with exact evaluation of `p` on a uniform grid, and
/// the float jumps of `w` with the exact jumps of `p`.
pub fn oracle_compare(
    w: &MapWord,
    p: &RationalPL,
    grid: usize,
) -> Result<OracleReport, ExactError> {
    if let Some((index, l)) = w
        .letters()
        .iter()
        .enumerate()
        .find(|(_, l)| !l.map.is_piecewise_linear())
    {
        return Err(ExactError::NotPiecewiseLinear {
            index,
            kind: l.map.kind_name(),
        });
    }
    let mut max_deviation: f64 = 0.0;
    for i in 0..grid {
        let xq = q(i as i64, grid as i64);
        let exact = to_f64(&p.eval(&xq));
        let float = w.eval_f64(to_f64(&xq));
        max_deviation = max_deviation.max(circle_distance(exact, float));
    }
    let mut jump_table = Vec::new();
    let mut max_jump_error: f64 = 0.0;
    for (b, s) in p.jumps() {
        let exact = to_f64(&s);
        let float = w.jump(crate::circle::CirclePoint::new(to_f64(&b)));
        max_jump_error = max_jump_error.max(((float - exact) / exact).abs());
        jump_table.push((to_f64(&b), exact, float));
    }
    Ok(OracleReport {
        grid_points: grid,
        max_deviation,
        jump_table,
        max_jump_error,
    })
}

/// Exact two-break PL map: `f(0) = c`, slopes `s1` on `[0, c)` and
/// `(1 - s1 c)/(1 - c)` on `[c, 1)`.
pub fn exact_two_break(c: &Q, s1: &Q) -> Result<RationalPL, ExactError> {
    let s2 = (Q::one() - s1 * c) / (Q::one() - c);
    RationalPL::new(vec![Q::zero(), c.clone()], vec![s1.clone(), s2], c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_arc() -> RationalPL {
        exact_two_break(&q(3, 10), &q(2, 1)).unwrap()
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_rational("3/10"), Some(q(3, 10)));
        assert_eq!(parse_rational("0.3"), Some(q(3, 10)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("2.5e-1"), Some(q(1, 4)));
        assert_eq!(parse_rational("0.5/0.25"), Some(q(2, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn rotations_compose() {
        let r = RationalPL::rotation(q(1, 3)).compose(&RationalPL::rotation(q(1, 4)));
        assert_eq!(r, RationalPL::rotation(q(7, 12)));
        assert_eq!(RationalPL::identity().compose(&two_arc()), two_arc());
        assert_eq!(two_arc().compose(&RationalPL::identity()), two_arc());
    }

    #[test]
    fn composite_jump_multiplies() {
        // u: jump 3 at 0, v: jump 2 at 0, v(0) = 0
        let u = RationalPL::new(vec![q(0, 1), q(1, 2)], vec![q(1, 2), q(3, 2)], q(0, 1)).unwrap();
        let v = RationalPL::new(vec![q(0, 1), q(1, 2)], vec![q(2, 3), q(4, 3)], q(0, 1)).unwrap();
        assert_eq!(u.jump_at(&q(0, 1)), q(3, 1));
        assert_eq!(v.jump_at(&q(0, 1)), q(2, 1));
        assert_eq!(u.compose(&v).jump_at(&q(0, 1)), q(6, 1));
    }

    #[test]
    fn inverse_has_reciprocal_slopes() {
        let f = two_arc();
        let g = f.invert();
        // image breaks: f(0) = 3/10, f(3/10) = 9/10
        assert_eq!(g.breaks(), &[q(3, 10), q(9, 10)]);
        assert_eq!(g.slopes(), &[q(1, 2), q(7, 4)]);
        assert_eq!(g.compose(&f), RationalPL::identity());
        assert_eq!(f.compose(&g), RationalPL::identity());
        assert_eq!(g.invert(), f);
        assert_eq!(RationalPL::identity().invert(), RationalPL::identity());
    }

    #[test]
    fn closure_is_enforced() {
        assert!(matches!(
            RationalPL::new(vec![q(0, 1), q(1, 2)], vec![q(1, 1), q(2, 1)], q(0, 1)),
            Err(ExactError::Closure(_))
        ));
    }

    #[test]
    fn pl_from_jumps_exact() {
        let l = exact_pl_from_jumps(&[q(0, 1), q(1, 2)], &[q(2, 1), q(1, 2)], &q(0, 1)).unwrap();
        assert_eq!(l.slopes(), &[q(2, 3), q(4, 3)]);
        assert_eq!(l.eval(&q(1, 2)), q(1, 3));
        assert!(matches!(
            exact_pl_from_jumps(&[q(0, 1), q(1, 2)], &[q(2, 1), q(1, 3)], &q(0, 1)),
            Err(ExactError::JumpProductNotOne(_))
        ));
    }

    #[test]
    fn connections_of_two_arc() {
        let c = exact_connections(&two_arc(), 64);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].representative, q(0, 1));
        assert_eq!(c[0].jumps, vec![q(2, 7), q(7, 2)]);
        // k = 0: sigma = pi = 7/2
        assert_eq!(exact_sigma(&c, &[0]), q(7, 2));
        assert_eq!(exact_sigma_ki(&c[0], 0, 1), q(7, 2));
        assert_eq!(exact_sigma_ki(&c[0], 0, 0), q(1, 1));
        assert_eq!(exact_sigma_ki(&c[0], 1, 1), q(7, 2));
    }

    #[test]
    fn pow_cap() {
        assert!(two_arc().pow(65).is_err());
        assert_eq!(two_arc().pow(-1).unwrap(), two_arc().invert());
        let f3 = two_arc().pow(3).unwrap();
        assert_eq!(f3.pi_s(), Q::one());
    }

    #[test]
    fn oracle_flags_perturbation() {
        let p = two_arc();
        let exact = oracle_compare(&p.to_word(), &p, 1000).unwrap();
        assert!(exact.max_deviation <= 1e-15);
        let bumped = ElementaryMap::pl(
            vec![0.0, 0.3],
            vec![2.0 + 1e-6, (1.0 - 0.3 * (2.0 + 1e-6)) / 0.7],
            0.3,
        )
        .unwrap();
        let r = oracle_compare(&MapWord::single(bumped), &p, 1000).unwrap();
        assert!(r.max_deviation > 1e-7);
        let e = MapWord::single(ElementaryMap::exponential(2.0, 0.0).unwrap());
        assert!(matches!(
            oracle_compare(&e, &p, 10),
            Err(ExactError::NotPiecewiseLinear {
                index: 0,
                kind: "exp"
            })
        ));
    }
}
