//! Break sets, maximal connections and the jump invariants built from them.
//!
//! For a connection `[c, f(c), ..., f^N(c)]` with jumps `a_k = sigma_f(f^k(c))`
//! (and `a_k = 1` outside `0..=N`):
//!
//! * orbit product: `prod_k a_k`
//! * orbit weight: `prod_k a_k^k`; `pi(f)` is the product of these over all
//!   connections
//! * slot factor for a shift `k_i`: `prod_{j >= k} a_j` if `k > k_i`, else
//!   `(prod_{j < k} a_j)^{-1}`; `sigma(f)` multiplies all slot factors.

use log::warn;
use serde::Serialize;

use crate::circle::{CirclePoint, Tolerances};
use crate::error::AnalysisError;
use crate::word::{BreakRecord, MapWord};

/// Default number of iterates searched when matching breaks into orbits.
pub const DEFAULT_N_MAX: usize = 64;
/// Largest supported `|k_i|`.
pub const K_LIMIT: i64 = 32;

const CROSS_CHECK_REL: f64 = 1e-10;

/// One maximal connection: an orbit segment holding every break on its orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionReport {
    /// First break on the segment; offset 0.
    pub representative: CirclePoint,
    /// Offsets `k` whose orbit point is a genuine break.
    pub offsets: Vec<i64>,
    /// `a_k` for `k = 0..=N`, including unit entries between breaks.
    pub jumps: Vec<f64>,
    /// `N`, the offset of the last break.
    pub last_offset: i64,
    /// Product of the jumps over the connection.
    pub orbit_product: f64,
}

impl ConnectionReport {
    /// Builds a report from dense jumps `a_0..=a_N`.
    pub fn from_jumps(representative: CirclePoint, jumps: Vec<f64>, jump_tol: f64) -> Self {
        let offsets = jumps
            .iter()
            .enumerate()
            .filter(|(_, a)| (**a - 1.0).abs() > jump_tol)
            .map(|(k, _)| k as i64)
            .collect();
        let orbit_product = jumps.iter().product();
        ConnectionReport {
            representative,
            offsets,
            last_offset: jumps.len() as i64 - 1,
            jumps,
            orbit_product,
        }
    }

    /// `a_k`, equal to 1 outside `0..=N`.
    pub fn a(&self, k: i64) -> f64 {
        if k < 0 || k > self.last_offset {
            1.0
        } else {
            self.jumps[k as usize]
        }
    }
}

/// All invariants of a map for one choice of shifts `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantSheet {
    /// Product of all jumps.
    pub pi_s: f64,
    /// Product over connections of `prod_k a_k^k`.
    pub pi: f64,
    /// Double product of slot factors.
    pub sigma: f64,
    pub k_vector: Vec<i64>,
    pub d_property: bool,
    pub orbit_products: Vec<f64>,
}

/// Genuine breaks of `f` with their one-sided derivatives.
pub fn jumps_report(f: &MapWord, tol: &Tolerances) -> Vec<BreakRecord> {
    f.genuine_breaks(tol)
}

// union-find with the offset of each node relative to its parent
struct OffsetForest {
    parent: Vec<usize>,
    offset: Vec<i64>,
}

impl OffsetForest {
    fn new(n: usize) -> Self {
        OffsetForest {
            parent: (0..n).collect(),
            offset: vec![0; n],
        }
    }

    // (root, offset of x relative to root)
    fn find(&mut self, x: usize) -> (usize, i64) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, off) = self.find(p);
        self.parent[x] = root;
        self.offset[x] += off;
        (root, self.offset[x])
    }

    /// Records `pos(b) = pos(a) + k`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, k: i64) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        if ra == rb {
            return ob - oa == k;
        }
        self.parent[rb] = ra;
        self.offset[rb] = oa + k - ob;
        true
    }
}

/// Groups the genuine breaks of `f` into maximal connections by forward
/// iteration up to `n_max` steps with point tolerance `tol.point`.
///
/// Connections are sorted by the coordinate of their representative.
pub fn orbit_connections(
    f: &MapWord,
    n_max: usize,
    tol: &Tolerances,
) -> Result<Vec<ConnectionReport>, AnalysisError> {
    let records = jumps_report(f, tol);
    let m = records.len();
    let tau = tol.point;
    let mut forest = OffsetForest::new(m);
    for (i, rec) in records.iter().enumerate() {
        let mut x = rec.point.value();
        'steps: for k in 1..=n_max {
            x = f.eval_f64(x);
            let xp = CirclePoint::new(x);
            for (j, other) in records.iter().enumerate() {
                let d = xp.distance(other.point);
                if d <= tau && j == i {
                    warn!(
                        "break {} returns to itself after {k} steps (periodic orbit)",
                        rec.point
                    );
                    break 'steps;
                } else if d <= tau {
                    let next = f
                        .eval(other.point)
                        .distance(CirclePoint::new(f.eval_f64(x)));
                    if next > 10.0 * tau {
                        return Err(AnalysisError::AmbiguousMatch {
                            from: rec.point.value(),
                            to: other.point.value(),
                            steps: k,
                            divergence: next,
                        });
                    }
                    if !forest.union(i, j, k as i64) {
                        return Err(AnalysisError::AmbiguousMatch {
                            from: rec.point.value(),
                            to: other.point.value(),
                            steps: k,
                            divergence: d,
                        });
                    }
                } else if d <= 10.0 * tau {
                    warn!(
                        "near miss: f^{k}({}) is {d:e} from break {} (tolerance {tau:e})",
                        rec.point, other.point
                    );
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<(usize, i64)>)> = Vec::new();
    for i in 0..m {
        let (root, off) = forest.find(i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push((i, off)),
            None => groups.push((root, vec![(i, off)])),
        }
    }
    let mut out: Vec<ConnectionReport> = groups
        .into_iter()
        .map(|(_, mut members)| {
            members.sort_by_key(|&(_, off)| off);
            let base = members[0].1;
            let n = (members.last().unwrap().1 - base) as usize;
            let mut jumps = vec![1.0; n + 1];
            for &(idx, off) in &members {
                jumps[(off - base) as usize] = records[idx].jump;
            }
            ConnectionReport::from_jumps(records[members[0].0].point, jumps, tol.jump)
        })
        .collect();
    out.sort_by(|a, b| {
        a.representative
            .value()
            .total_cmp(&b.representative.value())
    });
    Ok(out)
}

/// Product of the jumps over one connection.
pub fn orbit_jump_product(conn: &ConnectionReport) -> f64 {
    conn.jumps.iter().product()
}

/// `prod_j a_j^j` over one connection.
pub fn pi_invariant(conn: &ConnectionReport) -> f64 {
    conn.jumps
        .iter()
        .enumerate()
        .map(|(j, a)| a.powi(j as i32))
        .product()
}

/// Slot factor `sigma_{k,i}` for connection `conn` with shift `k_i`.
pub fn sigma_ki(conn: &ConnectionReport, k_i: i64, k: i64) -> f64 {
    let n = conn.last_offset;
    if k > k_i {
        (k.max(0)..=n).map(|j| conn.a(j)).product()
    } else {
        1.0 / (0..k.min(n + 1)).map(|j| conn.a(j)).product::<f64>()
    }
}

pub fn check_k_vector(conns: &[ConnectionReport], k_vector: &[i64]) -> Result<(), AnalysisError> {
    if conns.len() != k_vector.len() {
        return Err(AnalysisError::KVectorLength {
            expected: conns.len(),
            got: k_vector.len(),
        });
    }
    if let Some(&value) = k_vector.iter().find(|k| k.abs() > K_LIMIT) {
        return Err(AnalysisError::KVectorRange {
            value,
            limit: K_LIMIT,
        });
    }
    Ok(())
}

/// `sigma(f)`, computed as the double product of slot factors and,
/// independently, as `prod_i orbit_product_i^{-k_i} * prod_j a_{j,i}^j`.
/// The two must agree to 1e-10 relative error.
pub fn sigma_invariant(conns: &[ConnectionReport], k_vector: &[i64]) -> Result<f64, AnalysisError> {
    check_k_vector(conns, k_vector)?;
    let mut double = 1.0;
    let mut closed = 1.0;
    for (c, &k_i) in conns.iter().zip(k_vector) {
        for k in k_i.min(0)..=k_i.max(c.last_offset) {
            double *= sigma_ki(c, k_i, k);
        }
        closed *= orbit_jump_product(c).powi(-(k_i as i32)) * pi_invariant(c);
    }
    if ((double - closed) / closed).abs() > CROSS_CHECK_REL {
        return Err(AnalysisError::InternalMismatch { double, closed });
    }
    Ok(double)
}

/// (D)-property test plus the full invariant sheet for shifts `k_vector`.
pub fn has_d_property(
    f: &MapWord,
    conns: &[ConnectionReport],
    k_vector: &[i64],
    tol: &Tolerances,
) -> Result<(bool, InvariantSheet), AnalysisError> {
    let orbit_products: Vec<f64> = conns.iter().map(orbit_jump_product).collect();
    let d_property = orbit_products.iter().all(|p| (p - 1.0).abs() <= tol.jump);
    let pi_s = jumps_report(f, tol).iter().map(|r| r.jump).product();
    let pi = conns.iter().map(pi_invariant).product();
    let sigma = sigma_invariant(conns, k_vector)?;
    Ok((
        d_property,
        InvariantSheet {
            pi_s,
            pi,
            sigma,
            k_vector: k_vector.to_vec(),
            d_property,
            orbit_products,
        },
    ))
}

/// Everything the analysis reports for one map.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub breaks: Vec<BreakRecord>,
    pub connections: Vec<ConnectionReport>,
    pub invariants: InvariantSheet,
}

/// Breaks, connections and invariants with all shifts zero.
pub fn analyze(f: &MapWord, n_max: usize, tol: &Tolerances) -> Result<Analysis, AnalysisError> {
    let breaks = jumps_report(f, tol);
    let connections = orbit_connections(f, n_max, tol)?;
    let k = vec![0; connections.len()];
    let (_, invariants) = has_d_property(f, &connections, &k, tol)?;
    Ok(Analysis {
        breaks,
        connections,
        invariants,
    })
}
