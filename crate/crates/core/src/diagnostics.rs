//! Break-count growth of iterates and orbit histograms.
//!
//! The number of breaks of `f^n` stays bounded exactly when every orbit's jump
//! product is 1, which [`break_growth`] checks numerically. The histogram's
//! top-decile mass is a home-grown concentration statistic: it carries no
//! quantitative meaning beyond "larger is more concentrated".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle::{CirclePoint, Tolerances};
use crate::word::MapWord;

/// Largest iterate examined by [`break_growth`].
pub const MAX_GROWTH_ITERATE: usize = 64;
/// Default histogram start point.
pub const DEFAULT_START: f64 = 0.173;
/// Iterates discarded before binning.
pub const BURN_IN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub breaks: usize,
    pub max_log_jump: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn counts(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.breaks).collect()
    }

    /// True when the count no longer changes from iterate `from` on.
    pub fn is_constant_from(&self, from: usize) -> bool {
        let tail: Vec<usize> = self
            .rows
            .iter()
            .filter(|r| r.n >= from)
            .map(|r| r.breaks)
            .collect();
        tail.windows(2).all(|w| w[0] == w[1])
    }

    /// True when the count rises at least once in every window of `step` iterates.
    pub fn grows_every(&self, step: usize) -> bool {
        let counts = self.counts();
        let step = step.max(1);
        counts.len() > step && counts.windows(step + 1).all(|w| w[step] > w[0])
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "breaks", "max_log_jump"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.breaks.to_string(),
                r.max_log_jump.to_string(),
            ])?;
        }
        into_string(w)
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Genuine break counts of `f^n` for `n = 1..=n_max` (capped at 64).
pub fn break_growth(f: &MapWord, n_max: usize, tol: &Tolerances) -> GrowthTable {
    let rows = (1..=n_max.min(MAX_GROWTH_ITERATE))
        .map(|n| {
            let records = f.iterate(n as i64).genuine_breaks(tol);
            GrowthRow {
                n,
                breaks: records.len(),
                max_log_jump: records
                    .iter()
                    .map(|r| r.jump.ln().abs())
                    .fold(0.0, f64::max),
            }
        })
        .collect();
    GrowthTable { rows }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub start: f64,
    pub n_points: usize,
    pub burn_in: usize,
    /// Mass per bin; bin `j` covers `[j / bins, (j + 1) / bins)`.
    pub masses: Vec<f64>,
    /// Total mass of the heaviest tenth of the bins.
    pub top_decile_mass: f64,
}

impl Histogram {
    pub fn bin_left(&self, j: usize) -> f64 {
        j as f64 / self.masses.len() as f64
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["bin_left", "mass"])?;
        for (j, m) in self.masses.iter().enumerate() {
            w.write_record([self.bin_left(j).to_string(), m.to_string()])?;
        }
        into_string(w)
    }
}

/// Bins `n_points` orbit points of `f` after a burn-in. The start is 0.173,
/// or drawn from a ChaCha stream when `seed` is given.
pub fn invariant_measure_histogram(
    f: &MapWord,
    n_points: usize,
    bins: usize,
    seed: Option<u64>,
) -> Histogram {
    let bins = bins.max(1);
    let start = match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s).gen::<f64>(),
        None => DEFAULT_START,
    };
    let mut x = start;
    for _ in 0..BURN_IN {
        x = f.eval_f64(x);
    }
    let mut counts = vec![0u64; bins];
    for _ in 0..n_points {
        x = f.eval_f64(x);
        let j = ((x * bins as f64) as usize).min(bins - 1);
        counts[j] += 1;
    }
    let total = n_points.max(1) as f64;
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    Histogram {
        start,
        n_points,
        burn_in: BURN_IN,
        top_decile_mass: top_decile(&masses),
        masses,
    }
}

fn top_decile(masses: &[f64]) -> f64 {
    let mut sorted = masses.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let take = masses.len().div_ceil(10);
    sorted[..take].iter().sum()
}

/// Largest `|jump - 1|` over every candidate break of `f`.
pub fn max_jump_deviation(f: &MapWord, tol: &Tolerances) -> f64 {
    f.candidate_breaks_with(tol.point)
        .into_iter()
        .map(|x: CirclePoint| (f.jump_with(x, tol.point) - 1.0).abs())
        .fold(0.0, f64::max)
}
