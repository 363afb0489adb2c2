//! Fixtures shared by the benchmarks.

use circle_breaks::builders::two_break_pl;
use circle_breaks::exact::{exact_two_break, Q};
use circle_breaks::suite::{one_orbit_three_breaks, rational_instances, two_connection_instance};
use circle_breaks::{MapWord, RationalPL};

pub fn two_break_map() -> MapWord {
    MapWord::single(two_break_pl(0.3, 2.0).expect("valid parameters"))
}

pub fn one_orbit_map() -> MapWord {
    one_orbit_three_breaks().expect("valid instance").f
}

pub fn two_connection_map() -> MapWord {
    two_connection_instance().expect("valid instance").f
}

/// `(name, map, shifts)` for the exact PL instances.
pub fn rational_maps() -> Vec<(&'static str, RationalPL, Vec<i64>)> {
    rational_instances()
}

pub fn rational_two_break() -> RationalPL {
    let q = |n: i64, d: i64| Q::new(n.into(), d.into());
    exact_two_break(&q(3, 10), &q(2, 1)).expect("valid parameters")
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64 / n as f64).collect()
}
