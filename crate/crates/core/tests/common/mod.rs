#![allow(dead_code)]

use circle_breaks::exact::{exact_pl_from_jumps, Q};
use circle_breaks::{PlSpec, RationalPL};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sorted, well separated breaks in [0, 1) and log-uniform jumps with product 1.
pub fn random_pl_spec(rng: &mut ChaCha8Rng, max_breaks: usize) -> PlSpec {
    let n = rng.gen_range(1..=max_breaks);
    let breaks = loop {
        let mut b: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        b.sort_by(f64::total_cmp);
        let gaps_ok = b.windows(2).all(|w| w[1] - w[0] > 1e-3) && b[0] + 1.0 - b[n - 1] > 1e-3;
        if gaps_ok {
            break b;
        }
    };
    let mut jumps: Vec<f64> = (0..n.saturating_sub(1))
        .map(|_| 4f64.powf(rng.gen_range(-1.0..1.0)))
        .collect();
    jumps.push(1.0 / jumps.iter().product::<f64>());
    let fixed = rng.gen::<f64>();
    PlSpec::new(breaks, jumps).with_fixed_point(fixed)
}

/// Rational analogue: breaks on a 1/997 grid, jumps `p/q` with small terms.
pub fn random_rational_spec(rng: &mut ChaCha8Rng, max_breaks: usize) -> (Vec<Q>, Vec<Q>, Q) {
    let n = rng.gen_range(1..=max_breaks);
    let mut idx: Vec<i64> = Vec::new();
    while idx.len() < n {
        let k = rng.gen_range(0..997);
        if !idx.contains(&k) {
            idx.push(k);
        }
    }
    idx.sort();
    let breaks: Vec<Q> = idx.iter().map(|&k| q(k, 997)).collect();
    let mut jumps: Vec<Q> = (0..n - 1)
        .map(|_| q(rng.gen_range(1..8), rng.gen_range(1..8)))
        .collect();
    let prod = jumps.iter().fold(q(1, 1), |acc, s| acc * s);
    jumps.push(prod.recip());
    let fixed = q(rng.gen_range(0..1000), 1000);
    (breaks, jumps, fixed)
}

pub fn random_rational_pl(rng: &mut ChaCha8Rng, max_breaks: usize) -> RationalPL {
    let (b, s, p) = random_rational_spec(rng, max_breaks);
    let l = exact_pl_from_jumps(&b, &s, &p).unwrap();
    RationalPL::rotation(q(rng.gen_range(0..1000), 1000)).compose(&l)
}
