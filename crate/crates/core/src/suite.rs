//! Bundled test maps with known answers.
//!
//! Most maps with all orbit products 1 are built as `h0^{-1} o F0 o h0` with
//! `F0` free of breaks, so a conjugator to a diffeomorphism is known to exist.
//! The others have at least one orbit whose jump product is not 1 and an
//! irrational-looking rotation number, so the breaks of their iterates keep
//! multiplying.

use crate::builders::{
    build_pl_from_jumps, exponential_elementary, quadratic_elementary, rotation,
    synthesize_instance, two_break_exponential, two_break_pl, PlSpec, SynthesizedInstance,
};
use crate::elementary::ElementaryMap;
use crate::error::BuildError;
use crate::exact::{exact_pl_from_jumps, RationalPL, Q};
use crate::word::{Letter, MapWord};

pub fn golden_mean() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

pub fn silver_shift() -> f64 {
    2f64.sqrt() - 1.0
}

#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub name: &'static str,
    pub f: MapWord,
    /// Every orbit's jump product is 1.
    pub d_property: bool,
    /// The orbit weight is 1, so a PL conjugator suffices.
    pub pl_suffices: bool,
    /// Shifts used by the prescribed-position pipeline.
    pub k_vector: Option<Vec<i64>>,
    pub provenance: Option<SynthesizedInstance>,
}

impl SuiteInstance {
    fn plain(name: &'static str, f: MapWord, d_property: bool, pl_suffices: bool) -> Self {
        SuiteInstance {
            name,
            f,
            d_property,
            pl_suffices,
            k_vector: None,
            provenance: None,
        }
    }

    fn golden(name: &'static str, inst: SynthesizedInstance, pl_suffices: bool) -> Self {
        SuiteInstance {
            name,
            f: inst.f.clone(),
            d_property: true,
            pl_suffices,
            k_vector: None,
            provenance: Some(inst),
        }
    }

    fn with_k(mut self, k: Vec<i64>) -> Self {
        self.k_vector = Some(k);
        self
    }
}

/// `H o R_alpha o H^{-1}` with `H` the PL map with the given breaks and jumps.
pub fn pl_rotation_conjugate(
    breaks: Vec<f64>,
    jumps: Vec<f64>,
    alpha: f64,
) -> Result<SynthesizedInstance, BuildError> {
    let h = MapWord::single(build_pl_from_jumps(&PlSpec::new(breaks, jumps))?);
    synthesize_instance(&h.invert(), &rotation(alpha))
}

/// Three breaks on one orbit with jumps `(2, 1/4, 2)`.
pub fn one_orbit_three_breaks() -> Result<SynthesizedInstance, BuildError> {
    let (a, d) = (silver_shift(), 0.1);
    pl_rotation_conjugate(vec![d + a, d + 2.0 * a], vec![2.0, 0.5], a)
}

/// Two connections of three breaks each, both with orbit product 1.
pub fn two_connection_instance() -> Result<SynthesizedInstance, BuildError> {
    let a = silver_shift();
    let (y1, y3) = (0.1, 0.55);
    pl_rotation_conjugate(
        vec![y1, y1 + a, y3, y3 + a],
        vec![2.0, 3.0, 0.5, 1.0 / 3.0],
        a,
    )
}

/// Break-free map that is not a rotation: `R_alpha o E o Q` with `E`, `Q`
/// one-break maps at `c` whose jumps cancel.
pub fn smooth_nonrotation(alpha: f64, jump: f64, c: f64) -> Result<MapWord, BuildError> {
    Ok(MapWord::from_letters(vec![
        Letter::forward(ElementaryMap::rotation(alpha)),
        Letter::forward(exponential_elementary(jump, c)?),
        Letter::forward(quadratic_elementary(1.0 / jump, c)?),
    ]))
}

/// Maps with all orbit products 1.
pub fn d_instances() -> Result<Vec<SuiteInstance>, BuildError> {
    let g = golden_mean();
    let s = silver_shift();
    let pl = |c, s1| two_break_pl(c, s1).map(MapWord::single);
    let exp_h0 = MapWord::single(exponential_elementary(2.0, 0.4)?);
    let quad_h0 = MapWord::single(quadratic_elementary(3.0, 0.7)?);
    let pl_h0 = MapWord::single(build_pl_from_jumps(&PlSpec::new(
        vec![0.2, 0.6],
        vec![3.0, 1.0 / 3.0],
    ))?);
    let mixed_h0 = MapWord::from_letters(vec![
        Letter::forward(build_pl_from_jumps(&PlSpec::new(
            vec![0.15, 0.5, 0.8],
            vec![2.0, 0.25, 2.0],
        ))?),
        Letter::forward(exponential_elementary(2.0, 0.25)?),
    ]);
    Ok(vec![
        SuiteInstance::plain("two_break_pl(0.3,2)", pl(0.3, 2.0)?, true, false),
        SuiteInstance::plain("two_break_pl(0.5,1.5)", pl(0.5, 1.5)?, true, false),
        SuiteInstance::plain("two_break_pl(0.2,3)", pl(0.2, 3.0)?, true, false),
        SuiteInstance::plain(
            "two_break_exp(0.35,2,1/2)",
            two_break_exponential(0.35, 2.0, 0.5)?,
            true,
            false,
        ),
        SuiteInstance::golden("one_orbit(2,1/4,2)", one_orbit_three_breaks()?, true),
        SuiteInstance::golden("two_connections", two_connection_instance()?, true)
            .with_k(vec![1, -1]),
        SuiteInstance::golden(
            "exp_conjugate_rotation",
            synthesize_instance(&exp_h0, &rotation(s))?,
            false,
        ),
        SuiteInstance::golden(
            "quad_conjugate_rotation",
            synthesize_instance(&quad_h0, &rotation(g))?,
            false,
        ),
        SuiteInstance::golden(
            "pl_conjugate_smooth",
            synthesize_instance(&pl_h0, &smooth_nonrotation(g, 1.5, 0.3)?)?,
            true,
        ),
        SuiteInstance::golden(
            "pe_conjugate_smooth",
            synthesize_instance(&mixed_h0, &smooth_nonrotation(s, 2.5, 0.6)?)?,
            false,
        ),
    ])
}

/// Maps with an orbit whose jump product is not 1.
pub fn non_d_instances() -> Result<Vec<SuiteInstance>, BuildError> {
    let g = golden_mean();
    let s = silver_shift();
    let rot_then = |alpha: f64, m: ElementaryMap| {
        MapWord::from_letters(vec![
            Letter::forward(ElementaryMap::rotation(alpha)),
            Letter::forward(m),
        ])
    };
    let pl_pair = build_pl_from_jumps(&PlSpec::new(vec![0.1, 0.5], vec![2.0, 0.5]))?;
    let pl_triple = build_pl_from_jumps(&PlSpec::new(
        vec![0.05, 0.3, 0.7],
        vec![1.5, 2.0, 1.0 / 3.0],
    ))?;
    Ok(vec![
        SuiteInstance::plain(
            "rot_exp(2)",
            rot_then(g, exponential_elementary(2.0, 0.0)?),
            false,
            false,
        ),
        SuiteInstance::plain(
            "rot_quad(3)",
            rot_then(s, quadratic_elementary(3.0, 0.5)?),
            false,
            false,
        ),
        SuiteInstance::plain("rot_pl_pair", rot_then(s, pl_pair), false, false),
        SuiteInstance::plain("rot_pl_triple", rot_then(g, pl_triple), false, false),
        SuiteInstance::plain(
            "two_break_exp(0.35,2,3)",
            two_break_exponential(0.35, 2.0, 3.0)?,
            false,
            false,
        ),
    ])
}

/// The one-break exponential map with jump 2 at 0; it has a fixed point.
pub fn single_exponential() -> Result<MapWord, BuildError> {
    Ok(MapWord::single(exponential_elementary(2.0, 0.0)?))
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `H o R_alpha o H^{-1}` in exact arithmetic, `H` fixing its first break.
pub fn exact_rotation_conjugate(breaks: &[Q], jumps: &[Q], alpha: &Q) -> RationalPL {
    let h = exact_pl_from_jumps(breaks, jumps, &breaks[0]).expect("jumps multiply to 1");
    h.compose(&RationalPL::rotation(alpha.clone()))
        .compose(&h.invert())
}

/// Rational PL maps for the PL branch, with their shifts. The rotation by
/// 41/99 has period 99, longer than the default orbit search.
pub fn rational_instances() -> Vec<(&'static str, RationalPL, Vec<i64>)> {
    let alpha = q(41, 99);
    let d = q(1, 10);
    let one_orbit = exact_rotation_conjugate(
        &[&d + &alpha, &d + &alpha + &alpha],
        &[q(2, 1), q(1, 2)],
        &alpha,
    );
    let (y1, y3) = (q(1, 10), q(11, 20));
    let two_conn = exact_rotation_conjugate(
        &[y1.clone(), &y1 + &alpha, y3.clone(), &y3 + &alpha],
        &[q(2, 1), q(3, 1), q(1, 2), q(1, 3)],
        &alpha,
    );
    let pair = exact_pl_from_jumps(&[q(1, 10), q(1, 2)], &[q(2, 1), q(1, 2)], &q(1, 10))
        .expect("jumps multiply to 1");
    let rotated_pair = RationalPL::rotation(q(29, 70)).compose(&pair);
    vec![
        ("one_orbit_rational", one_orbit, vec![0]),
        ("two_connections_rational", two_conn, vec![1, -1]),
        ("rotated_pair_rational", rotated_pair, vec![1, 1]),
    ]
}

pub fn all_instances() -> Result<Vec<SuiteInstance>, BuildError> {
    let mut v = d_instances()?;
    v.extend(non_d_instances()?);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Tolerances;
    use crate::jumps::analyze;

    #[test]
    fn suite_flags_match_analysis() {
        let tol = Tolerances::default();
        for inst in all_instances().unwrap() {
            let a = analyze(&inst.f, 64, &tol).unwrap();
            assert_eq!(a.invariants.d_property, inst.d_property, "{}", inst.name);
            if inst.d_property {
                let pl = (a.invariants.pi - 1.0).abs() <= 1e-8;
                assert_eq!(
                    pl, inst.pl_suffices,
                    "{}: pi = {}",
                    inst.name, a.invariants.pi
                );
            }
        }
    }

    #[test]
    fn one_orbit_jumps() {
        let inst = one_orbit_three_breaks().unwrap();
        let a = analyze(&inst.f, 64, &Tolerances::default()).unwrap();
        assert_eq!(a.connections.len(), 1);
        let j = &a.connections[0].jumps;
        assert_eq!(j.len(), 3);
        for (x, e) in j.iter().zip([2.0, 0.25, 2.0]) {
            assert!((x - e).abs() < 1e-9, "{j:?}");
        }
    }

    #[test]
    fn smooth_nonrotation_has_no_breaks() {
        let f = smooth_nonrotation(0.3, 1.5, 0.3).unwrap();
        assert!(f.genuine_breaks(&Tolerances::default()).is_empty());
        // not a rotation
        let d1 = f.eval_f64(0.1) - 0.1;
        let d2 = f.eval_f64(0.8) - 0.8;
        assert!((d1 - d2).abs() > 1e-3);
    }
}
