//! Break-point algebra for class-P circle homeomorphisms.
//!
//! A circle map is represented as a [`MapWord`]: a finite composition of
//! elementary letters (piecewise-linear maps, rotations, and rotated copies of
//! a one-break quadratic or exponential map). On top of that representation the
//! crate computes break points and their jumps, groups breaks into orbit
//! connections, evaluates the orbit invariants, and builds explicit PL / PQ / PE
//! conjugators that push every break of a map to prescribed orbit positions.
//!
//! The [`exact`] module mirrors the PL-only part of the machinery in rational
//! arithmetic and serves as the reference for the floating-point pipeline.

pub mod builders;
pub mod circle;
pub mod diagnostics;
pub mod elementary;
pub mod error;
pub mod exact;
pub mod jumps;
pub mod mapspec;
pub mod reduction;
pub mod rotnum;
pub mod suite;
pub mod word;

pub use builders::{PlSpec, SynthesizedInstance};
pub use circle::{CirclePoint, Tolerances};
pub use elementary::{ElementaryMap, PlMap};
pub use error::{AnalysisError, BuildError, ExactError, MapSpecError, ReductionError};
pub use exact::RationalPL;
pub use jumps::{ConnectionReport, InvariantSheet};
pub use reduction::{ConjugatorFamily, ReductionConfig, ReductionResult};
pub use rotnum::RotationEstimate;
pub use word::{BreakRecord, Letter, MapWord};
