//! Exact computations on finite configurations of the Urysohn sphere.
//!
//! Everything works over exact rationals in `[0, 1]` with addition truncated
//! at 1, and the conventions `sup ∅ = 0`, `inf ∅ = 1`:
//!
//! * [`completion`]: shortest-path completion and consistency of partial
//!   semimetrics.
//! * [`independence`]: `d_max`/`d_min`, Γ-intervals and dividing (equal to
//!   forking) independence.
//! * [`indiscernibles`]: templates of indiscernible sequences, n-cyclicity via
//!   min-plus matrix powers, and the SOP_n / TP_2 witness constructions.
//! * [`extension`]: nonforking extension of types to one new point.
//! * [`stationarity`]: unique extensions and stationary types.
//! * [`oracle`]: brute-force witness constructions that recheck the closed
//!   forms above using nothing but consistency testing.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod completion;
pub mod dist;
pub mod error;
pub mod extension;
pub mod independence;
pub mod indiscernibles;
pub mod oracle;
pub mod space;
pub mod stationarity;

pub use completion::{
    check_consistency, check_m_transitive, is_consistent, m_transitivity_violation, path_completion,
    Consistency, FSequence,
};
pub use dist::Dist;
pub use error::{DistError, Error, Result};
pub use extension::{ExtendedPoint, Extension, ExtensionProblem};
pub use independence::{Certificate, Equation, GammaWitness, Independence, Interval, TypedConfiguration};
pub use indiscernibles::{CyclicityVerdict, MinPlusMatrix, SequenceTemplate};
pub use space::{FiniteMetricSpace, Labels, PartialSemimetric, TriangleViolation};
