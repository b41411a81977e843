//! Strongly convergent fixed-point iteration in finite-dimensional normed
//! spaces.
//!
//! The crate provides, from the bottom up:
//!
//! * [`geometry`] — Euclidean and p-norm space descriptions with the
//!   duality map `J`, its inverse, and the Lyapunov functional
//!   `φ(x, y) = ‖x‖² − 2⟨x, Jy⟩ + ‖y‖²` that generalizes the squared
//!   distance beyond inner-product spaces.
//! * [`sets`] — closed convex sets (boxes, Euclidean balls, half-spaces,
//!   intersections) with metric and generalized (Lyapunov-minimizing)
//!   projections, including dual-coordinate projectors for one and two
//!   half-spaces and a derivative-free oracle projector for testing.
//! * [`mappings`] — operators with certified structure: rotations,
//!   contractions, projections, averaged maps, and the shift-and-square
//!   map whose powers are Lipschitz with constants `k_n ↘ 1`.
//! * [`schedule`] — step-size rules `α_n`, `β_n`.
//! * [`solvers`] — the iterations themselves: plain averaging schemes
//!   (`mann`, `ishikawa`) and projection-constrained schemes
//!   (`nakajo_takahashi`, `kim_xu`, `myx`, `hybrid_hilbert`,
//!   `hybrid_banach`) that project the start point onto the intersection
//!   of a per-step constraint half-space with an anchor half-space,
//!   which upgrades weak convergence to strong convergence.  Post-hoc
//!   invariant checks live in [`solvers::diagnose`].
//!
//! All numerics are generic over the scalar type through [`scalar::Real`]
//! (implemented for `f32` and `f64`); the `*64` aliases at the crate root
//! fix the common double-precision choice.
//!
//! # Example
//!
//! Projecting a start point toward the fixed-point set of a box
//! projection with the two-stage hybrid scheme:
//!
//! ```
//! use cqfix_core::{
//!     solvers::{run, Scheme, SolverConfig},
//!     ConvexSet64, MappingSpec64, SpaceGeometry64, Vector64,
//! };
//!
//! let geometry = SpaceGeometry64::euclidean(2)?;
//! let target = ConvexSet64::hyper_box(
//!     Vector64::from_slice(&[-1.0, -1.0])?,
//!     Vector64::from_slice(&[1.0, 1.0])?,
//! )?;
//! let mapping = MappingSpec64::metric_projection(target, geometry)?;
//! let config = SolverConfig::new(Scheme::NakajoTakahashi, Vector64::from_slice(&[3.0, 4.0])?);
//! let trace = run(&mapping, &config)?;
//! assert!(trace.final_distance() < 1e-6);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod geometry;
pub mod mappings;
pub mod scalar;
pub mod schedule;
pub mod sets;
pub mod solvers;
pub mod tolerances;

pub use geometry::{pairing, DualVector, GeometryError, LyapunovValue, SpaceGeometry, Vector};
pub use mappings::{FixedSetRef, KSchedule, MappingError, MappingKind, MappingSpec};
pub use scalar::Real;
pub use schedule::{Schedule, StepRule};
pub use sets::{ConvexSet, DualHalfSpace, ProjectionResult, SetError};
pub use solvers::{
    diagnose, run, validate, IterationRecord, IterationTrace, Scheme, SolverConfig, SolverError,
    Termination, TraceDiagnostics,
};

/// Double-precision alias for [`Vector`].
pub type Vector64 = Vector<f64>;
/// Double-precision alias for [`DualVector`].
pub type DualVector64 = DualVector<f64>;
/// Double-precision alias for [`SpaceGeometry`].
pub type SpaceGeometry64 = SpaceGeometry<f64>;
/// Double-precision alias for [`ConvexSet`].
pub type ConvexSet64 = ConvexSet<f64>;
/// Double-precision alias for [`DualHalfSpace`].
pub type DualHalfSpace64 = DualHalfSpace<f64>;
/// Double-precision alias for [`MappingSpec`].
pub type MappingSpec64 = MappingSpec<f64>;
/// Double-precision alias for [`KSchedule`].
pub type KSchedule64 = KSchedule<f64>;
/// Double-precision alias for [`Schedule`].
pub type Schedule64 = Schedule<f64>;
/// Double-precision alias for [`SolverConfig`].
pub type SolverConfig64 = SolverConfig<f64>;
/// Double-precision alias for [`IterationTrace`].
pub type IterationTrace64 = IterationTrace<f64>;
