//! Closed convex sets and projections onto them.
//!
//! The set vocabulary is deliberately small — boxes, Euclidean balls,
//! half-spaces described by dual-space normals, and finite intersections —
//! because that is exactly what the projection-based solvers construct.
//! Sets are geometry-free data; which *projection* a set induces depends on
//! the [`SpaceGeometry`] the caller supplies:
//!
//! * [`metric_project`] minimizes the Euclidean distance (closed forms plus
//!   Dykstra's method for intersections);
//! * [`generalized_project`] minimizes the Lyapunov functional
//!   `φ(·, x)` of a possibly non-Euclidean geometry (dual root solves for
//!   half-spaces, projected gradient otherwise);
//! * [`brute_force_project`] is a slow, structurally independent oracle
//!   used to validate the fast paths in tests.
//!
//! A `Ball` is always the Euclidean ball `{v : ‖v − c‖₂ ≤ r}`, whatever
//! geometry is used to project onto it.

mod dual;
mod gradient;
mod metric;
mod oracle;

pub use dual::{project_halfspace_dual, project_two_halfspaces_dual};
pub use gradient::generalized_project;
pub use metric::metric_project;
pub use oracle::{brute_force_project, sample_point};

use crate::geometry::{pairing, DualVector, GeometryError, Vector};
use crate::scalar::Real;
use crate::tolerances as tol;

/// Error type for set construction and projection.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SetError {
    /// An underlying geometry operation failed (dimension mismatch etc.).
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// Box bounds must satisfy `lower ≤ upper` coordinate-wise.
    #[error("box bounds must satisfy lower <= upper in every coordinate")]
    InvalidBox,
    /// Ball radius must be positive and finite.
    #[error("ball radius must be positive and finite")]
    InvalidRadius,
    /// Intersections must have at least one member.
    #[error("intersection must contain at least one member set")]
    EmptyIntersection,
    /// The constraint system has no feasible point.
    #[error("projection target is empty: the constraints are infeasible")]
    Infeasible,
    /// An iterative projection subproblem ran out of iterations.
    #[error("projection subproblem did not converge within {iterations} iterations (residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },
    /// A root solve inside the dual projection failed structurally.
    #[error("dual root solve failed: {0}")]
    RootSolve(String),
}

/// A half-space `{v : ⟨v, a⟩ ≤ b}` with the normal given in dual
/// coordinates.
///
/// Degenerate normals (dual norm `≤ 1e-13`) are admitted and interpreted
/// at use sites: the half-space is the whole space when `b ≥ −1e-12` and
/// empty otherwise.  Solvers rely on this to express "no constraint yet".
#[derive(Debug, Clone, PartialEq)]
pub struct DualHalfSpace<R: Real> {
    /// Outward normal, in dual coordinates.
    pub a: DualVector<R>,
    /// Offset: the half-space is `⟨v, a⟩ ≤ b`.
    pub b: R,
}

impl<R: Real> DualHalfSpace<R> {
    /// Builds the half-space `{v : ⟨v, a⟩ ≤ b}`.
    pub fn new(a: DualVector<R>, b: R) -> Self {
        Self { a, b }
    }

    /// The whole space of dimension `d`, encoded with a zero normal.
    pub fn full_space(d: usize) -> Self {
        Self { a: DualVector::zeros(d), b: R::zero() }
    }

    /// Signed slack `b − ⟨v, a⟩` (nonnegative inside the half-space).
    pub fn slack(&self, v: &Vector<R>) -> Result<R, GeometryError> {
        Ok(self.b - pairing(v, &self.a)?)
    }

    /// Whether the normal is structurally zero (dual-norm below the
    /// degeneracy threshold, measured in Euclidean coordinates).
    pub fn is_degenerate(&self) -> bool {
        self.a.euclidean_norm() <= R::of(tol::DEGENERATE_NORMAL)
    }

    pub(crate) fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// A closed convex subset of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet<R: Real> {
    /// Axis-aligned box `{v : lᵢ ≤ vᵢ ≤ uᵢ}`.
    Box { lower: Vector<R>, upper: Vector<R> },
    /// Euclidean ball `{v : ‖v − center‖₂ ≤ radius}` (in every geometry).
    Ball { center: Vector<R>, radius: R },
    /// Half-space with dual-coordinate normal.
    HalfSpace(DualHalfSpace<R>),
    /// Finite intersection of members (stored flattened).
    Intersection(Vec<ConvexSet<R>>),
}

impl<R: Real> ConvexSet<R> {
    /// Axis-aligned box with validated bounds.
    pub fn hyper_box(lower: Vector<R>, upper: Vector<R>) -> Result<Self, SetError> {
        if lower.dim() != upper.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: lower.dim(),
                found: upper.dim(),
            }
            .into());
        }
        if lower.coords().iter().zip(upper.coords()).any(|(l, u)| l > u) {
            return Err(SetError::InvalidBox);
        }
        Ok(ConvexSet::Box { lower, upper })
    }

    /// Euclidean ball with validated radius.
    pub fn ball(center: Vector<R>, radius: R) -> Result<Self, SetError> {
        if !(radius.is_finite() && radius > R::zero()) {
            return Err(SetError::InvalidRadius);
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    /// Half-space `{v : ⟨v, a⟩ ≤ b}`.
    pub fn half_space(a: DualVector<R>, b: R) -> Self {
        ConvexSet::HalfSpace(DualHalfSpace::new(a, b))
    }

    /// Intersection of `members`; nested intersections are flattened.
    pub fn intersection(members: Vec<ConvexSet<R>>) -> Result<Self, SetError> {
        if members.is_empty() {
            return Err(SetError::EmptyIntersection);
        }
        let mut flat = Vec::with_capacity(members.len());
        for m in members {
            match m {
                ConvexSet::Intersection(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        let dim = flat[0].dim();
        for m in &flat {
            if m.dim() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, found: m.dim() }.into());
            }
        }
        Ok(ConvexSet::Intersection(flat))
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Box { lower, .. } => lower.dim(),
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::HalfSpace(h) => h.dim(),
            ConvexSet::Intersection(members) => members[0].dim(),
        }
    }

    /// Membership test with additive tolerance `tol` on each defining
    /// inequality.
    pub fn contains(&self, x: &Vector<R>, tol: R) -> Result<bool, SetError> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found: x.dim() }.into());
        }
        Ok(match self {
            ConvexSet::Box { lower, upper } => x
                .coords()
                .iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .all(|(&v, (&l, &u))| v >= l - tol && v <= u + tol),
            ConvexSet::Ball { center, radius } => {
                x.sub(center)?.euclidean_norm() <= *radius + tol
            }
            ConvexSet::HalfSpace(h) => h.slack(x)? >= -tol,
            ConvexSet::Intersection(members) => {
                for m in members {
                    if !m.contains(x, tol)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    /// Largest violation of the defining inequalities at `x` (zero when
    /// `x` is feasible).  Used by diagnostics and infeasibility detection.
    pub fn violation(&self, x: &Vector<R>) -> Result<R, SetError> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found: x.dim() }.into());
        }
        Ok(match self {
            ConvexSet::Box { lower, upper } => x
                .coords()
                .iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .map(|(&v, (&l, &u))| (l - v).max(v - u).max(R::zero()))
                .fold(R::zero(), R::max),
            ConvexSet::Ball { center, radius } => {
                (x.sub(center)?.euclidean_norm() - *radius).max(R::zero())
            }
            ConvexSet::HalfSpace(h) => (-h.slack(x)?).max(R::zero()),
            ConvexSet::Intersection(members) => {
                let mut worst = R::zero();
                for m in members {
                    worst = worst.max(m.violation(x)?);
                }
                worst
            }
        })
    }
}

/// Result of a projection: the point plus solver-side diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult<R: Real> {
    /// The projected point.
    pub point: Vector<R>,
    /// KKT multipliers of the active constraints, where the method exposes
    /// them (half-space paths); empty otherwise.
    pub multipliers: Vec<R>,
    /// Final residual of the inner solve (root residual, cycle change, or
    /// gradient-mapping norm; `0` for closed forms).
    pub residual: R,
    /// Iterations spent in the inner solve (`0` for closed forms).
    pub inner_iterations: usize,
}

impl<R: Real> ProjectionResult<R> {
    pub(crate) fn closed_form(point: Vector<R>) -> Self {
        Self { point, multipliers: Vec::new(), residual: R::zero(), inner_iterations: 0 }
    }
}
