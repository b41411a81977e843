//! Iterative fixed-point solvers.
//!
//! Two families are provided:
//!
//! * **Averaging iterations** (`mann`, `ishikawa`): primal convex
//!   combinations of the current iterate with operator values.
//! * **Projection-constrained iterations** (`nakajo_takahashi`, `kim_xu`,
//!   `myx`, `hybrid_hilbert`, `hybrid_banach`): each step intersects a
//!   constraint half-space `C_n` (which contains the fixed-point set by the
//!   operator's certified inequality) with an anchor half-space `Q_n`
//!   (which keeps the start point's projection well-defined), then takes
//!   `x_{n+1}` as the projection of the *start point* onto `C_n ∩ Q_n`.
//!   This converts weakly convergent averaging schemes into strongly
//!   convergent ones and is the behavior the acceptance suite pins down.
//!
//! All half-space rearrangements used for `C_n` and `Q_n` are exposed as
//! free builders so that tests can verify them against direct membership
//! evaluation of the defining inequalities.

mod classic;
mod cq;
mod diagnostics;

pub use diagnostics::{diagnose, TraceDiagnostics};

use crate::geometry::{pairing, DualVector, GeometryError, SpaceGeometry, Vector};
use crate::mappings::{FixedSetRef, MappingError, MappingSpec};
use crate::scalar::Real;
use crate::schedule::{Schedule, StepRule};
use crate::sets::{ConvexSet, DualHalfSpace, SetError};
use crate::tolerances as tol;

/// The iteration schemes, identified by their snake_case ids in configs
/// and CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `x_{n+1} = α_n x_n + (1−α_n) T x_n`.
    Mann,
    /// Two-stage averaging: `z_n = β_n x_n + (1−β_n) T x_n`,
    /// `x_{n+1} = α_n x_n + (1−α_n) T z_n`.
    Ishikawa,
    /// One-stage projection-constrained scheme for nonexpansive maps in
    /// inner-product geometry.
    NakajoTakahashi,
    /// One-stage scheme with operator powers and the slack term
    /// `θ_n = (1−α_n)(k_n²−1)·diam(C)²` for asymptotically nonexpansive
    /// maps (inner-product geometry, bounded domain).
    KimXu,
    /// Two-stage projection-constrained scheme for nonexpansive maps in
    /// inner-product geometry (`C_n` mixes three squared distances).
    Myx,
    /// Two-stage scheme with operator powers for asymptotically
    /// nonexpansive maps in inner-product geometry; `C_n` carries the
    /// norm-square bound `M` of the domain.
    HybridHilbert,
    /// The same two-stage scheme with all averaging performed in dual
    /// coordinates, valid in any admitted geometry for relatively
    /// asymptotically nonexpansive maps.
    HybridBanach,
}

impl Scheme {
    /// Stable string id (used by configs, CSV, and error messages).
    pub fn id(&self) -> &'static str {
        match self {
            Scheme::Mann => "mann",
            Scheme::Ishikawa => "ishikawa",
            Scheme::NakajoTakahashi => "nakajo_takahashi",
            Scheme::KimXu => "kim_xu",
            Scheme::Myx => "myx",
            Scheme::HybridHilbert => "hybrid_hilbert",
            Scheme::HybridBanach => "hybrid_banach",
        }
    }

    /// Parses a scheme id.
    pub fn from_id(id: &str) -> Option<Scheme> {
        Scheme::all().into_iter().find(|s| s.id() == id)
    }

    /// All schemes in canonical order.
    pub fn all() -> [Scheme; 7] {
        [
            Scheme::Mann,
            Scheme::Ishikawa,
            Scheme::NakajoTakahashi,
            Scheme::KimXu,
            Scheme::Myx,
            Scheme::HybridHilbert,
            Scheme::HybridBanach,
        ]
    }

    /// Whether the scheme projects onto `C_n ∩ Q_n` each step.
    pub fn is_projection_constrained(&self) -> bool {
        !matches!(self, Scheme::Mann | Scheme::Ishikawa)
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Solver configuration: scheme, schedules, start point, and tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<R: Real> {
    pub scheme: Scheme,
    pub schedule: Schedule<R>,
    /// Start point; must lie in the mapping's domain.
    pub x0: Vector<R>,
    /// Iteration budget (records at most this many steps).
    pub max_iter: usize,
    /// Step-size threshold of the stop rule: `‖x_{n+1} − x_n‖ ≤ stop_tol`.
    pub stop_tol: R,
    /// Residual threshold of the stop rule: stopping additionally requires
    /// `‖T x_n − x_n‖ ≤ residual_tol`, so that a temporarily stalled
    /// iterate far from the fixed-point set does not terminate the run.
    pub residual_tol: R,
    /// Feasibility tolerance when auditing projected iterates against the
    /// constraint half-spaces.
    pub projection_tol: R,
    /// Norm-square bound `M ≥ sup_{v ∈ C} ‖v‖²` used by the hybrid
    /// schemes; `None` selects `M = R_C² + 1` from the domain radius.
    pub big_m: Option<R>,
    /// Diameter bound of the domain used by `kim_xu`; `None` computes it
    /// from the domain.
    pub diam_c: Option<R>,
}

impl<R: Real> SolverConfig<R> {
    /// A configuration with the default schedule (`α ≡ 1/2`,
    /// `β_n = 1 − 1/(n+2)`), 500 iterations, and default tolerances.
    pub fn new(scheme: Scheme, x0: Vector<R>) -> Self {
        SolverConfig {
            scheme,
            schedule: Schedule::default(),
            x0,
            max_iter: 500,
            stop_tol: R::of(1e-9),
            residual_tol: R::of(1e-6),
            projection_tol: R::of(1e-9),
            big_m: None,
            diam_c: None,
        }
    }
}

/// One recorded iteration.  `x` is the iterate *entering* step `n`;
/// `phi_step` and the slacks describe the transition out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<R: Real> {
    pub n: usize,
    /// Iterate `x_n`.
    pub x: Vector<R>,
    /// Outer stage point `y_n` (projection-constrained schemes only).
    pub y: Option<Vector<R>>,
    /// Inner stage point `z_n` (two-stage schemes only).
    pub z: Option<Vector<R>>,
    /// `φ(x_{n+1}, x_n)`.
    pub phi_step: R,
    /// `‖T x_n − x_n‖`.
    pub residual: R,
    /// `‖x_n − q‖` for the reference target `q` (the generalized
    /// projection of `x_0` onto the fixed-point set).
    pub dist_to_target: R,
    /// Slack of the reference target in `C_n` (`≥ 0` keeps the target
    /// admissible; `None` for averaging schemes).
    pub cn_slack_pref: Option<R>,
    /// Slack of the reference target in `Q_n`.
    pub qn_slack_pref: Option<R>,
}

/// Why the iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Both stop-rule thresholds were met.
    ToleranceReached,
    /// The iteration budget ran out first.
    IterationBudgetExhausted,
}

/// Full solver output: the per-iteration records, the terminating iterate,
/// and the reference target.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<R: Real> {
    pub records: Vec<IterationRecord<R>>,
    pub termination: Termination,
    /// The last iterate produced (`x_{N}` for `N` recorded steps).
    pub final_point: Vector<R>,
    /// Reference target `q`: generalized projection of `x_0` onto `F(T)`.
    pub target: Vector<R>,
}

impl<R: Real> IterationTrace<R> {
    /// Number of recorded iterations.
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Euclidean distance from the final iterate to the reference target.
    pub fn final_distance(&self) -> R {
        self.final_point
            .sub(&self.target)
            .map(|d| d.euclidean_norm())
            .unwrap_or_else(|_| R::nan())
    }
}

/// Configuration and runtime errors of the solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    /// `limsup α_n` must stay below 1 for the projection-constrained
    /// schemes; `observed` is the largest probed value.
    #[error("the outer step sizes must satisfy sup alpha_n <= {limit} for this scheme; observed {observed}")]
    AlphaLimsup { observed: f64, limit: f64 },
    /// `β_n → 1` is required by the two-stage schemes; `observed` is the
    /// probed late-iteration value.
    #[error("the inner step sizes must approach 1 for this scheme; beta at the probe horizon was {observed}")]
    BetaLimit { observed: f64 },
    /// A step-size value left `[0, 1]`.
    #[error("step size {name} leaves [0, 1] at iteration {n} (value {observed})")]
    ScheduleRange { name: &'static str, observed: f64, n: usize },
    /// The supplied norm-square bound does not cover the domain.
    #[error("norm-square bound {given} does not cover the domain (needs a value above {required})")]
    NormBoundTooSmall { given: f64, required: f64 },
    /// The supplied diameter bound is smaller than the domain's diameter.
    #[error("diameter bound {given} is below the domain diameter {required}")]
    DiameterTooSmall { given: f64, required: f64 },
    /// The scheme needs a bounded domain to derive its constants.
    #[error("this scheme needs a bounded domain to derive its constants")]
    UnboundedDomain,
    /// The start point must lie in the mapping's domain.
    #[error("the start point lies outside the mapping domain (violation {violation:.3e})")]
    StartOutsideDomain { violation: f64 },
    /// The mapping lacks the certification the scheme relies on.
    #[error("scheme '{scheme}' rejects this mapping: {reason}")]
    UncertifiedMapping { scheme: &'static str, reason: String },
    /// The scheme is not defined in the mapping's geometry.
    #[error("scheme '{scheme}' is not defined in this geometry: {reason}")]
    GeometryNotAdmitted { scheme: &'static str, reason: String },
    /// A malformed scalar configuration field.
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    /// The start point could not be projected onto the fixed-point set.
    #[error("could not project the start point onto the fixed-point set: {0}")]
    ReferenceProjection(SetError),
    /// An iteration step failed (projection breakdown or domain escape).
    #[error("iteration step {n} failed: {reason}")]
    StepFailed { n: usize, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

// ---------------------------------------------------------------------------
// Half-space builders.
//
// Each builder returns the affine rearrangement `⟨v, a⟩ ≤ b` of a defining
// inequality; the unit tests check membership against the inequality
// evaluated directly.
// ---------------------------------------------------------------------------

/// Anchor half-space `Q = {v : ⟨x_n − v, Jx_0 − Jx_n⟩ ≥ 0}`, rearranged to
/// `⟨v, Jx_0 − Jx_n⟩ ≤ ⟨x_n, Jx_0 − Jx_n⟩`.  For `x_n = x_0` the normal
/// vanishes and the half-space degenerates to the whole space.
pub fn anchor_halfspace<R: Real>(
    g: &SpaceGeometry<R>,
    x0: &Vector<R>,
    xn: &Vector<R>,
) -> Result<DualHalfSpace<R>, GeometryError> {
    let a = DualVector::combine(R::one(), &g.duality_map(x0)?, -R::one(), &g.duality_map(xn)?)?;
    let b = pairing(xn, &a)?;
    Ok(DualHalfSpace::new(a, b))
}

/// Bisector half-space `{v : ‖v − y‖ ≤ ‖v − x‖}`, rearranged to
/// `⟨v, 2(x − y)⟩ ≤ ‖x‖² − ‖y‖²` (inner-product geometry).
pub fn bisector_halfspace<R: Real>(
    x: &Vector<R>,
    y: &Vector<R>,
) -> Result<DualHalfSpace<R>, GeometryError> {
    bisector_halfspace_relaxed(x, y, R::zero())
}

/// Relaxed bisector `{v : ‖v − y‖² ≤ ‖v − x‖² + θ}`, rearranged to
/// `⟨v, 2(x − y)⟩ ≤ ‖x‖² − ‖y‖² + θ` (inner-product geometry).
pub fn bisector_halfspace_relaxed<R: Real>(
    x: &Vector<R>,
    y: &Vector<R>,
    theta: R,
) -> Result<DualHalfSpace<R>, GeometryError> {
    let a = x.sub(y)?.scale(R::of(2.0)).into_dual();
    let nx = x.euclidean_norm();
    let ny = y.euclidean_norm();
    let b = nx * nx - ny * ny + theta;
    Ok(DualHalfSpace::new(a, b))
}

/// Weighted bisector `{v : ‖v − y‖² ≤ α‖v − x‖² + (1−α)‖v − z‖²}`,
/// rearranged to `⟨v, 2[(x−y) + (1−α)(z−x)]⟩ ≤ α‖x‖² + (1−α)‖z‖² − ‖y‖²`
/// (inner-product geometry; the quadratic terms in `v` cancel because the
/// right-hand weights sum to one).
pub fn weighted_bisector_halfspace<R: Real>(
    x: &Vector<R>,
    y: &Vector<R>,
    z: &Vector<R>,
    alpha: R,
) -> Result<DualHalfSpace<R>, GeometryError> {
    let one = R::one();
    let d1 = x.sub(y)?;
    let d2 = Vector::combine(one, z, -one, x)?;
    let a = Vector::combine(R::of(2.0), &d1, R::of(2.0) * (one - alpha), &d2)?.into_dual();
    let nx = x.euclidean_norm();
    let ny = y.euclidean_norm();
    let nz = z.euclidean_norm();
    let b = alpha * nx * nx + (one - alpha) * nz * nz - ny * ny;
    Ok(DualHalfSpace::new(a, b))
}

/// Constraint half-space of the two-stage hybrid scheme in inner-product
/// geometry:
/// `{v : φ(v,y) ≤ φ(v,x) + (1−α)[k²‖z‖² − ‖x‖² + (k²−1)M − 2⟨v, k²z − x⟩]}`,
/// rearranged to
/// `⟨v, 2[(x−y) + (1−α)(k²z − x)]⟩ ≤ α‖x‖² + (1−α)(k²‖z‖² + (k²−1)M) − ‖y‖²`.
pub fn lyapunov_halfspace_euclidean<R: Real>(
    x: &Vector<R>,
    y: &Vector<R>,
    z: &Vector<R>,
    alpha: R,
    k_sq: R,
    big_m: R,
) -> Result<DualHalfSpace<R>, GeometryError> {
    let one = R::one();
    let d1 = x.sub(y)?;
    let d2 = Vector::combine(k_sq, z, -one, x)?;
    let a = Vector::combine(R::of(2.0), &d1, R::of(2.0) * (one - alpha), &d2)?.into_dual();
    let nx = x.euclidean_norm();
    let ny = y.euclidean_norm();
    let nz = z.euclidean_norm();
    let b = alpha * nx * nx + (one - alpha) * (k_sq * nz * nz + (k_sq - one) * big_m) - ny * ny;
    Ok(DualHalfSpace::new(a, b))
}

/// The same constraint half-space with the averaging performed in dual
/// coordinates:
/// `{v : φ(v,y) ≤ φ(v,x) + (1−α)[k²‖z‖² − ‖x‖² + (k²−1)M − 2⟨v, k²Jz − Jx⟩]}`,
/// rearranged to
/// `⟨v, 2[(Jx−Jy) + (1−α)(k²Jz − Jx)]⟩ ≤ α‖x‖² + (1−α)(k²‖z‖² + (k²−1)M) − ‖y‖²`.
/// The caller passes the dual images `Jx`, `Jy`, `Jz` it already holds so
/// the half-space is assembled from exactly the coordinates that defined
/// the stage points.
#[allow(clippy::too_many_arguments)]
pub fn lyapunov_halfspace<R: Real>(
    g: &SpaceGeometry<R>,
    x: &Vector<R>,
    y: &Vector<R>,
    z: &Vector<R>,
    jx: &DualVector<R>,
    jy: &DualVector<R>,
    jz: &DualVector<R>,
    alpha: R,
    k_sq: R,
    big_m: R,
) -> Result<DualHalfSpace<R>, GeometryError> {
    let one = R::one();
    let d1 = jx.sub(jy)?;
    let d2 = DualVector::combine(k_sq, jz, -one, jx)?;
    let a = DualVector::combine(R::of(2.0), &d1, R::of(2.0) * (one - alpha), &d2)?;
    let nx = g.norm(x)?;
    let ny = g.norm(y)?;
    let nz = g.norm(z)?;
    let b = alpha * nx * nx + (one - alpha) * (k_sq * nz * nz + (k_sq - one) * big_m) - ny * ny;
    Ok(DualHalfSpace::new(a, b))
}

// ---------------------------------------------------------------------------
// Domain size helpers.
// ---------------------------------------------------------------------------

/// Largest Euclidean-ball direction factor `sup_{‖u‖₂ ≤ 1} ‖u‖` in the
/// geometry's norm: `d^{1/p − 1/2}` for `p ≤ 2`, `1` for `p ≥ 2`.
fn ball_factor<R: Real>(g: &SpaceGeometry<R>) -> R {
    if g.is_hilbert() {
        return R::one();
    }
    let p = g.p();
    if p >= R::of(2.0) {
        R::one()
    } else {
        R::of_usize(g.dim()).powf(p.recip() - R::of(0.5))
    }
}

/// Upper bound on `sup_{v ∈ s} ‖v‖` in the geometry's norm, exact for
/// boxes and centered balls; `None` when the set is unbounded.
pub fn norm_radius<R: Real>(g: &SpaceGeometry<R>, s: &ConvexSet<R>) -> Result<Option<R>, SolverError> {
    Ok(match s {
        ConvexSet::Box { lower, upper } => {
            let corner: Vec<R> = lower
                .coords()
                .iter()
                .zip(upper.coords())
                .map(|(&l, &u)| l.abs().max(u.abs()))
                .collect();
            Some(g.norm(&Vector::new(corner)?)?)
        }
        ConvexSet::Ball { center, radius } => Some(g.norm(center)? + *radius * ball_factor(g)),
        ConvexSet::HalfSpace(_) => None,
        ConvexSet::Intersection(members) => {
            let mut best: Option<R> = None;
            for m in members {
                if let Some(r) = norm_radius(g, m)? {
                    best = Some(best.map_or(r, |b: R| b.min(r)));
                }
            }
            best
        }
    })
}

/// Upper bound on the diameter of `s` in the geometry's norm, exact for
/// boxes and balls; `None` when the set is unbounded.
pub fn set_diameter<R: Real>(g: &SpaceGeometry<R>, s: &ConvexSet<R>) -> Result<Option<R>, SolverError> {
    Ok(match s {
        ConvexSet::Box { lower, upper } => Some(g.norm(&upper.sub(lower)?)?),
        ConvexSet::Ball { radius, .. } => Some(R::of(2.0) * *radius * ball_factor(g)),
        ConvexSet::HalfSpace(_) => None,
        ConvexSet::Intersection(members) => {
            let mut best: Option<R> = None;
            for m in members {
                if let Some(d) = set_diameter(g, m)? {
                    best = Some(best.map_or(d, |b: R| b.min(d)));
                }
            }
            best
        }
    })
}

// ---------------------------------------------------------------------------
// Validation.
// ---------------------------------------------------------------------------

/// Derived constants a run needs beyond the raw configuration.
struct Prepared<R: Real> {
    /// Reference target `q = Π_{F(T)} x_0`.
    q_ref: Vector<R>,
    /// Resolved norm-square bound (hybrid schemes).
    big_m: R,
    /// Resolved squared diameter (`kim_xu`).
    diam_sq: R,
}

fn check_scalar<R: Real>(value: R, name: &str) -> Result<(), SolverError> {
    if !(value > R::zero()) || !value.is_finite() {
        return Err(SolverError::InvalidConfig(format!(
            "{name} must be a positive finite number (got {value})"
        )));
    }
    Ok(())
}

/// Step values are probed on a fixed index set: an initial segment plus a
/// distant horizon, so that limit hypotheses are checked without tying the
/// probe to the iteration budget.
fn probe_indices() -> impl Iterator<Item = usize> {
    (0..=100).chain(std::iter::once(tol::SCHEDULE_HORIZON))
}

fn check_range<R: Real>(rule: &StepRule<R>, name: &'static str) -> Result<(), SolverError> {
    for n in probe_indices() {
        let v = rule.value(n);
        if !(v >= R::zero() && v <= R::one()) || !v.is_finite() {
            return Err(SolverError::ScheduleRange { name, observed: v.as_f64(), n });
        }
    }
    Ok(())
}

fn check_alpha_limsup<R: Real>(rule: &StepRule<R>) -> Result<(), SolverError> {
    let limit = R::one() - R::of(tol::SCHEDULE_MARGIN);
    let worst = probe_indices()
        .map(|n| rule.value(n))
        .fold(R::neg_infinity(), R::max);
    if worst > limit {
        return Err(SolverError::AlphaLimsup {
            observed: worst.as_f64(),
            limit: limit.as_f64(),
        });
    }
    Ok(())
}

fn check_beta_limit<R: Real>(rule: &StepRule<R>) -> Result<(), SolverError> {
    let v = rule.value(tol::SCHEDULE_HORIZON);
    if v < R::one() - R::of(tol::SCHEDULE_MARGIN) {
        return Err(SolverError::BetaLimit { observed: v.as_f64() });
    }
    Ok(())
}

fn require_hilbert<R: Real>(m: &MappingSpec<R>, scheme: Scheme) -> Result<(), SolverError> {
    if !m.geometry().is_hilbert() {
        return Err(SolverError::GeometryNotAdmitted {
            scheme: scheme.id(),
            reason: "this scheme averages in primal coordinates and is certified in inner-product geometry only".into(),
        });
    }
    Ok(())
}

fn require_nonexpansive<R: Real>(m: &MappingSpec<R>, scheme: Scheme) -> Result<(), SolverError> {
    if !m.is_nonexpansive() {
        return Err(SolverError::UncertifiedMapping {
            scheme: scheme.id(),
            reason: "the mapping is not certified nonexpansive".into(),
        });
    }
    Ok(())
}

fn prepare<R: Real>(m: &MappingSpec<R>, cfg: &SolverConfig<R>) -> Result<Prepared<R>, SolverError> {
    let g = m.geometry();
    if cfg.x0.dim() != g.dim() {
        return Err(GeometryError::DimensionMismatch { expected: g.dim(), found: cfg.x0.dim() }.into());
    }
    if cfg.max_iter == 0 {
        return Err(SolverError::InvalidConfig("max_iter must be at least 1".into()));
    }
    check_scalar(cfg.stop_tol, "stop_tol")?;
    check_scalar(cfg.residual_tol, "residual_tol")?;
    check_scalar(cfg.projection_tol, "projection_tol")?;

    let violation = m
        .domain()
        .violation(&cfg.x0)
        .map_err(|e| SolverError::StepFailed { n: 0, reason: e.to_string() })?;
    if violation > R::of(tol::DOMAIN_INPUT) {
        return Err(SolverError::StartOutsideDomain { violation: violation.as_f64() });
    }

    // Scheme admission: geometry and certification.
    match cfg.scheme {
        Scheme::Mann | Scheme::Ishikawa | Scheme::NakajoTakahashi | Scheme::Myx => {
            require_hilbert(m, cfg.scheme)?;
            require_nonexpansive(m, cfg.scheme)?;
        }
        Scheme::KimXu | Scheme::HybridHilbert => {
            require_hilbert(m, cfg.scheme)?;
            if !m.is_asymptotically_nonexpansive() {
                return Err(SolverError::UncertifiedMapping {
                    scheme: cfg.scheme.id(),
                    reason: "the mapping is not certified asymptotically nonexpansive".into(),
                });
            }
        }
        Scheme::HybridBanach => {
            if !m.is_relatively_asymptotically_nonexpansive() {
                return Err(SolverError::UncertifiedMapping {
                    scheme: cfg.scheme.id(),
                    reason: "the mapping is not certified relatively asymptotically nonexpansive".into(),
                });
            }
        }
    }

    // Step-size hypotheses.
    check_range(&cfg.schedule.alpha, "alpha")?;
    match cfg.scheme {
        Scheme::Mann | Scheme::NakajoTakahashi | Scheme::KimXu => {}
        Scheme::Ishikawa | Scheme::Myx | Scheme::HybridHilbert | Scheme::HybridBanach => {
            check_range(&cfg.schedule.beta, "beta")?;
        }
    }
    match cfg.scheme {
        Scheme::NakajoTakahashi
        | Scheme::KimXu
        | Scheme::Myx
        | Scheme::HybridHilbert
        | Scheme::HybridBanach => check_alpha_limsup(&cfg.schedule.alpha)?,
        Scheme::Mann | Scheme::Ishikawa => {}
    }
    match cfg.scheme {
        Scheme::Myx | Scheme::HybridHilbert | Scheme::HybridBanach => {
            check_beta_limit(&cfg.schedule.beta)?
        }
        _ => {}
    }

    // Domain-size constants.
    let mut big_m = R::zero();
    let mut diam_sq = R::zero();
    match cfg.scheme {
        Scheme::HybridHilbert | Scheme::HybridBanach => {
            let radius = norm_radius(g, m.domain())?.ok_or(SolverError::UnboundedDomain)?;
            let required = radius * radius;
            big_m = match cfg.big_m {
                Some(given) => {
                    check_scalar(given, "big_m")?;
                    if given <= required {
                        return Err(SolverError::NormBoundTooSmall {
                            given: given.as_f64(),
                            required: required.as_f64(),
                        });
                    }
                    given
                }
                None => required + R::one(),
            };
        }
        Scheme::KimXu => {
            let diam = set_diameter(g, m.domain())?.ok_or(SolverError::UnboundedDomain)?;
            let chosen = match cfg.diam_c {
                Some(given) => {
                    check_scalar(given, "diam_c")?;
                    if given < diam - R::of(1e-12) {
                        return Err(SolverError::DiameterTooSmall {
                            given: given.as_f64(),
                            required: diam.as_f64(),
                        });
                    }
                    given
                }
                None => diam,
            };
            diam_sq = chosen * chosen;
        }
        _ => {}
    }

    // Reference target: generalized projection of the start point onto the
    // fixed-point set.
    let fixed = m.fixed_set()?;
    let q_ref = project_reference(g, &fixed, &cfg.x0)?;

    Ok(Prepared { q_ref, big_m, diam_sq })
}

fn project_reference<R: Real>(
    g: &SpaceGeometry<R>,
    fixed: &FixedSetRef<R>,
    x0: &Vector<R>,
) -> Result<Vector<R>, SolverError> {
    fixed.project(g, x0).map_err(SolverError::ReferenceProjection)
}

/// Checks a configuration against a mapping without running the iteration.
/// Everything `run` would reject is reported here, including the
/// availability of the reference target.
pub fn validate<R: Real>(m: &MappingSpec<R>, cfg: &SolverConfig<R>) -> Result<(), SolverError> {
    prepare(m, cfg).map(|_| ())
}

/// Runs the configured scheme and returns the full iteration trace.
pub fn run<R: Real>(m: &MappingSpec<R>, cfg: &SolverConfig<R>) -> Result<IterationTrace<R>, SolverError> {
    let prepared = prepare(m, cfg)?;
    match cfg.scheme {
        Scheme::Mann => classic::run_mann(m, cfg, prepared.q_ref),
        Scheme::Ishikawa => classic::run_ishikawa(m, cfg, prepared.q_ref),
        Scheme::NakajoTakahashi => cq::run_nakajo_takahashi(m, cfg, prepared.q_ref),
        Scheme::KimXu => cq::run_kim_xu(m, cfg, prepared.q_ref, prepared.diam_sq),
        Scheme::Myx => cq::run_myx(m, cfg, prepared.q_ref),
        Scheme::HybridHilbert => cq::run_hybrid_hilbert(m, cfg, prepared.q_ref, prepared.big_m),
        Scheme::HybridBanach => cq::run_hybrid_banach(m, cfg, prepared.q_ref, prepared.big_m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::from_slice(coords).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vector<f64> {
        Vector::new((0..d).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
    }

    /// Each builder's half-space must agree with direct evaluation of its
    /// defining inequality on random probe points.
    #[test]
    fn builders_match_direct_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g2 = SpaceGeometry::euclidean(3).unwrap();
        for _ in 0..200 {
            let x = random_vec(&mut rng, 3, 2.0);
            let y = random_vec(&mut rng, 3, 2.0);
            let z = random_vec(&mut rng, 3, 2.0);
            let p = random_vec(&mut rng, 3, 3.0);
            let alpha = rng.gen_range(0.0..0.95);
            let theta = rng.gen_range(0.0..1.0);
            let k_sq = 1.0 + rng.gen_range(0.0..0.5);
            let big_m = 30.0;

            let nx = |a: &Vector<f64>, b: &Vector<f64>| a.sub(b).unwrap().euclidean_norm().powi(2);

            // Bisector.
            let h = bisector_halfspace(&x, &y).unwrap();
            assert_eq!(h.slack(&p).unwrap() >= 0.0, nx(&p, &y) <= nx(&p, &x) + 1e-12);

            // Relaxed bisector.
            let h = bisector_halfspace_relaxed(&x, &y, theta).unwrap();
            assert_eq!(h.slack(&p).unwrap() >= 0.0, nx(&p, &y) <= nx(&p, &x) + theta + 1e-12);

            // Weighted bisector.
            let h = weighted_bisector_halfspace(&x, &y, &z, alpha).unwrap();
            let rhs = alpha * nx(&p, &x) + (1.0 - alpha) * nx(&p, &z);
            assert_eq!(h.slack(&p).unwrap() >= 0.0, nx(&p, &y) <= rhs + 1e-12);

            // Hybrid constraint, inner-product form: compare with the
            // defining inequality evaluated through the Lyapunov functional.
            let h = lyapunov_halfspace_euclidean(&x, &y, &z, alpha, k_sq, big_m).unwrap();
            let phi = |a: &Vector<f64>, b: &Vector<f64>| g2.lyapunov(a, b).unwrap().value();
            let extra = (1.0 - alpha)
                * (k_sq * z.euclidean_norm().powi(2) - x.euclidean_norm().powi(2)
                    + (k_sq - 1.0) * big_m
                    - 2.0 * (k_sq * dot(&z, &p) - dot(&x, &p)));
            assert_eq!(
                h.slack(&p).unwrap() >= 0.0,
                phi(&p, &y) <= phi(&p, &x) + extra + 1e-12,
                "hybrid half-space disagrees with its inequality"
            );
        }
    }

    fn dot(a: &Vector<f64>, b: &Vector<f64>) -> f64 {
        a.coords().iter().zip(b.coords()).map(|(&u, &w)| u * w).sum()
    }

    /// The dual-coordinate hybrid constraint agrees with its defining
    /// inequality in a non-inner-product geometry.
    #[test]
    fn dual_hybrid_builder_matches_direct_membership() {
        let g = SpaceGeometry::p_norm(3.0, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let x = random_vec(&mut rng, 3, 2.0);
            let y = random_vec(&mut rng, 3, 2.0);
            let z = random_vec(&mut rng, 3, 2.0);
            let p = random_vec(&mut rng, 3, 3.0);
            let alpha = rng.gen_range(0.0..0.95);
            let k_sq = 1.0 + rng.gen_range(0.0..0.5);
            let big_m = 30.0;
            let jx = g.duality_map(&x).unwrap();
            let jy = g.duality_map(&y).unwrap();
            let jz = g.duality_map(&z).unwrap();
            let h = lyapunov_halfspace(&g, &x, &y, &z, &jx, &jy, &jz, alpha, k_sq, big_m).unwrap();
            let phi = |a: &Vector<f64>, b: &Vector<f64>| g.lyapunov(a, b).unwrap().value();
            let extra = (1.0 - alpha)
                * (k_sq * g.norm(&z).unwrap().powi(2) - g.norm(&x).unwrap().powi(2)
                    + (k_sq - 1.0) * big_m
                    - 2.0
                        * (k_sq * pairing(&p, &jz).unwrap() - pairing(&p, &jx).unwrap()));
            let lhs = phi(&p, &y);
            let rhs = phi(&p, &x) + extra;
            // Skip knife-edge cases where the decision differs within
            // floating-point noise of the two evaluation routes.
            if (lhs - rhs).abs() < 1e-9 {
                continue;
            }
            assert_eq!(h.slack(&p).unwrap() >= 0.0, lhs <= rhs);
        }
    }

    /// In inner-product geometry with `k = 1` the hybrid constraint
    /// reduces to the weighted bisector.
    #[test]
    fn hybrid_reduces_to_weighted_bisector_at_k_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let x = random_vec(&mut rng, 2, 2.0);
            let y = random_vec(&mut rng, 2, 2.0);
            let z = random_vec(&mut rng, 2, 2.0);
            let alpha = rng.gen_range(0.0..0.95);
            let h1 = lyapunov_halfspace_euclidean(&x, &y, &z, alpha, 1.0, 123.0).unwrap();
            let h2 = weighted_bisector_halfspace(&x, &y, &z, alpha).unwrap();
            for (c1, c2) in h1.a.coords().iter().zip(h2.a.coords()) {
                assert_eq!(c1, c2);
            }
            assert!((h1.b - h2.b).abs() <= 1e-12 * (1.0 + h1.b.abs()));
        }
    }

    #[test]
    fn anchor_halfspace_degenerates_at_start() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let x0 = v(&[3.0, 4.0]);
        let h = anchor_halfspace(&g, &x0, &x0).unwrap();
        assert!(h.is_degenerate());
        // Away from the start the start point itself is strictly cut off.
        let h = anchor_halfspace(&g, &x0, &v(&[1.0, 1.0])).unwrap();
        assert!(h.slack(&x0).unwrap() < 0.0);
        assert!(h.slack(&v(&[1.0, 1.0])).unwrap().abs() < 1e-12);
    }

    #[test]
    fn scheme_ids_round_trip() {
        for s in Scheme::all() {
            assert_eq!(Scheme::from_id(s.id()), Some(s));
        }
        assert_eq!(Scheme::from_id("unknown"), None);
    }

    #[test]
    fn norm_radius_and_diameter_for_boxes_and_balls() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let b = ConvexSet::hyper_box(v(&[-1.0, -2.0]), v(&[3.0, 1.0])).unwrap();
        assert!((norm_radius(&g, &b).unwrap().unwrap() - (9.0f64 + 4.0).sqrt()).abs() < 1e-12);
        assert!((set_diameter(&g, &b).unwrap().unwrap() - 25.0f64.sqrt()).abs() < 1e-12);
        let ball = ConvexSet::ball(v(&[1.0, 0.0]), 2.0).unwrap();
        assert!((norm_radius(&g, &ball).unwrap().unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(set_diameter(&g, &ball).unwrap().unwrap(), 4.0);
        // p = 1.5 inflation of a Euclidean ball: factor d^{1/p - 1/2}.
        let gp = SpaceGeometry::p_norm(1.5, 2).unwrap();
        let factor = 2.0f64.powf(1.0 / 1.5 - 0.5);
        assert!((set_diameter(&gp, &ball).unwrap().unwrap() - 4.0 * factor).abs() < 1e-12);
        // Half-spaces are unbounded.
        let hs = ConvexSet::half_space(v(&[1.0, 0.0]).into_dual(), 1.0);
        assert!(norm_radius(&g, &hs).unwrap().is_none());
    }
}
