//! Central registry of the numerical tolerances and caps used by the crate.
//!
//! Every hard-coded threshold that governs an algorithmic decision lives
//! here with a short rationale, so the numbers are auditable in one place
//! and the kernels stay free of magic constants.

/// Admitted norm exponents are `p ∈ (P_MIN, P_MAX)`; outside this open
/// interval the duality-map conditioning degrades beyond what the solvers
/// are tested for.
pub const P_MIN: f64 = 1.05;
/// See [`P_MIN`].
pub const P_MAX: f64 = 20.0;

/// Negative Lyapunov-functional values in `[-LYAPUNOV_NEGATIVE_CLAMP, 0)`
/// are attributed to roundoff and clamped to zero; anything more negative
/// is reported as an error, since the functional is nonnegative.
pub const LYAPUNOV_NEGATIVE_CLAMP: f64 = 1e-12;

/// Feasibility tolerance for set-membership checks on computed points.
pub const FEASIBILITY: f64 = 1e-9;

/// Target residual for the scalar dual root solve behind half-space
/// projection in non-Euclidean geometry.
pub const DUAL_ROOT: f64 = 1e-10;
/// Iteration cap on the scalar dual root solve.
pub const DUAL_ROOT_CAP: usize = 300;
/// Cap on bracket-expansion doublings in the dual root solve.
pub const BRACKET_DOUBLINGS: usize = 200;

/// Convergence tolerance (residual norm of the active-constraint system)
/// for the two-half-space dual Newton solve.
pub const TWO_HS_ROOT: f64 = 1e-10;
/// Iteration cap for the two-half-space dual Newton solve.
pub const TWO_HS_CAP: usize = 100;
/// Finite-difference step for the Jacobian of the two-half-space system.
pub const FD_STEP: f64 = 1e-7;

/// Dykstra cycle-change stopping tolerance for intersections.
pub const DYKSTRA_TOL: f64 = 1e-10;
/// Iteration cap (cycles) for Dykstra's method.
pub const DYKSTRA_CAP: usize = 100_000;
/// A Dykstra run that stalls while this far from feasibility is reported
/// as an empty (infeasible) intersection rather than slow convergence.
pub const DYKSTRA_INFEASIBLE_GAP: f64 = 1e-6;

/// Gradient-mapping stopping tolerance for the projected-gradient solve
/// of the generalized projection in non-Euclidean geometry.
pub const PG_TOL: f64 = 1e-9;
/// Iteration cap for the projected-gradient solve.
pub const PG_CAP: usize = 10_000;

/// Half-space normals with dual norm below this threshold are treated as
/// structurally zero: the half-space degenerates to the whole space when
/// the offset is nonnegative (within [`DEGENERATE_OFFSET`]) and to the
/// empty set otherwise.
pub const DEGENERATE_NORMAL: f64 = 1e-13;
/// Offset leniency when classifying a degenerate half-space.
pub const DEGENERATE_OFFSET: f64 = 1e-12;

/// After the two-half-space projection step, the new iterate must lie in
/// the mapping domain within this tolerance; otherwise the solver falls
/// back to projecting onto the explicit three-set intersection.
pub const DOMAIN_MEMBERSHIP: f64 = 1e-7;

/// Number of feasible starting points tried by the brute-force projection
/// oracle.
pub const ORACLE_STARTS: usize = 20;
/// Per-start iteration cap of the brute-force projection oracle.
pub const ORACLE_ITERS: usize = 50_000;
/// The oracle stops a start early once its gradient-mapping norm falls
/// below this threshold.  The bound sits above the noise floor of the
/// oracle's finite-difference gradient and leaves two digits of margin
/// under the 1e-6 accuracy its comparisons rely on.
pub const ORACLE_STALL: f64 = 1e-9;

/// Horizon used to probe step-size schedule hypotheses: the `limsup`
/// condition on α and the `β → 1` condition are checked at and up to this
/// iteration index, independent of the configured iteration budget.
pub const SCHEDULE_HORIZON: usize = 100_000;
/// Margin for the schedule hypotheses: `sup α ≤ 1 - SCHEDULE_MARGIN` and
/// `β(horizon) ≥ 1 - SCHEDULE_MARGIN`.
pub const SCHEDULE_MARGIN: f64 = 1e-3;

/// Tolerance on the mapping-domain membership of solver inputs.
pub const DOMAIN_INPUT: f64 = 1e-9;
