//! Projection-constrained iterations: each step builds a constraint
//! half-space `C_n` from the stage points, intersects it with the anchor
//! half-space `Q_n`, and projects the *start point* onto the intersection.

use super::{
    anchor_halfspace, bisector_halfspace, bisector_halfspace_relaxed, lyapunov_halfspace,
    lyapunov_halfspace_euclidean, weighted_bisector_halfspace, IterationRecord, IterationTrace,
    SolverConfig, SolverError, Termination,
};
use crate::geometry::{DualVector, SpaceGeometry, Vector};
use crate::mappings::MappingSpec;
use crate::scalar::Real;
use crate::sets::{generalized_project, project_two_halfspaces_dual, ConvexSet, DualHalfSpace};
use crate::tolerances as tol;

/// Stage output of one scheme step: the averaged points and the constraint
/// half-space they define.
struct Stage<R: Real> {
    y: Vector<R>,
    z: Option<Vector<R>>,
    c_n: DualHalfSpace<R>,
}

fn step_failed<E: std::fmt::Display>(n: usize) -> impl FnOnce(E) -> SolverError {
    move |e| SolverError::StepFailed { n, reason: e.to_string() }
}

/// `T^{pow} x` reusing an already computed `tx = T x`.
fn power_from_tx<R: Real>(
    m: &MappingSpec<R>,
    tx: &Vector<R>,
    pow: usize,
    n: usize,
) -> Result<Vector<R>, SolverError> {
    if pow <= 1 {
        Ok(tx.clone())
    } else {
        m.apply_power(tx, pow - 1).map_err(step_failed(n))
    }
}

/// Shared iteration loop.  `stage(n, x_n, T x_n)` supplies the scheme
/// body; everything else (anchor, projection, records, stopping) is
/// scheme-independent.
fn run_cq<R, F>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
    mut stage: F,
) -> Result<IterationTrace<R>, SolverError>
where
    R: Real,
    F: FnMut(usize, &Vector<R>, &Vector<R>) -> Result<Stage<R>, SolverError>,
{
    let g = m.geometry();
    let x0 = cfg.x0.clone();
    let mut x = x0.clone();
    let mut records = Vec::new();
    let mut termination = Termination::IterationBudgetExhausted;

    for n in 0..cfg.max_iter {
        let tx = m.apply(&x).map_err(step_failed(n))?;
        let residual = g.norm(&tx.sub(&x)?)?;
        let st = stage(n, &x, &tx)?;
        let q_n = anchor_halfspace(g, &x0, &x)?;
        let x_next = project_onto_constraints(g, m.domain(), &st.c_n, &q_n, &x0, cfg, n)?;

        let phi_step = g.lyapunov(&x_next, &x)?.value();
        let step = g.norm(&x_next.sub(&x)?)?;
        records.push(IterationRecord {
            n,
            x: x.clone(),
            y: Some(st.y),
            z: st.z,
            phi_step,
            residual,
            dist_to_target: g.norm(&x.sub(&q_ref)?)?,
            cn_slack_pref: Some(st.c_n.slack(&q_ref)?),
            qn_slack_pref: Some(q_n.slack(&q_ref)?),
        });
        x = x_next;
        if step <= cfg.stop_tol && residual <= cfg.residual_tol {
            termination = Termination::ToleranceReached;
            break;
        }
    }

    Ok(IterationTrace { records, termination, final_point: x, target: q_ref })
}

/// Projects the start point onto `C_n ∩ Q_n` (fast two-half-space path),
/// falling back to a projection onto `domain ∩ C_n ∩ Q_n` when the result
/// escapes the mapping's domain, and audits feasibility of the result.
fn project_onto_constraints<R: Real>(
    g: &SpaceGeometry<R>,
    domain: &ConvexSet<R>,
    c_n: &DualHalfSpace<R>,
    q_n: &DualHalfSpace<R>,
    x0: &Vector<R>,
    cfg: &SolverConfig<R>,
    n: usize,
) -> Result<Vector<R>, SolverError> {
    let fast = project_two_halfspaces_dual(g, c_n, q_n, x0);
    if let Ok(res) = &fast {
        let in_domain = domain.violation(&res.point).map_err(step_failed(n))?
            <= R::of(tol::DOMAIN_MEMBERSHIP);
        if in_domain && audit(c_n, q_n, &res.point, cfg)? {
            return Ok(res.point.clone());
        }
    }

    // Fallback: include the domain as an explicit constraint.
    let set = ConvexSet::intersection(vec![
        domain.clone(),
        ConvexSet::half_space(c_n.a.clone(), c_n.b),
        ConvexSet::half_space(q_n.a.clone(), q_n.b),
    ])
    .map_err(step_failed(n))?;
    let res = generalized_project(g, &set, x0).map_err(|e| SolverError::StepFailed {
        n,
        reason: match fast {
            Err(fast_err) => format!("{e} (two-half-space path failed first: {fast_err})"),
            Ok(_) => e.to_string(),
        },
    })?;
    if !audit(c_n, q_n, &res.point, cfg)? {
        return Err(SolverError::StepFailed {
            n,
            reason: "projected iterate violates the constraint half-spaces beyond the audit tolerance".into(),
        });
    }
    Ok(res.point)
}

/// Feasibility audit of a projected iterate: both slacks must be no worse
/// than the configured tolerance plus a scale-aware rounding cushion.
fn audit<R: Real>(
    c_n: &DualHalfSpace<R>,
    q_n: &DualHalfSpace<R>,
    point: &Vector<R>,
    cfg: &SolverConfig<R>,
) -> Result<bool, SolverError> {
    let scale = R::one() + point.euclidean_norm();
    for h in [c_n, q_n] {
        let cushion = R::of(tol::FEASIBILITY)
            + R::of(1e-12) * (h.b.abs() + h.a.euclidean_norm() * scale);
        if h.slack(point)? < -(cfg.projection_tol + cushion) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One-stage scheme for nonexpansive maps: `y_n = α_n x_n + (1−α_n) T x_n`,
/// `C_n = {v : ‖v − y_n‖ ≤ ‖v − x_n‖}`.
pub(super) fn run_nakajo_takahashi<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
) -> Result<IterationTrace<R>, SolverError> {
    let one = R::one();
    run_cq(m, cfg, q_ref, |n, x, tx| {
        let alpha = cfg.schedule.alpha.value(n);
        let y = Vector::combine(alpha, x, one - alpha, tx)?;
        let c_n = bisector_halfspace(x, &y)?;
        Ok(Stage { y, z: None, c_n })
    })
}

/// One-stage scheme with operator powers:
/// `y_n = α_n x_n + (1−α_n) Tⁿ x_n`,
/// `C_n = {v : ‖v − y_n‖² ≤ ‖v − x_n‖² + θ_n}` with
/// `θ_n = (1−α_n)(k_n² − 1)·diam(C)²`.
pub(super) fn run_kim_xu<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
    diam_sq: R,
) -> Result<IterationTrace<R>, SolverError> {
    let one = R::one();
    run_cq(m, cfg, q_ref, |n, x, tx| {
        let pow = n.max(1);
        let k = m.k(pow);
        let alpha = cfg.schedule.alpha.value(n);
        let tpx = power_from_tx(m, tx, pow, n)?;
        let y = Vector::combine(alpha, x, one - alpha, &tpx)?;
        let theta = (one - alpha) * (k * k - one) * diam_sq;
        let c_n = bisector_halfspace_relaxed(x, &y, theta)?;
        Ok(Stage { y, z: None, c_n })
    })
}

/// Two-stage scheme for nonexpansive maps:
/// `z_n = β_n x_n + (1−β_n) T x_n`, `y_n = α_n x_n + (1−α_n) T z_n`,
/// `C_n = {v : ‖v − y_n‖² ≤ α_n‖v − x_n‖² + (1−α_n)‖v − z_n‖²}`.
pub(super) fn run_myx<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
) -> Result<IterationTrace<R>, SolverError> {
    let one = R::one();
    run_cq(m, cfg, q_ref, |n, x, tx| {
        let alpha = cfg.schedule.alpha.value(n);
        let beta = cfg.schedule.beta.value(n);
        let z = Vector::combine(beta, x, one - beta, tx)?;
        let tz = m.apply(&z).map_err(step_failed(n))?;
        let y = Vector::combine(alpha, x, one - alpha, &tz)?;
        let c_n = weighted_bisector_halfspace(x, &y, &z, alpha)?;
        Ok(Stage { y, z: Some(z), c_n })
    })
}

/// Two-stage scheme with operator powers in inner-product geometry:
/// `z_n = β_n x_n + (1−β_n) Tⁿ x_n`, `y_n = α_n x_n + (1−α_n) Tⁿ z_n`,
/// with the Lyapunov constraint carrying `k_n²` and the norm-square bound.
pub(super) fn run_hybrid_hilbert<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
    big_m: R,
) -> Result<IterationTrace<R>, SolverError> {
    let one = R::one();
    run_cq(m, cfg, q_ref, |n, x, tx| {
        let pow = n.max(1);
        let k = m.k(pow);
        let k_sq = k * k;
        let alpha = cfg.schedule.alpha.value(n);
        let beta = cfg.schedule.beta.value(n);
        let tpx = power_from_tx(m, tx, pow, n)?;
        let z = Vector::combine(beta, x, one - beta, &tpx)?;
        let tpz = m.apply_power(&z, pow).map_err(step_failed(n))?;
        let y = Vector::combine(alpha, x, one - alpha, &tpz)?;
        let c_n = lyapunov_halfspace_euclidean(x, &y, &z, alpha, k_sq, big_m)?;
        Ok(Stage { y, z: Some(z), c_n })
    })
}

/// The two-stage scheme with all averaging performed in dual coordinates:
/// `Jz_n = β_n Jx_n + (1−β_n) J(Tⁿ x_n)`,
/// `Jy_n = α_n Jx_n + (1−α_n) J(Tⁿ z_n)`.
/// In inner-product geometry the duality map is the identity and this
/// reproduces the primal variant exactly.
pub(super) fn run_hybrid_banach<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
    big_m: R,
) -> Result<IterationTrace<R>, SolverError> {
    let one = R::one();
    let g = m.geometry().clone();
    run_cq(m, cfg, q_ref, move |n, x, tx| {
        let pow = n.max(1);
        let k = m.k(pow);
        let k_sq = k * k;
        let alpha = cfg.schedule.alpha.value(n);
        let beta = cfg.schedule.beta.value(n);
        let jx = g.duality_map(x)?;
        let tpx = power_from_tx(m, tx, pow, n)?;
        let jtpx = g.duality_map(&tpx)?;
        let jz = DualVector::combine(beta, &jx, one - beta, &jtpx)?;
        let z = g.inverse_duality_map(&jz)?;
        let tpz = m.apply_power(&z, pow).map_err(step_failed(n))?;
        let jtpz = g.duality_map(&tpz)?;
        let jy = DualVector::combine(alpha, &jx, one - alpha, &jtpz)?;
        let y = g.inverse_duality_map(&jy)?;
        let c_n = lyapunov_halfspace(&g, x, &y, &z, &jx, &jy, &jz, alpha, k_sq, big_m)?;
        Ok(Stage { y, z: Some(z), c_n })
    })
}
