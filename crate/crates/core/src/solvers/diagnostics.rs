//! Post-hoc invariant checks over an iteration trace.
//!
//! Two groups of quantities are reported:
//!
//! * **Unconditional invariants** of the projection-constrained schemes —
//!   the reference target must stay feasible in every `C_n` and `Q_n`
//!   (nonnegative slacks), and the anchor values `φ(x_n, x_0)` must be
//!   nondecreasing (the anchor half-spaces push iterates away from the
//!   start point monotonically).  Their worst violation is summarized in
//!   [`TraceDiagnostics::max_violation`].
//! * **Tail quantities** — maxima of the per-step Lyapunov value, the
//!   outer-stage gap `‖x_{n+1} − y_n‖`, and the residual over the last
//!   quarter of the trace.  These are only meaningful on runs that reached
//!   tolerance and are `None` otherwise.

use super::{IterationTrace, Termination};
use crate::geometry::{GeometryError, SpaceGeometry, Vector};
use crate::scalar::Real;

/// Invariant summary of a trace; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceDiagnostics<R: Real> {
    /// Smallest constraint slack of the reference target over all steps
    /// (`None` for averaging schemes, which record no slacks).
    pub min_cn_slack: Option<R>,
    /// Smallest anchor slack of the reference target.
    pub min_qn_slack: Option<R>,
    /// Largest decrease of consecutive anchor values `φ(x_n, x_0)`
    /// (positive values violate monotonicity).
    pub max_anchor_backstep: Option<R>,
    /// Largest per-step Lyapunov value over the last quarter of a run
    /// that reached tolerance.
    pub tail_max_phi_step: Option<R>,
    /// Largest `‖x_{n+1} − y_n‖` over the last quarter of a run that
    /// reached tolerance (schemes that define `y_n` only).
    pub tail_max_y_gap: Option<R>,
    /// Largest residual over the last quarter of a run that reached
    /// tolerance.
    pub tail_max_residual: Option<R>,
    /// Worst violation of the unconditional invariants: negative slacks
    /// and anchor backsteps, floored at zero.
    pub max_violation: R,
}

/// Evaluates the invariants of `trace` under geometry `g`.
pub fn diagnose<R: Real>(
    g: &SpaceGeometry<R>,
    trace: &IterationTrace<R>,
) -> Result<TraceDiagnostics<R>, GeometryError> {
    let records = &trace.records;
    let mut min_cn: Option<R> = None;
    let mut min_qn: Option<R> = None;
    for r in records {
        if let Some(s) = r.cn_slack_pref {
            min_cn = Some(min_cn.map_or(s, |m: R| m.min(s)));
        }
        if let Some(s) = r.qn_slack_pref {
            min_qn = Some(min_qn.map_or(s, |m: R| m.min(s)));
        }
    }

    // Anchor monotonicity (projection-constrained traces only, detected by
    // the presence of slacks): φ(x_n, x_0) over the whole trajectory
    // including the final point.
    let max_backstep = if min_qn.is_some() && !records.is_empty() {
        let x0 = &records[0].x;
        let mut values: Vec<R> = Vec::with_capacity(records.len() + 1);
        for r in records {
            values.push(g.lyapunov(&r.x, x0)?.value());
        }
        values.push(g.lyapunov(&trace.final_point, x0)?.value());
        let worst = values
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(R::neg_infinity(), R::max);
        Some(worst)
    } else {
        None
    };

    // Tail maxima on runs that reached tolerance.
    let (tail_phi, tail_gap, tail_res) = if trace.termination == Termination::ToleranceReached
        && !records.is_empty()
    {
        let start = records.len() - (records.len() / 4).max(1);
        let window = &records[start..];
        let mut max_phi = R::neg_infinity();
        let mut max_res = R::neg_infinity();
        let mut max_gap: Option<R> = None;
        for (offset, r) in window.iter().enumerate() {
            max_phi = max_phi.max(r.phi_step);
            max_res = max_res.max(r.residual);
            if let Some(y) = &r.y {
                let i = start + offset;
                let x_next: &Vector<R> = if i + 1 < records.len() {
                    &records[i + 1].x
                } else {
                    &trace.final_point
                };
                let gap = g.norm(&x_next.sub(y)?)?;
                max_gap = Some(max_gap.map_or(gap, |m: R| m.max(gap)));
            }
        }
        (Some(max_phi), max_gap, Some(max_res))
    } else {
        (None, None, None)
    };

    let mut violation = R::zero();
    if let Some(s) = min_cn {
        violation = violation.max(-s);
    }
    if let Some(s) = min_qn {
        violation = violation.max(-s);
    }
    if let Some(b) = max_backstep {
        violation = violation.max(b);
    }

    Ok(TraceDiagnostics {
        min_cn_slack: min_cn,
        min_qn_slack: min_qn,
        max_anchor_backstep: max_backstep,
        tail_max_phi_step: tail_phi,
        tail_max_y_gap: tail_gap,
        tail_max_residual: tail_res,
        max_violation: violation,
    })
}
