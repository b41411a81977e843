//! Averaging iterations without projection constraints.

use super::{IterationRecord, IterationTrace, SolverConfig, SolverError, Termination};
use crate::geometry::Vector;
use crate::mappings::MappingSpec;
use crate::scalar::Real;

/// `x_{n+1} = α_n x_n + (1−α_n) T x_n`.
pub(super) fn run_mann<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
) -> Result<IterationTrace<R>, SolverError> {
    run_averaging(m, cfg, q_ref, false)
}

/// `z_n = β_n x_n + (1−β_n) T x_n`, `x_{n+1} = α_n x_n + (1−α_n) T z_n`.
pub(super) fn run_ishikawa<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
) -> Result<IterationTrace<R>, SolverError> {
    run_averaging(m, cfg, q_ref, true)
}

fn run_averaging<R: Real>(
    m: &MappingSpec<R>,
    cfg: &SolverConfig<R>,
    q_ref: Vector<R>,
    two_stage: bool,
) -> Result<IterationTrace<R>, SolverError> {
    let g = m.geometry();
    let one = R::one();
    let mut x = cfg.x0.clone();
    let mut records = Vec::new();
    let mut termination = Termination::IterationBudgetExhausted;

    for n in 0..cfg.max_iter {
        let tx = m
            .apply(&x)
            .map_err(|e| SolverError::StepFailed { n, reason: e.to_string() })?;
        let residual = g.norm(&tx.sub(&x)?)?;
        let alpha = cfg.schedule.alpha.value(n);

        let (x_next, z) = if two_stage {
            let beta = cfg.schedule.beta.value(n);
            let z = Vector::combine(beta, &x, one - beta, &tx)?;
            let tz = m
                .apply(&z)
                .map_err(|e| SolverError::StepFailed { n, reason: e.to_string() })?;
            (Vector::combine(alpha, &x, one - alpha, &tz)?, Some(z))
        } else {
            (Vector::combine(alpha, &x, one - alpha, &tx)?, None)
        };

        let phi_step = g.lyapunov(&x_next, &x)?.value();
        let step = g.norm(&x_next.sub(&x)?)?;
        records.push(IterationRecord {
            n,
            x: x.clone(),
            y: None,
            z,
            phi_step,
            residual,
            dist_to_target: g.norm(&x.sub(&q_ref)?)?,
            cn_slack_pref: None,
            qn_slack_pref: None,
        });
        x = x_next;
        if step <= cfg.stop_tol && residual <= cfg.residual_tol {
            termination = Termination::ToleranceReached;
            break;
        }
    }

    Ok(IterationTrace { records, termination, final_point: x, target: q_ref })
}
