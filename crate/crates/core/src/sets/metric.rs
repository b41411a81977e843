//! Euclidean (metric) projections.
//!
//! Boxes, balls, and half-spaces have closed forms.  Intersections of two
//! half-spaces are solved exactly by enumerating the active set (four
//! cases); general intersections fall back to Dykstra's alternating
//! projection method, which converges to the metric projection onto the
//! intersection (not merely a feasible point).

use super::{ConvexSet, DualHalfSpace, ProjectionResult, SetError};
use crate::geometry::{pairing, GeometryError, Vector};
use crate::scalar::Real;
use crate::tolerances as tol;

/// Euclidean projection of `x` onto `s`.
pub fn metric_project<R: Real>(s: &ConvexSet<R>, x: &Vector<R>) -> Result<ProjectionResult<R>, SetError> {
    if x.dim() != s.dim() {
        return Err(GeometryError::DimensionMismatch { expected: s.dim(), found: x.dim() }.into());
    }
    match s {
        ConvexSet::Box { lower, upper } => Ok(ProjectionResult::closed_form(clamp_to_box(x, lower, upper))),
        ConvexSet::Ball { center, radius } => Ok(ProjectionResult::closed_form(radial_to_ball(x, center, *radius)?)),
        ConvexSet::HalfSpace(h) => project_half_space(h, x),
        ConvexSet::Intersection(members) => match members.as_slice() {
            [ConvexSet::HalfSpace(h1), ConvexSet::HalfSpace(h2)] => two_half_spaces(h1, h2, x),
            _ => dykstra(members, x),
        },
    }
}

fn clamp_to_box<R: Real>(x: &Vector<R>, lower: &Vector<R>, upper: &Vector<R>) -> Vector<R> {
    let coords = x
        .coords()
        .iter()
        .zip(lower.coords().iter().zip(upper.coords()))
        .map(|(&v, (&l, &u))| v.max(l).min(u))
        .collect();
    Vector::new(coords).expect("clamped coordinates are finite")
}

fn radial_to_ball<R: Real>(x: &Vector<R>, center: &Vector<R>, radius: R) -> Result<Vector<R>, GeometryError> {
    let offset = x.sub(center)?;
    let dist = offset.euclidean_norm();
    if dist <= radius {
        return Ok(x.clone());
    }
    Vector::combine(R::one(), center, radius / dist, &offset)
}

/// Closed-form half-space projection `x − λ a` with
/// `λ = max(0, (⟨x, a⟩ − b)) / ‖a‖²`.
fn project_half_space<R: Real>(h: &DualHalfSpace<R>, x: &Vector<R>) -> Result<ProjectionResult<R>, SetError> {
    if h.is_degenerate() {
        return degenerate_case(h, x, 1);
    }
    let viol = -h.slack(x)?;
    if viol <= R::zero() {
        return Ok(ProjectionResult { multipliers: vec![R::zero()], ..ProjectionResult::closed_form(x.clone()) });
    }
    let norm_sq = h.a.euclidean_norm().powi(2);
    let lambda = viol / norm_sq;
    let point = Vector::combine(R::one(), x, -lambda, &h.a.clone().into_vector())?;
    Ok(ProjectionResult { multipliers: vec![lambda], ..ProjectionResult::closed_form(point) })
}

fn degenerate_case<R: Real>(h: &DualHalfSpace<R>, x: &Vector<R>, mults: usize) -> Result<ProjectionResult<R>, SetError> {
    if h.b >= -R::of(tol::DEGENERATE_OFFSET) {
        Ok(ProjectionResult { multipliers: vec![R::zero(); mults], ..ProjectionResult::closed_form(x.clone()) })
    } else {
        Err(SetError::Infeasible)
    }
}

/// Exact Euclidean projection onto the intersection of two half-spaces by
/// active-set enumeration: try `x` itself, each constraint alone, then the
/// corner where both are active (a 2×2 Gram solve).
fn two_half_spaces<R: Real>(
    h1: &DualHalfSpace<R>,
    h2: &DualHalfSpace<R>,
    x: &Vector<R>,
) -> Result<ProjectionResult<R>, SetError> {
    let feas = R::of(tol::FEASIBILITY);
    // Degenerate normals reduce the problem to one half-space (or resolve it
    // outright).
    if h1.is_degenerate() {
        degenerate_case(h1, x, 0)?;
        let mut r = project_half_space(h2, x)?;
        r.multipliers.insert(0, R::zero());
        return Ok(r);
    }
    if h2.is_degenerate() {
        degenerate_case(h2, x, 0)?;
        let mut r = project_half_space(h1, x)?;
        r.multipliers.push(R::zero());
        return Ok(r);
    }

    if h1.slack(x)? >= -feas && h2.slack(x)? >= -feas {
        return Ok(ProjectionResult {
            multipliers: vec![R::zero(), R::zero()],
            ..ProjectionResult::closed_form(x.clone())
        });
    }
    let only_first = project_half_space(h1, x)?;
    if h2.slack(&only_first.point)? >= -feas {
        let lambda = only_first.multipliers[0];
        return Ok(ProjectionResult { multipliers: vec![lambda, R::zero()], ..only_first });
    }
    let only_second = project_half_space(h2, x)?;
    if h1.slack(&only_second.point)? >= -feas {
        let mu = only_second.multipliers[0];
        return Ok(ProjectionResult { multipliers: vec![R::zero(), mu], ..only_second });
    }

    // Both constraints active: solve the 2×2 Gram system
    //   G [λ, μ]ᵀ = [⟨x,a₁⟩ − b₁, ⟨x,a₂⟩ − b₂]ᵀ,  Gᵢⱼ = ⟨aᵢ, aⱼ⟩,
    // and project as x − λ a₁ − μ a₂.
    let a1 = h1.a.clone().into_vector();
    let a2 = h2.a.clone().into_vector();
    let g11 = a1.coords().iter().map(|&c| c * c).sum::<R>();
    let g22 = a2.coords().iter().map(|&c| c * c).sum::<R>();
    let g12 = a1.coords().iter().zip(a2.coords()).map(|(&p, &q)| p * q).sum::<R>();
    let r1 = pairing(x, &h1.a)? - h1.b;
    let r2 = pairing(x, &h2.a)? - h2.b;
    let det = g11 * g22 - g12 * g12;
    if det.abs() <= R::of(1e-14) * g11 * g22 {
        // Parallel (or anti-parallel) normals with no single-constraint
        // solution: the half-spaces point away from each other.
        return Err(SetError::Infeasible);
    }
    let lambda = (g22 * r1 - g12 * r2) / det;
    let mu = (g11 * r2 - g12 * r1) / det;
    if lambda < -feas || mu < -feas {
        return Err(SetError::Infeasible);
    }
    let lambda = lambda.max(R::zero());
    let mu = mu.max(R::zero());
    let mut point = Vector::combine(R::one(), x, -lambda, &a1)?;
    point = Vector::combine(R::one(), &point, -mu, &a2)?;
    let residual = (-h1.slack(&point)?).max(-h2.slack(&point)?).max(R::zero());
    if residual > R::of(tol::FEASIBILITY) {
        return Err(SetError::Infeasible);
    }
    Ok(ProjectionResult { point, multipliers: vec![lambda, mu], residual, inner_iterations: 0 })
}

/// Dykstra's alternating projection method for a general intersection.
///
/// Cycles over the members with correction terms; the iterate converges to
/// the metric projection onto the intersection.  Stops when the change of
/// the cycle endpoint drops below `1e-10`; a stalled run that remains far
/// from feasibility is reported as infeasible.
pub(super) fn dykstra<R: Real>(members: &[ConvexSet<R>], x: &Vector<R>) -> Result<ProjectionResult<R>, SetError> {
    let d = x.dim();
    let m = members.len();
    let mut current = x.clone();
    let mut corrections = vec![Vector::zeros(d); m];
    let tol_change = R::of(tol::DYKSTRA_TOL);
    let mut last_change = R::infinity();
    for cycle in 0..tol::DYKSTRA_CAP {
        let start = current.clone();
        for (i, member) in members.iter().enumerate() {
            let shifted = Vector::combine(R::one(), &current, R::one(), &corrections[i])?;
            let projected = metric_project(member, &shifted)?.point;
            corrections[i] = shifted.sub(&projected)?;
            current = projected;
        }
        last_change = current.sub(&start)?.euclidean_norm();
        if last_change <= tol_change {
            let worst = worst_violation(members, &current)?;
            if worst > R::of(tol::DYKSTRA_INFEASIBLE_GAP) {
                return Err(SetError::Infeasible);
            }
            return Ok(ProjectionResult {
                point: current,
                multipliers: Vec::new(),
                residual: last_change,
                inner_iterations: cycle + 1,
            });
        }
    }
    let worst = worst_violation(members, &current)?;
    if worst > R::of(tol::DYKSTRA_INFEASIBLE_GAP) {
        return Err(SetError::Infeasible);
    }
    Err(SetError::Convergence { iterations: tol::DYKSTRA_CAP, residual: last_change.as_f64() })
}

fn worst_violation<R: Real>(members: &[ConvexSet<R>], x: &Vector<R>) -> Result<R, SetError> {
    let mut worst = R::zero();
    for member in members {
        worst = worst.max(member.violation(x)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DualVector;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::from_slice(coords).unwrap()
    }

    fn hs(a: &[f64], b: f64) -> DualHalfSpace<f64> {
        DualHalfSpace::new(DualVector::from_slice(a).unwrap(), b)
    }

    #[test]
    fn box_projection_clamps() {
        let s = ConvexSet::hyper_box(v(&[-1.0, -1.0]), v(&[1.0, 1.0])).unwrap();
        let r = metric_project(&s, &v(&[2.0, 0.25])).unwrap();
        assert_eq!(r.point, v(&[1.0, 0.25]));
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn ball_projection_is_radial() {
        let s = ConvexSet::ball(v(&[1.0, 1.0]), 2.0).unwrap();
        let r = metric_project(&s, &v(&[1.0, 5.0])).unwrap();
        assert_eq!(r.point, v(&[1.0, 3.0]));
        // Interior points are fixed.
        let inside = metric_project(&s, &v(&[1.5, 1.5])).unwrap();
        assert_eq!(inside.point, v(&[1.5, 1.5]));
    }

    #[test]
    fn half_space_projection_closed_form() {
        let s = ConvexSet::HalfSpace(hs(&[1.0, 1.0], 1.0));
        let r = metric_project(&s, &v(&[2.0, 2.0])).unwrap();
        assert!((r.point.coords()[0] - 0.5).abs() < 1e-15);
        assert!((r.point.coords()[1] - 0.5).abs() < 1e-15);
        assert!((r.multipliers[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn two_half_space_corner_case_matches_hand_value() {
        // {v₁ ≤ 1} ∩ {v₂ ≤ 0} from (2, 3): both active, corner (1, 0).
        let s = ConvexSet::intersection(vec![
            ConvexSet::HalfSpace(hs(&[1.0, 0.0], 1.0)),
            ConvexSet::HalfSpace(hs(&[0.0, 1.0], 0.0)),
        ])
        .unwrap();
        let r = metric_project(&s, &v(&[2.0, 3.0])).unwrap();
        assert!((r.point.coords()[0] - 1.0).abs() < 1e-14);
        assert!(r.point.coords()[1].abs() < 1e-14);
        assert!((r.multipliers[0] - 1.0).abs() < 1e-12);
        assert!((r.multipliers[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_half_space_single_active_cases() {
        let s = ConvexSet::intersection(vec![
            ConvexSet::HalfSpace(hs(&[1.0, 0.0], 0.0)),
            ConvexSet::HalfSpace(hs(&[0.0, 1.0], 5.0)),
        ])
        .unwrap();
        // Only the first constraint binds.
        let r = metric_project(&s, &v(&[2.0, 1.0])).unwrap();
        assert_eq!(r.point, v(&[0.0, 1.0]));
        assert_eq!(r.multipliers[1], 0.0);
        // Feasible point is fixed with zero multipliers.
        let f = metric_project(&s, &v(&[-1.0, 1.0])).unwrap();
        assert_eq!(f.point, v(&[-1.0, 1.0]));
        assert_eq!(f.multipliers, vec![0.0, 0.0]);
    }

    #[test]
    fn two_half_space_degenerate_normal_is_no_constraint() {
        let s = ConvexSet::intersection(vec![
            ConvexSet::HalfSpace(DualHalfSpace::full_space(2)),
            ConvexSet::HalfSpace(hs(&[0.0, 1.0], 0.0)),
        ])
        .unwrap();
        let r = metric_project(&s, &v(&[2.0, 3.0])).unwrap();
        assert_eq!(r.point, v(&[2.0, 0.0]));
        assert_eq!(r.multipliers[0], 0.0);
    }

    #[test]
    fn opposing_half_spaces_are_infeasible() {
        let s = ConvexSet::intersection(vec![
            ConvexSet::HalfSpace(hs(&[1.0, 0.0], -1.0)),
            ConvexSet::HalfSpace(hs(&[-1.0, 0.0], -1.0)),
        ])
        .unwrap();
        assert_eq!(metric_project(&s, &v(&[0.0, 0.0])).unwrap_err(), SetError::Infeasible);
        let degenerate_empty = ConvexSet::HalfSpace(hs(&[0.0, 0.0], -1.0));
        assert_eq!(
            metric_project(&degenerate_empty, &v(&[0.0, 0.0])).unwrap_err(),
            SetError::Infeasible
        );
    }

    #[test]
    fn dykstra_matches_closed_form_on_box_ball() {
        // Projection of (3, 3) onto [−1,1]² ∩ ball(0, 1): the corner of the
        // square is outside the ball, so the answer is the ball point along
        // the diagonal: (√2/2, √2/2).
        let s = ConvexSet::intersection(vec![
            ConvexSet::hyper_box(v(&[-1.0, -1.0]), v(&[1.0, 1.0])).unwrap(),
            ConvexSet::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
        ])
        .unwrap();
        let r = metric_project(&s, &v(&[3.0, 3.0])).unwrap();
        let e = 0.5f64.sqrt();
        assert!((r.point.coords()[0] - e).abs() < 1e-8, "{:?}", r.point);
        assert!((r.point.coords()[1] - e).abs() < 1e-8);
        assert!(r.inner_iterations > 0);
    }

    #[test]
    fn dykstra_detects_empty_intersection() {
        let s = ConvexSet::intersection(vec![
            ConvexSet::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
            ConvexSet::ball(v(&[5.0, 0.0]), 1.0).unwrap(),
            ConvexSet::hyper_box(v(&[-9.0, -9.0]), v(&[9.0, 9.0])).unwrap(),
        ])
        .unwrap();
        assert_eq!(metric_project(&s, &v(&[2.0, 1.0])).unwrap_err(), SetError::Infeasible);
    }
}
