//! Projections onto half-spaces under the Lyapunov functional of a
//! non-Euclidean geometry, solved through the dual space.
//!
//! Minimizing `φ(y, x)` over `{y : ⟨y, a⟩ ≤ b}` has the KKT form
//! `Jy = Jx − λ a`, `λ ≥ 0`, `λ (⟨y, a⟩ − b) = 0`, so the projection is
//! `y(λ) = J⁻¹(Jx − λ a)` where `λ` is the root of the scalar residual
//! `m(λ) = ⟨y(λ), a⟩ − b`.  `m` is continuous and strictly decreasing in
//! `λ` (strict convexity of the norm), which makes a bracketed root solve
//! reliable.  Two half-spaces give a 2×2 system in `(λ, μ)`, solved by a
//! damped Newton method after active-set screening.
//!
//! In inner-product geometry (`p = 2`) both entry points dispatch to the
//! closed-form Euclidean paths.

use super::{metric_project, ConvexSet, DualHalfSpace, ProjectionResult, SetError};
use crate::geometry::{pairing, DualVector, GeometryError, SpaceGeometry, Vector};
use crate::scalar::Real;
use crate::tolerances as tol;

fn check_dim<R: Real>(g: &SpaceGeometry<R>, found: usize) -> Result<(), GeometryError> {
    if g.dim() == found {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch { expected: g.dim(), found })
    }
}

fn degenerate_result<R: Real>(h: &DualHalfSpace<R>, x: &Vector<R>, mults: usize) -> Result<ProjectionResult<R>, SetError> {
    if h.b >= -R::of(tol::DEGENERATE_OFFSET) {
        Ok(ProjectionResult { multipliers: vec![R::zero(); mults], ..ProjectionResult::closed_form(x.clone()) })
    } else {
        Err(SetError::Infeasible)
    }
}

/// Generalized (Lyapunov-functional) projection of `x` onto the half-space
/// `{y : ⟨y, a⟩ ≤ b}`.
///
/// Returns `x` itself with multiplier `0` when `x` already satisfies the
/// constraint; otherwise solves `m(λ) = 0` by bracketing plus a
/// safeguarded secant (Illinois) iteration to `|m| ≤ 1e-10`.
pub fn project_halfspace_dual<R: Real>(
    g: &SpaceGeometry<R>,
    h: &DualHalfSpace<R>,
    x: &Vector<R>,
) -> Result<ProjectionResult<R>, SetError> {
    check_dim(g, h.dim())?;
    check_dim(g, x.dim())?;
    if g.is_hilbert() {
        return metric_project(&ConvexSet::HalfSpace(h.clone()), x);
    }
    if h.is_degenerate() {
        return degenerate_result(h, x, 1);
    }
    let jx = g.duality_map(x)?;
    let eval = |lam: R| -> Result<(R, Vector<R>), SetError> {
        let shifted = DualVector::combine(R::one(), &jx, -lam, &h.a)?;
        let y = g.inverse_duality_map(&shifted)?;
        Ok((pairing(&y, &h.a)? - h.b, y))
    };

    let (m0, _) = eval(R::zero())?;
    if m0 <= R::zero() {
        return Ok(ProjectionResult { multipliers: vec![R::zero()], ..ProjectionResult::closed_form(x.clone()) });
    }

    // Bracket the root: m(0) > 0 and m is decreasing, so expand the upper
    // endpoint until the sign flips.
    let mut lo = R::zero();
    let mut m_lo = m0;
    let mut hi = R::one();
    let mut m_hi;
    let mut doublings = 0;
    loop {
        let (m, _) = eval(hi)?;
        if m <= R::zero() {
            m_hi = m;
            break;
        }
        lo = hi;
        m_lo = m;
        hi = hi + hi;
        doublings += 1;
        if doublings > tol::BRACKET_DOUBLINGS {
            return Err(SetError::RootSolve(
                "could not bracket the multiplier of the half-space constraint".into(),
            ));
        }
    }

    // Safeguarded secant with the Illinois modification: proposals outside
    // the bracket (or stagnating endpoints) fall back to bisection, so the
    // bracket always shrinks.
    let target = R::of(tol::DUAL_ROOT);
    let mut last_side = 0i8;
    for it in 0..tol::DUAL_ROOT_CAP {
        let denom = m_lo - m_hi;
        let secant = if denom.abs() > R::zero() {
            lo + (hi - lo) * m_lo / denom
        } else {
            (lo + hi) * R::of(0.5)
        };
        let lam = if secant > lo && secant < hi { secant } else { (lo + hi) * R::of(0.5) };
        let (m, y) = eval(lam)?;
        if m.abs() <= target {
            return Ok(ProjectionResult {
                point: y,
                multipliers: vec![lam],
                residual: m.abs(),
                inner_iterations: it + 1,
            });
        }
        if m > R::zero() {
            lo = lam;
            m_lo = m;
            if last_side == 1 {
                m_hi = m_hi * R::of(0.5);
            }
            last_side = 1;
        } else {
            hi = lam;
            m_hi = m;
            if last_side == -1 {
                m_lo = m_lo * R::of(0.5);
            }
            last_side = -1;
        }
    }
    Err(SetError::Convergence { iterations: tol::DUAL_ROOT_CAP, residual: (m_lo.min(-m_hi)).as_f64() })
}

/// Generalized projection of `x` onto the intersection of two half-spaces.
///
/// Active-set enumeration in candidate order: `x` itself, each constraint
/// alone (via [`project_halfspace_dual`]), then both constraints active via
/// a damped Newton solve on the 2×2 multiplier system.  The first feasible
/// candidate is optimal because dropping an inactive constraint does not
/// change the minimizer of the strictly convex objective.
pub fn project_two_halfspaces_dual<R: Real>(
    g: &SpaceGeometry<R>,
    h1: &DualHalfSpace<R>,
    h2: &DualHalfSpace<R>,
    x: &Vector<R>,
) -> Result<ProjectionResult<R>, SetError> {
    check_dim(g, h1.dim())?;
    check_dim(g, h2.dim())?;
    check_dim(g, x.dim())?;
    if g.is_hilbert() {
        let both = ConvexSet::Intersection(vec![
            ConvexSet::HalfSpace(h1.clone()),
            ConvexSet::HalfSpace(h2.clone()),
        ]);
        return metric_project(&both, x);
    }

    let feas = R::of(tol::FEASIBILITY);
    if h1.is_degenerate() {
        degenerate_result(h1, x, 0)?;
        let mut r = project_halfspace_dual(g, h2, x)?;
        r.multipliers.insert(0, R::zero());
        return Ok(r);
    }
    if h2.is_degenerate() {
        degenerate_result(h2, x, 0)?;
        let mut r = project_halfspace_dual(g, h1, x)?;
        r.multipliers.push(R::zero());
        return Ok(r);
    }

    if h1.slack(x)? >= -feas && h2.slack(x)? >= -feas {
        return Ok(ProjectionResult {
            multipliers: vec![R::zero(), R::zero()],
            ..ProjectionResult::closed_form(x.clone())
        });
    }
    let only_first = project_halfspace_dual(g, h1, x)?;
    if h2.slack(&only_first.point)? >= -feas {
        let lambda = only_first.multipliers[0];
        return Ok(ProjectionResult { multipliers: vec![lambda, R::zero()], ..only_first });
    }
    let only_second = project_halfspace_dual(g, h2, x)?;
    if h1.slack(&only_second.point)? >= -feas {
        let mu = only_second.multipliers[0];
        return Ok(ProjectionResult { multipliers: vec![R::zero(), mu], ..only_second });
    }

    both_active_newton(g, h1, h2, x)
}

/// Damped Newton on the residual system
/// `F(λ, μ) = (⟨y, a₁⟩ − b₁, ⟨y, a₂⟩ − b₂)` with
/// `y = J⁻¹(Jx − λ a₁ − μ a₂)`, using a finite-difference Jacobian.
fn both_active_newton<R: Real>(
    g: &SpaceGeometry<R>,
    h1: &DualHalfSpace<R>,
    h2: &DualHalfSpace<R>,
    x: &Vector<R>,
) -> Result<ProjectionResult<R>, SetError> {
    let jx = g.duality_map(x)?;
    let eval = |lam: R, mu: R| -> Result<(R, R, Vector<R>), SetError> {
        let mut shifted = DualVector::combine(R::one(), &jx, -lam, &h1.a)?;
        shifted = DualVector::combine(R::one(), &shifted, -mu, &h2.a)?;
        let y = g.inverse_duality_map(&shifted)?;
        Ok((pairing(&y, &h1.a)? - h1.b, pairing(&y, &h2.a)? - h2.b, y))
    };

    let target = R::of(tol::TWO_HS_ROOT);
    let fd = R::of(tol::FD_STEP);
    let (mut lam, mut mu) = (R::zero(), R::zero());
    let (mut f1, mut f2, mut y) = eval(lam, mu)?;
    let mut merit = f1.abs().max(f2.abs());
    for it in 0..tol::TWO_HS_CAP {
        if merit <= target {
            return finish_both_active(h1, h2, y, lam, mu, merit, it);
        }
        let (p1, p2, _) = eval(lam + fd, mu)?;
        let (q1, q2, _) = eval(lam, mu + fd)?;
        let j11 = (p1 - f1) / fd;
        let j21 = (p2 - f2) / fd;
        let j12 = (q1 - f1) / fd;
        let j22 = (q2 - f2) / fd;
        let det = j11 * j22 - j12 * j21;
        if det.abs() <= R::of(1e-30) {
            return Err(SetError::RootSolve(
                "singular multiplier system: the half-space normals are (numerically) parallel".into(),
            ));
        }
        let dl = -(j22 * f1 - j12 * f2) / det;
        let dm = -(j11 * f2 - j21 * f1) / det;
        // Damping: halve the step until the residual decreases.
        let mut t = R::one();
        let mut accepted = None;
        for _ in 0..40 {
            let (n1, n2, ny) = eval(lam + t * dl, mu + t * dm)?;
            let nm = n1.abs().max(n2.abs());
            if nm < merit {
                accepted = Some((lam + t * dl, mu + t * dm, n1, n2, ny, nm));
                break;
            }
            t = t * R::of(0.5);
        }
        match accepted {
            Some((nl, nmu, n1, n2, ny, nm)) => {
                lam = nl;
                mu = nmu;
                f1 = n1;
                f2 = n2;
                y = ny;
                merit = nm;
            }
            None => {
                return Err(SetError::RootSolve(
                    "multiplier iteration stalled; the intersection may be empty or badly conditioned".into(),
                ))
            }
        }
    }
    if merit <= target {
        return finish_both_active(h1, h2, y, lam, mu, merit, tol::TWO_HS_CAP);
    }
    Err(SetError::Convergence { iterations: tol::TWO_HS_CAP, residual: merit.as_f64() })
}

fn finish_both_active<R: Real>(
    h1: &DualHalfSpace<R>,
    h2: &DualHalfSpace<R>,
    y: Vector<R>,
    lam: R,
    mu: R,
    merit: R,
    iterations: usize,
) -> Result<ProjectionResult<R>, SetError> {
    let feas = R::of(tol::FEASIBILITY);
    if lam < -feas || mu < -feas {
        // A converged system with a negative multiplier contradicts the
        // active-set screening that brought us here; classify as numerical.
        return Err(SetError::RootSolve(
            "active-set resolution failed: negative multiplier at the two-constraint solution".into(),
        ));
    }
    if h1.slack(&y)? < -feas || h2.slack(&y)? < -feas {
        return Err(SetError::Infeasible);
    }
    Ok(ProjectionResult {
        point: y,
        multipliers: vec![lam.max(R::zero()), mu.max(R::zero())],
        residual: merit,
        inner_iterations: iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LyapunovValue;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::from_slice(coords).unwrap()
    }

    fn hs(a: &[f64], b: f64) -> DualHalfSpace<f64> {
        DualHalfSpace::new(DualVector::from_slice(a).unwrap(), b)
    }

    fn phi(g: &SpaceGeometry<f64>, a: &Vector<f64>, b: &Vector<f64>) -> f64 {
        LyapunovValue::value(g.lyapunov(a, b).unwrap())
    }

    #[test]
    fn p3_half_space_matches_reference_solve() {
        // Reference values computed independently with an SLSQP/brentq
        // solve of min φ(y, x) s.t. y₁ ≤ 1/2 at p = 3 from x = (2, 1):
        //   λ* = 1.553943570554159, y* = (0.5, 0.5706680197302737).
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let h = hs(&[1.0, 0.0], 0.5);
        let r = project_halfspace_dual(&g, &h, &v(&[2.0, 1.0])).unwrap();
        assert!((r.multipliers[0] - 1.553_943_570_554_159).abs() < 1e-8, "{:?}", r.multipliers);
        assert!((r.point.coords()[0] - 0.5).abs() < 1e-9, "{:?}", r.point);
        assert!((r.point.coords()[1] - 0.570_668_019_730_273_7).abs() < 1e-8);
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn feasible_point_is_returned_unchanged() {
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let h = hs(&[1.0, 0.0], 0.5);
        let x = v(&[0.25, 7.0]);
        let r = project_halfspace_dual(&g, &h, &x).unwrap();
        assert_eq!(r.point, x);
        assert_eq!(r.multipliers, vec![0.0]);
    }

    #[test]
    fn complementarity_and_optimality_hold() {
        let g = SpaceGeometry::p_norm(1.5, 3).unwrap();
        let h = hs(&[1.0, -2.0, 0.5], -0.25);
        let x = v(&[1.0, 0.3, -0.7]);
        let r = project_halfspace_dual(&g, &h, &x).unwrap();
        // On the boundary, multiplier positive, and no feasible competitor
        // sampled along the boundary does better.
        assert!(h.slack(&r.point).unwrap().abs() < 1e-8);
        assert!(r.multipliers[0] > 0.0);
        let best = phi(&g, &r.point, &x);
        for t in [-0.5, -0.1, 0.1, 0.5] {
            let competitor = Vector::combine(
                1.0,
                &r.point,
                t,
                &v(&[2.0, 1.0, 0.0]), // direction inside the boundary plane
            )
            .unwrap();
            assert!(h.slack(&competitor).unwrap().abs() < 1e-6);
            assert!(phi(&g, &competitor, &x) >= best - 1e-9);
        }
    }

    #[test]
    fn two_half_spaces_both_active_matches_reference_solve() {
        // Reference (independent fsolve on the KKT system, p = 3,
        // {v₁ ≤ 0.3} ∩ {v₁+v₂ ≤ 0.2}, x = (1.5, 0.8)):
        //   λ* = 0.6946542132683935, μ* = 0.4399760967534881,
        //   y* = (0.3, −0.1) (in d = 2 both boundaries meet in one point).
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let h1 = hs(&[1.0, 0.0], 0.3);
        let h2 = hs(&[1.0, 1.0], 0.2);
        let r = project_two_halfspaces_dual(&g, &h1, &h2, &v(&[1.5, 0.8])).unwrap();
        assert!((r.point.coords()[0] - 0.3).abs() < 1e-9, "{:?}", r.point);
        assert!((r.point.coords()[1] + 0.1).abs() < 1e-9);
        assert!((r.multipliers[0] - 0.694_654_213_268_393_5).abs() < 1e-6);
        assert!((r.multipliers[1] - 0.439_976_096_753_488_1).abs() < 1e-6);
    }

    #[test]
    fn two_half_spaces_single_active_and_feasible_cases() {
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let h1 = hs(&[1.0, 0.0], 0.5);
        let h2 = hs(&[0.0, 1.0], 10.0);
        let x = v(&[2.0, 1.0]);
        let r = project_two_halfspaces_dual(&g, &h1, &h2, &x).unwrap();
        // Second constraint slack: multiplier must be exactly zero and the
        // point must agree with the single-constraint solve.
        assert_eq!(r.multipliers[1], 0.0);
        assert!((r.point.coords()[0] - 0.5).abs() < 1e-9);
        assert!((r.point.coords()[1] - 0.570_668_019_730_273_7).abs() < 1e-8);

        let inside = v(&[0.1, -0.4]);
        let r2 = project_two_halfspaces_dual(&g, &h1, &h2, &inside).unwrap();
        assert_eq!(r2.point, inside);
        assert_eq!(r2.multipliers, vec![0.0, 0.0]);
    }

    #[test]
    fn degenerate_normals_reduce_to_single_constraint() {
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let full = DualHalfSpace::full_space(2);
        let h = hs(&[1.0, 0.0], 0.5);
        let r = project_two_halfspaces_dual(&g, &full, &h, &v(&[2.0, 1.0])).unwrap();
        assert_eq!(r.multipliers[0], 0.0);
        assert!((r.point.coords()[0] - 0.5).abs() < 1e-9);
        let empty = DualHalfSpace::new(DualVector::zeros(2), -1.0);
        assert_eq!(
            project_two_halfspaces_dual(&g, &empty, &h, &v(&[2.0, 1.0])).unwrap_err(),
            SetError::Infeasible
        );
    }

    #[test]
    fn hilbert_dispatch_matches_euclidean_closed_form() {
        let g = SpaceGeometry::p_norm(2.0, 2).unwrap();
        let h1 = hs(&[1.0, 0.0], 1.0);
        let h2 = hs(&[0.0, 1.0], 0.0);
        let r = project_two_halfspaces_dual(&g, &h1, &h2, &v(&[2.0, 3.0])).unwrap();
        assert!((r.point.coords()[0] - 1.0).abs() < 1e-14);
        assert!(r.point.coords()[1].abs() < 1e-14);
    }

    #[test]
    fn generalized_projection_variational_inequality_spot_check() {
        // ⟨x̄ − y, Jx − Jx̄⟩ ≥ 0 for feasible y — the defining property of
        // the minimizer.
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let h = hs(&[2.0, -1.0], 0.4);
        let x = v(&[3.0, -2.0]);
        let r = project_halfspace_dual(&g, &h, &x).unwrap();
        let jx = g.duality_map(&x).unwrap();
        let jxbar = g.duality_map(&r.point).unwrap();
        let diff = DualVector::combine(1.0, &jx, -1.0, &jxbar).unwrap();
        for y in [v(&[0.0, 0.0]), v(&[-1.0, 2.0]), v(&[0.2, 0.0]), v(&[-3.0, -3.0])] {
            assert!(h.slack(&y).unwrap() >= 0.0, "test point must be feasible");
            let gap = pairing(&r.point.sub(&y).unwrap(), &diff).unwrap();
            assert!(gap >= -1e-8, "variational inequality violated: {gap}");
        }
    }
}
