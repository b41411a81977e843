//! Brute-force projection oracle and feasible-point sampling.
//!
//! [`brute_force_project`] approximates the generalized projection by
//! multi-start projected gradient with a diminishing step size.  It shares
//! no logic with the fast paths it validates: feasibility restoration uses
//! the primitive closed forms directly and always uses Dykstra cycles for
//! intersections (never the two-half-space active-set solver), and the
//! step size needs no curvature model.  It is deliberately slow and is
//! meant for desk-scale test instances (`d ≤ 4`).

use super::metric::dykstra;
use super::{metric_project, ConvexSet, SetError};
use crate::geometry::{SpaceGeometry, Vector};
use crate::scalar::Real;
use crate::tolerances as tol;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Brute-force minimizer of `φ(·, x)` over `s`.
///
/// Runs 20 feasible starting points (a fixed internal seed makes the
/// oracle deterministic), each with up to 50 000 diminishing-step
/// projected-gradient iterations, and returns the best point found.
///
/// Panics if `d > 4`: the oracle is a test instrument, not a solver.
pub fn brute_force_project<R: Real>(
    g: &SpaceGeometry<R>,
    s: &ConvexSet<R>,
    x: &Vector<R>,
) -> Result<Vector<R>, SetError> {
    assert!(g.dim() <= 4, "the brute-force oracle is restricted to d <= 4");
    let mut rng = ChaCha8Rng::seed_from_u64(0x0BAC1E);
    let jx = g.duality_map(x)?;
    let objective = |y: &Vector<R>| -> Result<R, SetError> {
        let ny = g.norm(y)?;
        Ok(ny * ny - R::of(2.0) * crate::geometry::pairing(y, &jx)?)
    };

    let mut best: Option<(R, Vector<R>)> = None;
    for start_index in 0..tol::ORACLE_STARTS {
        // First start: restore feasibility from x itself; the rest are
        // random feasible points.
        let start = if start_index == 0 {
            restore_feasibility(s, x)?
        } else {
            sample_point(s, &mut rng)?
        };
        let (value, point) = descend(s, start, &objective)?;
        match &best {
            Some((bv, _)) if *bv <= value => {}
            _ => best = Some((value, point)),
        }
    }
    Ok(best.expect("at least one start ran").1)
}

/// One multi-start leg: projected gradient with step
/// `t_k = max(1e-3, t₀ / √(k+1))`, tracking the best objective value seen.
fn descend<R: Real>(
    s: &ConvexSet<R>,
    start: Vector<R>,
    objective: &impl Fn(&Vector<R>) -> Result<R, SetError>,
) -> Result<(R, Vector<R>), SetError> {
    let t0 = R::of(0.25);
    let floor = R::of(1e-3);
    let mut y = start;
    let mut best_value = objective(&y)?;
    let mut best_point = y.clone();
    for k in 0..tol::ORACLE_ITERS {
        let t = (t0 / R::of_usize(k + 1).sqrt()).max(floor);
        let grad = fd_gradient(&y, objective)?;
        let moved = Vector::combine(R::one(), &y, -t, &grad)?;
        let next = restore_feasibility(s, &moved)?;
        let step = next.sub(&y)?.euclidean_norm();
        y = next;
        let value = objective(&y)?;
        if value < best_value {
            best_value = value;
            best_point = y.clone();
        }
        if step / t <= R::of(tol::ORACLE_STALL) {
            break;
        }
    }
    Ok((best_value, best_point))
}

/// Central-difference gradient of the objective.  Finite differences keep
/// the oracle independent of the analytic gradient `2Jy − 2Jx` used by the
/// fast paths under test.
fn fd_gradient<R: Real>(
    y: &Vector<R>,
    objective: &impl Fn(&Vector<R>) -> Result<R, SetError>,
) -> Result<Vector<R>, SetError> {
    let h = R::of(1e-6);
    let mut grad = vec![R::zero(); y.dim()];
    let mut probe = y.coords().to_vec();
    for (i, slot) in grad.iter_mut().enumerate() {
        let orig = probe[i];
        probe[i] = orig + h;
        let plus = objective(&Vector::from_slice(&probe)?)?;
        probe[i] = orig - h;
        let minus = objective(&Vector::from_slice(&probe)?)?;
        probe[i] = orig;
        *slot = (plus - minus) / (R::of(2.0) * h);
    }
    Ok(Vector::new(grad)?)
}

/// Restores feasibility with the primitive Euclidean projections, using
/// Dykstra cycles for every intersection (independent of the active-set
/// two-half-space path).
fn restore_feasibility<R: Real>(s: &ConvexSet<R>, x: &Vector<R>) -> Result<Vector<R>, SetError> {
    match s {
        ConvexSet::Intersection(members) => Ok(dykstra(members, x)?.point),
        _ => Ok(metric_project(s, x)?.point),
    }
}

/// Draws a point of `s`, approximately uniformly for boxes and balls and
/// by projecting a Gaussian seed for half-spaces and intersections.
/// Deterministic given the caller's RNG state.
pub fn sample_point<R: Real, G: Rng>(s: &ConvexSet<R>, rng: &mut G) -> Result<Vector<R>, SetError> {
    match s {
        ConvexSet::Box { lower, upper } => {
            let coords = lower
                .coords()
                .iter()
                .zip(upper.coords())
                .map(|(&l, &u)| l + (u - l) * R::of(rng.gen::<f64>()))
                .collect();
            Ok(Vector::new(coords)?)
        }
        ConvexSet::Ball { center, radius } => {
            let d = center.dim();
            let dir: Vector<R> = gaussian(d, rng);
            let n = dir.euclidean_norm();
            let dir = if n > R::zero() { dir.scale(n.recip()) } else { dir };
            let r = *radius * R::of(rng.gen::<f64>().powf(1.0 / d as f64));
            Ok(Vector::combine(R::one(), center, r, &dir)?)
        }
        ConvexSet::HalfSpace(_) => {
            let seed = gaussian(s.dim(), rng).scale(R::of(3.0));
            Ok(metric_project(s, &seed)?.point)
        }
        ConvexSet::Intersection(members) => {
            let seed = gaussian(s.dim(), rng).scale(R::of(3.0));
            Ok(dykstra(members, &seed)?.point)
        }
    }
}

/// Standard Gaussian coordinates via Box–Muller.
fn gaussian<R: Real, G: Rng>(d: usize, rng: &mut G) -> Vector<R> {
    let mut coords = Vec::with_capacity(d);
    while coords.len() < d {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        coords.push(R::of(radius * angle.cos()));
        if coords.len() < d {
            coords.push(R::of(radius * angle.sin()));
        }
    }
    Vector::new(coords).expect("gaussian coordinates are finite")
}
