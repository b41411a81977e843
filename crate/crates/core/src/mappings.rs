//! Test operators with certified structure: known fixed-point sets,
//! certified (asymptotic) nonexpansiveness, and explicit `k_n` schedules.
//!
//! The solvers never introspect an operator beyond [`MappingSpec::apply`],
//! [`MappingSpec::apply_power`], [`MappingSpec::fixed_set`], and the
//! certification predicates, so convergence targets stay computable
//! independently of the iteration under test.

use crate::geometry::{GeometryError, SpaceGeometry, Vector};
use crate::scalar::Real;
use crate::sets::{generalized_project, metric_project, sample_point, ConvexSet, SetError};
use crate::tolerances as tol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Error type for mapping construction and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MappingError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Set(#[from] SetError),
    /// The input lies outside the mapping's domain.
    #[error("input lies outside the mapping domain (violation {violation:.3e})")]
    OutsideDomain { violation: f64 },
    /// A construction parameter is invalid; the message names the rule.
    #[error("{0}")]
    InvalidParameter(String),
    /// The mapping has no usable fixed-point-set description (identity-like
    /// configurations).
    #[error("fixed-point set description is not available for this mapping configuration")]
    UnsupportedFixedSet,
}

/// Schedule of asymptotic constants `k_n ≥ 1`, `k_n → 1`, consumed by the
/// power-based solvers (`n ≥ 1` as in the defining inequality
/// `‖Tⁿx − Tⁿy‖ ≤ k_n ‖x − y‖`).
#[derive(Debug, Clone, PartialEq)]
pub enum KSchedule<R: Real> {
    /// `k_n ≡ 1` (nonexpansive).
    Ones,
    /// `k_n = 1 + 1/(n+1)²` — a synthetic schedule used to exercise the
    /// `k`-dependent solver terms on maps that are in fact nonexpansive
    /// (any upper bound `≥ 1` remains valid).
    OnePlusInvSquare,
    /// `k_n = max(1, 2·∏_{i=2}^{n} aᵢ)` for coefficients
    /// `a₂, …, a_{d−1}` with product `1/2`: starts at `k₁ = 2` and walks
    /// down to exactly `1`.  The `max` guards the floating-point product.
    ProductHalving { coefficients: Vec<R> },
}

impl<R: Real> KSchedule<R> {
    /// The constant `k_n`; `n ≥ 1`.
    pub fn k(&self, n: usize) -> R {
        assert!(n >= 1, "asymptotic constants are indexed from 1");
        match self {
            KSchedule::Ones => R::one(),
            KSchedule::OnePlusInvSquare => {
                let m = R::of_usize(n + 1);
                R::one() + (m * m).recip()
            }
            KSchedule::ProductHalving { coefficients } => {
                let take = (n - 1).min(coefficients.len());
                let product = coefficients[..take]
                    .iter()
                    .fold(R::of(2.0), |acc, &a| acc * a);
                product.max(R::one())
            }
        }
    }
}

/// The operator kinds.  See the constructors on [`MappingSpec`] for the
/// validation rules of each kind.
#[derive(Debug, Clone, PartialEq)]
pub enum MappingKind<R: Real> {
    /// Plane rotation by `angle` (2-dimensional inner-product geometry).
    Rotation { angle: R },
    /// `x ↦ center + factor·(x − center)` with `factor ∈ [0, 1)`.
    Contraction { factor: R, center: Vector<R> },
    /// Euclidean projection onto `target` (inner-product geometry).
    MetricProjection { target: ConvexSet<R> },
    /// Generalized (Lyapunov-functional) projection onto `target`.
    GeneralizedProjection { target: ConvexSet<R> },
    /// `x ↦ weight·x + (1−weight)·inner(x)`.
    Averaged { inner: Box<MappingSpec<R>>, weight: R },
    /// The truncated shift-and-square map on the unit ball of `R^d`:
    /// `(x₁, …, x_d) ↦ (0, x₁², a₂x₂, …, a_{d−1}x_{d−1})`, the standard
    /// witness of a genuinely asymptotically nonexpansive map with
    /// `k₁ = 2` and `k_n ↘ 1`.
    GoebelKirk { coefficients: Vec<R> },
}

/// Verification report of a sampled operator property; `max_violation`
/// may be negative when the inequality held with slack everywhere.
#[derive(Debug, Clone)]
pub struct VerificationReport<R: Real> {
    /// Number of sampled base points (or pairs).
    pub samples: usize,
    /// Largest observed violation of the checked inequality.
    pub max_violation: R,
    /// Witness of the largest violation: the base point(s) and the power.
    pub worst: Option<Witness<R>>,
}

/// Witness triple for a [`VerificationReport`].
#[derive(Debug, Clone)]
pub struct Witness<R: Real> {
    pub x: Vector<R>,
    pub y: Vector<R>,
    pub power: usize,
}

/// Description of a known fixed-point set `F(T)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FixedSetRef<R: Real> {
    /// `F(T)` is a single point.
    Point(Vector<R>),
    /// `F(T)` is a convex set with its own projections.
    Set(ConvexSet<R>),
}

impl<R: Real> FixedSetRef<R> {
    /// Projection of `x` onto `F(T)` under `g` (generalized projection;
    /// the metric projection in inner-product geometry).
    pub fn project(&self, g: &SpaceGeometry<R>, x: &Vector<R>) -> Result<Vector<R>, SetError> {
        match self {
            FixedSetRef::Point(p) => Ok(p.clone()),
            FixedSetRef::Set(s) => Ok(generalized_project(g, s, x)?.point),
        }
    }

    /// Membership within `tol`.
    pub fn contains(&self, x: &Vector<R>, tol: R) -> Result<bool, SetError> {
        match self {
            FixedSetRef::Point(p) => Ok(x.sub(p)?.euclidean_norm() <= tol),
            FixedSetRef::Set(s) => s.contains(x, tol),
        }
    }

    /// Draws a point of `F(T)` (the point itself, or a sample of the set).
    pub fn sample<G: rand::Rng>(&self, rng: &mut G) -> Result<Vector<R>, SetError> {
        match self {
            FixedSetRef::Point(p) => Ok(p.clone()),
            FixedSetRef::Set(s) => sample_point(s, rng),
        }
    }
}

/// An operator `T : C → C` with its geometry, domain, and declared
/// asymptotic constants.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingSpec<R: Real> {
    kind: MappingKind<R>,
    geometry: SpaceGeometry<R>,
    domain: ConvexSet<R>,
    k_schedule: KSchedule<R>,
}

fn default_domain<R: Real>(dim: usize) -> ConvexSet<R> {
    ConvexSet::ball(Vector::zeros(dim), R::of(10.0)).expect("default radius is valid")
}

impl<R: Real> MappingSpec<R> {
    /// Plane rotation by `angle`.  Requires a 2-dimensional inner-product
    /// geometry; the domain defaults to the ball of radius 10.
    pub fn rotation(angle: R, geometry: SpaceGeometry<R>) -> Result<Self, MappingError> {
        if !geometry.is_hilbert() || geometry.dim() != 2 {
            return Err(MappingError::InvalidParameter(
                "rotation requires a 2-dimensional inner-product geometry".into(),
            ));
        }
        if !angle.is_finite() {
            return Err(MappingError::InvalidParameter("rotation angle must be finite".into()));
        }
        Ok(Self {
            kind: MappingKind::Rotation { angle },
            domain: default_domain(geometry.dim()),
            geometry,
            k_schedule: KSchedule::Ones,
        })
    }

    /// Contraction toward `center` with `factor ∈ [0, 1)`.
    pub fn contraction(factor: R, center: Vector<R>, geometry: SpaceGeometry<R>) -> Result<Self, MappingError> {
        if !(factor >= R::zero() && factor < R::one()) {
            return Err(MappingError::InvalidParameter(
                "contraction factor must lie in [0, 1)".into(),
            ));
        }
        if center.dim() != geometry.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: geometry.dim(),
                found: center.dim(),
            }
            .into());
        }
        Ok(Self {
            kind: MappingKind::Contraction { factor, center },
            domain: default_domain(geometry.dim()),
            geometry,
            k_schedule: KSchedule::Ones,
        })
    }

    /// Euclidean projection onto `target` (inner-product geometry only:
    /// in other geometries the metric projector is not nonexpansive in the
    /// certified senses).
    pub fn metric_projection(target: ConvexSet<R>, geometry: SpaceGeometry<R>) -> Result<Self, MappingError> {
        if !geometry.is_hilbert() {
            return Err(MappingError::InvalidParameter(
                "metric-projection operators require an inner-product geometry".into(),
            ));
        }
        Self::check_target(&target, &geometry)?;
        Ok(Self {
            kind: MappingKind::MetricProjection { target },
            domain: default_domain(geometry.dim()),
            geometry,
            k_schedule: KSchedule::Ones,
        })
    }

    /// Generalized projection onto `target` (any admitted geometry).
    pub fn generalized_projection(target: ConvexSet<R>, geometry: SpaceGeometry<R>) -> Result<Self, MappingError> {
        Self::check_target(&target, &geometry)?;
        Ok(Self {
            kind: MappingKind::GeneralizedProjection { target },
            domain: default_domain(geometry.dim()),
            geometry,
            k_schedule: KSchedule::Ones,
        })
    }

    fn check_target(target: &ConvexSet<R>, geometry: &SpaceGeometry<R>) -> Result<(), MappingError> {
        if target.dim() != geometry.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: geometry.dim(),
                found: target.dim(),
            }
            .into());
        }
        Ok(())
    }

    /// Averaged map `weight·I + (1−weight)·inner` with `weight ∈ (0, 1]`;
    /// geometry and domain are inherited from `inner`.
    pub fn averaged(inner: MappingSpec<R>, weight: R) -> Result<Self, MappingError> {
        if !(weight > R::zero() && weight <= R::one()) {
            return Err(MappingError::InvalidParameter(
                "averaging weight must lie in (0, 1]".into(),
            ));
        }
        Ok(Self {
            geometry: inner.geometry.clone(),
            domain: inner.domain.clone(),
            k_schedule: inner.k_schedule.clone(),
            kind: MappingKind::Averaged { inner: Box::new(inner), weight },
        })
    }

    /// The shift-and-square map on the unit ball of `R^d` (`d ≥ 3`) with
    /// uniform coefficients `aᵢ = (1/2)^{1/(d−2)}`.
    pub fn goebel_kirk(dim: usize) -> Result<Self, MappingError> {
        if dim < 3 {
            return Err(MappingError::InvalidParameter(
                "the shift-and-square map needs dimension >= 3".into(),
            ));
        }
        let a = R::of(0.5).powf(R::of_usize(dim - 2).recip());
        Self::goebel_kirk_with_coefficients(vec![a; dim - 2])
    }

    /// The shift-and-square map with explicit coefficients
    /// `a₂, …, a_{d−1}` (`d = len + 2`); each must lie in `(0, 1)` and
    /// their product must equal `1/2` (within `1e-12`), which pins
    /// `k_{d−1} = 1`.
    pub fn goebel_kirk_with_coefficients(coefficients: Vec<R>) -> Result<Self, MappingError> {
        if coefficients.is_empty() {
            return Err(MappingError::InvalidParameter(
                "the shift-and-square map needs at least one coefficient".into(),
            ));
        }
        if coefficients.iter().any(|&a| !(a > R::zero() && a < R::one())) {
            return Err(MappingError::InvalidParameter(
                "shift-and-square coefficients must lie in (0, 1)".into(),
            ));
        }
        let product = coefficients.iter().fold(R::one(), |acc, &a| acc * a);
        if (product - R::of(0.5)).abs() > R::of(1e-12) {
            return Err(MappingError::InvalidParameter(
                "shift-and-square coefficients must multiply to 1/2".into(),
            ));
        }
        let dim = coefficients.len() + 2;
        let geometry = SpaceGeometry::euclidean(dim)?;
        let domain = ConvexSet::ball(Vector::zeros(dim), R::one()).expect("unit ball is valid");
        Ok(Self {
            k_schedule: KSchedule::ProductHalving { coefficients: coefficients.clone() },
            kind: MappingKind::GoebelKirk { coefficients },
            geometry,
            domain,
        })
    }

    /// Replaces the domain (must match the geometry dimension).  The
    /// shift-and-square map keeps its unit ball: its asymptotic constants
    /// are derived from that domain.
    pub fn with_domain(mut self, domain: ConvexSet<R>) -> Result<Self, MappingError> {
        if matches!(self.kind, MappingKind::GoebelKirk { .. }) {
            return Err(MappingError::InvalidParameter(
                "the shift-and-square map is tied to the unit ball".into(),
            ));
        }
        if domain.dim() != self.geometry.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.geometry.dim(),
                found: domain.dim(),
            }
            .into());
        }
        self.domain = domain;
        Ok(self)
    }

    /// Replaces the declared `k_n` schedule.  A nonexpansive map may carry
    /// a schedule with `k_n > 1`: any upper bound stays valid, and the
    /// power-based solvers then exercise their `k`-dependent terms.
    pub fn with_k_schedule(mut self, schedule: KSchedule<R>) -> Self {
        self.k_schedule = schedule;
        self
    }

    /// The operator kind.
    pub fn kind(&self) -> &MappingKind<R> {
        &self.kind
    }

    /// The ambient geometry.
    pub fn geometry(&self) -> &SpaceGeometry<R> {
        &self.geometry
    }

    /// The domain `C`.
    pub fn domain(&self) -> &ConvexSet<R> {
        &self.domain
    }

    /// The declared `k_n` schedule.
    pub fn k_schedule(&self) -> &KSchedule<R> {
        &self.k_schedule
    }

    /// Shorthand for `k_schedule().k(n)`.
    pub fn k(&self, n: usize) -> R {
        self.k_schedule.k(n)
    }

    /// Applies `T` once.  The input must lie in the domain (within the
    /// membership tolerance); the result is `Tx`.
    pub fn apply(&self, x: &Vector<R>) -> Result<Vector<R>, MappingError> {
        let violation = self.domain.violation(x)?;
        if violation > R::of(tol::DOMAIN_INPUT) {
            return Err(MappingError::OutsideDomain { violation: violation.as_f64() });
        }
        match &self.kind {
            MappingKind::Rotation { angle } => {
                let (c, s) = (angle.cos(), angle.sin());
                let (x1, x2) = (x.coords()[0], x.coords()[1]);
                Ok(Vector::new(vec![c * x1 - s * x2, s * x1 + c * x2])?)
            }
            MappingKind::Contraction { factor, center } => {
                Ok(Vector::combine(R::one() - *factor, center, *factor, x)?)
            }
            MappingKind::MetricProjection { target } => Ok(metric_project(target, x)?.point),
            MappingKind::GeneralizedProjection { target } => {
                Ok(generalized_project(&self.geometry, target, x)?.point)
            }
            MappingKind::Averaged { inner, weight } => {
                let tx = inner.apply(x)?;
                Ok(Vector::combine(*weight, x, R::one() - *weight, &tx)?)
            }
            MappingKind::GoebelKirk { coefficients } => {
                let d = x.dim();
                let mut out = vec![R::zero(); d];
                out[1] = x.coords()[0] * x.coords()[0];
                for (i, &a) in coefficients.iter().enumerate() {
                    out[i + 2] = a * x.coords()[i + 1];
                }
                Ok(Vector::new(out)?)
            }
        }
    }

    /// `n`-fold composition `Tⁿx` computed by iteration (`n ≥ 1`).
    pub fn apply_power(&self, x: &Vector<R>, n: usize) -> Result<Vector<R>, MappingError> {
        if n == 0 {
            return Err(MappingError::InvalidParameter("power must be >= 1".into()));
        }
        let mut y = self.apply(x)?;
        for _ in 1..n {
            y = self.apply(&y)?;
        }
        Ok(y)
    }

    /// The known fixed-point set `F(T)`.
    pub fn fixed_set(&self) -> Result<FixedSetRef<R>, MappingError> {
        match &self.kind {
            MappingKind::Rotation { angle } => {
                let two_pi = R::of(std::f64::consts::TAU);
                let reduced = (*angle % two_pi + two_pi) % two_pi;
                if reduced.abs() < R::of(1e-12) || (reduced - two_pi).abs() < R::of(1e-12) {
                    // Identity rotation: every point is fixed.
                    Ok(FixedSetRef::Set(self.domain.clone()))
                } else {
                    Ok(FixedSetRef::Point(Vector::zeros(2)))
                }
            }
            MappingKind::Contraction { center, .. } => Ok(FixedSetRef::Point(center.clone())),
            MappingKind::MetricProjection { target } | MappingKind::GeneralizedProjection { target } => {
                Ok(FixedSetRef::Set(target.clone()))
            }
            MappingKind::Averaged { inner, weight } => {
                if *weight == R::one() {
                    // Identity: the fixed set is the whole domain, which is
                    // not a useful convergence target.
                    Err(MappingError::UnsupportedFixedSet)
                } else {
                    inner.fixed_set()
                }
            }
            MappingKind::GoebelKirk { .. } => Ok(FixedSetRef::Point(Vector::zeros(self.geometry.dim()))),
        }
    }

    /// Whether the map is certified nonexpansive in the ambient norm
    /// (`‖Tx − Ty‖ ≤ ‖x − y‖`).
    pub fn is_nonexpansive(&self) -> bool {
        match &self.kind {
            MappingKind::Rotation { .. } | MappingKind::Contraction { .. } => true,
            MappingKind::MetricProjection { .. } => true,
            // The generalized projection is the metric projection exactly in
            // inner-product geometry; elsewhere it is certified only in the
            // Lyapunov sense.
            MappingKind::GeneralizedProjection { .. } => self.geometry.is_hilbert(),
            MappingKind::Averaged { inner, .. } => inner.is_nonexpansive(),
            MappingKind::GoebelKirk { .. } => false,
        }
    }

    /// Whether the map is certified asymptotically nonexpansive
    /// (`‖Tⁿx − Tⁿy‖ ≤ k_n ‖x − y‖` with the declared schedule).
    pub fn is_asymptotically_nonexpansive(&self) -> bool {
        self.is_nonexpansive() || matches!(self.kind, MappingKind::GoebelKirk { .. })
    }

    /// Whether the map is certified relatively asymptotically nonexpansive
    /// (`φ(p, Tⁿx) ≤ k_n² φ(p, x)` for fixed points `p`).
    pub fn is_relatively_asymptotically_nonexpansive(&self) -> bool {
        if self.geometry.is_hilbert() {
            return self.is_asymptotically_nonexpansive();
        }
        match &self.kind {
            // Lyapunov-functional projections are relatively nonexpansive in
            // any admitted geometry (three-point inequality).
            MappingKind::GeneralizedProjection { .. } => true,
            // A contraction toward the origin satisfies
            // φ(0, Tx) = ‖Tx‖² = factor²‖x‖² ≤ φ(0, x) in every norm.
            MappingKind::Contraction { center, .. } => {
                center.coords().iter().all(|&c| c == R::zero())
            }
            _ => false,
        }
    }

    /// Sampled check of the fixed-set description: `‖Tp − p‖` over points
    /// of `F(T)`.
    pub fn verify_fixed_set(&self, samples: usize, seed: u64) -> Result<VerificationReport<R>, MappingError> {
        let fixed = self.fixed_set()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = VerificationReport { samples, max_violation: R::neg_infinity(), worst: None };
        for _ in 0..samples {
            let p = fixed.sample(&mut rng)?;
            let tp = self.apply(&p)?;
            let gap = tp.sub(&p)?.euclidean_norm();
            if gap > report.max_violation {
                report.max_violation = gap;
                report.worst = Some(Witness { x: p, y: tp, power: 1 });
            }
        }
        Ok(report)
    }

    /// Sampled check of `‖Tⁿx − Tⁿy‖ − k_n‖x − y‖` over random domain
    /// pairs and all powers `1..=max_power`.
    pub fn verify_asymptotic_nonexpansiveness(
        &self,
        pairs: usize,
        max_power: usize,
        seed: u64,
    ) -> Result<VerificationReport<R>, MappingError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = VerificationReport { samples: pairs, max_violation: R::neg_infinity(), worst: None };
        for _ in 0..pairs {
            let x = sample_point(&self.domain, &mut rng)?;
            let y = sample_point(&self.domain, &mut rng)?;
            let base = x.sub(&y)?.euclidean_norm();
            let mut tx = x.clone();
            let mut ty = y.clone();
            for n in 1..=max_power {
                tx = self.apply(&tx)?;
                ty = self.apply(&ty)?;
                let violation = tx.sub(&ty)?.euclidean_norm() - self.k(n) * base;
                if violation > report.max_violation {
                    report.max_violation = violation;
                    report.worst = Some(Witness { x: x.clone(), y: y.clone(), power: n });
                }
            }
        }
        Ok(report)
    }

    /// Sampled check of `φ(p, Tⁿx) − k_n² φ(p, x)` over random `x ∈ C`,
    /// `p ∈ F(T)`, and all powers `1..=max_power`.
    pub fn verify_relative_asymptotic_nonexpansiveness(
        &self,
        samples: usize,
        max_power: usize,
        seed: u64,
    ) -> Result<VerificationReport<R>, MappingError> {
        let fixed = self.fixed_set()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = VerificationReport { samples, max_violation: R::neg_infinity(), worst: None };
        for _ in 0..samples {
            let x = sample_point(&self.domain, &mut rng)?;
            let p = fixed.sample(&mut rng)?;
            let base = self.geometry.lyapunov(&p, &x)?.value();
            let mut tx = x.clone();
            for n in 1..=max_power {
                tx = self.apply(&tx)?;
                let k = self.k(n);
                let violation = self.geometry.lyapunov(&p, &tx)?.value() - k * k * base;
                if violation > report.max_violation {
                    report.max_violation = violation;
                    report.worst = Some(Witness { x: x.clone(), y: p.clone(), power: n });
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::from_slice(coords).unwrap()
    }

    fn unit_box(d: usize) -> ConvexSet<f64> {
        ConvexSet::hyper_box(Vector::new(vec![-1.0; d]).unwrap(), Vector::new(vec![1.0; d]).unwrap()).unwrap()
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let m = MappingSpec::rotation(std::f64::consts::FRAC_PI_2, g).unwrap();
        let tx = m.apply(&v(&[1.0, 0.0])).unwrap();
        assert!(tx.coords()[0].abs() < 1e-15);
        assert!((tx.coords()[1] - 1.0).abs() < 1e-15);
        // Full turn via powers.
        let t4 = m.apply_power(&v(&[1.0, 0.0]), 4).unwrap();
        assert!((t4.coords()[0] - 1.0).abs() < 1e-15);
        assert!(t4.coords()[1].abs() < 1e-15);
        assert_eq!(m.fixed_set().unwrap(), FixedSetRef::Point(Vector::zeros(2)));
    }

    #[test]
    fn contraction_powers_decay_geometrically() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let m = MappingSpec::contraction(0.5, Vector::zeros(2), g).unwrap();
        let t3 = m.apply_power(&v(&[1.0, 0.0]), 3).unwrap();
        assert_eq!(t3.coords(), &[0.125, 0.0]);
    }

    #[test]
    fn projection_mapping_fixes_interior_points() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let m = MappingSpec::metric_projection(unit_box(2), g).unwrap();
        let x = v(&[0.5, 0.5]);
        assert_eq!(m.apply(&x).unwrap(), x);
        match m.fixed_set().unwrap() {
            FixedSetRef::Set(s) => assert_eq!(s, unit_box(2)),
            other => panic!("expected a set, got {other:?}"),
        }
    }

    #[test]
    fn shift_and_square_evaluates_the_formula() {
        let m = MappingSpec::<f64>::goebel_kirk(6).unwrap();
        let tx = m.apply(&v(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(tx.coords()[0], 0.0);
        assert_eq!(tx.coords()[1], 0.25);
        assert!(tx.coords()[2..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn shift_and_square_k_schedule_matches_hand_values() {
        // d = 6, uniform a = (1/2)^{1/4} = 0.8408964152537145:
        // k₁ = 2, k₂ = 2a = 1.681792830507429, k₃ = 2a² = √2,
        // k₄ = 2a³ = 1.189207115002721, k₅ = 2a⁴ = 1 (clamped), then 1.
        let m = MappingSpec::<f64>::goebel_kirk(6).unwrap();
        assert_eq!(m.k(1), 2.0);
        assert!((m.k(2) - 1.681_792_830_507_429).abs() < 1e-14);
        assert!((m.k(3) - 2f64.sqrt()).abs() < 1e-14);
        assert!((m.k(4) - 1.189_207_115_002_721).abs() < 1e-14);
        assert_eq!(m.k(5), 1.0);
        assert_eq!(m.k(20), 1.0);
        // The schedule never dips below 1 and is nonincreasing.
        for n in 1..25 {
            assert!(m.k(n) >= 1.0);
            assert!(m.k(n + 1) <= m.k(n) + 1e-15);
        }
    }

    #[test]
    fn domain_violations_are_rejected() {
        let m = MappingSpec::<f64>::goebel_kirk(3).unwrap();
        let err = m.apply(&v(&[2.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, MappingError::OutsideDomain { .. }));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let g2 = SpaceGeometry::euclidean(2).unwrap();
        let g3 = SpaceGeometry::p_norm(3.0, 2).unwrap();
        assert!(MappingSpec::rotation(1.0, g3.clone()).is_err());
        assert!(MappingSpec::contraction(1.0, Vector::zeros(2), g2.clone()).is_err());
        assert!(MappingSpec::metric_projection(unit_box(2), g3.clone()).is_err());
        assert!(MappingSpec::generalized_projection(unit_box(2), g3).is_ok());
        assert!(MappingSpec::<f64>::goebel_kirk(2).is_err());
        assert!(MappingSpec::goebel_kirk_with_coefficients(vec![0.9, 0.9]).is_err());
        let inner = MappingSpec::rotation(1.0, g2).unwrap();
        assert!(MappingSpec::averaged(inner, 0.0).is_err());
    }

    #[test]
    fn averaged_map_blends_and_inherits_fixed_set() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let inner = MappingSpec::rotation(std::f64::consts::PI, g).unwrap();
        let m = MappingSpec::averaged(inner, 0.5).unwrap();
        // (I + R_π)/2 maps everything to 0 in one step.
        let tx = m.apply(&v(&[3.0, -2.0])).unwrap();
        assert!(tx.euclidean_norm() < 1e-15);
        assert_eq!(m.fixed_set().unwrap(), FixedSetRef::Point(Vector::zeros(2)));
        assert!(m.is_nonexpansive());
    }

    #[test]
    fn certification_predicates() {
        let g2 = SpaceGeometry::euclidean(2).unwrap();
        let gp2 = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let rot = MappingSpec::rotation(1.0, g2.clone()).unwrap();
        assert!(rot.is_nonexpansive() && rot.is_asymptotically_nonexpansive());
        assert!(rot.is_relatively_asymptotically_nonexpansive());

        let gk = MappingSpec::<f64>::goebel_kirk(4).unwrap();
        assert!(!gk.is_nonexpansive());
        assert!(gk.is_asymptotically_nonexpansive());

        let gen_p = MappingSpec::generalized_projection(unit_box(2), gp2.clone()).unwrap();
        assert!(!gen_p.is_nonexpansive());
        assert!(gen_p.is_relatively_asymptotically_nonexpansive());

        let contraction_origin = MappingSpec::contraction(0.5, Vector::zeros(2), gp2.clone()).unwrap();
        assert!(contraction_origin.is_relatively_asymptotically_nonexpansive());
        let contraction_off = MappingSpec::contraction(0.5, v(&[1.0, 0.0]), gp2).unwrap();
        assert!(!contraction_off.is_relatively_asymptotically_nonexpansive());
    }

    #[test]
    fn fixed_set_consistency_sampled() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let m = MappingSpec::metric_projection(unit_box(2), g).unwrap();
        let report = m.verify_fixed_set(100, 11).unwrap();
        assert!(report.max_violation <= 1e-10, "violation {}", report.max_violation);
    }

    #[test]
    fn synthetic_k_schedule_values() {
        let s = KSchedule::<f64>::OnePlusInvSquare;
        assert_eq!(s.k(1), 1.25);
        assert!((s.k(2) - (1.0 + 1.0 / 9.0)).abs() < 1e-15);
        let ones = KSchedule::<f64>::Ones;
        assert_eq!(ones.k(7), 1.0);
    }

    #[test]
    fn relative_verification_accepts_projection_maps() {
        let g = SpaceGeometry::p_norm(3.0, 2).unwrap();
        let m = MappingSpec::generalized_projection(unit_box(2), g).unwrap();
        let report = m.verify_relative_asymptotic_nonexpansiveness(40, 3, 5).unwrap();
        assert!(report.max_violation <= 1e-8, "violation {}", report.max_violation);
    }
}
