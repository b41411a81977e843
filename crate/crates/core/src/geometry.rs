//! Finite-dimensional normed geometry: norms, duality maps, and the
//! Lyapunov functional.
//!
//! A [`SpaceGeometry`] is either the Euclidean space `R^d` or `R^d` with a
//! p-norm, `p ∈ (1.05, 20)`.  The p-norm spaces are smooth and uniformly
//! convex, so the normalized duality map is single-valued and invertible;
//! `p = 2` coincides with the Euclidean case and is dispatched to the same
//! fast path.
//!
//! Primal points are [`Vector`]s, dual (functional) coordinates are
//! [`DualVector`]s.  Keeping the two as distinct types prevents the classic
//! mistake of feeding dual coordinates into a primal norm: only
//! [`pairing`], the duality maps, and the explicitly-dual operations accept
//! a [`DualVector`].

use crate::scalar::Real;
use crate::tolerances as tol;

/// Error type for geometry construction and operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    /// Two operands (or an operand and the space) disagree in dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate was NaN or infinite.
    #[error("vector coordinates must be finite")]
    NonFinite,
    /// The norm exponent lies outside the admitted open interval.
    #[error("norm exponent p = {0} outside the admitted range ({min}, {max})", min = tol::P_MIN, max = tol::P_MAX)]
    ExponentOutOfRange(f64),
    /// The space dimension was zero.
    #[error("space dimension must be positive")]
    ZeroDimension,
    /// The Lyapunov functional evaluated below the negative-roundoff clamp,
    /// which indicates inconsistent inputs rather than roundoff.
    #[error("Lyapunov value {0} is below the negative-roundoff clamp {clamp}", clamp = -tol::LYAPUNOV_NEGATIVE_CLAMP)]
    NegativeLyapunov(f64),
}

fn check_finite<R: Real>(coords: &[R]) -> Result<(), GeometryError> {
    if coords.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(GeometryError::NonFinite)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch { expected, found })
    }
}

/// A point of the primal space.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<R: Real>(Vec<R>);

/// Coordinates of a continuous linear functional (a point of the dual
/// space).
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector<R: Real>(Vec<R>);

macro_rules! vector_impl {
    ($name:ident) => {
        impl<R: Real> $name<R> {
            /// Builds a vector, rejecting non-finite coordinates.
            pub fn new(coords: Vec<R>) -> Result<Self, GeometryError> {
                check_finite(&coords)?;
                Ok(Self(coords))
            }

            /// Convenience constructor from a slice.
            pub fn from_slice(coords: &[R]) -> Result<Self, GeometryError> {
                Self::new(coords.to_vec())
            }

            /// The zero vector of dimension `d`.
            pub fn zeros(d: usize) -> Self {
                Self(vec![R::zero(); d])
            }

            /// Coordinate slice.
            pub fn coords(&self) -> &[R] {
                &self.0
            }

            /// Dimension.
            pub fn dim(&self) -> usize {
                self.0.len()
            }

            /// Linear combination `a·x + b·y`.
            pub fn combine(a: R, x: &Self, b: R, y: &Self) -> Result<Self, GeometryError> {
                check_dims(x.dim(), y.dim())?;
                Ok(Self(
                    x.0.iter().zip(&y.0).map(|(&xi, &yi)| a * xi + b * yi).collect(),
                ))
            }

            /// Difference `self − other`.
            pub fn sub(&self, other: &Self) -> Result<Self, GeometryError> {
                Self::combine(R::one(), self, -R::one(), other)
            }

            /// Scalar multiple.
            pub fn scale(&self, s: R) -> Self {
                Self(self.0.iter().map(|&xi| s * xi).collect())
            }

            /// Euclidean (ℓ²) norm of the coordinate tuple, independent of
            /// any [`SpaceGeometry`].  Used for stopping rules and
            /// diagnostics that are defined coordinate-wise.
            pub fn euclidean_norm(&self) -> R {
                self.0.iter().map(|&c| c * c).sum::<R>().sqrt()
            }
        }
    };
}

vector_impl!(Vector);
vector_impl!(DualVector);

impl<R: Real> Vector<R> {
    /// Reinterprets the coordinate tuple as dual coordinates.
    ///
    /// This is the canonical self-dual identification of Euclidean space;
    /// it is also how hand-written half-space normals are entered.  In
    /// non-Euclidean geometry the honest primal→dual conversion is the
    /// duality map, not this function.
    pub fn into_dual(self) -> DualVector<R> {
        DualVector(self.0)
    }
}

impl<R: Real> DualVector<R> {
    /// Reinterprets dual coordinates as a primal coordinate tuple (the
    /// inverse of [`Vector::into_dual`]).
    pub fn into_vector(self) -> Vector<R> {
        Vector(self.0)
    }
}

/// The duality pairing `⟨x, f⟩ = Σ xᵢ fᵢ`.
pub fn pairing<R: Real>(x: &Vector<R>, f: &DualVector<R>) -> Result<R, GeometryError> {
    check_dims(x.dim(), f.dim())?;
    Ok(x.coords().iter().zip(f.coords()).map(|(&a, &b)| a * b).sum())
}

/// Value of the Lyapunov functional `φ(x, y) = ‖x‖² − 2⟨x, Jy⟩ + ‖y‖²`.
///
/// The functional is nonnegative and satisfies the two-sided bound
/// `(‖x‖ − ‖y‖)² ≤ φ(x, y) ≤ (‖x‖ + ‖y‖)²`.  In Euclidean geometry it
/// reduces to `‖x − y‖²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LyapunovValue<R: Real>(R);

impl<R: Real> LyapunovValue<R> {
    /// The numeric value (always `≥ 0`).
    pub fn value(self) -> R {
        self.0
    }
}

/// Which norm the space carries.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind<R: Real> {
    Euclidean,
    PNorm(R),
}

/// A finite-dimensional space together with its norm.
///
/// All operations validate operand dimensions against the space dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceGeometry<R: Real> {
    kind: Kind<R>,
    dim: usize,
}

impl<R: Real> SpaceGeometry<R> {
    /// Euclidean `R^d`.
    pub fn euclidean(dim: usize) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        Ok(Self { kind: Kind::Euclidean, dim })
    }

    /// `R^d` with the p-norm, `p ∈ (1.05, 20)`.
    pub fn p_norm(p: R, dim: usize) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if !(p.is_finite() && p > R::of(tol::P_MIN) && p < R::of(tol::P_MAX)) {
            return Err(GeometryError::ExponentOutOfRange(p.as_f64()));
        }
        Ok(Self { kind: Kind::PNorm(p), dim })
    }

    /// Space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The norm exponent (`2` for the Euclidean kind).
    pub fn p(&self) -> R {
        match self.kind {
            Kind::Euclidean => R::of(2.0),
            Kind::PNorm(p) => p,
        }
    }

    /// Whether the geometry is an inner-product space.  `p_norm(2, d)` is
    /// recognized and handled by the same fast paths as `euclidean(d)`.
    pub fn is_hilbert(&self) -> bool {
        match self.kind {
            Kind::Euclidean => true,
            Kind::PNorm(p) => p == R::of(2.0),
        }
    }

    /// The conjugate exponent `q = p / (p − 1)`.
    fn q(&self) -> R {
        let p = self.p();
        p / (p - R::one())
    }

    fn check_dim(&self, found: usize) -> Result<(), GeometryError> {
        check_dims(self.dim, found)
    }

    fn p_norm_of(coords: &[R], p: R) -> R {
        let total: R = coords.iter().map(|&c| c.abs().powf(p)).sum();
        total.powf(p.recip())
    }

    /// Norm of a primal point.
    pub fn norm(&self, x: &Vector<R>) -> Result<R, GeometryError> {
        self.check_dim(x.dim())?;
        Ok(match self.kind {
            _ if self.is_hilbert() => x.euclidean_norm(),
            Kind::PNorm(p) => Self::p_norm_of(x.coords(), p),
            Kind::Euclidean => unreachable!(),
        })
    }

    /// Dual norm of a functional (the q-norm, `1/p + 1/q = 1`).
    pub fn dual_norm(&self, f: &DualVector<R>) -> Result<R, GeometryError> {
        self.check_dim(f.dim())?;
        Ok(if self.is_hilbert() {
            f.euclidean_norm()
        } else {
            Self::p_norm_of(f.coords(), self.q())
        })
    }

    /// The normalized duality map
    /// `(Jx)ᵢ = ‖x‖^{2−p} |xᵢ|^{p−1} sign(xᵢ)`, with `J(0) = 0`.
    ///
    /// It satisfies `⟨x, Jx⟩ = ‖x‖²` and `‖Jx‖_* = ‖x‖`; in the Euclidean
    /// case it is the identity on coordinates.
    pub fn duality_map(&self, x: &Vector<R>) -> Result<DualVector<R>, GeometryError> {
        self.check_dim(x.dim())?;
        if self.is_hilbert() {
            return Ok(DualVector(x.coords().to_vec()));
        }
        let p = self.p();
        Ok(DualVector(Self::power_map(x.coords(), p)))
    }

    /// The inverse duality map: the duality map of the dual space, with
    /// exponent `q = p / (p − 1)`, applied to the dual coordinates.
    pub fn inverse_duality_map(&self, f: &DualVector<R>) -> Result<Vector<R>, GeometryError> {
        self.check_dim(f.dim())?;
        if self.is_hilbert() {
            return Ok(Vector(f.coords().to_vec()));
        }
        Ok(Vector(Self::power_map(f.coords(), self.q())))
    }

    /// Shared kernel of the two duality maps: coordinates are mapped by
    /// `t ↦ |t|^{e−1} sign(t)` and the result is scaled by `‖x‖_e^{2−e}`.
    fn power_map(coords: &[R], e: R) -> Vec<R> {
        let norm = Self::p_norm_of(coords, e);
        if norm == R::zero() {
            return vec![R::zero(); coords.len()];
        }
        let scale = norm.powf(R::of(2.0) - e);
        coords
            .iter()
            .map(|&c| {
                if c == R::zero() {
                    R::zero()
                } else {
                    scale * c.abs().powf(e - R::one()) * c.signum()
                }
            })
            .collect()
    }

    /// The Lyapunov functional `φ(x, y) = ‖x‖² − 2⟨x, Jy⟩ + ‖y‖²`.
    ///
    /// Tiny negative values (above `−1e-12`) produced by roundoff are
    /// clamped to zero; anything more negative is an error.
    pub fn lyapunov(&self, x: &Vector<R>, y: &Vector<R>) -> Result<LyapunovValue<R>, GeometryError> {
        self.check_dim(x.dim())?;
        self.check_dim(y.dim())?;
        let raw = if self.is_hilbert() {
            // φ reduces to ‖x − y‖², which is the numerically stable form.
            x.sub(y)?.euclidean_norm().powi(2)
        } else {
            let nx = self.norm(x)?;
            let ny = self.norm(y)?;
            let jy = self.duality_map(y)?;
            nx * nx - R::of(2.0) * pairing(x, &jy)? + ny * ny
        };
        if raw >= R::zero() {
            Ok(LyapunovValue(raw))
        } else if raw >= -R::of(tol::LYAPUNOV_NEGATIVE_CLAMP) {
            Ok(LyapunovValue(R::zero()))
        } else {
            Err(GeometryError::NegativeLyapunov(raw.as_f64()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::from_slice(coords).unwrap()
    }

    #[test]
    fn euclidean_norm_matches_hand_value() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        assert_eq!(g.norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn p4_norm_of_ones_is_fourth_root_of_two() {
        let g = SpaceGeometry::p_norm(4.0, 2).unwrap();
        let n = g.norm(&v(&[1.0, 1.0])).unwrap();
        assert!((n - 2f64.powf(0.25)).abs() < 1e-15, "n = {n}");
        // Independently cross-checked numeric value.
        assert!((n - 1.189_207_115_002_721).abs() < 1e-14);
    }

    #[test]
    fn duality_map_p4_of_ones() {
        // ‖x‖ = 2^{1/4}, scale = ‖x‖^{-2} = 2^{-1/2}, |xᵢ|³ = 1.
        let g = SpaceGeometry::p_norm(4.0, 2).unwrap();
        let j = g.duality_map(&v(&[1.0, 1.0])).unwrap();
        for &c in j.coords() {
            assert!((c - 0.707_106_781_186_547_6).abs() < 1e-15, "c = {c}");
        }
    }

    #[test]
    fn duality_map_identities_hold_at_p3() {
        let g = SpaceGeometry::p_norm(3.0, 3).unwrap();
        let x = v(&[0.3, -1.7, 2.2]);
        let j = g.duality_map(&x).unwrap();
        let n = g.norm(&x).unwrap();
        assert!((pairing(&x, &j).unwrap() - n * n).abs() < 1e-12 * n * n);
        let dn = g.dual_norm(&j).unwrap();
        assert!((dn - n).abs() < 1e-12 * n);
    }

    #[test]
    fn inverse_duality_map_round_trips() {
        let g = SpaceGeometry::p_norm(1.5, 3).unwrap();
        let x = v(&[0.9, -0.1, 1.4]);
        let back = g.inverse_duality_map(&g.duality_map(&x).unwrap()).unwrap();
        for (a, b) in x.coords().iter().zip(back.coords()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn duality_map_fixes_zero() {
        let g = SpaceGeometry::p_norm(3.0, 4).unwrap();
        let j = g.duality_map(&Vector::zeros(4)).unwrap();
        assert!(j.coords().iter().all(|&c| c == 0.0));
        let back = g.inverse_duality_map(&DualVector::zeros(4)).unwrap();
        assert!(back.coords().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn p_equals_two_matches_euclidean() {
        let ge = SpaceGeometry::euclidean(3).unwrap();
        let g2 = SpaceGeometry::p_norm(2.0, 3).unwrap();
        assert!(g2.is_hilbert());
        let x = v(&[1.2, -0.7, 0.4]);
        let y = v(&[-0.3, 0.9, 2.0]);
        assert_eq!(ge.norm(&x).unwrap(), g2.norm(&x).unwrap());
        assert_eq!(
            ge.lyapunov(&x, &y).unwrap().value(),
            g2.lyapunov(&x, &y).unwrap().value()
        );
        assert_eq!(g2.duality_map(&x).unwrap().coords(), x.coords());
    }

    #[test]
    fn lyapunov_p4_against_hand_value() {
        // φ(x, 0) = ‖x‖²; for x = (1,1) at p = 4 this is √2.
        let g = SpaceGeometry::p_norm(4.0, 2).unwrap();
        let phi = g.lyapunov(&v(&[1.0, 1.0]), &Vector::zeros(2)).unwrap().value();
        assert!((phi - 2f64.sqrt()).abs() < 1e-15, "phi = {phi}");
    }

    #[test]
    fn lyapunov_euclidean_is_squared_distance() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let phi = g.lyapunov(&v(&[4.0, 6.0]), &v(&[1.0, 2.0])).unwrap().value();
        assert_eq!(phi, 25.0);
    }

    #[test]
    fn lyapunov_of_a_point_with_itself_clamps_to_zero() {
        let g = SpaceGeometry::p_norm(3.0, 3).unwrap();
        for coords in [[0.1, 2.0, -3.0], [1e-3, 5.0, 7.0], [-0.4, 0.0, 9.9]] {
            let x = v(&coords);
            assert_eq!(g.lyapunov(&x, &x).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn lyapunov_sandwich_bound_holds() {
        let g = SpaceGeometry::p_norm(1.5, 2).unwrap();
        let x = v(&[2.0, -1.0]);
        let y = v(&[-0.5, 0.25]);
        let phi = g.lyapunov(&x, &y).unwrap().value();
        let (nx, ny) = (g.norm(&x).unwrap(), g.norm(&y).unwrap());
        assert!(phi >= (nx - ny).powi(2) - 1e-12);
        assert!(phi <= (nx + ny).powi(2) + 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = SpaceGeometry::euclidean(2).unwrap();
        let err = g.norm(&v(&[1.0, 2.0, 3.0])).unwrap_err();
        assert_eq!(err, GeometryError::DimensionMismatch { expected: 2, found: 3 });
        assert!(pairing(&v(&[1.0]), &DualVector::zeros(2)).is_err());
        assert!(Vector::combine(1.0, &v(&[1.0]), 1.0, &v(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn invalid_constructions_are_rejected() {
        assert_eq!(
            SpaceGeometry::<f64>::euclidean(0).unwrap_err(),
            GeometryError::ZeroDimension
        );
        assert!(matches!(
            SpaceGeometry::p_norm(1.0, 2).unwrap_err(),
            GeometryError::ExponentOutOfRange(_)
        ));
        assert!(matches!(
            SpaceGeometry::p_norm(25.0, 2).unwrap_err(),
            GeometryError::ExponentOutOfRange(_)
        ));
        assert!(SpaceGeometry::p_norm(1.05, 2).is_err());
        assert!(SpaceGeometry::p_norm(f64::NAN, 2).is_err());
        assert_eq!(
            Vector::new(vec![1.0, f64::INFINITY]).unwrap_err(),
            GeometryError::NonFinite
        );
    }

    #[test]
    fn f32_instantiation_compiles_and_runs() {
        let g = SpaceGeometry::<f32>::p_norm(3.0, 2).unwrap();
        let x = Vector::from_slice(&[1.0f32, 2.0]).unwrap();
        let j = g.duality_map(&x).unwrap();
        let n = g.norm(&x).unwrap();
        assert!((pairing(&x, &j).unwrap() - n * n).abs() < 1e-4 * n * n);
    }
}
