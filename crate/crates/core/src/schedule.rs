//! Step-size schedules `α_n`, `β_n` for the iterative solvers.
//!
//! Rules are evaluated at the iteration index `n ≥ 0`.  Admissibility
//! (range and limit behavior, which differ per scheme) is enforced by the
//! solvers at configuration time, not here.

use crate::scalar::Real;

/// A scalar sequence `n ↦ value(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum StepRule<R: Real> {
    /// `value(n) = c`.
    Constant { value: R },
    /// `value(n) = 1 − 1/(n + offset)`.
    OneMinusInv { offset: R },
    /// `value(n) = 1/(n + offset)`.
    Inv { offset: R },
    /// `value(n) = 1/(n + offset)²`.
    InvSquare { offset: R },
}

impl<R: Real> StepRule<R> {
    /// Evaluates the rule at iteration `n`.
    pub fn value(&self, n: usize) -> R {
        let n = R::of_usize(n);
        match self {
            StepRule::Constant { value } => *value,
            StepRule::OneMinusInv { offset } => R::one() - (n + *offset).recip(),
            StepRule::Inv { offset } => (n + *offset).recip(),
            StepRule::InvSquare { offset } => {
                let d = n + *offset;
                (d * d).recip()
            }
        }
    }
}

/// The pair of step-size sequences used by the two-stage iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<R: Real> {
    /// Outer averaging weight `α_n`.
    pub alpha: StepRule<R>,
    /// Inner averaging weight `β_n`.
    pub beta: StepRule<R>,
}

impl<R: Real> Default for Schedule<R> {
    /// `α_n ≡ 1/2`, `β_n = 1 − 1/(n+2)`.
    fn default() -> Self {
        Schedule {
            alpha: StepRule::Constant { value: R::of(0.5) },
            beta: StepRule::OneMinusInv { offset: R::of(2.0) },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_values() {
        let c = StepRule::Constant { value: 0.5f64 };
        assert_eq!(c.value(0), 0.5);
        assert_eq!(c.value(100), 0.5);

        let omi = StepRule::OneMinusInv { offset: 2.0f64 };
        assert_eq!(omi.value(0), 0.5);
        assert_eq!(omi.value(2), 0.75);

        let inv = StepRule::Inv { offset: 1.0f64 };
        assert_eq!(inv.value(0), 1.0);
        assert_eq!(inv.value(3), 0.25);

        let sq = StepRule::InvSquare { offset: 1.0f64 };
        assert_eq!(sq.value(0), 1.0);
        assert_eq!(sq.value(1), 0.25);
    }

    #[test]
    fn default_schedule_matches_documented_rules() {
        let s = Schedule::<f64>::default();
        assert_eq!(s.alpha.value(17), 0.5);
        assert_eq!(s.beta.value(0), 0.5);
        assert!((s.beta.value(298) - (1.0 - 1.0 / 300.0)).abs() < 1e-15);
    }
}
