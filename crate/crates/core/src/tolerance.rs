//! Tolerance budgets: every verification run carries explicit rank, tail and
//! residual thresholds, and refuses to run when the truncation tail cannot be
//! separated from the residuals being certified.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance record threaded through subspace constructions and checks.
///
/// * `rank_tol` — relative singular-value cutoff for rank decisions.
/// * `tail_tol` — truncation-tail budget of the scenario in play, computed as
///   the sum of `|a|^(N+1)` over every Blaschke zero involved.
/// * `residual_tol` — pass/fail threshold for subspace-membership residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances<T: Scalar> {
    pub rank_tol: T,
    pub tail_tol: T,
    pub residual_tol: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            rank_tol: T::of(1e-9),
            tail_tol: T::zero(),
            residual_tol: T::of(1e-8),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    pub fn new(rank_tol: T, residual_tol: T) -> Self {
        Tolerances {
            rank_tol,
            tail_tol: T::zero(),
            residual_tol,
        }
    }

    /// Same tolerances with the tail budget replaced.
    pub fn with_tail(self, tail_tol: T) -> Self {
        Tolerances { tail_tol, ..self }
    }

    /// Accumulate a tail budget (budgets from several products add up).
    pub fn add_tail(self, extra: T) -> Self {
        Tolerances {
            tail_tol: self.tail_tol + extra,
            ..self
        }
    }

    /// A run is admissible only when the truncation tail lies strictly below
    /// the residual threshold it is supposed to certify.
    pub fn check_resolved(&self) -> Result<()> {
        if !(self.rank_tol > T::zero()) || !(self.residual_tol > T::zero()) {
            return Err(Error::InvalidInput(
                "rank_tol and residual_tol must be strictly positive".into(),
            ));
        }
        if self.tail_tol >= self.residual_tol {
            return Err(Error::UnderResolved {
                tail_tol: self.tail_tol.to_f64_lossy(),
                residual_tol: self.residual_tol.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_budgets() {
        let tol = Tolerances::<f64>::default();
        assert_eq!(tol.rank_tol, 1e-9);
        assert_eq!(tol.residual_tol, 1e-8);
        assert!(tol.check_resolved().is_ok());
    }

    #[test]
    fn under_resolved_rejected() {
        let tol = Tolerances::<f64>::default().with_tail(1e-6);
        match tol.check_resolved() {
            Err(Error::UnderResolved { .. }) => {}
            other => panic!("expected under-resolved refusal, got {other:?}"),
        }
    }
}
