use serde::{Deserialize, Serialize};

/// Numerical thresholds used by every rank decision and comparison.
///
/// Rank decisions cut singular values at `sigma_max * rank_rtol * max(rows, cols)`;
/// a matrix whose largest singular value is zero has rank 0. The relative form
/// keeps decisions scale-invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative threshold for singular-value rank cuts.
    pub rank_rtol: f64,
    /// Absolute tolerance for scalar comparisons.
    pub cmp_atol: f64,
    /// Maximum principal-angle sine accepted by subset tests.
    pub containment_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            cmp_atol: 1e-9,
            containment_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    /// Singular-value cutoff for a factorization of a `rows x cols` matrix
    /// whose largest singular value is `sigma_max`.
    pub fn rank_cutoff(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        sigma_max * self.rank_rtol * rows.max(cols) as f64
    }

    /// True when all three thresholds are finite and nonnegative.
    pub fn is_valid(&self) -> bool {
        [self.rank_rtol, self.cmp_atol, self.containment_tol]
            .iter()
            .all(|t| t.is_finite() && *t >= 0.0)
    }
}
