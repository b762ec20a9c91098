//! Default numerical tolerances. All are relative to the scale named on each
//! constant.

/// Off-diagonal entries with `|a| <= ZERO * max diagonal` are treated as
/// exact zeros (non-edges).
pub const ZERO: f64 = 1e-12;

/// Largest admissible `|row sum|`, relative to the largest diagonal entry.
pub const ROW_SUM: f64 = 1e-10;

/// Rank check: `|λ₁| <= RANK * max diagonal` and `λ₂ > RANK * max diagonal`.
pub const RANK: f64 = 1e-10;

/// Pinned-solve residual bound, relative to `‖A‖∞‖x‖∞ + ‖f‖∞`.
pub const SOLVER_RESIDUAL: f64 = 1e-9;

/// Cycle identities, relative to the largest solution entry involved.
pub const IDENTITY: f64 = 1e-9;

/// Triangle to star expansion followed by elimination of the centre.
pub const STAR_ROUND_TRIP: f64 = 1e-10;

/// Loads fed to elimination must satisfy `|f·1| <= BALANCE * ‖f‖₁`.
pub const BALANCE: f64 = 1e-10;

/// Thresholds used when checking a matrix for the Laplacian properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub zero: f64,
    pub row_sum: f64,
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero: ZERO, row_sum: ROW_SUM, rank: RANK }
    }
}
