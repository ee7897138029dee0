//! Game values and optimality certificates.

mod group;
mod matrix;

pub use group::{build_game_matrix, finite_group_value, FiniteGroup, GroupCertificate, GroupSpec, MAX_GROUP_ORDER};
pub use matrix::{
    balanced_matrix_value, fictitious_play, BalancedCertificate, GameMatrix, SolveReport, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};

use crate::decimal::Mantissa;
use crate::error::{Error, Result};
use crate::measure::IntervalUnion;
use crate::strategy::beta_n_win_mass;

/// Common value `v₁ = v₂` of the continuous game: the casino's win
/// probability `β(w)` when either side plays Benford.
pub fn game_value(w: &IntervalUnion) -> Result<f64> {
    w.benford_measure()
}

/// Even-odds-equivalent payout per unit stake: `β(w) / (1 − β(w))`.
pub fn fair_payout(w: &IntervalUnion) -> Result<f64> {
    let v = game_value(w)?;
    if v >= 1.0 - crate::measure::TOLERANCE {
        return Err(Error::CertainLoss);
    }
    Ok(v / (1.0 - v))
}

/// `V_y`: casino numbers that beat the player's `y`.
pub fn v_y_set(w: &IntervalUnion, y: f64) -> Result<IntervalUnion> {
    w.scale_mod_group(y)
}

/// `|β_n(V_y) − β(V_y)|`, with `β_n(V_y)` summed exactly over the grid.
pub fn beta_n_gap(n: u32, w: &IntervalUnion, y: &Mantissa) -> Result<f64> {
    let discrete = beta_n_win_mass(n, y, w)?;
    let continuous = v_y_set(w, y.to_f64())?.benford_measure()?;
    Ok((discrete - continuous).abs())
}

/// Bound on [`beta_n_gap`]: `V_y` has at most two parts, so four cdf
/// differences of at most `10^-(n-1)` each.
pub fn beta_n_gap_bound(n: u32) -> f64 {
    4.0 * 10f64.powi(-(n as i32 - 1))
}
