//! WebAssembly exports for the single-page demo in `www/`.
//!
//! Each export takes plain arguments and returns a JSON string; the same
//! computations are available natively as the `*_report` functions.

use mulgame::exact_count::count_products_fast;
use mulgame::simulator::{expected_profit, PayoutSchedule, Table};
use mulgame::solver::{fair_payout, game_value, v_y_set};
use mulgame::strategy::win_probability;
use mulgame::{IntervalUnion, StrategySpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest digit count the page may ask for; the count is `O(10^n)`.
pub const MAX_DEMO_DIGITS: u32 = 5;
/// Largest simulated session length.
pub const MAX_DEMO_ROUNDS: u64 = 100_000;

fn digit_set(digits: &[u8]) -> Result<IntervalUnion, String> {
    IntervalUnion::from_digits(digits).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct DigitReport {
    pub value: f64,
    /// `None` when the casino always wins.
    pub fair_payout: Option<f64>,
    pub n: u32,
    pub casino_wins: u64,
    pub player_wins: u64,
    /// Share of n-digit products by leading digit.
    pub histogram: Vec<f64>,
    /// Benford probabilities `log10(1 + 1/d)` for comparison.
    pub benford: Vec<f64>,
}

pub fn digit_report(digits: &[u8], n: u32) -> Result<DigitReport, String> {
    if n > MAX_DEMO_DIGITS {
        return Err(format!("at most {MAX_DEMO_DIGITS} digits in the demo"));
    }
    let w = digit_set(digits)?;
    let value = game_value(&w).map_err(|e| e.to_string())?;
    let c = count_products_fast(n, &w).map_err(|e| e.to_string())?;
    Ok(DigitReport {
        value,
        fair_payout: fair_payout(&w).ok(),
        n,
        casino_wins: c.casino_wins,
        player_wins: c.player_wins,
        histogram: c.histogram.iter().map(|&h| h as f64 / c.total as f64).collect(),
        benford: (1..=9).map(|d: u32| (1.0 + 1.0 / d as f64).log10()).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct VyReport {
    pub y: f64,
    pub parts: Vec<(f64, f64)>,
    pub benford_measure: f64,
    pub length: f64,
}

pub fn vy_report(digits: &[u8], y: f64) -> Result<VyReport, String> {
    let w = digit_set(digits)?;
    let v = v_y_set(&w, y).map_err(|e| e.to_string())?;
    Ok(VyReport {
        y,
        parts: v.parts().iter().map(|p| (p.lo, p.hi)).collect(),
        benford_measure: v.benford_measure().map_err(|e| e.to_string())?,
        length: v.length(),
    })
}

#[derive(Debug, Serialize)]
pub struct TrajectoryReport {
    pub seed: u64,
    pub casino_win_rate: f64,
    /// Player bankroll after each round, in currency units.
    pub bankroll: Vec<f64>,
    /// Expected bankroll after the last round, when it has a closed form.
    pub expected_final: Option<f64>,
}

pub fn trajectory_report(
    digits: &[u8],
    dealer: &str,
    player: &str,
    stake: f64,
    win_return: f64,
    rounds: u64,
    seed: u64,
) -> Result<TrajectoryReport, String> {
    if rounds == 0 || rounds > MAX_DEMO_ROUNDS {
        return Err(format!("rounds must be between 1 and {MAX_DEMO_ROUNDS}"));
    }
    let w = digit_set(digits)?;
    let parse = |s: &str| {
        serde_json::from_str::<StrategySpec>(s).map_err(|e| e.to_string())?.build().map_err(|e| e.to_string())
    };
    let (dealer, player) = (parse(dealer)?, parse(player)?);
    let payout = PayoutSchedule::from_units(stake, win_return).map_err(|e| e.to_string())?;
    let expected_final =
        win_probability(&dealer, &player, &w).ok().map(|p| rounds as f64 * expected_profit(&payout, 1.0 - p));
    let table = Table::new(dealer, player, &w, payout).map_err(|e| e.to_string())?;
    let s = table.run_with_trajectory(rounds, seed, 0).map_err(|e| e.to_string())?;
    Ok(TrajectoryReport {
        seed,
        casino_win_rate: s.casino_win_rate(),
        bankroll: s.trajectory.iter().map(|&c| c as f64 / 100.0).collect(),
        expected_final,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Game value, fair payout and the n-digit leading-digit histogram.
#[wasm_bindgen]
pub fn digits_summary(digits: &[u8], n: u32) -> Result<String, JsError> {
    to_js(digit_report(digits, n))
}

/// Casino numbers that beat the player's `y`.
#[wasm_bindgen]
pub fn winning_region(digits: &[u8], y: f64) -> Result<String, JsError> {
    to_js(vy_report(digits, y))
}

/// One seeded session; strategies are JSON such as `{"type":"benford"}`.
#[wasm_bindgen]
pub fn bankroll_trajectory(
    digits: &[u8],
    dealer: &str,
    player: &str,
    stake: f64,
    win_return: f64,
    rounds: u32,
    seed: u32,
) -> Result<String, JsError> {
    to_js(trajectory_report(digits, dealer, player, stake, win_return, u64::from(rounds), u64::from(seed)))
}
