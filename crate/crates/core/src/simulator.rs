//! Seeded playouts with payout accounting in integer cents.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decimal::{Decimal, Mantissa};
use crate::error::{Error, Result};
use crate::measure::{ExactSet, IntervalUnion};
use crate::strategy::{RngStream, Strategy};

/// Significant digits kept when a continuous strategy's draw is turned into
/// a number on the slip. Truncation moves the win probability by < 1e-10.
pub const DEFAULT_RESOLUTION: u32 = 12;

/// Currency in integer cents.
pub type Cents = i64;

/// Stake risked per round and profit paid on a player win, both in cents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PayoutRepr", into = "PayoutRepr")]
pub struct PayoutSchedule {
    stake: Cents,
    win_return: Cents,
}

#[derive(Serialize, Deserialize)]
struct PayoutRepr {
    stake: f64,
    win_return: f64,
}

impl TryFrom<PayoutRepr> for PayoutSchedule {
    type Error = Error;

    fn try_from(r: PayoutRepr) -> Result<Self> {
        PayoutSchedule::from_units(r.stake, r.win_return)
    }
}

impl From<PayoutSchedule> for PayoutRepr {
    fn from(p: PayoutSchedule) -> Self {
        PayoutRepr { stake: p.stake_units(), win_return: p.win_return_units() }
    }
}

fn to_cents(units: f64) -> Result<Cents> {
    let cents = (units * 100.0).round();
    if !cents.is_finite() || (cents - units * 100.0).abs() > 1e-6 || cents.abs() > 1e15 {
        return Err(Error::InvalidPayout(format!("{units} is not a whole number of cents")));
    }
    Ok(cents as Cents)
}

impl PayoutSchedule {
    pub fn new(stake: Cents, win_return: Cents) -> Result<Self> {
        if stake <= 0 || win_return <= 0 {
            return Err(Error::InvalidPayout("stake and win return must be positive".into()));
        }
        Ok(PayoutSchedule { stake, win_return })
    }

    pub fn from_units(stake: f64, win_return: f64) -> Result<Self> {
        Self::new(to_cents(stake)?, to_cents(win_return)?)
    }

    pub fn stake(&self) -> Cents {
        self.stake
    }

    pub fn win_return(&self) -> Cents {
        self.win_return
    }

    pub fn stake_units(&self) -> f64 {
        self.stake as f64 / 100.0
    }

    pub fn win_return_units(&self) -> f64 {
        self.win_return as f64 / 100.0
    }

    /// `+win_return` when the player wins, `−stake` when the casino wins.
    pub fn settle(&self, casino_won: bool) -> Cents {
        if casino_won {
            -self.stake
        } else {
            self.win_return
        }
    }
}

impl FromStr for PayoutSchedule {
    type Err = Error;

    /// `"STAKE:RETURN"`, e.g. `"100:140"`.
    fn from_str(s: &str) -> Result<Self> {
        let (stake, ret) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidPayout(format!("expected STAKE:RETURN, got {s:?}")))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::InvalidPayout(format!("bad amount {t:?}")));
        Self::from_units(parse(stake)?, parse(ret)?)
    }
}

impl fmt::Display for PayoutSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", format_cents(self.stake), format_cents(self.win_return))
    }
}

/// Renders cents as a decimal amount without trailing zeros, e.g. `-449.4`.
pub fn format_cents(c: Cents) -> String {
    let sign = if c < 0 { "-" } else { "" };
    format!("{sign}{}", Decimal::new(c.unsigned_abs() as u128, 2))
}

/// Average profit per round for a player who wins with probability
/// `player_win_prob`, in currency units.
pub fn expected_profit(payout: &PayoutSchedule, player_win_prob: f64) -> f64 {
    payout.win_return_units() * player_win_prob - payout.stake_units() * (1.0 - player_win_prob)
}

/// The adjudicated slip of one round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub casino_number: Mantissa,
    pub player_number: Mantissa,
    pub product_mantissa: Mantissa,
    pub leading_digit: u8,
    pub casino_won: bool,
}

/// Multiplies exactly and checks the product's mantissa against `w`.
pub fn adjudicate(casino_number: Mantissa, player_number: Mantissa, w: &ExactSet) -> Outcome {
    let product = casino_number.mul(&player_number);
    Outcome {
        casino_number,
        player_number,
        product_mantissa: product,
        leading_digit: product.leading_digit(),
        casino_won: w.contains(&product),
    }
}

/// The casino draws from its strategy, then the round is adjudicated
/// against the player's number.
pub fn play_round(
    casino: &Strategy,
    player_number: Mantissa,
    w: &ExactSet,
    rng: &mut RngStream,
    resolution: u32,
) -> Result<Outcome> {
    let casino_number = casino.draw(rng, resolution)?;
    Ok(adjudicate(casino_number, player_number, w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub settlement: Cents,
    pub bankroll_after: Cents,
}

/// Running bankroll and round history for one table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub payout: PayoutSchedule,
    pub bankroll: Cents,
    pub history: Vec<RoundRecord>,
}

impl Ledger {
    pub fn new(payout: PayoutSchedule) -> Self {
        Ledger { payout, bankroll: 0, history: Vec::new() }
    }

    pub fn settle(&mut self, outcome: Outcome) -> &RoundRecord {
        let settlement = self.payout.settle(outcome.casino_won);
        self.bankroll += settlement;
        self.history.push(RoundRecord { outcome, settlement, bankroll_after: self.bankroll });
        self.history.last().expect("just pushed")
    }

    pub fn stats(&self) -> SessionStats {
        let mut stats = SessionStats::default();
        for r in &self.history {
            stats.record(r.outcome.casino_won, r.settlement, true);
        }
        stats
    }

    /// Recomputes the bankroll from scratch; equals `bankroll` for any
    /// history built through [`Ledger::settle`].
    pub fn replay(&self) -> Cents {
        self.history.iter().map(|r| self.payout.settle(r.outcome.casino_won)).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SessionStats {
    pub rounds: u64,
    pub casino_win_count: u64,
    /// Net player profit in cents.
    pub profit: Cents,
    /// Bankroll after each round, when recorded.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trajectory: Vec<Cents>,
}

impl SessionStats {
    fn record(&mut self, casino_won: bool, settlement: Cents, trajectory: bool) {
        self.rounds += 1;
        self.casino_win_count += u64::from(casino_won);
        self.profit += settlement;
        if trajectory {
            self.trajectory.push(self.profit);
        }
    }

    pub fn casino_win_rate(&self) -> f64 {
        if self.rounds == 0 {
            0.0
        } else {
            self.casino_win_count as f64 / self.rounds as f64
        }
    }

    pub fn profit_units(&self) -> f64 {
        self.profit as f64 / 100.0
    }
}

/// Everything fixed about a matchup.
#[derive(Debug, Clone)]
pub struct Table {
    pub casino: Strategy,
    pub player: Strategy,
    pub winning_set: ExactSet,
    pub payout: PayoutSchedule,
    pub resolution: u32,
}

impl Table {
    pub fn new(casino: Strategy, player: Strategy, w: &IntervalUnion, payout: PayoutSchedule) -> Result<Self> {
        casino.validate()?;
        player.validate()?;
        Ok(Table { casino, player, winning_set: ExactSet::new(w)?, payout, resolution: DEFAULT_RESOLUTION })
    }

    /// Plays `rounds` sequential rounds of session `index` under `seed`.
    /// The casino draws from stream `2·index`, the player from `2·index + 1`.
    pub fn run(&self, rounds: u64, seed: u64, index: u64, mut on_round: impl FnMut(&RoundRecord)) -> Result<SessionStats> {
        let mut casino_rng = RngStream::new(seed, 2 * index);
        let mut player_rng = RngStream::new(seed, 2 * index + 1);
        let mut stats = SessionStats::default();
        for _ in 0..rounds {
            let player_number = self.player.draw(&mut player_rng, self.resolution)?;
            let outcome = play_round(&self.casino, player_number, &self.winning_set, &mut casino_rng, self.resolution)?;
            let settlement = self.payout.settle(outcome.casino_won);
            stats.record(outcome.casino_won, settlement, false);
            on_round(&RoundRecord { outcome, settlement, bankroll_after: stats.profit });
        }
        Ok(stats)
    }

    /// Like [`Table::run`] but keeps the bankroll trajectory.
    pub fn run_with_trajectory(&self, rounds: u64, seed: u64, index: u64) -> Result<SessionStats> {
        let mut trajectory = Vec::with_capacity(rounds as usize);
        let mut stats = self.run(rounds, seed, index, |r| trajectory.push(r.bankroll_after))?;
        stats.trajectory = trajectory;
        Ok(stats)
    }
}

/// One seeded session with its bankroll trajectory.
pub fn simulate(
    rounds: u64,
    casino: &Strategy,
    player: &Strategy,
    w: &IntervalUnion,
    payout: PayoutSchedule,
    seed: u64,
) -> Result<SessionStats> {
    if rounds == 0 {
        return Err(Error::InvalidPayout("at least one round is required".into()));
    }
    Table::new(casino.clone(), player.clone(), w, payout)?.run_with_trajectory(rounds, seed, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchStats {
    pub sessions: u64,
    pub rounds_per_session: u64,
    pub casino_win_count: u64,
    /// Mean session profit in currency units.
    pub mean_profit: f64,
    /// Standard error of `mean_profit`.
    pub std_error: f64,
    /// Profit of each session, in cents.
    pub profits: Vec<Cents>,
}

impl BatchStats {
    pub fn casino_win_rate(&self) -> f64 {
        self.casino_win_count as f64 / (self.sessions * self.rounds_per_session) as f64
    }
}

/// Independent sessions `0..sessions`, each reproducible on its own via
/// [`Table::run`] with the same seed and index.
pub fn simulate_sessions(table: &Table, sessions: u64, rounds: u64, seed: u64) -> Result<BatchStats> {
    let run = |k: u64| table.run(rounds, seed, k, |_| {});
    #[cfg(feature = "parallel")]
    let results: Vec<SessionStats> = {
        use rayon::prelude::*;
        (0..sessions).into_par_iter().map(run).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<SessionStats> = (0..sessions).map(run).collect::<Result<_>>()?;

    let profits: Vec<Cents> = results.iter().map(|s| s.profit).collect();
    let n = profits.len().max(1) as f64;
    let mean = profits.iter().map(|&p| p as f64 / 100.0).sum::<f64>() / n;
    let var = profits.iter().map(|&p| (p as f64 / 100.0 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(BatchStats {
        sessions,
        rounds_per_session: rounds,
        casino_win_count: results.iter().map(|s| s.casino_win_count).sum(),
        mean_profit: mean,
        std_error: (var / n).sqrt(),
        profits,
    })
}
