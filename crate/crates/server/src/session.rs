use mulgame::measure::ExactSet;
use mulgame::simulator::{adjudicate, Cents, Ledger, Outcome, PayoutSchedule, DEFAULT_RESOLUTION};
use mulgame::{Mantissa, RngStream, Strategy, StrategySpec, WinningSetSpec};
use rand::rngs::OsRng;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ApiError;

/// Body of `POST /sessions`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionConfig {
    pub payout: PayoutSchedule,
    pub dealer: StrategySpec,
    pub winning_set: WinningSetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Hex SHA-256 of the dealer number's canonical rendering followed by the
/// hex nonce.
pub fn commitment_digest(dealer_number: &Mantissa, nonce: &str) -> String {
    let mut h = Sha256::new();
    h.update(dealer_number.to_string().as_bytes());
    h.update(nonce.as_bytes());
    hex::encode(h.finalize())
}

pub(crate) fn random_hex(bytes: usize) -> String {
    let mut buf = vec![0u8; bytes];
    OsRng.fill_bytes(&mut buf);
    hex::encode(buf)
}

fn units(c: Cents) -> f64 {
    c as f64 / 100.0
}

#[derive(Debug, Clone)]
struct Commitment {
    digest: String,
    nonce: String,
    dealer_number: Mantissa,
}

/// A settled round as returned by `play` and listed in the stats history.
/// Amounts are in currency units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundView {
    pub round: u64,
    pub dealer_number: Mantissa,
    pub player_number: Mantissa,
    pub product_mantissa: Mantissa,
    pub leading_digit: u8,
    pub casino_won: bool,
    pub settlement: f64,
    pub bankroll: f64,
    pub commitment_digest: String,
    pub nonce: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsView {
    pub session_id: String,
    pub rounds: u64,
    pub casino_win_count: u64,
    pub casino_win_rate: f64,
    pub profit: f64,
    pub bankroll: f64,
    pub round_open: bool,
    pub payout: PayoutSchedule,
    pub history: Vec<RoundView>,
}

pub struct Session {
    pub(crate) id: String,
    pub(crate) config: SessionConfig,
    dealer: Strategy,
    winning_set: ExactSet,
    rng: RngStream,
    /// Dealer numbers drawn so far, settled or not.
    pub(crate) draws: u64,
    ledger: Ledger,
    reveals: Vec<(String, String)>,
    pending: Option<Commitment>,
}

impl Session {
    /// Validates `config` and fixes its seed.
    pub fn new(id: String, mut config: SessionConfig) -> Result<Self, ApiError> {
        let dealer = config.dealer.build().map_err(ApiError::invalid_spec)?;
        let w = config.winning_set.build().map_err(ApiError::invalid_spec)?;
        let winning_set = ExactSet::new(&w).map_err(ApiError::invalid_spec)?;
        let seed = *config.seed.get_or_insert_with(rand::random);
        Ok(Session {
            id,
            dealer,
            winning_set,
            rng: RngStream::new(seed, 0),
            draws: 0,
            ledger: Ledger::new(config.payout),
            reveals: Vec::new(),
            pending: None,
            config,
        })
    }

    pub fn seed(&self) -> u64 {
        self.config.seed.expect("seed fixed at construction")
    }

    pub fn has_open_round(&self) -> bool {
        self.pending.is_some()
    }

    fn draw(&mut self) -> Result<Mantissa, ApiError> {
        self.draws += 1;
        self.dealer.draw(&mut self.rng, DEFAULT_RESOLUTION).map_err(ApiError::internal)
    }

    /// Draws and commits the dealer's number; returns the digest.
    pub fn open(&mut self) -> Result<String, ApiError> {
        if self.pending.is_some() {
            return Err(ApiError::conflict("round_open", "a round is already open"));
        }
        let dealer_number = self.draw()?;
        let nonce = random_hex(16);
        let digest = commitment_digest(&dealer_number, &nonce);
        self.pending = Some(Commitment { digest: digest.clone(), nonce, dealer_number });
        Ok(digest)
    }

    pub fn play(&mut self, player_number: Mantissa) -> Result<RoundView, ApiError> {
        let c = self
            .pending
            .take()
            .ok_or_else(|| ApiError::conflict("no_open_round", "open a round before playing"))?;
        let outcome = adjudicate(c.dealer_number, player_number, &self.winning_set);
        Ok(self.settle(outcome, c.digest, c.nonce))
    }

    fn settle(&mut self, outcome: Outcome, digest: String, nonce: String) -> RoundView {
        self.ledger.settle(outcome);
        self.reveals.push((digest, nonce));
        self.view(self.ledger.history.len() - 1)
    }

    fn view(&self, k: usize) -> RoundView {
        let r = &self.ledger.history[k];
        let (digest, nonce) = &self.reveals[k];
        RoundView {
            round: k as u64 + 1,
            dealer_number: r.outcome.casino_number,
            player_number: r.outcome.player_number,
            product_mantissa: r.outcome.product_mantissa,
            leading_digit: r.outcome.leading_digit,
            casino_won: r.outcome.casino_won,
            settlement: units(r.settlement),
            bankroll: units(r.bankroll_after),
            commitment_digest: digest.clone(),
            nonce: nonce.clone(),
        }
    }

    pub fn stats(&self) -> StatsView {
        let s = self.ledger.stats();
        StatsView {
            session_id: self.id.clone(),
            rounds: s.rounds,
            casino_win_count: s.casino_win_count,
            casino_win_rate: s.casino_win_rate(),
            profit: s.profit_units(),
            bankroll: units(self.ledger.bankroll),
            round_open: self.pending.is_some(),
            payout: self.config.payout,
            history: (0..self.ledger.history.len()).map(|k| self.view(k)).collect(),
        }
    }

    /// Re-applies a round read back from a snapshot. The dealer stream is
    /// advanced to `draws`; the stored settlement must match the replay.
    pub(crate) fn restore(&mut self, draws: u64, round: &RoundView) -> Result<(), String> {
        while self.draws < draws {
            self.draw().map_err(|e| e.message)?;
        }
        let outcome = adjudicate(round.dealer_number, round.player_number, &self.winning_set);
        if outcome.casino_won != round.casino_won || outcome.product_mantissa != round.product_mantissa {
            return Err(format!("round {} does not adjudicate as recorded", round.round));
        }
        if commitment_digest(&round.dealer_number, &round.nonce) != round.commitment_digest {
            return Err(format!("round {} fails its commitment", round.round));
        }
        let view = self.settle(outcome, round.commitment_digest.clone(), round.nonce.clone());
        if view.bankroll != round.bankroll {
            return Err(format!("round {} bankroll mismatch", round.round));
        }
        Ok(())
    }
}
