//! Mixed strategies on `[1, 10)`, their sampling, and exact win probabilities.

use std::f64::consts::LN_10;
use std::ops::Range;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::decimal::{pow10, Mantissa, MAX_INPUT_DIGITS};
use crate::error::{Error, Result};
use crate::exact_count::{count_products_fast, grid_hits, grid_range, uniform_limit_value, MAX_COUNT_DIGITS};
use crate::measure::{ExactSet, IntervalUnion};

/// Default cap on the number of points materialized or enumerated for a grid.
pub const DEFAULT_GRID_CAP: u128 = 10_000_000;

/// Identity of the generator behind [`RngStream`], for output metadata.
pub const GENERATOR: &str = "chacha20 (rand_chacha, seed_from_u64 + set_stream)";

/// A deterministic random stream: the same `(seed, stream)` pair always
/// yields the same sequence.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.gen_range(0..bound)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// Finite distribution on exact mantissas.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrete {
    points: Vec<Mantissa>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Discrete {
    pub fn new(points: Vec<Mantissa>, masses: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != masses.len() {
            return Err(Error::InvalidStrategy("points and masses must be non-empty and of equal length".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStrategy("points must be strictly increasing".into()));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidStrategy("masses must be non-negative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidStrategy(format!("masses sum to {total}, not 1")));
        }
        let cumulative = masses
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        Ok(Discrete { points, masses, cumulative })
    }

    pub fn points(&self) -> &[Mantissa] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// All mass on one number.
    PurePoint(Mantissa),
    Discrete(Discrete),
    /// The Benford law: `P(x ≤ t) = log10 t`.
    BenfordContinuous,
    /// Same law as [`Strategy::BenfordContinuous`], described as a uniform
    /// choice of `log10 x` in `[0, 1)`.
    UniformLogContinuous,
    /// Lebesgue-uniform on `[1, 10)`; the limit of uniform n-digit play.
    UniformMantissa,
    /// Uniform over the n-digit grid.
    UniformDigits { n: u32 },
    /// Benford law rounded down to the n-digit grid.
    BetaN { n: u32 },
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDigits);
    }
    if n > MAX_INPUT_DIGITS {
        return Err(Error::TooManyDigits { n, max: MAX_INPUT_DIGITS });
    }
    Ok(())
}

/// Points of the n-digit grid as scaled integers `m ∈ [10^(n-1), 10^n)`.
pub fn support_grid(n: u32) -> Result<Vec<u128>> {
    support_grid_capped(n, DEFAULT_GRID_CAP)
}

pub fn support_grid_capped(n: u32, cap: u128) -> Result<Vec<u128>> {
    check_n(n)?;
    let range = grid_range(n);
    if range.end - range.start > cap {
        return Err(Error::TooManyDigits { n, max: max_digits_under(cap) });
    }
    Ok(range.collect())
}

fn max_digits_under(cap: u128) -> u32 {
    (1..=MAX_INPUT_DIGITS).take_while(|&n| 9 * pow10(n - 1) <= cap).last().unwrap_or(0)
}

/// `β_n{x} = log10(x + 10^-(n-1)) − log10(x)` for `x` on the n-digit grid.
pub fn beta_n_mass(n: u32, x: &Mantissa) -> Result<f64> {
    check_n(n)?;
    let m = x.on_grid(n).ok_or_else(|| Error::OffGrid { value: x.to_string(), digits: n })?;
    Ok((1.0 / m as f64).ln_1p() / LN_10)
}

/// The grid point `β_n` assigns to the uniform log draw `a ∈ [0, 1)`: the
/// largest n-digit number not exceeding `10^a`.
pub fn beta_n_from_uniform(n: u32, a: f64) -> Result<Mantissa> {
    check_n(n)?;
    let grid = grid_range(n);
    let target = a + (n - 1) as f64;
    let mut m = (10f64.powf(target).floor() as u128).clamp(grid.start, grid.end - 1);
    // repair float error so that log10(m) ≤ target < log10(m + 1)
    while m > grid.start && (m as f64).log10() > target {
        m -= 1;
    }
    while m + 1 < grid.end && ((m + 1) as f64).log10() <= target {
        m += 1;
    }
    Mantissa::from_scaled(m, n)
}

/// Largest n-digit grid index `m` with `m / 10^(n-1) ≤ x`, snapping values
/// that are within float noise of a grid point onto it.
fn grid_floor(n: u32, x: f64) -> u128 {
    let t = x * pow10(n - 1) as f64;
    let r = t.round();
    let k = if (t - r).abs() <= 1e-9 * t { r } else { t.floor() };
    k as u128
}

/// Finite-support shape used when evaluating win probabilities.
enum FiniteLaw {
    Points(Vec<(Mantissa, f64)>),
    UniformGrid(u32),
    BetaGrid(u32),
}

enum Law {
    Haar,
    UniformMantissa,
    Finite(FiniteLaw),
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::UniformDigits { n } | Strategy::BetaN { n } => check_n(*n),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Strategy::PurePoint(x) => format!("pure({x})"),
            Strategy::Discrete(d) => format!("discrete({} points)", d.points.len()),
            Strategy::BenfordContinuous => "benford".into(),
            Strategy::UniformLogContinuous => "uniform_log".into(),
            Strategy::UniformMantissa => "uniform_mantissa".into(),
            Strategy::UniformDigits { n } => format!("uniform_digits({n})"),
            Strategy::BetaN { n } => format!("beta_n({n})"),
        }
    }

    /// Cumulative distribution `P(X ≤ x)` for `x ∈ [1, 10]`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(1.0..=10.0).contains(&x) {
            return Err(Error::NotAMantissa(x.to_string()));
        }
        let value = match self {
            Strategy::PurePoint(p) => f64::from(u8::from(p.to_f64() <= x)),
            Strategy::Discrete(d) => {
                d.points.iter().zip(&d.masses).filter(|(p, _)| p.to_f64() <= x).map(|(_, m)| m).sum()
            }
            Strategy::BenfordContinuous | Strategy::UniformLogContinuous => x.log10(),
            Strategy::UniformMantissa => (x - 1.0) / 9.0,
            Strategy::UniformDigits { n } => {
                let k = grid_floor(*n, x).min(pow10(*n) - 1);
                (k + 1 - pow10(n - 1)) as f64 / (9 * pow10(n - 1)) as f64
            }
            Strategy::BetaN { n } => {
                let k = grid_floor(*n, x).min(pow10(*n) - 1);
                // telescoped masses of all grid points ≤ x
                ((k + 1) as f64 / pow10(n - 1) as f64).log10()
            }
        };
        Ok(value.clamp(0.0, 1.0))
    }

    /// Draws a real number from the strategy's law.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            Strategy::BenfordContinuous | Strategy::UniformLogContinuous => 10f64.powf(rng.uniform()),
            Strategy::UniformMantissa => 1.0 + 9.0 * rng.uniform(),
            _ => self.draw_finite(rng).expect("finite strategy").to_f64(),
        }
    }

    /// Draws an exact decimal. Continuous laws are truncated toward zero to
    /// `resolution` significant digits.
    pub fn draw(&self, rng: &mut RngStream, resolution: u32) -> Result<Mantissa> {
        match self {
            Strategy::BenfordContinuous | Strategy::UniformLogContinuous | Strategy::UniformMantissa => {
                Mantissa::truncate_f64(self.sample(rng), resolution)
            }
            _ => self.draw_finite(rng),
        }
    }

    fn draw_finite(&self, rng: &mut RngStream) -> Result<Mantissa> {
        match self {
            Strategy::PurePoint(x) => Ok(*x),
            Strategy::Discrete(d) => {
                let u = rng.uniform() * d.cumulative.last().copied().unwrap_or(1.0);
                let k = d.cumulative.partition_point(|c| *c <= u).min(d.points.len() - 1);
                Ok(d.points[k])
            }
            Strategy::UniformDigits { n } => {
                let grid = grid_range(*n);
                let m = grid.start + rng.below((grid.end - grid.start) as u64) as u128;
                Mantissa::from_scaled(m, *n)
            }
            Strategy::BetaN { n } => beta_n_from_uniform(*n, rng.uniform()),
            _ => unreachable!("continuous strategy"),
        }
    }

    fn law(&self) -> Law {
        match self {
            Strategy::BenfordContinuous | Strategy::UniformLogContinuous => Law::Haar,
            Strategy::UniformMantissa => Law::UniformMantissa,
            Strategy::PurePoint(x) => Law::Finite(FiniteLaw::Points(vec![(*x, 1.0)])),
            Strategy::Discrete(d) => {
                Law::Finite(FiniteLaw::Points(d.points.iter().copied().zip(d.masses.iter().copied()).collect()))
            }
            Strategy::UniformDigits { n } => Law::Finite(FiniteLaw::UniformGrid(*n)),
            Strategy::BetaN { n } => Law::Finite(FiniteLaw::BetaGrid(*n)),
        }
    }
}

impl FiniteLaw {
    fn size(&self) -> u128 {
        match self {
            FiniteLaw::Points(p) => p.len() as u128,
            FiniteLaw::UniformGrid(n) | FiniteLaw::BetaGrid(n) => 9 * pow10(n - 1),
        }
    }

    fn for_each_point(&self, mut f: impl FnMut(Mantissa, f64)) {
        match self {
            FiniteLaw::Points(p) => p.iter().for_each(|(x, m)| f(*x, *m)),
            FiniteLaw::UniformGrid(n) => {
                let mass = 1.0 / (9 * pow10(n - 1)) as f64;
                for m in grid_range(*n) {
                    f(Mantissa::from_scaled(m, *n).expect("grid point"), mass);
                }
            }
            FiniteLaw::BetaGrid(n) => {
                for m in grid_range(*n) {
                    f(Mantissa::from_scaled(m, *n).expect("grid point"), (1.0 / m as f64).ln_1p() / LN_10);
                }
            }
        }
    }

    /// Probability that a draw `x` from this law has `mantissa(x·y) ∈ w`.
    fn hit_probability(&self, y: &Mantissa, w: &ExactSet) -> f64 {
        match self {
            FiniteLaw::Points(_) => {
                let mut p = 0.0;
                self.for_each_point(|x, m| {
                    if w.contains(&x.mul(y)) {
                        p += m;
                    }
                });
                p
            }
            FiniteLaw::UniformGrid(n) => {
                let hits: u128 = grid_ranges(*n, y, w).iter().map(|r| r.end - r.start).sum();
                hits as f64 / (9 * pow10(n - 1)) as f64
            }
            FiniteLaw::BetaGrid(n) => beta_mass_of_ranges(&grid_ranges(*n, y, w)),
        }
    }
}

fn grid_ranges(n: u32, y: &Mantissa, w: &ExactSet) -> Vec<Range<u128>> {
    grid_hits(n, y.scaled(), y.digits() - 1, w)
}

/// β_n mass of a union of grid-index ranges; masses telescope within a range.
fn beta_mass_of_ranges(ranges: &[Range<u128>]) -> f64 {
    ranges.iter().map(|r| (r.end as f64 / r.start as f64).log10()).sum()
}

/// `β_n(V_y)`: the β_n probability that the casino's grid number wins
/// against the player's exact number `y`.
pub fn beta_n_win_mass(n: u32, y: &Mantissa, w: &IntervalUnion) -> Result<f64> {
    check_n(n)?;
    let exact = ExactSet::new(w)?;
    Ok(beta_mass_of_ranges(&grid_ranges(n, y, &exact)))
}

/// Probability that the casino wins (`mantissa(x·y) ∈ w`) when it plays
/// `casino` and the player plays `player`.
///
/// Supported pairings:
///
/// | casino \ player        | Benford / uniform log | uniform mantissa | finite (pure, discrete, grids) |
/// |------------------------|-----------------------|------------------|--------------------------------|
/// | Benford / uniform log  | `β(w)`                | `β(w)`           | `β(w)`                         |
/// | uniform mantissa       | `β(w)`                | quadrature       | exact sum of lengths           |
/// | finite                 | `β(w)`                | exact sum        | exact sum                      |
///
/// Finite pairings enumerate the smaller support (at most
/// [`DEFAULT_GRID_CAP`] points) and count the other side exactly.
pub fn win_probability(casino: &Strategy, player: &Strategy, w: &IntervalUnion) -> Result<f64> {
    casino.validate()?;
    player.validate()?;
    let haar_value = w.benford_measure()?;
    let p = match (casino.law(), player.law()) {
        (Law::Haar, _) | (_, Law::Haar) => haar_value,
        (Law::UniformMantissa, Law::UniformMantissa) => uniform_limit_value(w)?.value,
        (Law::UniformMantissa, Law::Finite(f)) | (Law::Finite(f), Law::UniformMantissa) => {
            check_enumerable(&f)?;
            let mut p = 0.0;
            f.for_each_point(|y, q| {
                let v = w.scale_mod_group(y.to_f64()).expect("mantissa domain checked");
                p += q * v.length() / 9.0;
            });
            p
        }
        (Law::Finite(a), Law::Finite(b)) => finite_pair(a, b, w)?,
    };
    Ok(p.clamp(0.0, 1.0))
}

fn check_enumerable(f: &FiniteLaw) -> Result<()> {
    if f.size() > DEFAULT_GRID_CAP {
        return Err(Error::UnsupportedPairing(format!(
            "support of {} points exceeds the enumeration cap of {DEFAULT_GRID_CAP}",
            f.size()
        )));
    }
    Ok(())
}

fn finite_pair(a: FiniteLaw, b: FiniteLaw, w: &IntervalUnion) -> Result<f64> {
    if let (FiniteLaw::UniformGrid(n), FiniteLaw::UniformGrid(m)) = (&a, &b) {
        if n == m && *n <= MAX_COUNT_DIGITS {
            return Ok(count_products_fast(*n, w)?.casino_rate());
        }
    }
    let exact = ExactSet::new(w)?;
    // enumerate the side with fewer points, counting the other exactly
    let (outer, inner) = match (&a, &b) {
        (FiniteLaw::Points(_), FiniteLaw::UniformGrid(_) | FiniteLaw::BetaGrid(_)) => (b, a),
        (FiniteLaw::UniformGrid(_) | FiniteLaw::BetaGrid(_), FiniteLaw::Points(_)) => (a, b),
        _ if a.size() <= b.size() => (b, a),
        _ => (a, b),
    };
    check_enumerable(&inner)?;
    if matches!(outer, FiniteLaw::Points(_)) && outer.size() * inner.size() > DEFAULT_GRID_CAP * 10 {
        return Err(Error::UnsupportedPairing("discrete supports too large for a double sum".into()));
    }
    let mut p = 0.0;
    inner.for_each_point(|y, q| p += q * outer.hit_probability(&y, &exact));
    Ok(p)
}

/// JSON form of a strategy.
///
/// ```json
/// {"type":"beta_n","n":3}
/// {"type":"pure","x":3.14,"digits":3}
/// {"type":"discrete","points":[1.5,2.5],"masses":[0.5,0.5],"digits":2}
/// {"type":"benford"}
/// {"type":"uniform_digits","n":2}
/// ```
///
/// `digits` is optional; without it each number keeps the digits of its
/// shortest decimal rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StrategySpec {
    Pure {
        x: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        digits: Option<u32>,
    },
    Discrete {
        points: Vec<f64>,
        masses: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        digits: Option<u32>,
    },
    Benford,
    UniformLog,
    UniformMantissa,
    UniformDigits { n: u32 },
    BetaN { n: u32 },
}

fn exact_point(x: f64, digits: Option<u32>) -> Result<Mantissa> {
    match digits {
        Some(d) => Mantissa::from_f64_on_grid(x, d),
        None => Mantissa::from_f64_shortest(x),
    }
}

impl StrategySpec {
    pub fn build(&self) -> Result<Strategy> {
        let s = match self {
            StrategySpec::Pure { x, digits } => Strategy::PurePoint(exact_point(*x, *digits)?),
            StrategySpec::Discrete { points, masses, digits } => {
                let points = points.iter().map(|x| exact_point(*x, *digits)).collect::<Result<_>>()?;
                Strategy::Discrete(Discrete::new(points, masses.clone())?)
            }
            StrategySpec::Benford => Strategy::BenfordContinuous,
            StrategySpec::UniformLog => Strategy::UniformLogContinuous,
            StrategySpec::UniformMantissa => Strategy::UniformMantissa,
            StrategySpec::UniformDigits { n } => Strategy::UniformDigits { n: *n },
            StrategySpec::BetaN { n } => Strategy::BetaN { n: *n },
        };
        s.validate()?;
        Ok(s)
    }
}

impl From<&Strategy> for StrategySpec {
    fn from(s: &Strategy) -> Self {
        match s {
            Strategy::PurePoint(x) => StrategySpec::Pure { x: x.to_f64(), digits: Some(x.digits()) },
            Strategy::Discrete(d) => StrategySpec::Discrete {
                points: d.points.iter().map(Mantissa::to_f64).collect(),
                masses: d.masses.clone(),
                digits: None,
            },
            Strategy::BenfordContinuous => StrategySpec::Benford,
            Strategy::UniformLogContinuous => StrategySpec::UniformLog,
            Strategy::UniformMantissa => StrategySpec::UniformMantissa,
            Strategy::UniformDigits { n } => StrategySpec::UniformDigits { n: *n },
            Strategy::BetaN { n } => StrategySpec::BetaN { n: *n },
        }
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StrategySpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        StrategySpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
