//! Exact terminating decimals.
//!
//! Every number a player can type is a terminating decimal, and only its
//! significant digits matter to the game. [`Decimal`] stores such a number as
//! `sig / 10^scale`; [`Mantissa`] additionally pins the value into `[1, 10)`.
//! Products and comparisons are carried out on the scaled integers so a
//! product that lands exactly on a digit boundary (say `2 × 2 = 4`) is never
//! misclassified.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of significant digits accepted for a single input number.
/// Two such numbers multiply to at most 36 digits, which fits in `u128`.
pub const MAX_INPUT_DIGITS: u32 = 18;

pub(crate) const POW10: [u128; 39] = {
    let mut table = [1u128; 39];
    let mut i = 1;
    while i < 39 {
        table[i] = table[i - 1] * 10;
        i += 1;
    }
    table
};

pub(crate) fn pow10(k: u32) -> u128 {
    POW10[k as usize]
}

/// Number of decimal digits of a positive integer.
pub(crate) fn digit_count(v: u128) -> u32 {
    debug_assert!(v > 0);
    match POW10.iter().position(|&p| p > v) {
        Some(k) => k as u32,
        None => 39,
    }
}

/// A non-negative terminating decimal `sig / 10^scale` with no trailing zeros
/// in `sig` beyond what `scale = 0` requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decimal {
    sig: u128,
    scale: u32,
}

impl Decimal {
    pub fn new(sig: u128, scale: u32) -> Self {
        let mut d = Decimal { sig, scale };
        d.normalize();
        d
    }

    pub fn integer(v: u128) -> Self {
        Decimal::new(v, 0)
    }

    fn normalize(&mut self) {
        if self.sig == 0 {
            self.scale = 0;
            return;
        }
        while self.scale > 0 && self.sig.is_multiple_of(10) {
            self.sig /= 10;
            self.scale -= 1;
        }
    }

    pub fn sig(&self) -> u128 {
        self.sig
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.sig == 0
    }

    /// Shortest decimal that round-trips to `x`.
    pub fn from_f64_shortest(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidDecimal(x.to_string()));
        }
        // `Display` for f64 never uses exponent notation and prints the
        // shortest round-trip representation.
        format!("{x}").parse()
    }

    pub fn to_f64(&self) -> f64 {
        // Parsing the rendered string gives the correctly rounded double.
        self.to_string().parse().unwrap_or(f64::NAN)
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self, other);
        if a.scale == b.scale {
            return a.sig.cmp(&b.sig);
        }
        let (lo, hi, flipped) = if a.scale < b.scale { (a, b, false) } else { (b, a, true) };
        let ord = match POW10
            .get((hi.scale - lo.scale) as usize)
            .and_then(|p| lo.sig.checked_mul(*p))
        {
            Some(widened) => widened.cmp(&hi.sig),
            // overflow: `lo` scaled up exceeds anything representable
            None => Ordering::Greater,
        };
        if flipped {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDecimal(s.to_string());
        let t = s.trim();
        let (int_part, frac_part) = match t.split_once('.') {
            Some((i, f)) => (i, f),
            None => (t, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let digits = digits.trim_start_matches('0');
        let frac_len = frac_part.len() as u32;
        if digits.is_empty() {
            return Ok(Decimal::new(0, 0));
        }
        // trailing zeros of the fractional part carry no information
        let trimmed = digits.trim_end_matches('0');
        let dropped = (digits.len() - trimmed.len()) as u32;
        if trimmed.len() > 38 {
            return Err(bad());
        }
        let sig: u128 = trimmed.parse().map_err(|_| bad())?;
        if dropped >= frac_len {
            let zeros = dropped - frac_len;
            let sig = POW10
                .get(zeros as usize)
                .and_then(|p| sig.checked_mul(*p))
                .ok_or_else(bad)?;
            Ok(Decimal::new(sig, 0))
        } else {
            Ok(Decimal::new(sig, frac_len - dropped))
        }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.sig);
        }
        let s = format!("{:0>width$}", self.sig, width = self.scale as usize + 1);
        let (i, frac) = s.split_at(s.len() - self.scale as usize);
        write!(f, "{i}.{frac}")
    }
}

/// An exact terminating decimal in `[1, 10)`: the significant digits of a
/// positive number with the decimal point placed after the first digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mantissa(Decimal);

impl Mantissa {
    /// Mantissa of the integer `sig` (or equivalently of `sig / 10^k` for any k).
    pub fn of_integer(sig: u128) -> Result<Self> {
        if sig == 0 {
            return Err(Error::NotAMantissa("0".into()));
        }
        Ok(Mantissa(Decimal::new(sig, digit_count(sig) - 1)))
    }

    /// `m / 10^(digits-1)` for an integer `m` with exactly `digits` digits.
    pub fn from_scaled(m: u128, digits: u32) -> Result<Self> {
        if digits == 0 {
            return Err(Error::ZeroDigits);
        }
        if digits > 38 || m < pow10(digits - 1) || m >= pow10(digits) {
            return Err(Error::NotAMantissa(format!("{m}e-{}", digits.saturating_sub(1))));
        }
        Ok(Mantissa(Decimal::new(m, digits - 1)))
    }

    pub fn from_decimal(d: Decimal) -> Result<Self> {
        if d < Decimal::integer(1) || d >= Decimal::integer(10) {
            return Err(Error::NotAMantissa(d.to_string()));
        }
        Ok(Mantissa(d))
    }

    /// Parses a positive decimal and keeps its significant digits, so "21",
    /// "2.1" and "0.0021" all give 2.1. Inputs longer than
    /// [`MAX_INPUT_DIGITS`] significant digits are rejected.
    pub fn normalize_str(s: &str) -> Result<Self> {
        let d: Decimal = s.parse()?;
        if d.is_zero() {
            return Err(Error::NotAMantissa(s.trim().to_string()));
        }
        let m = Mantissa::of_integer(d.sig)?;
        if m.digits() > MAX_INPUT_DIGITS {
            return Err(Error::TooManyDigits { n: m.digits(), max: MAX_INPUT_DIGITS });
        }
        Ok(m)
    }

    /// Truncates `x ∈ [1, 10)` toward zero to `digits` significant digits.
    pub fn truncate_f64(x: f64, digits: u32) -> Result<Self> {
        if !(1.0..10.0).contains(&x) {
            return Err(Error::NotAMantissa(x.to_string()));
        }
        if digits == 0 {
            return Err(Error::ZeroDigits);
        }
        if digits > MAX_INPUT_DIGITS {
            return Err(Error::TooManyDigits { n: digits, max: MAX_INPUT_DIGITS });
        }
        let scaled = (x * pow10(digits - 1) as f64).floor() as u128;
        let m = scaled.clamp(pow10(digits - 1), pow10(digits) - 1);
        Mantissa::from_scaled(m, digits)
    }

    /// Rounds `x` to the nearest `digits`-digit grid point and rejects it
    /// unless `x` was already (to within float noise) on that grid.
    pub fn from_f64_on_grid(x: f64, digits: u32) -> Result<Self> {
        if !(1.0..10.0).contains(&x) {
            return Err(Error::NotAMantissa(x.to_string()));
        }
        if digits == 0 {
            return Err(Error::ZeroDigits);
        }
        if digits > MAX_INPUT_DIGITS {
            return Err(Error::TooManyDigits { n: digits, max: MAX_INPUT_DIGITS });
        }
        let unit = pow10(digits - 1) as f64;
        let scaled = (x * unit).round();
        if (scaled - x * unit).abs() > 1e-6 {
            return Err(Error::OffGrid { value: x.to_string(), digits });
        }
        Mantissa::from_scaled(scaled as u128, digits)
    }

    pub fn from_f64_shortest(x: f64) -> Result<Self> {
        let m = Mantissa::from_decimal(Decimal::from_f64_shortest(x)?)?;
        if m.digits() > MAX_INPUT_DIGITS {
            return Err(Error::TooManyDigits { n: m.digits(), max: MAX_INPUT_DIGITS });
        }
        Ok(m)
    }

    pub fn decimal(&self) -> Decimal {
        self.0
    }

    /// Significant digits with trailing zeros dropped.
    pub fn digits(&self) -> u32 {
        self.0.scale + 1
    }

    /// The significant digits as an integer, i.e. `self × 10^(digits-1)`.
    pub fn scaled(&self) -> u128 {
        self.0.sig
    }

    /// The value scaled onto the `n`-digit grid, if it lies on it.
    pub fn on_grid(&self, n: u32) -> Option<u128> {
        if self.digits() > n || n > 38 {
            return None;
        }
        Some(self.0.sig * pow10(n - self.digits()))
    }

    pub fn leading_digit(&self) -> u8 {
        (self.0.sig / pow10(self.0.scale)) as u8
    }

    /// Mantissa of the exact product, with the decimal point moved back into
    /// `[1, 10)`.
    pub fn mul(&self, other: &Mantissa) -> Mantissa {
        let sig = self
            .0
            .sig
            .checked_mul(other.0.sig)
            .expect("mantissa product exceeds 128 bits");
        Mantissa(Decimal::new(sig, digit_count(sig) - 1))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Display for Mantissa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Mantissa {
    type Err = Error;

    /// Strict parse: the text itself must denote a value in `[1, 10)`.
    fn from_str(s: &str) -> Result<Self> {
        let m = Mantissa::from_decimal(s.parse()?)?;
        if m.digits() > MAX_INPUT_DIGITS {
            return Err(Error::TooManyDigits { n: m.digits(), max: MAX_INPUT_DIGITS });
        }
        Ok(m)
    }
}

impl Serialize for Mantissa {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mantissa {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `ceil(a · 10^k / b)` for `k` of either sign, saturating at `cap`.
pub(crate) fn ceil_div_pow10(a: u128, k: i32, b: u128, cap: u128) -> u128 {
    debug_assert!(b > 0);
    if k < 0 {
        let den = POW10
            .get((-k) as usize)
            .and_then(|p| b.checked_mul(*p));
        return match den {
            Some(den) => a.div_ceil(den).min(cap),
            // a < 10^38 < den, and a > 0 rounds up to 1
            None => u128::from(a > 0).min(cap),
        };
    }
    if let Some(num) = POW10.get(k as usize).and_then(|p| a.checked_mul(*p)) {
        return num.div_ceil(b).min(cap);
    }
    // long division one decimal place at a time
    let (mut q, mut r) = (a / b, a % b);
    for _ in 0..k {
        if q > cap {
            return cap;
        }
        let r10 = r * 10;
        q = q * 10 + r10 / b;
        r = r10 % b;
    }
    if r > 0 {
        q += 1;
    }
    q.min(cap)
}
