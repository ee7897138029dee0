//! Exact outcome counts over all pairs of n-digit integers.
//!
//! Multiplying by 10 never changes a leading digit, so the n-digit integers
//! `i` and the grid mantissas `i / 10^(n-1)` play identically. Counting is
//! done on integers with exact arithmetic throughout.

use std::ops::Range;

use serde::Serialize;

use crate::decimal::{ceil_div_pow10, pow10, Mantissa};
use crate::error::{Error, Result};
use crate::measure::{ExactSet, IntervalUnion};
use crate::quadrature::{adaptive_simpson_panels, Quadrature};

/// Largest digit count accepted by the counters.
pub const MAX_COUNT_DIGITS: u32 = 8;

/// Absolute tolerance used by [`uniform_limit_value`].
pub const LIMIT_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub n: u32,
    pub casino_wins: u64,
    pub player_wins: u64,
    pub total: u64,
    /// Products by leading digit, `histogram[d - 1]` for digit `d`.
    pub histogram: [u64; 9],
}

impl CountResult {
    fn zero(n: u32) -> Self {
        CountResult { n, casino_wins: 0, player_wins: 0, total: 0, histogram: [0; 9] }
    }

    fn merge(mut self, other: CountResult) -> Self {
        self.casino_wins += other.casino_wins;
        self.player_wins += other.player_wins;
        self.total += other.total;
        for (a, b) in self.histogram.iter_mut().zip(other.histogram) {
            *a += b;
        }
        self
    }

    /// Casino wins per player win.
    pub fn ratio(&self) -> f64 {
        self.casino_wins as f64 / self.player_wins as f64
    }

    pub fn casino_rate(&self) -> f64 {
        self.casino_wins as f64 / self.total as f64
    }
}

/// The n-digit integers `[10^(n-1), 10^n)`.
pub(crate) fn grid_range(n: u32) -> Range<u128> {
    pow10(n - 1)..pow10(n)
}

fn check_digits(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDigits);
    }
    if n > MAX_COUNT_DIGITS {
        return Err(Error::TooManyDigits { n, max: MAX_COUNT_DIGITS });
    }
    Ok(())
}

/// Ranges of `m ∈ [10^(n-1), 10^n)` for which `mantissa(m · y)` lies in one
/// of `parts`, where `y = y_sig / 10^y_scale ∈ [1, 10)`.
///
/// `m · y_sig` spans the two decades starting at `10^(n-1+y_scale)`, and for
/// each decade `K` the condition `c·10^K ≤ m·y_sig < d·10^K` becomes
/// `ceil(c·10^K / y_sig) ≤ m < ceil(d·10^K / y_sig)`.
pub(crate) fn grid_hits(n: u32, y_sig: u128, y_scale: u32, w: &ExactSet) -> Vec<Range<u128>> {
    let grid = grid_range(n);
    let mut out = Vec::with_capacity(2 * w.parts().len());
    for decade in [n - 1 + y_scale, n + y_scale] {
        for (lo, hi) in w.parts() {
            let bound = |d: &crate::decimal::Decimal| {
                ceil_div_pow10(d.sig(), decade as i32 - d.scale() as i32, y_sig, grid.end)
            };
            let a = bound(lo).max(grid.start);
            let b = bound(hi).min(grid.end);
            if a < b {
                out.push(a..b);
            }
        }
    }
    out.sort_by_key(|r| r.start);
    let mut merged: Vec<Range<u128>> = Vec::with_capacity(out.len());
    for r in out {
        match merged.last_mut() {
            Some(last) if r.start <= last.end => last.end = last.end.max(r.end),
            _ => merged.push(r),
        }
    }
    merged
}

/// Counts for a single multiplier `i` against the whole n-digit grid.
fn count_row_fast(n: u32, i: u128, w: &ExactSet) -> CountResult {
    let grid = grid_range(n);
    let size = (grid.end - grid.start) as u64;
    let casino: u64 = grid_hits(n, i, n - 1, w).iter().map(|r| (r.end - r.start) as u64).sum();
    let mut histogram = [0u64; 9];
    for decade in [2 * n - 2, 2 * n - 1] {
        let threshold = |d: u128| ceil_div_pow10(d, decade as i32, i, grid.end).clamp(grid.start, grid.end);
        let mut prev = threshold(1);
        for d in 1..=9u128 {
            let next = threshold(d + 1);
            histogram[d as usize - 1] += (next - prev) as u64;
            prev = next;
        }
    }
    CountResult { n, casino_wins: casino, player_wins: size - casino, total: size, histogram }
}

fn count_row_naive(n: u32, i: u128, w: &ExactSet) -> CountResult {
    let mut out = CountResult::zero(n);
    for j in grid_range(n) {
        let p = i * j;
        let m = Mantissa::of_integer(p).expect("positive product");
        out.histogram[m.leading_digit() as usize - 1] += 1;
        if w.contains(&m) {
            out.casino_wins += 1;
        } else {
            out.player_wins += 1;
        }
        out.total += 1;
    }
    out
}

#[cfg(feature = "parallel")]
fn fold_rows<F>(n: u32, row: F) -> CountResult
where
    F: Fn(u128) -> CountResult + Sync,
{
    use rayon::prelude::*;
    let grid = grid_range(n);
    let chunk = ((grid.end - grid.start) / 64).max(1);
    let starts: Vec<u128> = (grid.start..grid.end).step_by(chunk as usize).collect();
    starts
        .into_par_iter()
        .map(|s| {
            (s..(s + chunk).min(grid.end)).map(&row).fold(CountResult::zero(n), CountResult::merge)
        })
        .reduce(|| CountResult::zero(n), CountResult::merge)
}

#[cfg(not(feature = "parallel"))]
fn fold_rows<F>(n: u32, row: F) -> CountResult
where
    F: Fn(u128) -> CountResult,
{
    grid_range(n).map(row).fold(CountResult::zero(n), CountResult::merge)
}

/// Exact counts by enumerating every ordered pair of n-digit integers.
pub fn count_products(n: u32, w: &IntervalUnion) -> Result<CountResult> {
    check_digits(n)?;
    let exact = ExactSet::new(w)?;
    Ok(fold_rows(n, |i| count_row_naive(n, i, &exact)))
}

/// Same result as [`count_products`], computed per multiplier by
/// integer-division threshold counting in `O(T · 10^n)`.
pub fn count_products_fast(n: u32, w: &IntervalUnion) -> Result<CountResult> {
    check_digits(n)?;
    let exact = ExactSet::new(w)?;
    Ok(fold_rows(n, |i| count_row_fast(n, i, &exact)))
}

/// Casino win probability when both mantissas are independent and uniform
/// on `[1, 10)`: the limit of `casino_wins / total` as `n → ∞`.
///
/// The inner integral over the player's number is exact (the Lebesgue length
/// of the pulled-back winning set); the outer one is adaptive Simpson with
/// panel edges at the endpoints of `w`, where the integrand has kinks.
pub fn uniform_limit_value(w: &IntervalUnion) -> Result<Quadrature> {
    let mut breaks = vec![1.0, 10.0];
    for p in w.parts() {
        breaks.extend([p.lo, p.hi].into_iter().filter(|e| *e > 1.0 && *e < 10.0));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    // check the domain once; the integrand itself cannot fail afterwards
    w.scale_mod_group(1.0)?;
    let integrand = |x: f64| {
        let y = x.min(10.0 - f64::EPSILON * 10.0);
        w.scale_mod_group(y).map(|v| v.length()).unwrap_or(0.0) / 81.0
    };
    let mut q = adaptive_simpson_panels(integrand, &breaks, LIMIT_TOLERANCE)?;
    q.value = q.value.clamp(0.0, 1.0);
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn low_digits() -> IntervalUnion {
        IntervalUnion::from_digits(&[1, 2, 3]).unwrap()
    }

    #[test]
    fn one_digit_table() {
        let c = count_products(1, &low_digits()).unwrap();
        assert_eq!((c.casino_wins, c.player_wins, c.total), (44, 37, 81));
        assert_eq!(c.histogram.iter().sum::<u64>(), 81);
        assert_eq!(count_products_fast(1, &low_digits()).unwrap(), c);
    }

    #[test]
    fn two_and_three_digits() {
        let c2 = count_products_fast(2, &low_digits()).unwrap();
        assert_eq!((c2.casino_wins, c2.player_wins), (4616, 3484));
        assert!(c2.ratio() > 1.32 && c2.ratio() < 1.33);
        let c3 = count_products(3, &low_digits()).unwrap();
        assert_eq!((c3.casino_wins, c3.player_wins), (461_698, 348_302));
        assert!((c3.ratio() - 1.32557).abs() < 5e-6);
        assert_eq!(count_products_fast(3, &low_digits()).unwrap(), c3);
    }

    #[test]
    #[ignore = "enumerates 8.1e9 pairs"]
    fn five_digits_by_enumeration() {
        assert_eq!(count_products(5, &low_digits()).unwrap(), count_products_fast(5, &low_digits()).unwrap());
    }

    #[test]
    fn digit_cap() {
        assert!(matches!(count_products(0, &low_digits()), Err(Error::ZeroDigits)));
        assert!(matches!(count_products_fast(9, &low_digits()), Err(Error::TooManyDigits { .. })));
        let logset = low_digits().to_log().unwrap();
        assert!(count_products(1, &logset).is_err());
    }

    #[test]
    fn histogram_matches_digit_sets() {
        let c = count_products_fast(3, &low_digits()).unwrap();
        for d in 1..=9u8 {
            let single = count_products_fast(3, &IntervalUnion::from_digits(&[d]).unwrap()).unwrap();
            assert_eq!(single.casino_wins, c.histogram[d as usize - 1]);
        }
        assert_eq!(c.histogram[..3].iter().sum::<u64>(), c.casino_wins);
    }

    #[test]
    fn grid_hits_match_direct_products() {
        let w = ExactSet::new(&IntervalUnion::canonicalize(
            [(1.25, 3.5).into(), (6.02, 9.1).into()],
            crate::measure::Domain::Mantissa,
        ).unwrap())
        .unwrap();
        let y: Mantissa = "3.1415".parse().unwrap();
        let hits = grid_hits(3, y.scaled(), y.digits() - 1, &w);
        for m in grid_range(3) {
            let x = Mantissa::from_scaled(m, 3).unwrap();
            let expected = w.contains(&x.mul(&y));
            assert_eq!(hits.iter().any(|r| r.contains(&m)), expected, "m = {m}");
        }
    }

    #[test]
    fn uniform_limit() {
        let q = uniform_limit_value(&low_digits()).unwrap();
        // independent high-precision evaluation of the same double integral
        assert!((q.value - 0.570_011_799_870_436).abs() < 1e-7, "{}", q.value);
        let full = uniform_limit_value(&IntervalUnion::full(crate::measure::Domain::Mantissa)).unwrap();
        assert!((full.value - 1.0).abs() < 1e-7);
        let empty = uniform_limit_value(&IntervalUnion::empty(crate::measure::Domain::Mantissa)).unwrap();
        assert_eq!(empty.value, 0.0);
    }
}
