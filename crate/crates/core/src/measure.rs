//! Interval sets on the two faces of the game's circle group.
//!
//! The mantissa domain `[1, 10)` carries the Benford measure and acts by
//! multiplication with the decimal point moved back into range; the log domain
//! `[0, 1)` carries Lebesgue measure and acts by addition mod 1. `log10` is an
//! isomorphism between the two, so a winning set `W` and its log image `Z`
//! always have the same measure.
//!
//! Every [`IntervalUnion`] is kept canonical: half-open parts sorted by `lo`,
//! disjoint, and separated by more than [`TOLERANCE`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decimal::{Decimal, Mantissa};
use crate::error::{Error, Result};

/// Absolute tolerance for endpoint comparisons and merging.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `[1, 10)` with the Benford measure.
    Mantissa,
    /// `[0, 1)` with Lebesgue measure.
    Log,
}

impl Domain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Domain::Mantissa => (1.0, 10.0),
            Domain::Log => (0.0, 1.0),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Mantissa => f.write_str("mantissa"),
            Domain::Log => f.write_str("log"),
        }
    }
}

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<(f64, f64)> for Interval {
    fn from((lo, hi): (f64, f64)) -> Self {
        Interval { lo, hi }
    }
}

impl From<Interval> for (f64, f64) {
    fn from(i: Interval) -> Self {
        (i.lo, i.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    domain: Domain,
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty(domain: Domain) -> Self {
        IntervalUnion { domain, parts: Vec::new() }
    }

    pub fn full(domain: Domain) -> Self {
        let (lo, hi) = domain.bounds();
        IntervalUnion { domain, parts: vec![Interval::new(lo, hi)] }
    }

    /// Validates, sorts and merges `intervals` into canonical form.
    pub fn canonicalize(intervals: impl IntoIterator<Item = Interval>, domain: Domain) -> Result<Self> {
        let (dlo, dhi) = domain.bounds();
        let mut parts = Vec::new();
        for i in intervals {
            if !(i.lo.is_finite() && i.hi.is_finite()) || i.lo >= i.hi {
                return Err(Error::EmptyInterval { lo: i.lo, hi: i.hi });
            }
            if i.lo < dlo - TOLERANCE || i.hi > dhi + TOLERANCE {
                return Err(Error::OutsideDomain { lo: i.lo, hi: i.hi, domain });
            }
            parts.push(Interval::new(i.lo.max(dlo), i.hi.min(dhi)));
        }
        Ok(Self::merge_sorted(domain, parts))
    }

    /// Sort, snap to the domain edges, merge, and drop slivers.
    fn merge_sorted(domain: Domain, mut parts: Vec<Interval>) -> Self {
        let (dlo, dhi) = domain.bounds();
        for p in &mut parts {
            if (p.lo - dlo).abs() <= TOLERANCE {
                p.lo = dlo;
            }
            if (p.hi - dhi).abs() <= TOLERANCE {
                p.hi = dhi;
            }
        }
        parts.retain(|p| p.hi - p.lo > TOLERANCE);
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.lo - last.hi <= TOLERANCE => last.hi = last.hi.max(p.hi),
                _ => merged.push(p),
            }
        }
        IntervalUnion { domain, parts: merged }
    }

    /// The first-digit set `{x : leading digit of x ∈ digits}` on `[1, 10)`.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if let Some(bad) = digits.iter().find(|d| !(1..=9).contains(*d)) {
            return Err(Error::InvalidWinningSet(format!("{bad} is not a leading digit")));
        }
        Self::canonicalize(
            digits.iter().map(|&d| Interval::new(d as f64, d as f64 + 1.0)),
            Domain::Mantissa,
        )
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(Error::DomainMismatch { expected, found: self.domain });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.expect_domain(other.domain)?;
        let parts = self.parts.iter().chain(&other.parts).copied().collect();
        Ok(Self::merge_sorted(self.domain, parts))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.expect_domain(other.domain)?;
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (self.parts[i], other.parts[j]);
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if hi > lo {
                out.push(Interval::new(lo, hi));
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(Self::merge_sorted(self.domain, out))
    }

    /// Complement within the ambient domain.
    pub fn complement(&self) -> Self {
        let (dlo, dhi) = self.domain.bounds();
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut cursor = dlo;
        for p in &self.parts {
            if p.lo > cursor {
                out.push(Interval::new(cursor, p.lo));
            }
            cursor = p.hi;
        }
        if cursor < dhi {
            out.push(Interval::new(cursor, dhi));
        }
        Self::merge_sorted(self.domain, out)
    }

    /// `Σ (log10 hi − log10 lo)` over a mantissa-domain set.
    pub fn benford_measure(&self) -> Result<f64> {
        self.expect_domain(Domain::Mantissa)?;
        let total: f64 = self.parts.iter().map(|p| (p.hi / p.lo).log10()).sum();
        Ok(total.clamp(0.0, 1.0))
    }

    /// `Σ (hi − lo)` over a log-domain set.
    pub fn lebesgue_measure(&self) -> Result<f64> {
        self.expect_domain(Domain::Log)?;
        let total: f64 = self.parts.iter().map(Interval::len).sum();
        Ok(total.clamp(0.0, 1.0))
    }

    /// Lebesgue length of a mantissa-domain set (not normalized).
    pub fn length(&self) -> f64 {
        self.parts.iter().map(Interval::len).sum()
    }

    pub fn to_log(&self) -> Result<Self> {
        self.expect_domain(Domain::Mantissa)?;
        let parts = self
            .parts
            .iter()
            .map(|p| Interval::new(p.lo.log10(), p.hi.log10()))
            .collect();
        Ok(Self::merge_sorted(Domain::Log, parts))
    }

    pub fn to_mantissa(&self) -> Result<Self> {
        self.expect_domain(Domain::Log)?;
        let parts = self
            .parts
            .iter()
            .map(|p| Interval::new(10f64.powf(p.lo), 10f64.powf(p.hi)))
            .collect();
        Ok(Self::merge_sorted(Domain::Mantissa, parts))
    }

    /// `{a + shift mod 1 : a ∈ self}`; parts that cross 1 are split in two.
    pub fn translate_mod1(&self, shift: f64) -> Result<Self> {
        self.expect_domain(Domain::Log)?;
        if !(0.0..1.0).contains(&shift) {
            return Err(Error::OutsideDomain { lo: shift, hi: shift, domain: Domain::Log });
        }
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        for p in &self.parts {
            let (lo, hi) = (p.lo + shift, p.hi + shift);
            if hi <= 1.0 + TOLERANCE {
                out.push(Interval::new(lo, hi.min(1.0)));
            } else if lo >= 1.0 - TOLERANCE {
                out.push(Interval::new((lo - 1.0).max(0.0), hi - 1.0));
            } else {
                out.push(Interval::new(lo, 1.0));
                out.push(Interval::new(0.0, hi - 1.0));
            }
        }
        Ok(Self::merge_sorted(Domain::Log, out))
    }

    /// `{x ∈ [1, 10) : mantissa(x·y) ∈ self}`, i.e. the set of casino numbers
    /// that win against the player's `y` when `self` is the winning set.
    pub fn scale_mod_group(&self, y: f64) -> Result<Self> {
        self.expect_domain(Domain::Mantissa)?;
        if !(1.0..10.0).contains(&y) {
            return Err(Error::NotAMantissa(y.to_string()));
        }
        // x·y ranges over [y, 10y) ⊂ [1, 100), so each part pulls back from
        // at most two decades.
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        for p in &self.parts {
            for decade in [1.0, 10.0] {
                let lo = (p.lo * decade / y).max(1.0);
                let hi = (p.hi * decade / y).min(10.0);
                if hi > lo {
                    out.push(Interval::new(lo, hi));
                }
            }
        }
        Ok(Self::merge_sorted(Domain::Mantissa, out))
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "[{}, {})", p.lo, p.hi)?;
        }
        Ok(())
    }
}

/// JSON form of a winning set: either explicit parts or first-digit shorthand.
///
/// ```json
/// {"domain":"mantissa","parts":[[1.0,4.0]]}
/// {"digits":[2,3,5,7]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WinningSetSpec {
    Digits { digits: Vec<u8> },
    Parts { domain: Domain, parts: Vec<Interval> },
}

impl WinningSetSpec {
    pub fn build(&self) -> Result<IntervalUnion> {
        match self {
            WinningSetSpec::Digits { digits } => IntervalUnion::from_digits(digits),
            WinningSetSpec::Parts { domain, parts } => {
                IntervalUnion::canonicalize(parts.iter().copied(), *domain)
            }
        }
    }
}

impl From<&IntervalUnion> for WinningSetSpec {
    fn from(s: &IntervalUnion) -> Self {
        WinningSetSpec::Parts { domain: s.domain, parts: s.parts.clone() }
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        WinningSetSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

/// A mantissa-domain set with endpoints fixed as exact decimals, used to
/// adjudicate exact products without floating-point error.
///
/// Each `f64` endpoint is read as its shortest round-trip decimal, so digit
/// sets get the integer endpoints they were written with.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSet {
    parts: Vec<(Decimal, Decimal)>,
}

impl ExactSet {
    pub fn new(set: &IntervalUnion) -> Result<Self> {
        set.expect_domain(Domain::Mantissa)?;
        let parts = set
            .parts
            .iter()
            .map(|p| Ok((Decimal::from_f64_shortest(p.lo)?, Decimal::from_f64_shortest(p.hi)?)))
            .collect::<Result<_>>()?;
        Ok(ExactSet { parts })
    }

    pub fn parts(&self) -> &[(Decimal, Decimal)] {
        &self.parts
    }

    pub fn contains(&self, m: &Mantissa) -> bool {
        let d = m.decimal();
        self.parts.iter().any(|(lo, hi)| *lo <= d && d < *hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mant(parts: &[(f64, f64)]) -> IntervalUnion {
        IntervalUnion::canonicalize(parts.iter().map(|&p| p.into()), Domain::Mantissa).unwrap()
    }

    fn log(parts: &[(f64, f64)]) -> IntervalUnion {
        IntervalUnion::canonicalize(parts.iter().map(|&p| p.into()), Domain::Log).unwrap()
    }

    fn assert_parts(s: &IntervalUnion, expected: &[(f64, f64)]) {
        assert_eq!(s.parts().len(), expected.len(), "{s}");
        for (p, e) in s.parts().iter().zip(expected) {
            assert!((p.lo - e.0).abs() < 1e-12 && (p.hi - e.1).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn canonical_forms() {
        assert_parts(&mant(&[(1.0, 4.0)]), &[(1.0, 4.0)]);
        assert_parts(&mant(&[(2.0, 4.0), (3.0, 6.0)]), &[(2.0, 6.0)]);
        assert_parts(
            &mant(&[(5.0, 6.0), (2.0, 4.0), (7.0, 8.0)]),
            &[(2.0, 4.0), (5.0, 6.0), (7.0, 8.0)],
        );
        assert_parts(&mant(&[(1.0, 2.0), (2.0, 3.0)]), &[(1.0, 3.0)]);
        assert!(mant(&[]).is_empty());
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        let bad = |lo, hi| IntervalUnion::canonicalize([Interval::new(lo, hi)], Domain::Mantissa);
        assert!(matches!(bad(4.0, 4.0), Err(Error::EmptyInterval { .. })));
        assert!(matches!(bad(5.0, 4.0), Err(Error::EmptyInterval { .. })));
        assert!(matches!(bad(0.5, 4.0), Err(Error::OutsideDomain { .. })));
        assert!(matches!(bad(4.0, 11.0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn set_algebra() {
        assert_parts(&mant(&[(1.0, 4.0)]).complement(), &[(4.0, 10.0)]);
        let i = mant(&[(1.0, 4.0)]).intersect(&mant(&[(2.0, 10.0)])).unwrap();
        assert_parts(&i, &[(2.0, 4.0)]);
        let u = mant(&[(1.0, 2.0)]).union(&mant(&[(5.0, 10.0)])).unwrap();
        assert_parts(&u, &[(1.0, 2.0), (5.0, 10.0)]);
        assert!(matches!(
            mant(&[(1.0, 2.0)]).union(&log(&[(0.0, 0.5)])),
            Err(Error::DomainMismatch { .. })
        ));
        assert_parts(&mant(&[]).complement(), &[(1.0, 10.0)]);
    }

    #[test]
    fn measures() {
        let w = mant(&[(1.0, 4.0)]);
        assert!((w.benford_measure().unwrap() - 0.6020599913279624).abs() < 1e-15);
        assert_eq!(IntervalUnion::full(Domain::Mantissa).benford_measure().unwrap(), 1.0);
        let primes = IntervalUnion::from_digits(&[2, 3, 5, 7]).unwrap();
        // log10(2) + log10(6/5) + log10(8/7)
        assert!((primes.benford_measure().unwrap() - 0.4382031886892928).abs() < 1e-15);
        assert!((log(&[(0.0, 0.60206)]).lebesgue_measure().unwrap() - 0.60206).abs() < 1e-15);
        assert!((primes.to_log().unwrap().lebesgue_measure().unwrap() - 0.4382031886892928).abs() < 1e-12);
        assert!(w.lebesgue_measure().is_err());
        assert!(log(&[(0.0, 0.5)]).benford_measure().is_err());
    }

    #[test]
    fn log_maps() {
        let z = mant(&[(1.0, 4.0)]).to_log().unwrap();
        assert_parts(&z, &[(0.0, 4f64.log10())]);
        assert_parts(&IntervalUnion::full(Domain::Mantissa).to_log().unwrap(), &[(0.0, 1.0)]);
        let s = mant(&[(1.5, 2.5), (7.0, 10.0)]);
        let back = s.to_log().unwrap().to_mantissa().unwrap();
        assert_parts(&back, &[(1.5, 2.5), (7.0, 10.0)]);
    }

    #[test]
    fn translation_wraps() {
        let s = log(&[(0.0, 0.3)]);
        assert_parts(&s.translate_mod1(0.9).unwrap(), &[(0.0, 0.2), (0.9, 1.0)]);
        assert_eq!(s.translate_mod1(0.0).unwrap(), s);
        assert!(s.translate_mod1(1.0).is_err());
    }

    #[test]
    fn scaling_by_group_element() {
        let w = mant(&[(1.0, 4.0)]);
        assert_parts(&w.scale_mod_group(1.0).unwrap(), &[(1.0, 4.0)]);
        assert_parts(&w.scale_mod_group(2.0).unwrap(), &[(1.0, 2.0), (5.0, 10.0)]);
        assert!(w.scale_mod_group(10.0).is_err());
    }

    #[test]
    fn scaling_matches_grid_brute_force() {
        // 10^6 grid points x, checking 2x ∈ [1,4) ∪ [10,40)
        let v = mant(&[(1.0, 4.0)]).scale_mod_group(2.0).unwrap();
        let n = 1_000_000;
        for k in 0..n {
            let x = 1.0 + 9.0 * (k as f64 + 0.5) / n as f64;
            let p = 2.0 * x;
            let wins = (1.0..4.0).contains(&p) || (10.0..40.0).contains(&p);
            assert_eq!(v.contains(x), wins, "x = {x}");
        }
    }

    #[test]
    fn winning_set_json() {
        let a: IntervalUnion = serde_json::from_str(r#"{"domain":"mantissa","parts":[[1.0,4.0]]}"#).unwrap();
        let b: IntervalUnion = serde_json::from_str(r#"{"digits":[1,2,3]}"#).unwrap();
        assert_eq!(a, b);
        let primes: IntervalUnion = serde_json::from_str(r#"{"digits":[2,3,5,7]}"#).unwrap();
        assert_parts(&primes, &[(2.0, 4.0), (5.0, 6.0), (7.0, 8.0)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"domain":"mantissa","parts":[[1.0,4.0]]}"#);
        assert!(serde_json::from_str::<IntervalUnion>(r#"{"digits":[0]}"#).is_err());
        assert!(serde_json::from_str::<IntervalUnion>(r#"{"domain":"mantissa","parts":[[4.0,1.0]]}"#).is_err());
    }

    #[test]
    fn exact_membership_at_boundaries() {
        let w = ExactSet::new(&IntervalUnion::from_digits(&[1, 2, 3]).unwrap()).unwrap();
        assert!(w.contains(&"3.999999999".parse().unwrap()));
        assert!(!w.contains(&"4".parse().unwrap()));
        assert!(w.contains(&"1".parse().unwrap()));
    }
}
