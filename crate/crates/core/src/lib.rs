//! The Multiplication Game: two players each pick a positive number, the
//! numbers are multiplied, and the casino wins when the product's leading
//! digits fall in its winning set.
//!
//! This crate computes exact outcome counts for n-digit play, optimal and
//! near-optimal strategies, game values for arbitrary winning sets and for
//! finite groups, and runs seeded simulations of the casino floor.
//!
//! ```
//! use mulgame::{measure::IntervalUnion, solver};
//!
//! let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
//! let v = solver::game_value(&w).unwrap();
//! assert!((v - 4f64.log10()).abs() < 1e-12);
//! ```

pub mod decimal;
pub mod error;
pub mod exact_count;
pub mod measure;
pub mod quadrature;
pub mod simulator;
pub mod solver;
pub mod strategy;

pub use decimal::{Decimal, Mantissa};
pub use error::{Error, Result};
pub use measure::{Domain, Interval, IntervalUnion, WinningSetSpec};
pub use strategy::{RngStream, Strategy, StrategySpec};
