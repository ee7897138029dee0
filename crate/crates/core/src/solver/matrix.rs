use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// A finite 0/1 payoff matrix from the row player's side: `1` means the row
/// player wins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct GameMatrix {
    rows: usize,
    cols: usize,
    a: Vec<u8>,
}

impl GameMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidMatrix("rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|&x| x > 1) {
            return Err(Error::InvalidMatrix("entries must be 0 or 1".into()));
        }
        Ok(GameMatrix { rows: rows.len(), cols, a: rows.concat() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row and column".into()));
        }
        let a = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| u8::from(f(i, j))).collect();
        Ok(GameMatrix { rows, cols, a })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.a[i * self.cols + j]
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.a.chunks(self.cols).map(|r| r.iter().map(|&x| x as u32).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j) as u32).sum()).collect()
    }

    /// Square with every row and column summing to the same `c`.
    pub fn balanced_count(&self) -> Option<u32> {
        if self.rows != self.cols {
            return None;
        }
        let rs = self.row_sums();
        let c = rs[0];
        (rs.iter().all(|&r| r == c) && self.col_sums().iter().all(|&s| s == c)).then_some(c)
    }

    /// Row player's payoff against each column under the mixed row strategy `p`.
    pub fn payoff_by_col(&self, p: &[f64]) -> Vec<f64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| p[i] * self.get(i, j) as f64).sum()).collect()
    }

    /// Row player's payoff for each row under the mixed column strategy `q`.
    pub fn payoff_by_row(&self, q: &[f64]) -> Vec<f64> {
        self.a.chunks(self.cols).map(|r| r.iter().zip(q).map(|(&x, qj)| x as f64 * qj).sum()).collect()
    }
}

impl TryFrom<Vec<Vec<u8>>> for GameMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u8>>) -> Result<Self> {
        GameMatrix::new(rows)
    }
}

impl From<GameMatrix> for Vec<Vec<u8>> {
    fn from(m: GameMatrix) -> Self {
        m.a.chunks(m.cols).map(<[u8]>::to_vec).collect()
    }
}

/// Value `c/n` of a balanced matrix, with the uniform strategy certified to
/// guarantee it for both players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalancedCertificate {
    pub value: f64,
    /// Ones per row and per column.
    pub ones: u32,
    pub order: usize,
}

pub fn balanced_matrix_value(m: &GameMatrix) -> Result<BalancedCertificate> {
    if m.rows != m.cols {
        return Err(Error::Unbalanced(format!("{}x{} is not square", m.rows, m.cols)));
    }
    let c = m.balanced_count().ok_or_else(|| {
        Error::Unbalanced("row and column sums differ; use fictitious play".into())
    })?;
    let n = m.rows;
    let uniform = vec![1.0 / n as f64; n];
    let value = c as f64 / n as f64;
    // uniform rows earn c/n against every column, uniform columns concede
    // c/n to every row
    debug_assert!(m.payoff_by_col(&uniform).iter().all(|v| (v - value).abs() < 1e-12));
    debug_assert!(m.payoff_by_row(&uniform).iter().all(|v| (v - value).abs() < 1e-12));
    Ok(BalancedCertificate { value, ones: c, order: n })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Best payoff the row player is guaranteed by `row_strategy` (bound on v₁).
    pub value_lower: f64,
    /// Most the column player concedes with `col_strategy` (bound on v₂).
    pub value_upper: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SolveReport {
    pub fn value(&self) -> f64 {
        0.5 * (self.value_lower + self.value_upper)
    }

    pub fn gap(&self) -> f64 {
        self.value_upper - self.value_lower
    }
}

const SMOOTHED_EVERY: usize = 16;

fn unit(len: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[k] = 1.0;
    v
}

fn argmax(v: &[f64]) -> usize {
    // first maximum wins ties
    v.iter().enumerate().fold(0, |best, (k, x)| if *x > v[best] { k } else { best })
}

fn argmin(v: &[f64]) -> usize {
    v.iter().enumerate().fold(0, |best, (k, x)| if *x < v[best] { k } else { best })
}

/// Alternating fictitious play: the row player best-responds to the column
/// history, then the column player to the updated row history. Ties go to
/// the lowest index.
///
/// Bounds are certified on three kinds of strategies: the empirical mixes,
/// the current pure replies, and the running average of the empirical mixes.
/// The best bounds seen so far are kept, so the report is valid whenever the
/// loop stops; `converged` says whether the gap reached `tol` within
/// `max_iter` rounds.
pub fn fictitious_play(m: &GameMatrix, tol: f64, max_iter: usize) -> SolveReport {
    let (rows, cols) = (m.rows, m.cols);
    let mut row_counts = vec![0u64; rows];
    let mut col_counts = vec![0u64; cols];
    // payoff of each row against the column history, and of each column
    // against the row history
    let mut row_payoff = vec![0.0f64; rows];
    let mut col_payoff = vec![0.0f64; cols];
    let mut row_play = 0usize;
    let mut col_play;
    // running sums of the empirical mixes; their averages smooth out the
    // cycling of plain fictitious play and give tighter certified bounds
    let mut row_mix_sum = vec![0.0f64; rows];
    let mut col_mix_sum = vec![0.0f64; cols];

    let mut report = SolveReport {
        value_lower: f64::NEG_INFINITY,
        value_upper: f64::INFINITY,
        row_strategy: vec![0.0; rows],
        col_strategy: vec![0.0; cols],
        iterations: 0,
        converged: false,
    };

    for t in 1..=max_iter.max(1) {
        // alternating updates: the row player moves first, then the column
        // player answers the updated row history
        row_counts[row_play] += 1;
        for j in 0..cols {
            col_payoff[j] += m.get(row_play, j) as f64;
        }
        col_play = argmin(&col_payoff);
        col_counts[col_play] += 1;
        for i in 0..rows {
            row_payoff[i] += m.get(i, col_play) as f64;
        }
        let tf = t as f64;
        let lower = col_payoff[col_play] / tf;
        let upper = row_payoff.iter().copied().fold(f64::NEG_INFINITY, f64::max) / tf;
        if lower > report.value_lower {
            report.value_lower = lower;
            report.row_strategy = row_counts.iter().map(|&c| c as f64 / tf).collect();
        }
        if upper < report.value_upper {
            report.value_upper = upper;
            report.col_strategy = col_counts.iter().map(|&c| c as f64 / tf).collect();
        }
        // a pure strategy's own guarantee is also a valid bound
        let pure_lower = (0..cols).map(|j| m.get(row_play, j)).min().unwrap_or(0) as f64;
        if pure_lower > report.value_lower {
            report.value_lower = pure_lower;
            report.row_strategy = unit(rows, row_play);
        }
        let pure_upper = (0..rows).map(|i| m.get(i, col_play)).max().unwrap_or(1) as f64;
        if pure_upper < report.value_upper {
            report.value_upper = pure_upper;
            report.col_strategy = unit(cols, col_play);
        }
        for (s, &c) in row_mix_sum.iter_mut().zip(&row_counts) {
            *s += c as f64 / tf;
        }
        for (s, &c) in col_mix_sum.iter_mut().zip(&col_counts) {
            *s += c as f64 / tf;
        }
        if t % SMOOTHED_EVERY == 0 {
            let p: Vec<f64> = row_mix_sum.iter().map(|s| s / tf).collect();
            let q: Vec<f64> = col_mix_sum.iter().map(|s| s / tf).collect();
            let lower = m.payoff_by_col(&p).into_iter().fold(f64::INFINITY, f64::min);
            let upper = m.payoff_by_row(&q).into_iter().fold(f64::NEG_INFINITY, f64::max);
            if lower > report.value_lower {
                report.value_lower = lower;
                report.row_strategy = p;
            }
            if upper < report.value_upper {
                report.value_upper = upper;
                report.col_strategy = q;
            }
        }
        report.iterations = t;
        if report.value_upper - report.value_lower <= tol {
            report.converged = true;
            break;
        }
        row_play = argmax(&row_payoff);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circulant(n: usize, ones: usize) -> GameMatrix {
        GameMatrix::from_fn(n, n, |i, j| (j + n - i) % n < ones).unwrap()
    }

    #[test]
    fn balanced_values() {
        assert_eq!(balanced_matrix_value(&circulant(3, 2)).unwrap().value, 2.0 / 3.0);
        let id = GameMatrix::from_fn(5, 5, |i, j| i == j).unwrap();
        assert_eq!(balanced_matrix_value(&id).unwrap().value, 0.2);
        let ones = GameMatrix::from_fn(4, 4, |_, _| true).unwrap();
        assert_eq!(balanced_matrix_value(&ones).unwrap().value, 1.0);
        let lopsided = GameMatrix::new(vec![vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(balanced_matrix_value(&lopsided), Err(Error::Unbalanced(_))));
        let wide = GameMatrix::new(vec![vec![1, 0, 1]]).unwrap();
        assert!(balanced_matrix_value(&wide).is_err());
    }

    #[test]
    fn matching_pennies() {
        let m = GameMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let r = fictitious_play(&m, DEFAULT_TOL, DEFAULT_MAX_ITER);
        assert!(r.converged);
        assert!((r.value() - 0.5).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn saddle_point() {
        // row 1 dominates; column 0 is the minimizer's answer
        let m = GameMatrix::new(vec![vec![0, 0], vec![1, 1]]).unwrap();
        let r = fictitious_play(&m, 1e-9, 1000);
        assert!(r.converged);
        assert_eq!(r.value_lower, 1.0);
        assert_eq!(r.row_strategy, vec![0.0, 1.0]);
    }

    #[test]
    fn balanced_matrices_agree_with_fictitious_play() {
        for (n, c) in [(3, 2), (4, 1), (5, 3), (8, 5)] {
            let m = circulant(n, c);
            let r = fictitious_play(&m, DEFAULT_TOL, DEFAULT_MAX_ITER);
            let exact = balanced_matrix_value(&m).unwrap().value;
            assert!(r.value_lower <= exact + 1e-12 && exact <= r.value_upper + 1e-12);
            assert!(r.converged, "n = {n}, c = {c}: gap {}", r.gap());
            assert!((r.value() - exact).abs() <= DEFAULT_TOL);
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(GameMatrix::new(vec![]).is_err());
        assert!(GameMatrix::new(vec![vec![1, 0], vec![1]]).is_err());
        assert!(GameMatrix::new(vec![vec![2]]).is_err());
        assert!(serde_json::from_str::<GameMatrix>("[[1,0],[0,1]]").is_ok());
        assert!(serde_json::from_str::<GameMatrix>("[[1,0],[0,3]]").is_err());
    }
}
