use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
}

const MAX_DEPTH: u32 = 40;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. Fails with [`Error::NonConvergent`] if some panel still misses its
/// share of the tolerance at the maximum subdivision depth.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    let mut state = State { evaluations: 3, error: 0.0, failed: false };
    let value = refine(&mut f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut state);
    if state.failed {
        return Err(Error::NonConvergent { estimate: state.error });
    }
    Ok(Quadrature { value, error_estimate: state.error, evaluations: state.evaluations })
}

/// Integrates over consecutive panels `[p0, p1], [p1, p2], …`, splitting the
/// tolerance in proportion to panel width. Use this to put kinks of the
/// integrand on panel edges.
pub fn adaptive_simpson_panels<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: f64) -> Result<Quadrature> {
    let span = breaks.last().copied().unwrap_or(0.0) - breaks.first().copied().unwrap_or(0.0);
    let mut total = Quadrature { value: 0.0, error_estimate: 0.0, evaluations: 0 };
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let q = adaptive_simpson(&mut f, w[0], w[1], tol * (w[1] - w[0]) / span)?;
        total.value += q.value;
        total.error_estimate += q.error_estimate;
        total.evaluations += q.evaluations;
    }
    Ok(total)
}

struct State {
    evaluations: usize,
    error: f64,
    failed: bool,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    state: &mut State,
) -> f64 {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    state.evaluations += 2;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        if depth == 0 && delta.abs() > 15.0 * tol {
            state.failed = true;
        }
        state.error += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state)
}
