//! Bracketed scalar root finding.

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

/// Root of `f` in `[a, b]`, given `f(a)` and `f(b)` of opposite sign.
///
/// Secant steps are taken while they stay inside the bracket and shrink it
/// at least by half every two steps; otherwise the step is a bisection.
/// Stops when the bracket is narrower than `x_tol` or than a few ulps.
pub fn bisect_secant<F>(mut f: F, a: f64, b: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(x_tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {x_tol}")));
    }
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::InvalidInput(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }
    let mut width_two_ago = f64::INFINITY;
    let mut width_prev = hi - lo;
    for _ in 0..MAX_ITERATIONS {
        let width = hi - lo;
        if width <= x_tol || width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return Ok(if f_lo.abs() < f_hi.abs() { lo } else { hi });
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let shrinking = width <= 0.5 * width_two_ago;
        let x = if secant > lo && secant < hi && shrinking {
            secant
        } else {
            0.5 * (lo + hi)
        };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        width_two_ago = width_prev;
        width_prev = width;
    }
    Err(Error::NonConvergence(format!(
        "bisection/secant on [{a}, {b}] after {MAX_ITERATIONS} iterations"
    )))
}

/// `n` points spaced evenly in `ln x` from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
