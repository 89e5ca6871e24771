//! Momentum-space quadrature for the free Green's function at `E < 0`.
//!
//! Each dimension reduces to a half-line integral:
//!
//! ```text
//! D=1:  -(1/π)       ∫₀^∞ cos(kr) / (k² + K²) dk
//! D=2:  -(1/2π)      ∫₀^∞ cos(kr) / √(k² + K²) dk
//! D=3:  -(1/(2π² r)) ∫₀^∞ k sin(kr) / (k² + K²) dk
//! ```
//!
//! (in 2D one momentum component is integrated in closed form first). The
//! oscillatory half-line is cut at the zeros of the trigonometric factor,
//! each piece goes through adaptive Gauss–Kronrod, and the alternating
//! partial sums are extrapolated with Wynn's ε algorithm.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest tolerance accepted by [`g0_by_quadrature`].
pub const MIN_TOLERANCE: f64 = 1e-10;

const MAX_PIECES: usize = 400;
const MAX_DEPTH: u32 = 40;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]` to absolute tolerance `tol`.
/// Returns the value and the accumulated error estimate.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> (f64, f64) {
        let (value, err) = whole;
        if err <= tol || depth == 0 {
            return (value, err);
        }
        let m = 0.5 * (a + b);
        let left = gauss_kronrod(f, a, m);
        let right = gauss_kronrod(f, m, b);
        let (lv, le) = recurse(f, a, m, 0.5 * tol, left, depth - 1);
        let (rv, re) = recurse(f, m, b, 0.5 * tol, right, depth - 1);
        (lv + rv, le + re)
    }
    recurse(f, a, b, tol, gauss_kronrod(f, a, b), MAX_DEPTH)
}

/// Wynn's ε extrapolation of a sequence of partial sums: the last entry of
/// the highest even column.
pub fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return *s.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur = s.to_vec();
    let mut best = s[n - 1];
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 || !diff.is_finite() {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if col % 2 == 0 {
            best = *next.last().unwrap();
        }
        prev = cur;
        cur = next;
        if cur.len() < 2 {
            break;
        }
    }
    best
}

/// `∫₀^∞ g(k) trig(kr) dk` with `trig` cosine or sine, to absolute `tol`.
fn oscillatory_half_line(g: impl Fn(f64) -> f64, r: f64, cosine: bool, tol: f64) -> Result<f64> {
    let f = |k: f64| g(k) * if cosine { (k * r).cos() } else { (k * r).sin() };
    let zero = |j: usize| {
        let j = j as f64;
        if cosine {
            (j + 0.5) * PI / r
        } else {
            (j + 1.0) * PI / r
        }
    };
    let piece_tol = tol * 1e-3;
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut quad_err = 0.0;
    let mut a = 0.0;
    let mut estimates: Vec<f64> = Vec::new();
    for j in 0..MAX_PIECES {
        let b = zero(j);
        let (v, e) = integrate(&f, a, b, piece_tol);
        sum += v;
        quad_err += e;
        partial.push(sum);
        a = b;
        if partial.len() >= 5 {
            estimates.push(wynn_epsilon(&partial));
            let m = estimates.len();
            if m >= 3 {
                let change = (estimates[m - 1] - estimates[m - 2])
                    .abs()
                    .max((estimates[m - 2] - estimates[m - 3]).abs());
                if change + quad_err < 0.1 * tol {
                    return Ok(estimates[m - 1]);
                }
            }
        }
    }
    let m = estimates.len();
    let estimate = (estimates[m - 1] - estimates[m - 2]).abs() + quad_err;
    if estimate <= tol {
        Ok(estimates[m - 1])
    } else {
        Err(Error::TailBoundExceeded { estimate, tol })
    }
}

/// Free Green's function at real `E < 0` and separation `r`, by direct
/// momentum-space quadrature.
pub fn g0_by_quadrature(dim: usize, energy: f64, r: f64, tol: f64) -> Result<f64> {
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDim(dim));
    }
    if !(energy < 0.0) || !energy.is_finite() {
        return Err(Error::DomainError(format!("quadrature needs E < 0, got {energy}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::DomainError(format!("separation must be non-negative, got {r}")));
    }
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::InvalidInput(format!("tolerance must be at least {MIN_TOLERANCE:e}, got {tol:e}")));
    }
    let k2 = -energy;
    if r == 0.0 {
        if dim > 1 {
            return Err(Error::CoincidentPoints { dim, r });
        }
        // k = t/(1-t) maps the half line onto [0, 1)
        let f = |t: f64| {
            let k = t / (1.0 - t);
            1.0 / ((k * k + k2) * (1.0 - t) * (1.0 - t))
        };
        let (v, e) = integrate(&f, 0.0, 1.0, 0.1 * tol * PI);
        if e > tol * PI {
            return Err(Error::TailBoundExceeded { estimate: e / PI, tol });
        }
        return Ok(-v / PI);
    }
    Ok(match dim {
        1 => -oscillatory_half_line(|k| 1.0 / (k * k + k2), r, true, tol * PI)? / PI,
        2 => -oscillatory_half_line(|k| 1.0 / (k * k + k2).sqrt(), r, true, tol * 2.0 * PI)? / (2.0 * PI),
        _ => {
            let scale = 2.0 * PI * PI * r;
            -oscillatory_half_line(|k| k / (k * k + k2), r, false, tol * scale)? / scale
        }
    })
}
