//! A 3D attractive square well `V = -V0` for `r < r0`, shrunk at fixed
//! binding energy: the depth has to grow like `(π/2r0)²`, which is the
//! running of the contact coupling seen from a finite-range potential.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWell3D {
    pub radius: f64,
    pub depth: f64,
}

impl SquareWell3D {
    pub fn new(radius: f64, depth: f64) -> Result<Self> {
        if !(radius > 0.0 && depth > 0.0) || !radius.is_finite() || !depth.is_finite() {
            return Err(Error::InvalidInput(format!(
                "square well needs positive radius and depth, got r0 = {radius}, V0 = {depth}"
            )));
        }
        Ok(Self { radius, depth })
    }
}

/// Depth of the well of radius `r0` whose s-wave ground state sits at
/// `e_b`, on the first branch `q r0 ∈ (π/2, π)` of
/// `q cos(q r0) + κ_B sin(q r0) = 0`, `q² = V0 - κ_B²`.
pub fn shrinking_well_depth(e_b: f64, r0: f64) -> Result<SquareWell3D> {
    if !(e_b < 0.0) || !e_b.is_finite() {
        return Err(Error::DomainError(format!("bound-state energy must be negative, got {e_b}")));
    }
    let kappa = (-e_b).sqrt();
    if !(r0 > 0.0) || r0 * kappa >= 1.0 {
        return Err(Error::DomainError(format!(
            "well radius must satisfy 0 < r0 < 1/kappa_B = {}, got {r0}",
            1.0 / kappa
        )));
    }
    // in x = q r0: F(x) = x cos x + κ r0 sin x, F(π/2) > 0 > F(π)
    let a = kappa * r0;
    let f = |x: f64| x * x.cos() + a * x.sin();
    let (mut lo, mut hi) = (FRAC_PI_2, PI);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::BranchAmbiguity(format!("no sign change for kappa r0 = {a}")));
    }
    let mut converged = false;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !converged {
        return Err(Error::NonConvergence("square-well depth bisection".into()));
    }
    let q = 0.5 * (lo + hi) / r0;
    SquareWell3D::new(r0, q * q + kappa * kappa)
}

/// `u(r) = r ψ(r)` of the s-wave at energy `energy`, integrated with RK4
/// from `u(0) = 0, u'(0) = 1`, sampled at `radii` (ascending).
pub fn radial_solution(well: &SquareWell3D, energy: f64, radii: &[f64], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    if radii.windows(2).any(|w| w[1] < w[0]) || radii.first().is_some_and(|&r| r < 0.0) {
        return Err(Error::InvalidInput("radii must be non-negative and ascending".into()));
    }
    // u'' = (V - E) u, with V constant on each side of the edge
    let rk4 = |v: f64, u: f64, du: f64, h: f64| {
        let accel = |u: f64| (v - energy) * u;
        let (k1u, k1v) = (du, accel(u));
        let (k2u, k2v) = (du + 0.5 * h * k1v, accel(u + 0.5 * h * k1u));
        let (k3u, k3v) = (du + 0.5 * h * k2v, accel(u + 0.5 * h * k2u));
        let (k4u, k4v) = (du + h * k3v, accel(u + h * k3u));
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            du + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    };
    // advance from `from` to `to`, stopping at the well edge
    let advance = |from: f64, to: f64, mut state: (f64, f64)| {
        let mut r = from;
        let mut stops = vec![to];
        if from < well.radius && to > well.radius {
            stops.insert(0, well.radius);
        }
        for stop in stops {
            let v = if r < well.radius { -well.depth } else { 0.0 };
            let n = ((stop - r) / step).ceil().max(1.0) as usize;
            let h = (stop - r) / n as f64;
            for _ in 0..n {
                state = rk4(v, state.0, state.1, h);
            }
            r = stop;
        }
        state
    };
    let mut out = Vec::with_capacity(radii.len());
    let mut state = (0.0, 1.0);
    let mut r = 0.0;
    for &target in radii {
        if target > r {
            state = advance(r, target, state);
            r = target;
        }
        out.push(state.0);
    }
    Ok(out)
}

/// s-wave amplitude `f = (e^{2iδ} - 1)/(2ik)` from matching `sin(Kr)`
/// inside to `sin(kr + δ)` outside.
pub fn swave_amplitude(well: &SquareWell3D, k: f64) -> Result<Complex64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::DomainError(format!("wave number must be positive, got {k}")));
    }
    let big_k = (well.depth + k * k).sqrt();
    let r0 = well.radius;
    // k cot(k r0 + δ) = K cot(K r0)
    let delta = (k * (big_k * r0).tan()).atan2(big_k) - k * r0;
    let phase = Complex64::new(0.0, 2.0 * delta).exp();
    Ok((phase - 1.0) / Complex64::new(0.0, 2.0 * k))
}
