//! Modified Bessel functions K₀ and K₁ on the closed right half plane, and
//! the Hankel function H₀⁽¹⁾ on the positive real axis.
//!
//! Two regimes:
//!
//! * `|z| <= 2`: the ascending series
//!   `K₀(z) = -(ln(z/2) + γ) I₀(z) + Σ_{k≥1} H_k (z²/4)^k / (k!)²`
//!   (and its K₁ counterpart), which loses at most a factor `e^{2|z|}` to
//!   cancellation.
//! * `|z| > 2`: the Laplace-type integral
//!   `K_ν(z) = sqrt(π/2z) e^{-z} / Γ(ν+½) ∫₀^∞ e^{-u} u^{ν-½} (1 + u/2z)^{ν-½} du`,
//!   rewritten with `u = s²` as an integral over the whole real line of an
//!   entire-in-a-strip function times `e^{-s²}`. The trapezoidal rule
//!   converges geometrically on such integrands; the nearest singularity sits
//!   at `s = ±sqrt(-2z)`, at least `sqrt(|z|) >= 1.41` from the real axis for
//!   `Re z >= 0`, so a step of 0.15 leaves an error near `e^{-59}`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_RADIUS: f64 = 2.0;
const TRAPEZOID_STEP: f64 = 0.15;
const TRAPEZOID_HALF_WIDTH: f64 = 7.0;

/// K₀(z) for `Re z > 0`.
pub fn bessel_k0(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::DomainError(format!(
            "bessel_k0 needs Re z > 0, got {} + {}i",
            z.re, z.im
        )));
    }
    Ok(k0_closed(z))
}

/// K₁(z) for `Re z > 0`.
pub fn bessel_k1(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::DomainError(format!(
            "bessel_k1 needs Re z > 0, got {} + {}i",
            z.re, z.im
        )));
    }
    Ok(k1_closed(z))
}

/// H₀⁽¹⁾(x) = J₀(x) + i Y₀(x) for real `x > 0`, through
/// `K₀(-ix) = (iπ/2) H₀⁽¹⁾(x)`.
pub fn hankel1_0(x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("hankel1_0 needs x > 0, got {x}")));
    }
    let k = k0_closed(Complex64::new(0.0, -x));
    Ok(k * Complex64::new(0.0, -2.0 / std::f64::consts::PI))
}

/// K₀ on `Re z >= 0`, `z != 0`. The imaginary axis is needed for the
/// retarded continuation.
pub(crate) fn k0_closed(z: Complex64) -> Complex64 {
    if z.norm() <= SERIES_RADIUS {
        k0_series(z)
    } else {
        let prefactor = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp()
            / std::f64::consts::PI.sqrt();
        prefactor * trapezoid(|s2| (1.0 + s2 / (2.0 * z)).powf(-0.5))
    }
}

/// K₁ on `Re z >= 0`, `z != 0`.
pub(crate) fn k1_closed(z: Complex64) -> Complex64 {
    if z.norm() <= SERIES_RADIUS {
        k1_series(z)
    } else {
        let prefactor = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() * 2.0
            / std::f64::consts::PI.sqrt();
        prefactor * trapezoid(|s2| s2 * (1.0 + s2 / (2.0 * z)).sqrt())
    }
}

/// Trapezoidal sum of `∫_{-∞}^{∞} e^{-s²} g(s²) ds` exploiting evenness.
fn trapezoid(g: impl Fn(f64) -> Complex64) -> Complex64 {
    let n = (TRAPEZOID_HALF_WIDTH / TRAPEZOID_STEP).ceil() as usize;
    let mut sum = g(0.0);
    for j in 1..=n {
        let s = j as f64 * TRAPEZOID_STEP;
        let s2 = s * s;
        sum += 2.0 * (-s2).exp() * g(s2);
    }
    sum * TRAPEZOID_STEP
}

fn k0_series(z: Complex64) -> Complex64 {
    let q = z * z / 4.0;
    let log_term = (z / 2.0).ln() + EULER_GAMMA;
    let mut term = Complex64::new(1.0, 0.0);
    let mut i0 = term;
    let mut harmonic_sum = Complex64::new(0.0, 0.0);
    let mut harmonic = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        harmonic_sum += term * harmonic;
        if term.norm() * (1.0 + harmonic) < 1e-18 * (i0.norm() + harmonic_sum.norm()) {
            break;
        }
    }
    -log_term * i0 + harmonic_sum
}

fn k1_series(z: Complex64) -> Complex64 {
    // K₁(z) = 1/z + ln(z/2) I₁(z) - (z/4) Σ [ψ(k+1) + ψ(k+2)] (z²/4)^k / (k!(k+1)!)
    let q = z * z / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut i1_sum = term;
    // ψ(1) + ψ(2) = -2γ + 1
    let mut psi_k1 = -EULER_GAMMA;
    let mut psi_k2 = 1.0 - EULER_GAMMA;
    let mut psi_sum = term * (psi_k1 + psi_k2);
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        psi_k1 += 1.0 / kf;
        psi_k2 += 1.0 / (kf + 1.0);
        i1_sum += term;
        psi_sum += term * (psi_k1 + psi_k2);
        if term.norm() * (1.0 + psi_k2.abs()) < 1e-18 * (i1_sum.norm() + psi_sum.norm()) {
            break;
        }
    }
    let i1 = z / 2.0 * i1_sum;
    1.0 / z + (z / 2.0).ln() * i1 - z / 4.0 * psi_sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// K₀(x) = ∫₀^∞ e^{-x cosh t} dt by a plain composite Simpson rule.
    fn k0_integral(x: f64) -> f64 {
        let t_max = (2.0 * (40.0 / x).max(1.0)).acosh() + 1.0;
        let n = 20_000;
        let h = t_max / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * (-x * t.cosh()).exp();
        }
        sum * h / 3.0
    }

    #[test]
    fn k0_matches_integral_representation() {
        for &x in &[0.05, 0.5, 1.0, 1.9, 2.1, 3.0, 7.5, 10.0, 25.0] {
            let want = k0_integral(x);
            let got = bessel_k0(re(x)).unwrap().re;
            assert!(((got - want) / want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn k0_reference_values() {
        assert!((bessel_k0(re(1.0)).unwrap().re - 0.421_024_438_240_708_3).abs() < 1e-15);
        let k10 = bessel_k0(re(10.0)).unwrap().re;
        assert!(((k10 - 1.778_006_231_616_765e-5) / k10).abs() < 1e-12);
        // leading asymptotic term is 1.2% high at z = 10; with the 1/(8z)
        // correction it is within 0.1%
        let asym = (std::f64::consts::PI / 20.0).sqrt() * (-10.0f64).exp();
        assert!(((k10 - asym) / k10).abs() < 0.015);
        assert!(((k10 - asym * (1.0 - 1.0 / 80.0)) / k10).abs() < 1e-3);
    }

    #[test]
    fn k0_small_argument_log() {
        let z = 1e-6;
        let k = bessel_k0(re(z)).unwrap().re;
        let lead = -(z / 2.0).ln() - EULER_GAMMA;
        assert!((k / lead - 1.0).abs() < 1e-11);
    }

    #[test]
    fn k0_large_argument_stays_accurate() {
        // Asymptotic series with three correction terms is exact to ~1e-13 at 700.
        let x: f64 = 700.0;
        let series = 1.0 - 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x)
            - 225.0 / (3072.0 * x * x * x);
        let want = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * series;
        let got = bessel_k0(re(x)).unwrap().re;
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn series_and_integral_agree_at_the_seam() {
        for &arg in &[0.0, 0.7, 1.3, -0.9, -std::f64::consts::FRAC_PI_2] {
            let z = Complex64::from_polar(2.0, arg);
            let a = k0_series(z);
            let b = {
                let prefactor = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp()
                    / std::f64::consts::PI.sqrt();
                prefactor * trapezoid(|s2| (1.0 + s2 / (2.0 * z)).powf(-0.5))
            };
            assert!((a - b).norm() / a.norm() < 1e-13, "arg {arg}: {a} vs {b}");
            let c = k1_series(z);
            let d = {
                let prefactor = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() * 2.0
                    / std::f64::consts::PI.sqrt();
                prefactor * trapezoid(|s2| s2 * (1.0 + s2 / (2.0 * z)).sqrt())
            };
            assert!((c - d).norm() / c.norm() < 1e-13, "arg {arg}: {c} vs {d}");
        }
    }

    #[test]
    fn k1_is_minus_derivative_of_k0() {
        for &x in &[0.3, 1.0, 2.5, 6.0] {
            let h = 1e-5;
            let deriv = (k0_closed(re(x + h)) - k0_closed(re(x - h))) / (2.0 * h);
            let k1 = bessel_k1(re(x)).unwrap();
            assert!((deriv + k1).norm() / k1.norm() < 1e-8);
        }
    }

    #[test]
    fn hankel_matches_power_series() {
        // J₀ and Y₀ from their ascending series, independent of K₀.
        for &x in &[0.5, 1.0, 1.8] {
            let q = -x * x / 4.0;
            let (mut term, mut j0, mut hsum, mut h) = (1.0, 1.0, 0.0, 0.0);
            for k in 1..60 {
                let kf = k as f64;
                term *= q / (kf * kf);
                h += 1.0 / kf;
                j0 += term;
                hsum += term * h;
            }
            let y0 = 2.0 / std::f64::consts::PI * (((x / 2.0).ln() + EULER_GAMMA) * j0 - hsum);
            let got = hankel1_0(x).unwrap();
            assert!((got.re - j0).abs() < 1e-14, "J0({x})");
            assert!((got.im - y0).abs() < 1e-14, "Y0({x})");
        }
    }

    #[test]
    fn rejects_left_half_plane() {
        assert!(matches!(bessel_k0(re(0.0)), Err(Error::DomainError(_))));
        assert!(matches!(bessel_k0(re(-1.0)), Err(Error::DomainError(_))));
        assert!(hankel1_0(0.0).is_err());
    }
}
