//! Scattering off a single contact center: the Lippmann–Schwinger wave,
//! the 3D s-wave amplitude and cross section, and 1D transmission.
//!
//! The incoming wave is `e^{ikz}` and the scattered wave follows from the
//! retarded resolvent,
//!
//! ```text
//! ψ(x) = e^{ikz} + G₀ᴿ(x, 0) / D(k² + i0)
//! ```
//!
//! with `D` the renormalized denominator. With the retarded branch
//! `κ = -ik`, in 3D this is `e^{ikz} + f e^{ikr}/r` with
//! `f = -1/(κ_B + ik)`, which satisfies the optical theorem.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greenfn::{g0_retarded, ComplexEnergy, SpatialPoint};
use crate::renorm::{renormalized_denominator, CouplingSpec};

/// Environment variable selecting the amplitude sign convention.
pub const BRANCH_POLICY_ENV: &str = "DELTAGREEN_BRANCH_POLICY";

/// Sign convention for the 3D amplitude.
///
/// `Unitary` continues `√(-E)` to `-ik`, giving `f = -1/(κ_B + ik)`.
/// `Paper` reproduces the commonly printed `-1/(κ_B - ik)`, which has the
/// same modulus but violates the optical theorem; it exists for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchPolicy {
    #[default]
    Unitary,
    Paper,
}

impl BranchPolicy {
    /// Reads [`BRANCH_POLICY_ENV`]; unset means `Unitary`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BRANCH_POLICY_ENV) {
            Ok(v) => v.parse(),
            Err(std::env::VarError::NotPresent) => Ok(Self::Unitary),
            Err(e) => Err(Error::InvalidInput(format!("{BRANCH_POLICY_ENV}: {e}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Unitary => "unitary",
            Self::Paper => "paper",
        }
    }
}

impl fmt::Display for BranchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BranchPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unitary" => Ok(Self::Unitary),
            "paper" => Ok(Self::Paper),
            other => Err(Error::InvalidInput(format!(
                "branch policy must be 'unitary' or 'paper', got '{other}'"
            ))),
        }
    }
}

/// s-wave amplitude `f(k)`, the same in every direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitude {
    pub f: Complex64,
    pub k: f64,
    pub isotropic: bool,
}

impl ScatteringAmplitude {
    pub fn modulus_squared(&self) -> f64 {
        self.f.norm_sqr()
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("wave number must be positive, got {k}")))
    }
}

fn kappa_b(e_b: f64) -> Result<f64> {
    if e_b < 0.0 && e_b.is_finite() {
        Ok((-e_b).sqrt())
    } else {
        Err(Error::DomainError(format!("bound-state energy must be negative, got {e_b}")))
    }
}

/// 3D amplitude under the unitary branch.
pub fn amplitude3d(k: f64, e_b: f64) -> Result<ScatteringAmplitude> {
    amplitude3d_with_policy(k, e_b, BranchPolicy::Unitary)
}

pub fn amplitude3d_with_policy(k: f64, e_b: f64, policy: BranchPolicy) -> Result<ScatteringAmplitude> {
    check_k(k)?;
    let kb = kappa_b(e_b)?;
    let ik = match policy {
        BranchPolicy::Unitary => Complex64::new(0.0, k),
        BranchPolicy::Paper => Complex64::new(0.0, -k),
    };
    Ok(ScatteringAmplitude {
        f: -1.0 / (kb + ik),
        k,
        isotropic: true,
    })
}

/// `1/f` continued to complex `k`; vanishes at `k = iκ_B`.
pub fn inverse_amplitude_continued(k: Complex64, e_b: f64) -> Result<Complex64> {
    let kb = kappa_b(e_b)?;
    Ok(-(kb + Complex64::i() * k))
}

/// `σ = 4π|f|²`.
pub fn cross_section_total(k: f64, e_b: f64) -> Result<f64> {
    Ok(4.0 * PI * amplitude3d(k, e_b)?.modulus_squared())
}

/// `Im f(θ = 0) - kσ/4π`; zero when the amplitude is unitary.
pub fn optical_theorem_residual(k: f64, e_b: f64, policy: BranchPolicy) -> Result<f64> {
    let amp = amplitude3d_with_policy(k, e_b, policy)?;
    let sigma = 4.0 * PI * amp.modulus_squared();
    Ok(amp.f.im - k * sigma / (4.0 * PI))
}

/// 1D transmission and reflection amplitudes `(t, r)` for `λδ(x)`.
pub fn amplitudes1d(k: f64, lambda: f64) -> Result<(Complex64, Complex64)> {
    check_k(k)?;
    if !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be finite, got {lambda}")));
    }
    let two_ik = Complex64::new(0.0, 2.0 * k);
    Ok((two_ik / (two_ik - lambda), lambda / (two_ik - lambda)))
}

/// 1D transmission and reflection probabilities `(T, R)`.
pub fn transmission1d(k: f64, lambda: f64) -> Result<(f64, f64)> {
    check_k(k)?;
    if !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be finite, got {lambda}")));
    }
    let k2 = k * k;
    let q = 0.25 * lambda * lambda;
    Ok((k2 / (k2 + q), q / (k2 + q)))
}

/// Scattering state for a center at the origin and an incoming wave along
/// the last axis (`z` in 3D, `x` in 1D).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    k: f64,
    dim: usize,
    spec: CouplingSpec,
    /// `1/D(k² + i0)`
    t_matrix: Complex64,
}

impl WaveField {
    pub fn new(dim: usize, k: f64, spec: CouplingSpec) -> Result<Self> {
        check_k(k)?;
        if dim == 2 {
            return Err(Error::UnsupportedDim(2));
        }
        let d = renormalized_denominator(dim, ComplexEnergy::retarded(k)?, spec)?.value;
        if d.norm() == 0.0 {
            return Err(Error::AtPole {
                energy: k * k,
                det: 0.0,
            });
        }
        Ok(Self {
            k,
            dim,
            spec,
            t_matrix: 1.0 / d,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> CouplingSpec {
        self.spec
    }

    pub fn evaluate(&self, x: &SpatialPoint) -> Result<Complex64> {
        if x.dim() != self.dim {
            return Err(Error::InvalidInput(format!(
                "point is {}-dimensional, field lives in D = {}",
                x.dim(),
                self.dim
            )));
        }
        let z = x.coords()[self.dim - 1];
        let incoming = Complex64::new(0.0, self.k * z).exp();
        let origin = SpatialPoint::origin(self.dim)?;
        let g = g0_retarded(self.dim, self.k, x, &origin)?.value;
        Ok(incoming + g * self.t_matrix)
    }

    /// `(ψ - e^{ikz}) r e^{-ikr}` at radius `r` in the direction `(θ, φ)`:
    /// the amplitude read off the far field. 3D only.
    pub fn far_field_amplitude(&self, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
        if self.dim != 3 {
            return Err(Error::UnsupportedDim(self.dim));
        }
        let x = SpatialPoint::new(vec![
            r * theta.sin() * phi.cos(),
            r * theta.sin() * phi.sin(),
            r * theta.cos(),
        ])?;
        let z = x.coords()[2];
        let scattered = self.evaluate(&x)? - Complex64::new(0.0, self.k * z).exp();
        Ok(scattered * r * Complex64::new(0.0, -self.k * r).exp())
    }
}

/// `ψ(x) = e^{ikz} + G₀ᴿ(x, 0)/D` for a center at the origin.
pub fn scattered_wave(dim: usize, k: f64, spec: CouplingSpec, x: &SpatialPoint) -> Result<Complex64> {
    WaveField::new(dim, k, spec)?.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eb(e: f64) -> CouplingSpec {
        CouplingSpec::FromBoundState { e_b: e }
    }

    #[test]
    fn amplitude_examples() {
        let a = amplitude3d(1.0, -1.0).unwrap();
        assert!((a.modulus_squared() - 0.5).abs() < 1e-15);
        assert!(a.isotropic);
        assert!((cross_section_total(1.0, -1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        let low = amplitude3d(1e-9, -1.0).unwrap();
        assert!((low.f + 1.0).norm() < 1e-8);
        assert!((cross_section_total(1e-9, -1.0).unwrap() - 4.0 * PI).abs() < 1e-7);
        let high = amplitude3d(1e6, -1.0).unwrap();
        assert!((high.f.norm() * 1e6 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn policies_share_the_modulus() {
        let u = amplitude3d_with_policy(0.7, -2.3, BranchPolicy::Unitary).unwrap();
        let p = amplitude3d_with_policy(0.7, -2.3, BranchPolicy::Paper).unwrap();
        assert_eq!(u.modulus_squared(), p.modulus_squared());
        assert_eq!(u.f, p.f.conj());
    }

    #[test]
    fn optical_theorem() {
        for (k, e) in [(1.0, -1.0), (0.1, -4.0)] {
            assert!(optical_theorem_residual(k, e, BranchPolicy::Unitary).unwrap().abs() <= 1e-14);
        }
        let paper = optical_theorem_residual(1.0, -1.0, BranchPolicy::Paper).unwrap();
        assert!((paper + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pole_of_continued_amplitude() {
        let kb = 1.7;
        let k = Complex64::new(0.0, kb * (1.0 + 1e-12));
        assert!(inverse_amplitude_continued(k, -kb * kb).unwrap().norm() <= 1e-10);
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("unitary".parse::<BranchPolicy>().unwrap(), BranchPolicy::Unitary);
        assert_eq!(" Paper ".parse::<BranchPolicy>().unwrap(), BranchPolicy::Paper);
        assert!("other".parse::<BranchPolicy>().is_err());
        assert_eq!(BranchPolicy::default(), BranchPolicy::Unitary);
    }

    #[test]
    fn transmission_examples() {
        let (t, r) = transmission1d(1.0, -2.0).unwrap();
        assert!((t - 0.5).abs() < 1e-15 && (r - 0.5).abs() < 1e-15);
        assert_eq!(transmission1d(2.0, 0.0).unwrap(), (1.0, 0.0));
        assert!(transmission1d(1e5, -2.0).unwrap().0 > 1.0 - 1e-9);
        assert!(transmission1d(0.0, 1.0).is_err());
    }

    #[test]
    fn one_dimensional_wave_matches_amplitudes() {
        let (k, lambda) = (0.8, -1.3);
        let (t, r) = amplitudes1d(k, lambda).unwrap();
        let spec = CouplingSpec::Bare1D { lambda };
        for x in [0.5, 3.0, 11.0] {
            let right = scattered_wave(1, k, spec, &SpatialPoint::new(vec![x]).unwrap()).unwrap();
            assert!((right - t * Complex64::new(0.0, k * x).exp()).norm() < 1e-14);
            let left = scattered_wave(1, k, spec, &SpatialPoint::new(vec![-x]).unwrap()).unwrap();
            let want = Complex64::new(0.0, -k * x).exp() + r * Complex64::new(0.0, k * x).exp();
            assert!((left - want).norm() < 1e-14);
        }
        let (tt, rr) = transmission1d(k, lambda).unwrap();
        assert!((t.norm_sqr() - tt).abs() < 1e-15 && (r.norm_sqr() - rr).abs() < 1e-15);
    }

    #[test]
    fn far_field_recovers_amplitude() {
        let w = WaveField::new(3, 1.0, eb(-1.0)).unwrap();
        let want = amplitude3d(1.0, -1.0).unwrap().f;
        for r in [200.0, 500.0] {
            for (theta, phi) in [(PI / 2.0, 0.0), (0.3, 1.0), (2.9, -2.0)] {
                let got = w.far_field_amplitude(r, theta, phi).unwrap();
                assert!((got - want).norm() <= want.norm() / r);
            }
        }
    }

    #[test]
    fn forward_interference_follows_sign_of_im_f() {
        // on the z axis ahead of the center, |ψ|² - 1 ≈ 2 Re(f e^{ikr - ikz})/r = 2 Re f / r
        let (k, r) = (1.0, 300.0);
        let w = WaveField::new(3, k, eb(-1.0)).unwrap();
        let psi = w.evaluate(&SpatialPoint::new(vec![0.0, 0.0, r]).unwrap()).unwrap();
        let f = amplitude3d(k, -1.0).unwrap().f;
        let excess = (psi.norm_sqr() - 1.0) * r;
        assert!((excess - 2.0 * f.re).abs() < 2.0 / r);
        // the forward-scattered flux removed from the beam needs Im f > 0;
        // the alternative sign would add flux
        assert!(f.im > 0.0);
        assert!(amplitude3d_with_policy(k, -1.0, BranchPolicy::Paper).unwrap().f.im < 0.0);
    }

    #[test]
    fn trivial_limit_does_not_scatter() {
        let x = SpatialPoint::new(vec![0.3, -0.4, 1.2]).unwrap();
        let free = Complex64::new(0.0, 1.2).exp();
        let mut last = f64::INFINITY;
        for e in [-1e2, -1e6, -1e10, -1e14] {
            let psi = scattered_wave(3, 1.0, eb(e), &x).unwrap();
            let dev = (psi - free).norm();
            assert!(dev < last);
            last = dev;
            let sigma = cross_section_total(1.0, e).unwrap();
            assert!(sigma < 4.0 * PI / -e * 1.0001);
        }
        assert!(last < 1e-7);
    }

    #[test]
    fn two_dimensions_are_excluded() {
        assert!(matches!(WaveField::new(2, 1.0, eb(-1.0)), Err(Error::UnsupportedDim(2))));
    }

    proptest! {
        #[test]
        fn unitarity_1d(k in 1e-3f64..50.0, lambda in -50.0f64..50.0) {
            let (t, r) = transmission1d(k, lambda).unwrap();
            prop_assert!((t + r - 1.0).abs() <= 1e-12);
            let (a, b) = amplitudes1d(k, lambda).unwrap();
            prop_assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert_eq!(transmission1d(k, -lambda).unwrap().0, t);
        }

        #[test]
        fn optical_residual_vanishes(k in 1e-3f64..100.0, e in -100.0f64..-1e-3) {
            prop_assert!(optical_theorem_residual(k, e, BranchPolicy::Unitary).unwrap().abs() <= 1e-14);
        }

        #[test]
        fn cross_section_decreases_with_binding(k in 0.01f64..10.0, e in -100.0f64..-0.01) {
            prop_assert!(cross_section_total(k, 2.0 * e).unwrap() < cross_section_total(k, e).unwrap());
        }
    }
}
