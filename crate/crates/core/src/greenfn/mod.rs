//! Free-particle Green's functions in one, two and three dimensions.
//!
//! Units are ħ = 2m = 1, so an energy carries dimension 1/length². With
//! `κ = sqrt(-E)` on the principal branch (`Re κ > 0` off the cut):
//!
//! | D | G₀(E; r)            |
//! |---|---------------------|
//! | 1 | `-e^{-κr} / (2κ)`   |
//! | 2 | `-K₀(κr) / (2π)`    |
//! | 3 | `-e^{-κr} / (4πr)`  |
//!
//! Retarded energies `E = k² + i0⁺` map to `κ = -ik`, which turns every
//! decaying exponential into an outgoing wave `e^{ikr}`.

mod bessel;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_k0, bessel_k1, hankel1_0};
pub(crate) use bessel::{k0_closed, k1_closed};

/// Imaginary parts below this count as "on the real axis".
pub const CUT_TOLERANCE: f64 = 1e-12;
/// Separation below which two points are treated as coincident.
pub const COINCIDENCE_RADIUS: f64 = 1e-14;

/// Energy in units of 1/length², possibly flagged as the retarded limit
/// `E + i0⁺` of a real energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    value: Complex64,
    retarded: bool,
}

impl ComplexEnergy {
    /// A complex energy off the positive real axis.
    pub fn new(value: Complex64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::InvalidInput(format!("energy {value} is not finite")));
        }
        if value.re > 0.0 && value.im.abs() < CUT_TOLERANCE {
            return Err(Error::BranchCut {
                re: value.re,
                im: value.im,
            });
        }
        if value.norm() == 0.0 {
            return Err(Error::DomainError("E = 0 is the continuum threshold".into()));
        }
        Ok(Self {
            value,
            retarded: false,
        })
    }

    pub fn real(e: f64) -> Result<Self> {
        Self::new(Complex64::new(e, 0.0))
    }

    /// `E = k² + i0⁺` for wave number `k > 0`.
    pub fn retarded(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::DomainError(format!("wave number must be positive, got {k}")));
        }
        Ok(Self {
            value: Complex64::new(k * k, 0.0),
            retarded: true,
        })
    }

    /// A real energy taken in the retarded sense. Negative energies are
    /// unaffected by the flag.
    pub fn retarded_real(e: f64) -> Result<Self> {
        if e > 0.0 {
            Self::retarded(e.sqrt())
        } else {
            Self::real(e)
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn is_retarded(&self) -> bool {
        self.retarded
    }

    /// The energy as a real number, when it is one.
    pub fn as_real(&self) -> Option<f64> {
        (self.value.im == 0.0).then_some(self.value.re)
    }

    /// `κ = sqrt(-E)`: principal branch, or `-ik` in the retarded limit.
    pub fn kappa(&self) -> Complex64 {
        if self.retarded && self.value.re > 0.0 {
            Complex64::new(0.0, -self.value.re.sqrt())
        } else {
            (-self.value).sqrt()
        }
    }

    pub fn branch(&self) -> BranchNote {
        if self.retarded && self.value.re > 0.0 {
            BranchNote::RetardedLimit
        } else {
            BranchNote::Principal
        }
    }
}

/// A point in D-dimensional Euclidean space, D in 1..=4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialPoint {
    coords: Vec<f64>,
}

impl SpatialPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > 4 {
            return Err(Error::UnsupportedDim(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(Self { coords })
    }

    pub fn origin(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    /// The point at distance `r` from the origin along the first axis.
    pub fn along_first_axis(dim: usize, r: f64) -> Result<Self> {
        let mut coords = vec![0.0; dim];
        if let Some(first) = coords.first_mut() {
            *first = r;
        }
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean distance; symmetric bit for bit.
    pub fn distance(&self, other: &SpatialPoint) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput(format!(
                "points of dimension {} and {} cannot be compared",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchNote {
    Principal,
    RetardedLimit,
}

/// A Green's function value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue {
    pub value: Complex64,
    pub dim: usize,
    pub retarded: bool,
    pub branch: BranchNote,
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDim(dim))
    }
}

/// Free Green's function `G₀(E; x, y)` solving `(E + ∇²) G₀ = δ(x - y)` with
/// decay at infinity.
pub fn g0(dim: usize, energy: ComplexEnergy, x: &SpatialPoint, y: &SpatialPoint) -> Result<GreenValue> {
    check_dim(dim)?;
    if x.dim() != dim || y.dim() != dim {
        return Err(Error::InvalidInput(format!(
            "points must be {dim}-dimensional, got {} and {}",
            x.dim(),
            y.dim()
        )));
    }
    let r = x.distance(y)?;
    let value = g0_radial(dim, energy.kappa(), r)?;
    Ok(GreenValue {
        value,
        dim,
        retarded: energy.is_retarded(),
        branch: energy.branch(),
    })
}

/// Outgoing-wave Green's function at `E = k² + i0⁺`.
pub fn g0_retarded(dim: usize, k: f64, x: &SpatialPoint, y: &SpatialPoint) -> Result<GreenValue> {
    let energy = ComplexEnergy::retarded(k)?;
    check_dim(dim)?;
    if x.dim() != dim || y.dim() != dim {
        return Err(Error::InvalidInput(format!(
            "points must be {dim}-dimensional, got {} and {}",
            x.dim(),
            y.dim()
        )));
    }
    let r = x.distance(y)?;
    check_separation(dim, r)?;
    let ikr = Complex64::new(0.0, k * r);
    let value = match dim {
        1 => ikr.exp() / Complex64::new(0.0, 2.0 * k),
        2 => Complex64::new(0.0, -0.25) * hankel1_0(k * r)?,
        _ => -ikr.exp() / (4.0 * PI * r),
    };
    Ok(GreenValue {
        value,
        dim,
        retarded: true,
        branch: energy.branch(),
    })
}

fn check_separation(dim: usize, r: f64) -> Result<()> {
    if dim >= 2 && r < COINCIDENCE_RADIUS {
        Err(Error::CoincidentPoints { dim, r })
    } else {
        Ok(())
    }
}

/// G₀ as a function of `κ` and separation `r`. `Re κ >= 0` is required.
pub(crate) fn g0_radial(dim: usize, kappa: Complex64, r: f64) -> Result<Complex64> {
    check_dim(dim)?;
    check_separation(dim, r)?;
    let value = match dim {
        1 => -(-kappa * r).exp() / (2.0 * kappa),
        2 => -k0_closed(kappa * r) / (2.0 * PI),
        _ => -(-kappa * r).exp() / (4.0 * PI * r),
    };
    Ok(value)
}

/// `∂G₀/∂κ` at fixed separation.
pub(crate) fn g0_radial_dkappa(dim: usize, kappa: Complex64, r: f64) -> Result<Complex64> {
    check_dim(dim)?;
    check_separation(dim, r)?;
    let value = match dim {
        1 => (-kappa * r).exp() * (r / (2.0 * kappa) + 1.0 / (2.0 * kappa * kappa)),
        2 => r * k1_closed(kappa * r) / (2.0 * PI),
        _ => (-kappa * r).exp() / (4.0 * PI),
    };
    Ok(value)
}
