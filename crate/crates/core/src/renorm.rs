//! Sharp-cutoff regularization of the coincident-point bubble and the
//! renormalization of the contact coupling.
//!
//! The bubble `B_D(K, Λ) = ∫_{|k|<Λ} d^D k/(2π)^D (k² + K²)⁻¹` equals
//! `-G₀(-K²; 0, 0)` once the cutoff is removed, and it is finite only for
//! D = 1. In D = 2, 3 the divergence is absorbed into the bare coupling:
//!
//! ```text
//! D = 2:  1/λ_R = 1/λ + (1/4π) ln(Λ²/μ²)
//! D = 3:  1/λ_R = 1/λ + Λ/(2π²)
//! ```
//!
//! after which the denominator `1/λ - G₀(E; 0, 0)` has a finite limit that
//! depends on one physical scale, the bound-state energy `E_B`. In D = 4 the
//! `K² ln Λ` piece cannot be absorbed and no finite theory remains.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greenfn::ComplexEnergy;

/// `1/λ` closer to zero than this means the bare coupling is undefined.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// How a contact interaction is parameterized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingSpec {
    /// Bare coupling λ in one dimension.
    Bare1D { lambda: f64 },
    /// Renormalized coupling at subtraction scale μ in two dimensions.
    Ren2D { lambda_r: f64, mu: f64 },
    /// Renormalized coupling in three dimensions.
    Ren3D { lambda_r: f64 },
    /// Fixed by the bound-state energy, any dimension 1..=3.
    FromBoundState { e_b: f64 },
}

impl fmt::Display for CouplingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingSpec::Bare1D { lambda } => write!(f, "lambda={lambda}"),
            CouplingSpec::Ren2D { lambda_r, mu } => write!(f, "lambdaR={lambda_r},mu={mu}"),
            CouplingSpec::Ren3D { lambda_r } => write!(f, "lambdaR={lambda_r}"),
            CouplingSpec::FromBoundState { e_b } => write!(f, "eb={e_b}"),
        }
    }
}

/// The single physical parameter left after renormalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Canonical {
    /// D = 1: the bare coupling is already physical.
    Bare1D { inv_lambda: f64 },
    /// D = 2: `ln κ_B` with `E_B = -κ_B²`.
    LogScale2D { ln_kappa_b: f64 },
    /// D = 3: `κ_B = 4π/λ_R`, negative when there is no bound state.
    Scale3D { kappa_b: f64 },
}

impl CouplingSpec {
    /// Checks that the spec is usable in `dim` dimensions.
    pub fn validate(&self, dim: usize) -> Result<()> {
        self.canonical(dim).map(|_| ())
    }

    fn illegal(&self, dim: usize) -> Error {
        Error::IllegalSpec {
            dim,
            spec: self.to_string(),
        }
    }

    pub(crate) fn canonical(&self, dim: usize) -> Result<Canonical> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDim(dim));
        }
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidInput(format!("{what} must be finite")))
            }
        };
        match (*self, dim) {
            (CouplingSpec::Bare1D { lambda }, 1) => {
                finite(lambda, "lambda")?;
                if lambda == 0.0 {
                    return Err(Error::ZeroCoupling);
                }
                Ok(Canonical::Bare1D {
                    inv_lambda: 1.0 / lambda,
                })
            }
            (CouplingSpec::Ren2D { lambda_r, mu }, 2) => {
                finite(lambda_r, "lambdaR")?;
                if !(mu > 0.0) || !mu.is_finite() {
                    return Err(Error::DomainError(format!("mu must be positive, got {mu}")));
                }
                if lambda_r == 0.0 {
                    return Err(Error::ZeroCoupling);
                }
                Ok(Canonical::LogScale2D {
                    ln_kappa_b: mu.ln() + 2.0 * PI / lambda_r,
                })
            }
            (CouplingSpec::Ren3D { lambda_r }, 3) => {
                finite(lambda_r, "lambdaR")?;
                if lambda_r == 0.0 {
                    return Err(Error::ZeroCoupling);
                }
                Ok(Canonical::Scale3D {
                    kappa_b: 4.0 * PI / lambda_r,
                })
            }
            (CouplingSpec::FromBoundState { e_b }, _) => {
                if !(e_b < 0.0) || !e_b.is_finite() {
                    return Err(Error::DomainError(format!(
                        "bound-state energy must be negative, got {e_b}"
                    )));
                }
                let kappa_b = (-e_b).sqrt();
                Ok(match dim {
                    1 => Canonical::Bare1D {
                        inv_lambda: -0.5 / kappa_b,
                    },
                    2 => Canonical::LogScale2D {
                        ln_kappa_b: kappa_b.ln(),
                    },
                    _ => Canonical::Scale3D { kappa_b },
                })
            }
            _ => Err(self.illegal(dim)),
        }
    }

    /// Closed-form bound-state energy of a single center, if one exists.
    pub fn bound_state_energy(&self, dim: usize) -> Result<Option<f64>> {
        Ok(match self.canonical(dim)? {
            // K = -λ/2, E_B = -λ²/4
            Canonical::Bare1D { inv_lambda } => {
                (inv_lambda < 0.0).then(|| -0.25 / (inv_lambda * inv_lambda))
            }
            Canonical::LogScale2D { ln_kappa_b } => Some(-(2.0 * ln_kappa_b).exp()),
            Canonical::Scale3D { kappa_b } => (kappa_b > 0.0).then(|| -kappa_b * kappa_b),
        })
    }
}

/// Momentum cutoff Λ in 1/length.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Cutoff(f64);

impl Cutoff {
    pub fn new(lambda_cap: f64) -> Result<Self> {
        if lambda_cap > 0.0 && lambda_cap.is_finite() {
            Ok(Self(lambda_cap))
        } else {
            Err(Error::DomainError(format!(
                "cutoff must be positive and finite, got {lambda_cap}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The denominator `1/λ - G₀(E; 0, 0)` of the one-center Green's function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenominatorValue {
    pub value: Complex64,
    pub dim: usize,
    pub finite: bool,
}

/// `ln(1 + ρ²)` without overflowing `ρ²` for huge cutoffs.
fn ln1p_square(ratio: f64) -> f64 {
    if ratio > 1.0 {
        2.0 * ratio.ln() + (ratio * ratio).recip().ln_1p()
    } else {
        (ratio * ratio).ln_1p()
    }
}

/// `∫_{|k|<Λ} d^D k/(2π)^D (k² + K²)⁻¹` for D in 1..=4.
pub fn bubble_regularized(dim: usize, k: f64, cutoff: Cutoff) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::DomainError(format!("K must be positive, got {k}")));
    }
    let cap = cutoff.value();
    let ratio = cap / k;
    let log_term = ln1p_square(ratio);
    Ok(match dim {
        1 => ratio.atan() / (PI * k),
        2 => log_term / (4.0 * PI),
        3 => (cap - k * ratio.atan()) / (2.0 * PI * PI),
        4 => (cap * cap - k * k * log_term) / (16.0 * PI * PI),
        _ => return Err(Error::UnsupportedDim(dim)),
    })
}

/// The bare coupling λ(Λ) that reproduces `spec` at cutoff Λ.
pub fn bare_from_renormalized(dim: usize, spec: CouplingSpec, cutoff: Cutoff) -> Result<f64> {
    let cap = cutoff.value();
    let inv_lambda = match spec.canonical(dim)? {
        Canonical::Bare1D { .. } => {
            return Err(Error::IllegalSpec {
                dim,
                spec: format!("{spec} (D = 1 needs no renormalization)"),
            })
        }
        // 1/λ = 1/λ_R - (1/4π) ln(Λ²/μ²) = -(1/4π) ln(Λ²/κ_B²)
        Canonical::LogScale2D { ln_kappa_b } => -(cap.ln() - ln_kappa_b) / (2.0 * PI),
        Canonical::Scale3D { kappa_b } => kappa_b / (4.0 * PI) - cap / (2.0 * PI * PI),
    };
    if inv_lambda.abs() < POLE_TOLERANCE {
        return Err(Error::PoleCrossing { cutoff: cap });
    }
    Ok(1.0 / inv_lambda)
}

/// Inverse of [`bare_from_renormalized`]: the renormalized coupling seen at
/// cutoff Λ for bare λ. `mu` is required in D = 2.
pub fn renormalized_from_bare(dim: usize, lambda: f64, cutoff: Cutoff, mu: Option<f64>) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::ZeroCoupling);
    }
    let cap = cutoff.value();
    let inv = match dim {
        2 => {
            let mu = mu.ok_or_else(|| Error::InvalidInput("D = 2 needs mu".into()))?;
            if !(mu > 0.0) {
                return Err(Error::DomainError(format!("mu must be positive, got {mu}")));
            }
            1.0 / lambda + (cap / mu).ln() / (2.0 * PI)
        }
        3 => 1.0 / lambda + cap / (2.0 * PI * PI),
        _ => return Err(Error::UnsupportedDim(dim)),
    };
    if inv == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(1.0 / inv)
}

/// The cutoff-independent denominator `1/λ - G₀(E; 0, 0)`.
pub fn renormalized_denominator(dim: usize, energy: ComplexEnergy, spec: CouplingSpec) -> Result<DenominatorValue> {
    let value = denominator_at_kappa(spec.canonical(dim)?, energy.kappa());
    Ok(DenominatorValue {
        value,
        dim,
        finite: value.re.is_finite() && value.im.is_finite(),
    })
}

pub(crate) fn denominator_at_kappa(canonical: Canonical, kappa: Complex64) -> Complex64 {
    match canonical {
        Canonical::Bare1D { inv_lambda } => inv_lambda + 1.0 / (2.0 * kappa),
        // -(1/4π) ln(E/E_B) = -(1/2π) ln(κ/κ_B)
        Canonical::LogScale2D { ln_kappa_b } => -(kappa.ln() - ln_kappa_b) / (2.0 * PI),
        Canonical::Scale3D { kappa_b } => (kappa_b - kappa) / (4.0 * PI),
    }
}

/// `∂/∂κ` of [`denominator_at_kappa`].
pub(crate) fn denominator_dkappa(canonical: Canonical, kappa: Complex64) -> Complex64 {
    match canonical {
        Canonical::Bare1D { .. } => -1.0 / (2.0 * kappa * kappa),
        Canonical::LogScale2D { .. } => -1.0 / (2.0 * PI * kappa),
        Canonical::Scale3D { .. } => Complex64::new(-1.0 / (4.0 * PI), 0.0),
    }
}

/// `1/λ + B_D(√(-E), Λ)` for a fixed bare coupling and real `E < 0`.
pub fn regularized_denominator(dim: usize, lambda: f64, energy: f64, cutoff: Cutoff) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::ZeroCoupling);
    }
    if !(energy < 0.0) {
        return Err(Error::DomainError(format!("energy must be negative, got {energy}")));
    }
    Ok(1.0 / lambda + bubble_regularized(dim, (-energy).sqrt(), cutoff)?)
}

/// `E_B = -μ² exp(4π/λ_R)`.
pub fn transmutation_energy(lambda_r: f64, mu: f64) -> Result<f64> {
    if lambda_r == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if !(mu > 0.0) || !mu.is_finite() || !lambda_r.is_finite() {
        return Err(Error::DomainError(format!(
            "need finite lambdaR and mu > 0, got {lambda_r}, {mu}"
        )));
    }
    Ok(-mu * mu * (4.0 * PI / lambda_r).exp())
}

/// Moves the D = 2 renormalized coupling from scale μ to μ′ at fixed physics:
/// `1/λ_R′ = 1/λ_R - (1/4π) ln(μ′²/μ²)`.
pub fn rg_shift(lambda_r: f64, mu: f64, mu_prime: f64) -> Result<f64> {
    if lambda_r == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if !(mu > 0.0) || !(mu_prime > 0.0) || !mu.is_finite() || !mu_prime.is_finite() {
        return Err(Error::DomainError(format!(
            "scales must be positive, got {mu}, {mu_prime}"
        )));
    }
    let inv = 1.0 / lambda_r - (mu_prime / mu).ln() / (2.0 * PI);
    if inv.abs() < POLE_TOLERANCE {
        return Err(Error::CouplingBlowup { mu, mu_prime });
    }
    Ok(1.0 / inv)
}

/// One row of the D = 4 divergence report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FriedmanRow {
    pub cutoff: f64,
    pub total_bubble: f64,
    pub quadratic_part: f64,
    pub nonremovable_part: f64,
}

/// Splits the D = 4 bubble into the coupling-absorbable `Λ²/16π²` and the
/// `K`-dependent `(K²/16π²) ln((Λ² + K²)/K²)` that survives any redefinition.
pub fn friedman_report(k: f64, cutoffs: &[Cutoff]) -> Result<Vec<FriedmanRow>> {
    if cutoffs.is_empty() {
        return Err(Error::InvalidInput("at least one cutoff is required".into()));
    }
    if cutoffs.windows(2).any(|w| !(w[0].value() < w[1].value())) {
        return Err(Error::InvalidInput("cutoffs must be strictly increasing".into()));
    }
    cutoffs
        .iter()
        .map(|&cutoff| {
            let cap = cutoff.value();
            let total_bubble = bubble_regularized(4, k, cutoff)?;
            let quadratic_part = cap * cap / (16.0 * PI * PI);
            let nonremovable_part = k * k * ln1p_square(cap / k) / (16.0 * PI * PI);
            Ok(FriedmanRow {
                cutoff: cap,
                total_bubble,
                quadratic_part,
                nonremovable_part,
            })
        })
        .collect()
}
