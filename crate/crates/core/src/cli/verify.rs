//! The oracle suite behind `deltagreen verify`.

use std::f64::consts::PI;

use crate::error::Result;
use crate::greenfn::{g0, ComplexEnergy, SpatialPoint};
use crate::oracles::{
    g0_by_quadrature, lattice1d_spectrum, lattice1d_transmission, radial_solution, shooting1d,
    shrinking_well_depth, swave_amplitude, Lattice1D,
};
use crate::pointgreen::{bound_states, bound_states_numeric, DeltaCenter, SearchWindow};
use crate::renorm::{rg_shift, transmutation_energy, CouplingSpec};
use crate::scatter::{amplitude3d, optical_theorem_residual, transmission1d, BranchPolicy};

/// One comparison: the measured discrepancy and the bound it must meet.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

fn bare(x: f64, lambda: f64) -> Result<DeltaCenter> {
    DeltaCenter::new(SpatialPoint::new(vec![x])?, CouplingSpec::Bare1D { lambda })
}

fn window() -> Result<SearchWindow> {
    SearchWindow::new(-1e4, -1e-10)
}

fn quadrature_closure() -> Result<f64> {
    let mut worst = 0.0f64;
    for dim in 1..=3 {
        for &e in &[-0.25, -1.0, -4.0] {
            for &r in &[0.0, 0.1, 0.5, 1.0, 2.0, 5.0] {
                if r == 0.0 && dim > 1 {
                    continue;
                }
                let closed = g0(
                    dim,
                    ComplexEnergy::real(e)?,
                    &SpatialPoint::origin(dim)?,
                    &SpatialPoint::along_first_axis(dim, r)?,
                )?
                .value
                .re;
                let quad = g0_by_quadrature(dim, e, r, 1e-10)?;
                worst = worst.max((closed - quad).abs());
            }
        }
    }
    Ok(worst)
}

fn lattice_single() -> Result<f64> {
    let lat = Lattice1D::with_spacing(20.0, 0.01)?;
    Ok((lattice1d_spectrum(&[bare(0.0, -2.0)?], &lat, 1)?[0] + 1.0).abs())
}

fn two_centers() -> Result<Vec<DeltaCenter>> {
    Ok(vec![bare(-1.0, -2.0)?, bare(1.0, -2.0)?])
}

fn lattice_pair() -> Result<f64> {
    let centers = two_centers()?;
    let exact = bound_states(1, &centers, window()?, 1e-13)?;
    let lat = Lattice1D::with_spacing(25.0, 0.01)?;
    let levels = lattice1d_spectrum(&centers, &lat, exact.len())?;
    Ok(exact
        .iter()
        .zip(&levels)
        .map(|(s, l)| (s.energy - l).abs())
        .fold(0.0, f64::max))
}

fn shooting_pair() -> Result<f64> {
    let centers = two_centers()?;
    let exact = bound_states(1, &centers, window()?, 1e-14)?;
    let kappas = shooting1d(&centers, (1e-3, 10.0))?;
    if kappas.len() != exact.len() {
        return Ok(f64::INFINITY);
    }
    Ok(exact
        .iter()
        .zip(&kappas)
        .map(|(s, k)| (s.kappa() - k).abs())
        .fold(0.0, f64::max))
}

fn lattice_transmission() -> Result<f64> {
    let lat = Lattice1D::with_spacing(1.0, 0.005)?;
    let (t_lat, _) = lattice1d_transmission(-2.0, 1.0, &lat)?;
    Ok((t_lat - transmission1d(1.0, -2.0)?.0).abs())
}

fn well_shape() -> Result<f64> {
    let (e_b, r0) = (-1.0, 0.1);
    let well = shrinking_well_depth(e_b, r0)?;
    let state = &bound_states(
        3,
        &[DeltaCenter::new(SpatialPoint::origin(3)?, CouplingSpec::FromBoundState { e_b })?],
        window()?,
        1e-12,
    )?[0];
    let radii = [3.0 * r0, 5.0 * r0, 10.0 * r0, 20.0 * r0];
    let u = radial_solution(&well, e_b, &radii, 1e-4)?;
    let psi_ref = crate::pointgreen::residue_wavefunction(state, &SpatialPoint::along_first_axis(3, radii[0])?)?;
    let mut worst = 0.0f64;
    for (r, ur) in radii.iter().zip(&u) {
        let shape_well = (ur / r) / (u[0] / radii[0]);
        let shape_contact =
            crate::pointgreen::residue_wavefunction(state, &SpatialPoint::along_first_axis(3, *r)?)? / psi_ref;
        worst = worst.max((shape_well / shape_contact - 1.0).abs());
    }
    Ok(worst)
}

fn well_amplitude() -> Result<f64> {
    let well = shrinking_well_depth(-1.0, 0.01)?;
    let f_well = swave_amplitude(&well, 0.01)?;
    let f = amplitude3d(0.01, -1.0)?.f;
    Ok((f_well - f).norm() / f.norm())
}

fn optical() -> Result<f64> {
    let mut worst = 0.0f64;
    for &(k, e) in &[(1.0, -1.0), (0.1, -4.0), (3.0, -0.2), (1e-3, -1e3)] {
        worst = worst.max(optical_theorem_residual(k, e, BranchPolicy::Unitary)?.abs());
    }
    Ok(worst)
}

fn rg_invariance() -> Result<f64> {
    let (lambda_r, mu) = (-4.0 * PI, 1.0);
    let e0 = transmutation_energy(lambda_r, mu)?;
    let mut worst = 0.0f64;
    for &mu_prime in &[0.01, 0.3, 2.0, 50.0] {
        let e = transmutation_energy(rg_shift(lambda_r, mu, mu_prime)?, mu_prime)?;
        worst = worst.max(((e - e0) / e0).abs());
    }
    Ok(worst)
}

fn root_finder_3d() -> Result<f64> {
    let spec = CouplingSpec::Ren3D { lambda_r: 4.0 };
    let c = [DeltaCenter::new(SpatialPoint::origin(3)?, spec)?];
    let numeric = bound_states_numeric(3, &c, window()?, 1e-13)?;
    let closed = -(4.0 * PI / 4.0f64).powi(2);
    Ok(numeric.first().map_or(f64::INFINITY, |s| (s.energy - closed).abs()))
}

/// Runs every oracle comparison. A comparison that errors counts as failed.
pub fn run_suite() -> Vec<Check> {
    let suite: [(&'static str, fn() -> Result<f64>, f64); 10] = [
        ("g0_quadrature_closure", quadrature_closure, 1e-8),
        ("lattice_single_delta", lattice_single, 2e-2),
        ("lattice_two_delta", lattice_pair, 2e-2),
        ("shooting_two_delta", shooting_pair, 1e-10),
        ("lattice_transmission", lattice_transmission, 1e-3),
        ("square_well_shape", well_shape, 1e-2),
        ("square_well_amplitude", well_amplitude, 1e-2),
        ("optical_theorem", optical, 1e-14),
        ("rg_invariance_2d", rg_invariance, 1e-12),
        ("root_finder_3d", root_finder_3d, 1e-12),
    ];
    suite
        .into_iter()
        .map(|(name, f, tolerance)| Check {
            name,
            error: f().unwrap_or(f64::INFINITY),
            tolerance,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn suite_is_green() {
        for c in super::run_suite() {
            assert!(c.passed(), "{}: {:e} > {:e}", c.name, c.error, c.tolerance);
        }
    }
}
