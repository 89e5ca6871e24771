//! Closed forms against the brute-force oracles on randomized inputs.

use deltagreen::greenfn::{g0, ComplexEnergy, SpatialPoint};
use deltagreen::oracles::{
    g0_by_quadrature, lattice1d_spectrum, lattice1d_transmission, radial_solution, shooting1d,
    shrinking_well_depth, Lattice1D,
};
use deltagreen::pointgreen::{bound_states, residue_wavefunction, DeltaCenter, SearchWindow};
use deltagreen::renorm::CouplingSpec;
use deltagreen::scatter::transmission1d;
use proptest::prelude::*;

fn bare(x: f64, lambda: f64) -> DeltaCenter {
    DeltaCenter::new(SpatialPoint::new(vec![x]).unwrap(), CouplingSpec::Bare1D { lambda }).unwrap()
}

fn window() -> SearchWindow {
    SearchWindow::new(-1e4, -1e-8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_matches_closed_form(dim in 1usize..=3, kappa in 0.2f64..3.0, r in 0.05f64..4.0) {
        let e = -kappa * kappa;
        let closed = g0(
            dim,
            ComplexEnergy::real(e).unwrap(),
            &SpatialPoint::origin(dim).unwrap(),
            &SpatialPoint::along_first_axis(dim, r).unwrap(),
        )
        .unwrap()
        .value
        .re;
        let quad = g0_by_quadrature(dim, e, r, 1e-10).unwrap();
        prop_assert!((closed - quad).abs() <= 1e-8, "{} vs {}", closed, quad);
    }

    #[test]
    fn shooting_matches_det_roots(
        sep in 0.5f64..4.0,
        l1 in -4.0f64..-0.5,
        l2 in -4.0f64..-0.5,
        l3 in -4.0f64..1.0,
    ) {
        prop_assume!(l3.abs() > 0.05);
        let centers = [bare(-sep, l1), bare(0.3, l2), bare(0.3 + sep, l3)];
        let states = bound_states(1, &centers, window(), 1e-13).unwrap();
        let kappas = shooting1d(&centers, (1e-4, 100.0)).unwrap();
        prop_assert_eq!(states.len(), kappas.len());
        for (s, k) in states.iter().zip(&kappas) {
            prop_assert!((s.kappa() - k).abs() <= 1e-10, "{} vs {}", s.kappa(), k);
        }
    }

    #[test]
    fn lattice_tracks_two_centers(sep in 0.6f64..3.0, lambda in -3.0f64..-1.0) {
        // centers on grid sites, so the lattice converges at second order
        let h = 0.01;
        let a = (sep / h).round() * h;
        let centers = [bare(-a, lambda), bare(a, lambda)];
        let states = bound_states(1, &centers, window(), 1e-12).unwrap();
        let lat = Lattice1D::with_spacing(30.0, h).unwrap();
        let levels = lattice1d_spectrum(&centers, &lat, states.len()).unwrap();
        for (s, l) in states.iter().zip(&levels) {
            prop_assert!((s.energy - l).abs() <= 0.05 * h, "{} vs {}", s.energy, l);
        }
    }

    #[test]
    fn lattice_transmission_is_continuum_to_second_order(k in 0.2f64..3.0, lambda in -5.0f64..5.0) {
        let h = 0.002;
        let lat = Lattice1D::with_spacing(1.0, h).unwrap();
        let (t_lat, r_lat) = lattice1d_transmission(lambda, k, &lat).unwrap();
        let (t, _) = transmission1d(k, lambda).unwrap();
        prop_assert!((t_lat + r_lat - 1.0).abs() < 1e-10);
        prop_assert!((t_lat - t).abs() <= (k * h).powi(2));
    }

    #[test]
    fn square_well_tail_is_the_contact_wavefunction(e_b in -4.0f64..-0.1, frac in 0.02f64..0.2) {
        let kappa = (-e_b).sqrt();
        let r0 = frac / kappa;
        let well = shrinking_well_depth(e_b, r0).unwrap();
        let c = [DeltaCenter::new(SpatialPoint::origin(3).unwrap(), CouplingSpec::FromBoundState { e_b }).unwrap()];
        let state = &bound_states(3, &c, window(), 1e-12).unwrap()[0];
        let radii = [3.0 * r0, 6.0 * r0, 12.0 * r0];
        let u = radial_solution(&well, e_b, &radii, r0 * 1e-3).unwrap();
        let contact = |r: f64| residue_wavefunction(state, &SpatialPoint::along_first_axis(3, r).unwrap()).unwrap();
        for (r, ur) in radii.iter().zip(&u) {
            let ratio_well = (ur / r) / (u[0] / radii[0]);
            let ratio_contact = contact(*r) / contact(radii[0]);
            prop_assert!((ratio_well / ratio_contact - 1.0).abs() < 1e-2);
        }
    }
}
