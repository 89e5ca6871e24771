//! Brute-force checks that share no closed forms with the modules they
//! verify: momentum-space quadrature, a finite-difference lattice, shooting,
//! and a finite-range square well.

mod lattice;
mod quadrature;
mod shooting;
mod well;

pub use lattice::{lattice1d_spectrum, lattice1d_transmission, Lattice1D};
pub use quadrature::{g0_by_quadrature, integrate, wynn_epsilon, MIN_TOLERANCE};
pub use shooting::shooting1d;
pub use well::{radial_solution, shrinking_well_depth, swave_amplitude, SquareWell3D};
