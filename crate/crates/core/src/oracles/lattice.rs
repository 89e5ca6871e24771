//! Finite-difference 1D Hamiltonian `-d²/dx² + Σ λ_i δ(x - a_i)` on a box
//! with Dirichlet walls. Each delta becomes a single-site potential `λ/h`.

use crate::error::{Error, Result};
use crate::pointgreen::DeltaCenter;
use crate::renorm::CouplingSpec;

/// Uniform grid on `[-L, L]` with `N` points including both walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice1D {
    half_width: f64,
    points: usize,
}

impl Lattice1D {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidInput(format!("half width must be positive, got {half_width}")));
        }
        if points < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 grid points, got {points}")));
        }
        Ok(Self { half_width, points })
    }

    /// Lattice with spacing close to `h` (odd point count, so 0 is a site).
    pub fn with_spacing(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!("spacing must be positive, got {h}")));
        }
        let intervals = (2.0 * half_width / h).round().max(2.0) as usize;
        Self::new(half_width, intervals + intervals % 2 + 1)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    fn site(&self, x: f64) -> Result<usize> {
        let i = ((x + self.half_width) / self.spacing()).round();
        if !(i >= 1.0 && i <= (self.points - 2) as f64) {
            return Err(Error::InvalidInput(format!("center {x} is not inside the lattice box")));
        }
        Ok(i as usize)
    }
}

fn bare_lambda(c: &DeltaCenter) -> Result<(f64, f64)> {
    match c.coupling {
        CouplingSpec::Bare1D { lambda } if c.position.dim() == 1 => Ok((c.position.coords()[0], lambda)),
        other => Err(Error::IllegalSpec {
            dim: c.position.dim(),
            spec: other.to_string(),
        }),
    }
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - x } else { a - x - off2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + x.abs() + self.off.abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let spread = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - spread;
        let mut hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + spread;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift) x = b` by the Thomas algorithm.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0] - shift;
        c[0] = self.off / denom;
        d[0] = b[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - shift - self.off * c[i - 1];
            c[i] = self.off / denom;
            d[i] = (b[i] - self.off * d[i - 1]) / denom;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }
}

fn hamiltonian(centers: &[DeltaCenter], lat: &Lattice1D) -> Result<Tridiagonal> {
    let h = lat.spacing();
    let n = lat.points - 2;
    let mut diag = vec![2.0 / (h * h); n];
    let mut used = Vec::new();
    for c in centers {
        let (x, lambda) = bare_lambda(c)?;
        let site = lat.site(x)?;
        if used.contains(&site) {
            return Err(Error::InvalidInput(format!("two centers share lattice site {site}")));
        }
        used.push(site);
        diag[site - 1] += lambda / h;
    }
    Ok(Tridiagonal {
        diag,
        off: -1.0 / (h * h),
    })
}

/// Lowest `n_states` lattice eigenvalues, ascending.
///
/// When the ground state is bound, its amplitude next to the walls must be
/// below `1e-6` of its peak, otherwise the box is too small.
pub fn lattice1d_spectrum(centers: &[DeltaCenter], lat: &Lattice1D, n_states: usize) -> Result<Vec<f64>> {
    let t = hamiltonian(centers, lat)?;
    if n_states == 0 || n_states > t.diag.len() {
        return Err(Error::InvalidInput(format!(
            "n_states must be in 1..={}, got {n_states}",
            t.diag.len()
        )));
    }
    let levels: Vec<f64> = (0..n_states).map(|k| t.eigenvalue(k)).collect();
    if levels[0] < 0.0 {
        let ratio = boundary_ratio(&t, levels[0]);
        if ratio > 1e-6 {
            return Err(Error::InsufficientBox { ratio });
        }
    }
    Ok(levels)
}

/// Wall-to-peak amplitude ratio of the eigenvector at `level`.
fn boundary_ratio(t: &Tridiagonal, level: f64) -> f64 {
    let shift = level - 1e-9 * level.abs().max(1.0);
    let mut v = vec![1.0; t.diag.len()];
    for _ in 0..4 {
        v = t.solve_shifted(shift, &v);
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        v.iter_mut().for_each(|x| *x /= peak);
    }
    v[0].abs().max(v[v.len() - 1].abs())
}

/// Transmission and reflection `(T, R)` of a single lattice site carrying
/// `λ/h`, by propagating an outgoing lattice wave `e^{ikjh}` from the right
/// through the site and splitting the result into incoming and reflected
/// waves on the left.
pub fn lattice1d_transmission(lambda: f64, k: f64, lat: &Lattice1D) -> Result<(f64, f64)> {
    let h = lat.spacing();
    let kh = k * h;
    if !(k > 0.0) {
        return Err(Error::DomainError(format!("wave number must be positive, got {k}")));
    }
    if kh > 0.1 {
        return Err(Error::DispersionError { kh });
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be finite, got {lambda}")));
    }
    // lattice energy of the plane wave e^{ikjh}
    let eh2 = 2.0 - 2.0 * kh.cos();
    let wave = |j: f64| (kh * j).cos();
    let wave_im = |j: f64| (kh * j).sin();
    // ψ_j for j = 2, 1 (right of the site at j = 0)
    let (mut re_next, mut im_next) = (wave(2.0), wave_im(2.0));
    let (mut re, mut im) = (wave(1.0), wave_im(1.0));
    // ψ_{j-1} = (2 + h²V_j - h²E) ψ_j - ψ_{j+1}, stepping j = 1, 0, -1
    for j in [1i32, 0, -1] {
        let v = if j == 0 { lambda * h } else { 0.0 };
        let factor = 2.0 + v - eh2;
        let (re_prev, im_prev) = (factor * re - re_next, factor * im - im_next);
        re_next = re;
        im_next = im;
        re = re_prev;
        im = im_prev;
    }
    // now (re, im) = ψ_{-2}, (re_next, im_next) = ψ_{-1}; solve
    // ψ_j = A e^{ikjh} + B e^{-ikjh} at j = -1, -2
    let psi_m1 = num_complex::Complex64::new(re_next, im_next);
    let psi_m2 = num_complex::Complex64::new(re, im);
    let e = |j: f64| num_complex::Complex64::from_polar(1.0, kh * j);
    let det = e(-1.0) * e(2.0) - e(1.0) * e(-2.0);
    let a = (psi_m1 * e(2.0) - psi_m2 * e(1.0)) / det;
    let b = (e(-1.0) * psi_m2 - e(-2.0) * psi_m1) / det;
    let t = 1.0 / a.norm_sqr();
    let r = (b / a).norm_sqr();
    Ok((t, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greenfn::SpatialPoint;

    fn bare(x: f64, lambda: f64) -> DeltaCenter {
        DeltaCenter::new(SpatialPoint::new(vec![x]).unwrap(), CouplingSpec::Bare1D { lambda }).unwrap()
    }

    #[test]
    fn free_box_levels() {
        // Dirichlet box of width 2L: E_n ≈ (nπ/2L)²
        let lat = Lattice1D::new(1.0, 401).unwrap();
        let levels = lattice1d_spectrum(&[], &lat, 3).unwrap();
        for (n, e) in levels.iter().enumerate() {
            let want = ((n + 1) as f64 * std::f64::consts::PI / 2.0).powi(2);
            assert!((e - want).abs() / want < 1e-4);
        }
    }

    #[test]
    fn single_attractive_site() {
        let lat = Lattice1D::new(20.0, 4001).unwrap();
        let e = lattice1d_spectrum(&[bare(0.0, -2.0)], &lat, 1).unwrap()[0];
        assert!((e + 1.0).abs() < 2e-2);
        assert!(lattice1d_spectrum(&[bare(0.0, 2.0)], &lat, 3).unwrap().iter().all(|&e| e > 0.0));
    }

    #[test]
    fn energy_converges_under_refinement() {
        let err = |h: f64| {
            let lat = Lattice1D::with_spacing(20.0, h).unwrap();
            (lattice1d_spectrum(&[bare(0.0, -2.0)], &lat, 1).unwrap()[0] + 1.0).abs()
        };
        let order = (err(0.04) / err(0.02)).log2();
        assert!(order >= 0.9, "order {order}");
    }

    #[test]
    fn two_centers() {
        let lat = Lattice1D::new(25.0, 5001).unwrap();
        let levels = lattice1d_spectrum(&[bare(-1.0, -2.0), bare(1.0, -2.0)], &lat, 3).unwrap();
        assert!((levels[0] + 1.2296).abs() < 1e-2);
        assert!((levels[1] + 0.6349).abs() < 1e-2);
        assert!(levels[2] > 0.0);
    }

    #[test]
    fn small_box_is_reported() {
        let lat = Lattice1D::new(2.0, 401).unwrap();
        assert!(matches!(
            lattice1d_spectrum(&[bare(0.0, -2.0)], &lat, 1),
            Err(Error::InsufficientBox { .. })
        ));
    }

    #[test]
    fn rejects_non_bare_centers() {
        let lat = Lattice1D::new(5.0, 101).unwrap();
        let c = DeltaCenter::new(
            SpatialPoint::new(vec![0.0]).unwrap(),
            CouplingSpec::FromBoundState { e_b: -1.0 },
        )
        .unwrap();
        assert!(matches!(lattice1d_spectrum(&[c], &lat, 1), Err(Error::IllegalSpec { .. })));
        assert!(lattice1d_spectrum(&[bare(9.0, -1.0)], &lat, 1).is_err());
    }

    #[test]
    fn transmission_values() {
        let lat = Lattice1D::with_spacing(1.0, 0.005).unwrap();
        let (t, r) = lattice1d_transmission(-2.0, 1.0, &lat).unwrap();
        assert!((t - 0.5).abs() < 1e-3);
        assert!((t + r - 1.0).abs() < 1e-12);
        let (t, r) = lattice1d_transmission(0.0, 1.0, &lat).unwrap();
        assert!((t - 1.0).abs() < 1e-14 && r < 1e-28);
        assert!(matches!(
            lattice1d_transmission(-2.0, 30.0, &lat),
            Err(Error::DispersionError { .. })
        ));
    }

    #[test]
    fn transmission_is_second_order() {
        let err = |h: f64| {
            let lat = Lattice1D::with_spacing(1.0, h).unwrap();
            (lattice1d_transmission(-2.0, 1.0, &lat).unwrap().0 - 0.5).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 4.0).abs() < 0.6, "ratio {ratio}");
    }
}
