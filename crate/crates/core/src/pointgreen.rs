//! Green's function of the free Hamiltonian plus any number of contact
//! centers, its real poles, and the bound-state wavefunctions read off the
//! residues.
//!
//! For centers `a_i` with couplings `λ_i` the resolvent is
//!
//! ```text
//! G(x, y) = G₀(x, y) + Σ_ij G₀(x, a_i) [M⁻¹]_ij G₀(a_j, y)
//! M_ii = 1/λ_i - G₀(a_i, a_i)      (renormalized)
//! M_ij = -G₀(a_i, a_j)             (i ≠ j)
//! ```
//!
//! which is the one-center formula `G₀ + G₀(x,0)G₀(0,y)/(1/λ - G₀(0,0))`
//! when N = 1. Only the diagonal of `M` needs renormalization.
//!
//! For real `E < 0` the matrix is real symmetric and `dM/dE` is the Gram
//! matrix of the functions `G₀(·, a_i)`, hence positive definite. The number
//! of positive eigenvalues of `M(E)` therefore grows by one at each bound
//! state as `E` increases; bound-state search bisects on that count and then
//! polishes `det M = 0` inside each isolated bracket.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greenfn::{self, g0, g0_radial, g0_radial_dkappa, ComplexEnergy, GreenValue, SpatialPoint};
use crate::renorm::{denominator_at_kappa, denominator_dkappa, Canonical, CouplingSpec};
use crate::roots::{bisect_secant, log_grid};

/// Minimum separation between two distinct centers.
pub const MIN_CENTER_SEPARATION: f64 = 1e-10;
/// `|det M|` relative to its natural scale below which `E` counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const SCAN_POINTS: usize = 400;

/// A contact interaction site.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCenter {
    pub position: SpatialPoint,
    pub coupling: CouplingSpec,
}

impl DeltaCenter {
    pub fn new(position: SpatialPoint, coupling: CouplingSpec) -> Result<Self> {
        coupling.validate(position.dim())?;
        Ok(Self { position, coupling })
    }
}

fn prepare(dim: usize, centers: &[DeltaCenter]) -> Result<Vec<Canonical>> {
    greenfn::check_dim(dim)?;
    let canon = centers
        .iter()
        .map(|c| {
            if c.position.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "center at {:?} is not {dim}-dimensional",
                    c.position.coords()
                )));
            }
            c.coupling.canonical(dim)
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            let d = a.position.distance(&b.position)?;
            if d < MIN_CENTER_SEPARATION {
                return Err(Error::InvalidInput(format!(
                    "centers at {:?} and {:?} are {d:e} apart; merge them into one center",
                    a.position.coords(),
                    b.position.coords()
                )));
            }
        }
    }
    Ok(canon)
}

/// The matrix whose inverse dresses the free propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct MMatrix {
    entries: DMatrix<Complex64>,
    /// Natural magnitude of each diagonal entry, used to judge `det M ≈ 0`.
    scales: Vec<f64>,
    dim: usize,
    energy: ComplexEnergy,
}

impl MMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn energy(&self) -> ComplexEnergy {
        self.energy
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries.clone().lu().determinant()
    }

    /// `|det M|` divided by the product of row scales.
    pub fn relative_determinant(&self) -> f64 {
        let scale: f64 = (0..self.size())
            .map(|i| {
                let row: f64 = self.entries.row(i).iter().map(|v| v.norm()).sum();
                row.max(self.scales[i])
            })
            .product();
        self.determinant().norm() / scale
    }
}

/// Assembles `M(E)` for the given centers.
pub fn m_matrix(dim: usize, energy: ComplexEnergy, centers: &[DeltaCenter]) -> Result<MMatrix> {
    let canon = prepare(dim, centers)?;
    build_m(dim, energy, centers, &canon)
}

fn build_m(dim: usize, energy: ComplexEnergy, centers: &[DeltaCenter], canon: &[Canonical]) -> Result<MMatrix> {
    let n = centers.len();
    let kappa = energy.kappa();
    let mut entries = DMatrix::zeros(n, n);
    let mut scales = Vec::with_capacity(n);
    for i in 0..n {
        entries[(i, i)] = denominator_at_kappa(canon[i], kappa);
        scales.push((denominator_dkappa(canon[i], kappa) * kappa).norm());
        for j in i + 1..n {
            let r = centers[i].position.distance(&centers[j].position)?;
            let v = -g0_radial(dim, kappa, r)?;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(MMatrix {
        entries,
        scales,
        dim,
        energy,
    })
}

/// `dM/dE` at real `E = -κ²`.
fn m_energy_derivative(dim: usize, kappa: f64, centers: &[DeltaCenter], canon: &[Canonical]) -> Result<DMatrix<f64>> {
    let n = centers.len();
    let k = Complex64::new(kappa, 0.0);
    let dkappa_de = -0.5 / kappa;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = denominator_dkappa(canon[i], k).re * dkappa_de;
        for j in i + 1..n {
            let r = centers[i].position.distance(&centers[j].position)?;
            let v = -g0_radial_dkappa(dim, k, r)?.re * dkappa_de;
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

fn real_part(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    m.map(|v| v.re)
}

/// Full Green's function `G(E; x, y)` in the presence of `centers`.
pub fn green(
    dim: usize,
    energy: ComplexEnergy,
    x: &SpatialPoint,
    y: &SpatialPoint,
    centers: &[DeltaCenter],
) -> Result<GreenValue> {
    let free = g0(dim, energy, x, y)?;
    if centers.is_empty() {
        return Ok(free);
    }
    let canon = prepare(dim, centers)?;
    let m = build_m(dim, energy, centers, &canon)?;
    if m.relative_determinant() <= POLE_TOLERANCE {
        return Err(Error::AtPole {
            energy: energy.value().re,
            det: m.determinant().norm(),
        });
    }
    let to_x = centers
        .iter()
        .map(|c| g0(dim, energy, x, &c.position).map(|g| g.value))
        .collect::<Result<Vec<_>>>()?;
    let to_y = centers
        .iter()
        .map(|c| g0(dim, energy, &c.position, y).map(|g| g.value))
        .collect::<Result<Vec<_>>>()?;
    let lu = m.entries.clone().lu();
    let solve = |rhs: &[Complex64]| {
        lu.solve(&DVector::from_column_slice(rhs))
            .ok_or(Error::AtPole {
                energy: energy.value().re,
                det: 0.0,
            })
    };
    let u = solve(&to_y)?;
    let w = solve(&to_x)?;
    // averaging the two orderings makes G(x, y) = G(y, x) exact
    let forward: Complex64 = to_x.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
    let backward: Complex64 = to_y.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
    Ok(GreenValue {
        value: free.value + 0.5 * (forward + backward),
        ..free
    })
}

/// Energy window `[e_min, e_max]` on the negative real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchWindow {
    pub e_min: f64,
    pub e_max: f64,
}

impl SearchWindow {
    pub fn new(e_min: f64, e_max: f64) -> Result<Self> {
        if !(e_min < e_max && e_max < 0.0) || !e_min.is_finite() {
            return Err(Error::InvalidInput(format!(
                "search window needs e_min < e_max < 0, got [{e_min}, {e_max}]"
            )));
        }
        Ok(Self { e_min, e_max })
    }

    fn contains(&self, e: f64) -> bool {
        e >= self.e_min && e <= self.e_max
    }
}

/// A normalized bound state of a set of centers.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub dim: usize,
    pub centers: Vec<DeltaCenter>,
    /// Coefficients `c_i` with `ψ(x) = Σ_i c_i G₀(E_B; x, a_i)`.
    pub residue_vector: Vec<f64>,
}

impl BoundState {
    pub fn kappa(&self) -> f64 {
        (-self.energy).sqrt()
    }
}

/// All bound states with energies in `window`, ascending. A single center
/// uses the closed form; several centers go through [`bound_states_numeric`].
pub fn bound_states(dim: usize, centers: &[DeltaCenter], window: SearchWindow, tol: f64) -> Result<Vec<BoundState>> {
    if centers.len() == 1 {
        let canon = prepare(dim, centers)?;
        let Some(e_b) = centers[0].coupling.bound_state_energy(dim)? else {
            return Ok(Vec::new());
        };
        if !window.contains(e_b) {
            return Ok(Vec::new());
        }
        return Ok(vec![normalize(dim, e_b, centers, &canon, 1)?.remove(0)]);
    }
    bound_states_numeric(dim, centers, window, tol)
}

fn count_positive(dim: usize, kappa: f64, centers: &[DeltaCenter], canon: &[Canonical]) -> Result<usize> {
    let energy = ComplexEnergy::real(-kappa * kappa)?;
    let m = real_part(&build_m(dim, energy, centers, canon)?.entries);
    Ok(SymmetricEigen::new(m).eigenvalues.iter().filter(|&&v| v > 0.0).count())
}

fn det_at(dim: usize, kappa: f64, centers: &[DeltaCenter], canon: &[Canonical]) -> Result<f64> {
    let energy = ComplexEnergy::real(-kappa * kappa)?;
    Ok(real_part(&build_m(dim, energy, centers, canon)?.entries).lu().determinant())
}

/// Root search for `det M(E) = 0` without the one-center shortcut.
pub fn bound_states_numeric(dim: usize, centers: &[DeltaCenter], window: SearchWindow, tol: f64) -> Result<Vec<BoundState>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let canon = prepare(dim, centers)?;
    if centers.is_empty() {
        return Ok(Vec::new());
    }
    let kappa_lo = (-window.e_max).sqrt();
    let kappa_hi = (-window.e_min).sqrt();
    let grid = log_grid(kappa_lo, kappa_hi, SCAN_POINTS);
    let counts = grid
        .iter()
        .map(|&k| count_positive(dim, k, centers, &canon))
        .collect::<Result<Vec<_>>>()?;

    // brackets [κ_a, κ_b] holding `m` roots each, in decreasing energy order
    let mut brackets = Vec::new();
    for i in 0..grid.len() - 1 {
        if counts[i] > counts[i + 1] {
            isolate(
                dim,
                centers,
                &canon,
                (grid[i], counts[i]),
                (grid[i + 1], counts[i + 1]),
                tol,
                &mut brackets,
            )?;
        }
    }

    let mut states = Vec::new();
    for (a, b, multiplicity) in brackets {
        let kappa_tol = 0.25 * tol / b;
        let kappa = if multiplicity == 1 {
            bisect_secant(|k| det_at(dim, k, centers, &canon), a, b, kappa_tol)?
        } else {
            0.5 * (a + b)
        };
        states.extend(normalize(dim, -kappa * kappa, centers, &canon, multiplicity)?);
    }
    states.sort_by(|s, t| s.energy.total_cmp(&t.energy));
    Ok(states)
}

/// Splits `[a, b]` until each piece holds one root, or a cluster narrower
/// than the tolerance.
fn isolate(
    dim: usize,
    centers: &[DeltaCenter],
    canon: &[Canonical],
    (a, count_a): (f64, usize),
    (b, count_b): (f64, usize),
    tol: f64,
    out: &mut Vec<(f64, f64, usize)>,
) -> Result<()> {
    let jump = count_a - count_b;
    if jump == 0 {
        return Ok(());
    }
    if jump == 1 || (b - a) * 2.0 * b <= tol {
        out.push((a, b, jump));
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    let count_mid = count_positive(dim, mid, centers, canon)?;
    isolate(dim, centers, canon, (a, count_a), (mid, count_mid), tol, out)?;
    isolate(dim, centers, canon, (mid, count_mid), (b, count_b), tol, out)
}

/// Residue vectors for the `multiplicity` states at `e_b`, normalized so
/// that `Res G(x, y) = Σ_n ψ_n(x) ψ_n(y)`.
fn normalize(
    dim: usize,
    e_b: f64,
    centers: &[DeltaCenter],
    canon: &[Canonical],
    multiplicity: usize,
) -> Result<Vec<BoundState>> {
    let kappa = (-e_b).sqrt();
    let energy = ComplexEnergy::real(e_b)?;
    let m = real_part(&build_m(dim, energy, centers, canon)?.entries);
    let dm = m_energy_derivative(dim, kappa, centers, canon)?;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].abs().total_cmp(&eig.eigenvalues[j].abs()));
    let null = DMatrix::from_columns(
        &order[..multiplicity]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    // M ≈ (E - E_B) dM/dE on the null space; make the basis dM/dE-orthonormal
    let gram = null.transpose() * &dm * &null;
    let gram_eig = SymmetricEigen::new(gram);
    let mut states = Vec::with_capacity(multiplicity);
    for (col, &value) in gram_eig.eigenvalues.iter().enumerate() {
        if !(value > 0.0) {
            return Err(Error::NonConvergence(format!(
                "residue normalization at E = {e_b} (dM/dE not positive: {value:e})"
            )));
        }
        let coeffs = &null * gram_eig.eigenvectors.column(col) / value.sqrt();
        let mut residue_vector: Vec<f64> = coeffs.iter().copied().collect();
        if sign_at_centroid(dim, kappa, centers, &residue_vector)? < 0.0 {
            residue_vector.iter_mut().for_each(|c| *c = -*c);
        }
        states.push(BoundState {
            energy: e_b,
            dim,
            centers: centers.to_vec(),
            residue_vector,
        });
    }
    Ok(states)
}

/// Sign of ψ at the centroid of the centers, with fallbacks when ψ is
/// singular or zero there.
fn sign_at_centroid(dim: usize, kappa: f64, centers: &[DeltaCenter], coeffs: &[f64]) -> Result<f64> {
    let n = centers.len() as f64;
    let centroid: Vec<f64> = (0..dim)
        .map(|d| centers.iter().map(|c| c.position.coords()[d]).sum::<f64>() / n)
        .collect();
    let centroid = SpatialPoint::new(centroid)?;
    let k = Complex64::new(kappa, 0.0);
    let mut psi = 0.0;
    for (c, coeff) in centers.iter().zip(coeffs) {
        let r = centroid.distance(&c.position)?;
        if dim >= 2 && r < MIN_CENTER_SEPARATION {
            // the divergent -|G₀| of this center dominates
            return Ok(if *coeff < 0.0 { 1.0 } else { -1.0 });
        }
        psi += coeff * g0_radial(dim, k, r)?.re;
    }
    if psi.abs() > 1e-12 * coeffs.iter().map(|c| c.abs()).sum::<f64>() {
        return Ok(psi.signum());
    }
    // odd about the centroid: fall back to the first center's own lobe
    Ok(coeffs
        .iter()
        .find(|c| c.abs() > 0.0)
        .map(|c| -c.signum())
        .unwrap_or(1.0))
}

/// Bound-state wavefunction `ψ_B(x) = Σ_i c_i G₀(E_B; x, a_i)`.
pub fn residue_wavefunction(state: &BoundState, x: &SpatialPoint) -> Result<f64> {
    if x.dim() != state.dim {
        return Err(Error::InvalidInput(format!(
            "point is {}-dimensional, state lives in D = {}",
            x.dim(),
            state.dim
        )));
    }
    let energy = ComplexEnergy::real(state.energy)?;
    state
        .centers
        .iter()
        .zip(&state.residue_vector)
        .map(|(c, coeff)| Ok(coeff * g0(state.dim, energy, x, &c.position)?.value.re))
        .sum()
}
