//! Bound states of several 1D deltas by shooting: start with the decaying
//! exponential on the far left, cross each center with the derivative jump
//! `ψ'(a⁺) - ψ'(a⁻) = λ ψ(a)`, and ask for the growing exponential on the
//! far right to vanish.

use crate::error::{Error, Result};
use crate::pointgreen::DeltaCenter;
use crate::renorm::CouplingSpec;

const SCAN_POINTS: usize = 2000;

/// Coefficient of `e^{κ(x - a_N)}` right of the last center, up to a
/// positive factor.
fn growing_coefficient(centers: &[(f64, f64)], kappa: f64) -> f64 {
    let (mut psi, mut dpsi) = (1.0, kappa);
    let mut x = centers[0].0;
    for &(a, lambda) in centers {
        // free propagation from x to a: ψ = c⁺e^{κ(y-x)} + c⁻e^{-κ(y-x)}
        let d = a - x;
        let plus = 0.5 * (psi + dpsi / kappa);
        let minus = 0.5 * (psi - dpsi / kappa);
        // scale out e^{κd} to keep the numbers finite
        let decay = (-2.0 * kappa * d).exp();
        psi = plus + minus * decay;
        dpsi = kappa * (plus - minus * decay);
        dpsi += lambda * psi;
        let norm = psi.abs().max(dpsi.abs() / kappa);
        psi /= norm;
        dpsi /= norm;
        x = a;
    }
    0.5 * (psi + dpsi / kappa)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!("shooting bisection on [{lo}, {hi}]")))
}

/// Decay constants `κ` of the bound states with `κ` in `kappa_bracket`,
/// descending (deepest first).
pub fn shooting1d(centers: &[DeltaCenter], kappa_bracket: (f64, f64)) -> Result<Vec<f64>> {
    let (lo, hi) = kappa_bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidInput(format!("kappa bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")));
    }
    let mut sites = centers
        .iter()
        .map(|c| match c.coupling {
            CouplingSpec::Bare1D { lambda } if c.position.dim() == 1 => Ok((c.position.coords()[0], lambda)),
            other => Err(Error::IllegalSpec {
                dim: c.position.dim(),
                spec: other.to_string(),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    if sites.is_empty() {
        return Ok(Vec::new());
    }
    sites.sort_by(|a, b| a.0.total_cmp(&b.0));
    let f = |k: f64| growing_coefficient(&sites, k);
    let ratio = (hi / lo).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..SCAN_POINTS {
        let b = if i == SCAN_POINTS - 1 { hi } else { lo * ratio.powi(i as i32) };
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            roots.push(bisect(f, a, b)?);
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(a);
    }
    roots.sort_by(|x, y| y.total_cmp(x));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greenfn::SpatialPoint;

    fn bare(x: f64, lambda: f64) -> DeltaCenter {
        DeltaCenter::new(SpatialPoint::new(vec![x]).unwrap(), CouplingSpec::Bare1D { lambda }).unwrap()
    }

    #[test]
    fn single_center() {
        let k = shooting1d(&[bare(0.4, -2.0)], (1e-3, 10.0)).unwrap();
        assert_eq!(k.len(), 1);
        assert!((k[0] - 1.0).abs() < 1e-13);
        assert!(shooting1d(&[bare(0.0, 2.0)], (1e-3, 10.0)).unwrap().is_empty());
    }

    #[test]
    fn two_centers() {
        let k = shooting1d(&[bare(1.0, -2.0), bare(-1.0, -2.0)], (1e-3, 10.0)).unwrap();
        assert_eq!(k.len(), 2);
        assert!((k[0] - 1.10886).abs() < 1e-5);
        assert!((k[1] - 0.79681).abs() < 1e-5);
    }

    #[test]
    fn weak_binding() {
        for eps in [1e-2, 1e-3] {
            let k = shooting1d(&[bare(0.0, -2.0 * eps)], (1e-5, 1.0)).unwrap();
            assert!((k[0] - eps).abs() < 1e-12);
        }
    }

    #[test]
    fn separated_centers_split_around_the_single_level() {
        // κ = 1 ± e^{-κd} for identical centers a distance d apart
        let d = 6.0;
        let k = shooting1d(&[bare(-d / 2.0, -2.0), bare(d / 2.0, -2.0)], (0.5, 2.0)).unwrap();
        assert_eq!(k.len(), 2);
        assert!((k[0] - 1.0 - (-d * k[0]).exp()).abs() < 1e-12);
        assert!((k[1] - 1.0 + (-d * k[1]).exp()).abs() < 1e-12);
        // very far apart the matching function stays finite
        let sites = [(-300.0, -2.0), (300.0, -2.0)];
        assert!(growing_coefficient(&sites, 1.3).is_finite());
    }
}
