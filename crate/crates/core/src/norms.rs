//! Sup norm, the Lipschitz-type seminorm, Dirichlet energies and the
//! `A_α` norm `‖f‖_∞ + sup (1-|z|)^{1-α}|f'(z)| + D(f)^{1/2}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::{delta_eval, DiscFunction};
use crate::quadrature::AnnularGrid;
use crate::scalar::{Cplx, Scalar};
use crate::sets::Arc;
use crate::spectral::Plan;

/// Per-radius value of `sup_θ (1-r)^{1-α}|f'(re^{iθ})|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct DecaySample<T: Scalar> {
    pub radius: T,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct NormReport<T: Scalar> {
    pub sup_norm: T,
    pub lip_seminorm: T,
    pub lip_norm: T,
    pub dirichlet: T,
    pub aalpha: T,
    pub alpha: T,
    pub decay_profile: Vec<DecaySample<T>>,
}

/// `D(f) = Σ n|a_n|²` and `‖f‖_D² = Σ (1+n)|a_n|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct DirichletEnergy<T: Scalar> {
    pub dirichlet: T,
    pub norm_sq: T,
}

/// Area integral with the number of annular nodes that contributed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct QuadEnergy<T: Scalar> {
    pub value: T,
    pub node_count: usize,
    /// Set when the region contains no node.
    pub empty: bool,
}

/// Integration region for [`dirichlet_energy_quad`].
pub enum Region<'a, T: Scalar> {
    Disc,
    /// `{z : z/|z| ∈ γ}`, node angles taken half-open `[a, b)` so that the
    /// sectors over a partition of the circle partition the grid.
    Sector(Arc<T>),
    /// Arbitrary node predicate.
    Nodes(&'a (dyn Fn(Cplx<T>) -> bool + Sync)),
}

impl<T: Scalar> Region<'_, T> {
    fn contains(&self, z: Cplx<T>, theta: T) -> bool {
        match self {
            Region::Disc => true,
            Region::Sector(a) => a.contains_half_open(theta),
            Region::Nodes(p) => p(z),
        }
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::lit(0.5)) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1/2], got {alpha}"
        )));
    }
    Ok(())
}

/// Largest `|f|` over the boundary nodes and the annular grid radii
/// `r ≤ 1 - δ_eval`. Closer to the circle the truncated series is not resolved
/// and the boundary samples dominate by the maximum principle.
pub fn sup_norm<T: Scalar>(f: &DiscFunction<T>) -> T {
    let grid = AnnularGrid::<T>::with_defaults(f.n());
    let plan = Plan::new(f.n());
    let coeffs = f.coeffs().coeffs();
    let r_max = T::one() - delta_eval::<T>(f.n());
    let interior = grid.max_over_rings(|_, r| {
        if r > r_max {
            return T::zero();
        }
        plan.synthesize_on_circle(coeffs, r)
            .iter()
            .fold(T::zero(), |m, v| m.max(v.norm()))
    });
    f.boundary().max_abs().max(interior)
}

/// Radii `0` and `1 - 2^{-k}` for `k = 1..k_max` with `2^{-k_max} > 10·2π/n`.
pub fn lip_radii<T: Scalar>(n: usize) -> Vec<T> {
    let floor = T::lit(10.0) * T::two_pi() / T::from_usize_lossy(n);
    let mut radii = vec![T::zero()];
    let mut gap = T::lit(0.5);
    while gap > floor {
        radii.push(T::one() - gap);
        gap = gap * T::lit(0.5);
    }
    radii
}

/// `sup_θ (1-r)^{1-α}|f'(re^{iθ})|` on every radius of [`lip_radii`].
pub fn lip_profile<T: Scalar>(f: &DiscFunction<T>, alpha: T) -> Result<Vec<DecaySample<T>>> {
    check_alpha(alpha)?;
    let plan = Plan::new(f.n());
    let coeffs = f.coeffs().coeffs();
    Ok(lip_radii::<T>(f.n())
        .into_iter()
        .map(|r| {
            let weight = (T::one() - r).powf(T::one() - alpha);
            let dmax = if r == T::zero() {
                coeffs.get(1).map_or(T::zero(), |a| a.norm())
            } else {
                plan.synthesize_derivative_on_circle(coeffs, r)
                    .iter()
                    .fold(T::zero(), |m, v| m.max(v.norm()))
            };
            DecaySample {
                radius: r,
                value: weight * dmax,
            }
        })
        .collect())
}

pub fn lip_seminorm<T: Scalar>(f: &DiscFunction<T>, alpha: T) -> Result<T> {
    Ok(lip_profile(f, alpha)?
        .iter()
        .fold(T::zero(), |m, s| m.max(s.value)))
}

pub fn dirichlet_energy_coeff<T: Scalar>(f: &DiscFunction<T>) -> DirichletEnergy<T> {
    let mut dirichlet = T::zero();
    let mut l2 = T::zero();
    for (k, a) in f.coeffs().coeffs().iter().enumerate() {
        let m = a.norm_sqr();
        dirichlet += T::from_usize_lossy(k) * m;
        l2 += m;
    }
    DirichletEnergy {
        dirichlet,
        norm_sq: dirichlet + l2,
    }
}

/// `∫_Δ |f'|² dA` on the annular grid with `dA = (1/π) r dr dt`.
pub fn dirichlet_energy_quad<T: Scalar>(f: &DiscFunction<T>, region: &Region<'_, T>) -> QuadEnergy<T> {
    let n = f.n();
    let grid = AnnularGrid::<T>::with_defaults(n);
    let plan = Plan::new(n);
    let coeffs = f.coeffs().coeffs();
    let angles: Vec<T> = (0..n).map(|j| crate::grid::angle(n, j)).collect();
    let mask: Vec<bool> = match region {
        Region::Sector(a) => angles.iter().map(|&t| a.contains_half_open(t)).collect(),
        _ => vec![true; n],
    };
    let counts = std::sync::atomic::AtomicUsize::new(0);
    let value = grid.integrate(|_, r| {
        let d = plan.synthesize_derivative_on_circle(coeffs, r);
        let mut sum = T::zero();
        let mut count = 0;
        for (j, v) in d.iter().enumerate() {
            let inside = match region {
                Region::Nodes(_) => region.contains(Cplx::from_polar(r, angles[j]), angles[j]),
                _ => mask[j],
            };
            if inside {
                sum += v.norm_sqr();
                count += 1;
            }
        }
        counts.fetch_add(count, std::sync::atomic::Ordering::Relaxed);
        sum
    });
    let node_count = counts.into_inner();
    QuadEnergy {
        value,
        node_count,
        empty: node_count == 0,
    }
}

pub fn aalpha_norm<T: Scalar>(f: &DiscFunction<T>, alpha: T) -> Result<NormReport<T>> {
    let decay_profile = lip_profile(f, alpha)?;
    let lip_seminorm = decay_profile.iter().fold(T::zero(), |m, s| m.max(s.value));
    let sup_norm = sup_norm(f);
    let dirichlet = dirichlet_energy_coeff(f).dirichlet;
    let lip_norm = sup_norm + lip_seminorm;
    Ok(NormReport {
        sup_norm,
        lip_seminorm,
        lip_norm,
        dirichlet,
        aalpha: lip_norm + dirichlet.sqrt(),
        alpha,
        decay_profile,
    })
}

/// Shorthand for the `A_α` norm value.
pub fn aalpha<T: Scalar>(f: &DiscFunction<T>, alpha: T) -> Result<T> {
    Ok(aalpha_norm(f, alpha)?.aalpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::DEFAULT_CLAMP;
    use crate::taylor::TaylorCoefficients;

    fn poly(c: &[f64], n: usize) -> DiscFunction<f64> {
        DiscFunction::from_taylor(TaylorCoefficients::from_real(c), n, DEFAULT_CLAMP).unwrap()
    }

    #[test]
    fn sup_examples() {
        assert!((sup_norm(&poly(&[3.0], 64)) - 3.0).abs() < 1e-14);
        assert!((sup_norm(&poly(&[0.0, 1.0], 64)) - 1.0).abs() < 1e-14);
        assert!((sup_norm(&poly(&[2.0, 1.0], 64)) - 3.0).abs() < 1e-8);
    }

    #[test]
    fn lip_examples() {
        assert!((lip_seminorm(&poly(&[0.0, 1.0], 1024), 0.5).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(lip_seminorm(&poly(&[4.0], 1024), 0.5).unwrap(), 0.0);
        assert!(lip_seminorm(&poly(&[4.0], 1024), 0.7).is_err());
    }

    #[test]
    fn radii_respect_floor() {
        let r = lip_radii::<f64>(4096);
        let last = 1.0 - r.last().unwrap();
        assert!(last > 10.0 * std::f64::consts::TAU / 4096.0);
        assert!(last / 2.0 <= 10.0 * std::f64::consts::TAU / 4096.0);
        assert_eq!(r[0], 0.0);
    }

    #[test]
    fn dirichlet_examples() {
        let mut c = vec![0.0; 6];
        c[5] = 1.0;
        let z5 = poly(&c, 256);
        assert_eq!(dirichlet_energy_coeff(&z5).dirichlet, 5.0);
        assert!((dirichlet_energy_quad(&z5, &Region::Disc).value - 5.0).abs() < 1e-6);
        assert_eq!(dirichlet_energy_coeff(&poly(&[7.0], 64)).dirichlet, 0.0);
        let e = dirichlet_energy_coeff(&poly(&[2.0, 1.0], 64));
        assert_eq!((e.dirichlet, e.norm_sq), (1.0, 6.0));
    }

    #[test]
    fn sector_and_empty_regions() {
        let z = poly(&[0.0, 1.0], 256);
        let half = Arc::new(0.3, std::f64::consts::PI).unwrap();
        assert!((dirichlet_energy_quad(&z, &Region::Sector(half)).value - 0.5).abs() < 1e-6);
        let never = |_: Cplx<f64>| false;
        let q = dirichlet_energy_quad(&z, &Region::Nodes(&never));
        assert!(q.empty && q.value == 0.0);
    }

    #[test]
    fn aalpha_examples() {
        let r = aalpha_norm(&poly(&[0.0, 1.0], 1024), 0.5).unwrap();
        assert!((r.aalpha - 3.0).abs() < 1e-8);
        assert_eq!(r.aalpha, r.lip_norm + r.dirichlet.sqrt());
        assert!((aalpha_norm(&poly(&[1.0], 64), 0.5).unwrap().aalpha - 1.0).abs() < 1e-14);
    }
}
