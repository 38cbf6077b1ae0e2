//! Partition of a sector `Δ_γ` into `Δ¹, Δ²¹, Δ²², Δ²³`, the auxiliary
//! function `a_γ` and the contraction factor `μ_z`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{delta_eval, LogModulus, Support};
use crate::grid::node;
use crate::poisson::PoissonField;
use crate::scalar::{Cplx, Scalar};
use crate::sets::{Arc, ArcSet};
use crate::spectral::Plan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionLabel {
    D1,
    D21,
    D22,
    D23,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 4] = [RegionLabel::D1, RegionLabel::D21, RegionLabel::D22, RegionLabel::D23];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// `8|log d|/d` and `8|log d|/(1-r)`.
fn thresholds<T: Scalar>(d: T, r: T) -> (T, T) {
    let l = T::lit(8.0) * d.ln().abs();
    (l / d, l / (T::one() - r))
}

/// Label of `z ∈ Δ_γ` from `d(z)` and `a_γ(z)`; ties go to `Δ²¹` and `Δ²³`.
/// `γ` only serves to validate membership in debug builds.
pub fn classify_region<T: Scalar>(z: Cplx<T>, gamma: &Arc<T>, d: T, a: T) -> RegionLabel {
    debug_assert!(z.norm() == T::zero() || gamma.contains_half_open(z.arg()) || gamma.contains(z.arg()));
    let r = z.norm();
    if d < T::lit(2.0) * (T::one() - r) {
        return RegionLabel::D1;
    }
    let (low, high) = thresholds(d, r);
    if a <= low {
        RegionLabel::D21
    } else if a >= high {
        RegionLabel::D23
    } else {
        RegionLabel::D22
    }
}

/// `μ_z = 1 - 8|log d|/a` for `z ∈ Δ²²`.
pub fn mu_z<T: Scalar>(d: T, a: T) -> Result<T> {
    if !(a > T::zero()) {
        return Err(Error::InvalidParameter("a_γ(z) must be positive".into()));
    }
    if !(d > T::zero() && d <= T::lit(2.0)) {
        return Err(Error::InvalidParameter(format!("distance {d} outside (0, 2]")));
    }
    let l = T::lit(8.0) * d.ln().abs();
    let slack = T::one() - T::lit(1e-12);
    if a < (l / d) * slack {
        return Err(Error::RegionViolation(format!(
            "a = {a} is below the lower threshold {} of region 22",
            l / d
        )));
    }
    let mu = T::one() - l / a;
    debug_assert!(T::one() - mu <= d / slack);
    Ok(mu)
}

/// `Λ_γ`: `Γ` when `γ ⊄ Γ`, `T \ Γ` when `γ ⊆ Γ`.
pub fn lambda_support<T: Scalar>(gamma: &Arc<T>, big_gamma: &ArcSet<T>) -> Support<T> {
    if big_gamma.contains_arc(gamma) {
        Support::Complement(big_gamma.clone())
    } else {
        Support::Arcs(big_gamma.clone())
    }
}

fn positive_check<T: Scalar>(mask: &[bool], lm: &LogModulus<T>) -> Result<()> {
    let bad = mask.iter().zip(lm.values()).filter(|(&m, &l)| m && l > T::zero()).count();
    if bad > 0 {
        return Err(Error::PositiveLogModulus(bad));
    }
    Ok(())
}

/// `-log|f|` on `Λ_γ` (zero elsewhere), with isolated clamped nodes corrected
/// as for interior quadrature.
fn lambda_weights<T: Scalar>(gamma: &Arc<T>, big_gamma: &ArcSet<T>, lm: &LogModulus<T>) -> Result<Vec<T>> {
    let support = lambda_support(gamma, big_gamma);
    positive_check(&support.mask(lm.n()), lm)?;
    Ok(lm.masked_quadrature(&support).into_iter().map(|v| -v).collect())
}

/// `a_γ(z) = (1/2π)∫_{Λ_γ} -log|f| / |e^{iθ}-z|² dθ` by the trapezoid rule.
pub fn a_gamma<T: Scalar>(z: Cplx<T>, gamma: &Arc<T>, big_gamma: &ArcSet<T>, lm: &LogModulus<T>) -> Result<T> {
    let n = lm.n();
    let delta = delta_eval::<T>(n);
    if z.norm() > T::one() - delta {
        return Err(Error::TooCloseToBoundary {
            radius: z.norm().to_f64_lossy(),
            delta: delta.to_f64_lossy(),
        });
    }
    let weights = lambda_weights(gamma, big_gamma, lm)?;
    let mut acc = T::zero();
    let mut mass = T::zero();
    for (j, &w) in weights.iter().enumerate() {
        if w != T::zero() {
            acc += w / (node::<T>(n, j) - z).norm_sqr();
            mass += w;
        }
    }
    let nn = T::from_usize_lossy(n);
    let value = acc / nn;
    let d = gamma.endpoint_distance(z);
    let c = mass / nn;
    if value * d * d > c * (T::one() + T::lit(1e-9)) + T::epsilon() {
        return Err(Error::RegionViolation(format!(
            "a_γ(z)·d² = {} exceeds the mass bound {c}",
            value * d * d
        )));
    }
    Ok(value)
}

/// `a_γ` on whole circles `|z| = r` through the panel-integrated Poisson rule:
/// `a_γ = P[-L·1_Λ](z)/(1-r²)`.
pub struct AGammaField<T: Scalar> {
    field: PoissonField<T>,
}

impl<T: Scalar> AGammaField<T> {
    pub fn new(plan: &Plan<T>, gamma: &Arc<T>, big_gamma: &ArcSet<T>, lm: &LogModulus<T>) -> Result<Self> {
        let density = lambda_weights(gamma, big_gamma, lm)?;
        Ok(Self {
            field: PoissonField::new(plan.clone(), &density),
        })
    }

    pub fn on_circle(&self, r: T) -> Vec<T> {
        let scale = T::one() / (T::one() - r * r);
        self.field.on_circle(r).into_iter().map(|v| v * scale).collect()
    }
}
