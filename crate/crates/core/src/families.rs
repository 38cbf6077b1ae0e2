//! Test functions with closed forms, used by the CLI, the approximation
//! pipeline and the test suites.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factorization::{DiscFunction, LogModulus, outer_from_modulus, Support};
use crate::grid::angle;
use crate::scalar::{Cplx, Scalar};
use crate::sets::BoundaryPointSet;
use crate::taylor::TaylorCoefficients;

/// Exponent shared by the boundary-zero families.
pub const EXPONENT: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `((1-z)/2)^{0.6}`, boundary zero at `θ = 0`.
    #[default]
    Canonical,
    /// `((1-z²)/4)^{0.6}`, boundary zeros at `θ = 0, π`.
    TwoZero,
}

impl Family {
    /// Outer function built from the clamped boundary log-modulus.
    pub fn build<T: Scalar>(self, n: usize, clamp: T) -> Result<DiscFunction<T>> {
        let raw: Vec<T> = (0..n).map(|j| self.log_modulus_at(angle::<T>(n, j))).collect();
        let lm = LogModulus::from_log_values(raw, clamp)?;
        outer_from_modulus(&lm, &Support::Full)
    }

    /// `log|f(e^{iθ})|`, `-∞` at the zeros.
    pub fn log_modulus_at<T: Scalar>(self, theta: T) -> T {
        let e = T::lit(EXPONENT);
        match self {
            Family::Canonical => e * (theta * T::lit(0.5)).sin().abs().ln(),
            Family::TwoZero => e * (theta.sin().abs().ln() - T::LN_2()),
        }
    }

    /// Closed-form value on the closed disc (principal branch; the base has
    /// positive real part on the open disc).
    pub fn eval(self, z: Cplx<f64>) -> Cplx<f64> {
        let base = self.base(z);
        if base.norm() == 0.0 {
            return Cplx::new(0.0, 0.0);
        }
        base.powf(EXPONENT)
    }

    /// Closed-form derivative on the open disc.
    pub fn derivative(self, z: Cplx<f64>) -> Cplx<f64> {
        let base = self.base(z);
        let dbase = match self {
            Family::Canonical => Cplx::new(-0.5, 0.0),
            Family::TwoZero => -z * 0.5,
        };
        base.powf(EXPONENT - 1.0) * dbase * EXPONENT
    }

    fn base(self, z: Cplx<f64>) -> Cplx<f64> {
        let one = Cplx::new(1.0, 0.0);
        match self {
            Family::Canonical => (one - z) * 0.5,
            Family::TwoZero => (one - z * z) * 0.25,
        }
    }

    pub fn zeros<T: Scalar>(self) -> BoundaryPointSet<T> {
        let pts = match self {
            Family::Canonical => vec![T::zero()],
            Family::TwoZero => vec![T::zero(), T::PI()],
        };
        BoundaryPointSet::new(pts).expect("distinct points")
    }
}

/// Polynomial from real coefficients on an `n`-grid.
pub fn polynomial<T: Scalar>(coeffs: &[f64], n: usize, clamp: T) -> Result<DiscFunction<T>> {
    let c: Vec<T> = coeffs.iter().map(|&v| T::lit(v)).collect();
    DiscFunction::from_taylor(TaylorCoefficients::from_real(&c), n, clamp)
}

/// `z^k`.
pub fn monomial<T: Scalar>(k: usize, n: usize, clamp: T) -> Result<DiscFunction<T>> {
    let mut c = vec![0.0; k + 1];
    c[k] = 1.0;
    polynomial(&c, n, clamp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::DEFAULT_CLAMP;

    #[test]
    fn canonical_matches_closed_form_inside() {
        // the clamped node at θ = 0 perturbs log f by at most its Herglotz weight times Λ
        let n = 4096;
        let f = Family::Canonical.build::<f64>(n, DEFAULT_CLAMP).unwrap();
        for &z in &[Cplx::new(0.0, 0.0), Cplx::new(0.5, 0.3), Cplx::new(-0.8, 0.1)] {
            let one = Cplx::new(1.0, 0.0);
            let bound = ((one + z) / (one - z)).norm() * DEFAULT_CLAMP / n as f64;
            let rel = (f.eval(z) - Family::Canonical.eval(z)).norm() / Family::Canonical.eval(z).norm();
            assert!(rel < bound, "{z} {rel} {bound}");
        }
    }

    #[test]
    fn two_zero_closed_form_is_consistent() {
        let z = Cplx::new(0.2, -0.4);
        let h = 1e-6;
        let fd = (Family::TwoZero.eval(z + h) - Family::TwoZero.eval(z - h)) / (2.0 * h);
        assert!((fd - Family::TwoZero.derivative(z)).norm() < 1e-8);
        let t: f64 = 1.1;
        let lm = Family::TwoZero.log_modulus_at(t);
        assert!((lm - Family::TwoZero.eval(Cplx::from_polar(1.0, t)).norm().ln()).abs() < 1e-12);
        assert_eq!(Family::TwoZero.zeros::<f64>().len(), 2);
    }
}
