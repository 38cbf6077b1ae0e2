//! Finite Blaschke products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Scalar};

/// Zero of a Blaschke product with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BlaschkeZero<T: Scalar> {
    pub point: Cplx<T>,
    pub multiplicity: u32,
}

/// `B(z) = Π (|a|/a)·(a - z)/(1 - āz)` over the zeros, the factor for `a = 0` being `z`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BlaschkeProduct<T: Scalar> {
    zeros: Vec<BlaschkeZero<T>>,
}

impl<T: Scalar> BlaschkeProduct<T> {
    pub fn new(zeros: Vec<BlaschkeZero<T>>) -> Result<Self> {
        for z in &zeros {
            let r = z.point.norm();
            if !(r < T::one()) {
                return Err(Error::OutsideDisc(r.to_f64_lossy()));
            }
        }
        Ok(Self { zeros })
    }

    /// Simple zeros at the given points.
    pub fn simple(points: &[Cplx<T>]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|&point| BlaschkeZero {
                    point,
                    multiplicity: 1,
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self { zeros: Vec::new() }
    }

    pub fn zeros(&self) -> &[BlaschkeZero<T>] {
        &self.zeros
    }

    pub fn degree(&self) -> u32 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    /// Multiplicity of the zero at `a` (within `tol`).
    pub fn multiplicity_at(&self, a: Cplx<T>, tol: T) -> u32 {
        self.zeros
            .iter()
            .filter(|z| (z.point - a).norm() <= tol)
            .map(|z| z.multiplicity)
            .sum()
    }

    pub fn eval(&self, z: Cplx<T>) -> Cplx<T> {
        let one = Cplx::new(T::one(), T::zero());
        self.zeros.iter().fold(one, |acc, zero| {
            let a = zero.point;
            let factor = if a.norm() == T::zero() {
                z
            } else {
                (a - z) / (one - a.conj() * z) * (Cplx::new(a.norm(), T::zero()) / a)
            };
            acc * factor.powu(zero.multiplicity)
        })
    }
}

/// Evaluates `B` on the closed disc.
pub fn blaschke_eval<T: Scalar>(b: &BlaschkeProduct<T>, z: Cplx<T>) -> Result<Cplx<T>> {
    let r = z.norm();
    if r > T::one() + T::epsilon() * T::lit(16.0) {
        return Err(Error::OutsideDisc(r.to_f64_lossy()));
    }
    Ok(b.eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let b = BlaschkeProduct::simple(&[Cplx::new(0.0, 0.0)]).unwrap();
        assert!((blaschke_eval(&b, Cplx::new(0.0, 0.3)).unwrap() - Cplx::new(0.0, 0.3)).norm() < 1e-15);
        let b = BlaschkeProduct::simple(&[Cplx::new(0.5, 0.0)]).unwrap();
        assert!((blaschke_eval(&b, Cplx::new(0.0, 0.0)).unwrap() - Cplx::new(0.5, 0.0)).norm() < 1e-15);
        let b = BlaschkeProduct::<f64>::empty();
        assert_eq!(blaschke_eval(&b, Cplx::new(0.2, 0.1)).unwrap(), Cplx::new(1.0, 0.0));
    }

    #[test]
    fn rejects_zero_on_circle() {
        assert!(BlaschkeProduct::simple(&[Cplx::new(1.0f64, 0.0)]).is_err());
    }

    proptest! {
        #[test]
        fn unimodular_on_circle(
            zs in proptest::collection::vec((0.0f64..0.95, 0.0f64..6.28, 1u32..3), 0..5),
            theta in 0.0f64..6.283,
        ) {
            let zeros = zs.iter().map(|&(r, t, m)| BlaschkeZero { point: Cplx::from_polar(r, t), multiplicity: m }).collect();
            let b = BlaschkeProduct::new(zeros).unwrap();
            let v = b.eval(Cplx::from_polar(1.0, theta));
            prop_assert!((v.norm() - 1.0).abs() < 1e-10);
            let inner = b.eval(Cplx::from_polar(0.7, theta));
            prop_assert!(inner.norm() <= 1.0 + 1e-12);
        }
    }
}
