//! Uniform boundary grids on the unit circle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Scalar};

/// Samples of a boundary function at the angles `2πj/n`, `j = 0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BoundaryGrid<T: Scalar> {
    values: Vec<Cplx<T>>,
}

pub fn check_grid_size(n: usize) -> Result<()> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::GridSize(n));
    }
    Ok(())
}

/// Zero-valued grid with `n` nodes.
pub fn make_grid<T: Scalar>(n: usize) -> Result<BoundaryGrid<T>> {
    check_grid_size(n)?;
    Ok(BoundaryGrid {
        values: vec![Cplx::new(T::zero(), T::zero()); n],
    })
}

impl<T: Scalar> BoundaryGrid<T> {
    pub fn from_values(values: Vec<Cplx<T>>) -> Result<Self> {
        check_grid_size(values.len())?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    /// Samples `f(e^{iθ_j})` of a closure given the node `e^{iθ_j}`.
    pub fn from_fn(n: usize, f: impl Fn(Cplx<T>) -> Cplx<T>) -> Result<Self> {
        check_grid_size(n)?;
        let values = (0..n).map(|j| f(node(n, j))).collect();
        Self::from_values(values)
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::from_values(values.iter().map(|&v| Cplx::new(v, T::zero())).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Cplx<T>> {
        self.values
    }

    #[inline]
    pub fn angle(&self, j: usize) -> T {
        angle(self.n(), j)
    }

    pub fn angles(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n()).map(move |j| self.angle(j))
    }

    /// Pointwise map producing a new grid.
    pub fn map(&self, f: impl Fn(Cplx<T>) -> Cplx<T>) -> Result<Self> {
        Self::from_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Cplx<T>, Cplx<T>) -> Cplx<T>) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch(self.n(), other.n()));
        }
        Self::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }
}

/// Angle of node `j` on an `n`-point grid.
#[inline]
pub fn angle<T: Scalar>(n: usize, j: usize) -> T {
    T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(n)
}

/// The point `e^{iθ_j}`.
#[inline]
pub fn node<T: Scalar>(n: usize, j: usize) -> Cplx<T> {
    Cplx::from_polar(T::one(), angle::<T>(n, j))
}

/// Reduces an angle to `[0, 2π)`.
#[inline]
pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    let tau = T::two_pi();
    let mut t = theta % tau;
    if t < T::zero() {
        t += tau;
    }
    if t >= tau {
        t -= tau;
    }
    t
}
