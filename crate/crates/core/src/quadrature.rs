//! Gauss–Legendre rules and the annular (polar tensor-product) area grid.

use rayon::prelude::*;

use crate::scalar::Scalar;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed in `f64` by Newton
/// iteration on the three-term recurrence and then cast.
pub fn gauss_legendre<T: Scalar>(order: usize) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre_f64(order);
    (
        x.into_iter().map(T::lit).collect(),
        w.into_iter().map(T::lit).collect(),
    )
}

fn gauss_legendre_f64(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    let n = order;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            let dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        // recompute derivative at the converged node
        let (mut p0, mut p1) = (1.0, z);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = if n > 1 {
            n as f64 * (z * p1 - p0) / (z * z - 1.0)
        } else {
            1.0
        };
        let wt = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on<T: Scalar>(order: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre::<T>(order);
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    (
        x.into_iter().map(|t| mid + half * t).collect(),
        w.into_iter().map(|v| v * half).collect(),
    )
}

/// Default radial order of [`AnnularGrid`].
pub const DEFAULT_RADIAL_NODES: usize = 256;

/// Tensor product of Gauss–Legendre radii on `(0, 1)` and the uniform angles
/// `2πj/n` of the boundary grid.
#[derive(Debug, Clone)]
pub struct AnnularGrid<T: Scalar> {
    radii: Vec<T>,
    radial_weights: Vec<T>,
    n_angles: usize,
}

impl<T: Scalar> AnnularGrid<T> {
    pub fn new(radial_nodes: usize, n_angles: usize) -> Self {
        let (radii, radial_weights) = gauss_legendre_on(radial_nodes, T::zero(), T::one());
        Self {
            radii,
            radial_weights,
            n_angles,
        }
    }

    pub fn with_defaults(n_angles: usize) -> Self {
        Self::new(DEFAULT_RADIAL_NODES, n_angles)
    }

    #[inline]
    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    #[inline]
    pub fn radial_weights(&self) -> &[T] {
        &self.radial_weights
    }

    #[inline]
    pub fn n_angles(&self) -> usize {
        self.n_angles
    }

    pub fn node_count(&self) -> usize {
        self.radii.len() * self.n_angles
    }

    /// Weight of every node on radius `i` under `dA = (1/π) r dr dt`.
    #[inline]
    pub fn area_weight(&self, i: usize) -> T {
        T::lit(2.0) * self.radial_weights[i] * self.radii[i] / T::from_usize_lossy(self.n_angles)
    }

    /// Normalized area of the whole disc as seen by the rule (exactly 1 in exact arithmetic).
    pub fn total_area(&self) -> T {
        (0..self.radii.len())
            .map(|i| self.area_weight(i) * T::from_usize_lossy(self.n_angles))
            .sum()
    }

    /// `Σ_i area_weight(i)·ring(i, r_i)` where `ring` returns the plain sum of
    /// the integrand over the angles of radius `i`. Rings run in parallel and
    /// are summed in index order, so results are reproducible.
    pub fn integrate(&self, ring: impl Fn(usize, T) -> T + Sync) -> T {
        let parts: Vec<T> = (0..self.radii.len())
            .into_par_iter()
            .map(|i| self.area_weight(i) * ring(i, self.radii[i]))
            .collect();
        parts.into_iter().fold(T::zero(), |a, b| a + b)
    }

    /// Maximum of `ring(i, r_i)` over all radii.
    pub fn max_over_rings(&self, ring: impl Fn(usize, T) -> T + Sync) -> T {
        let parts: Vec<T> = (0..self.radii.len())
            .into_par_iter()
            .map(|i| ring(i, self.radii[i]))
            .collect();
        parts.into_iter().fold(T::zero(), T::max)
    }
}
