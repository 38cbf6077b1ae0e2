//! Poisson integrals of piecewise-constant boundary data.
//!
//! Each grid node carries the panel `[θ_j - h/2, θ_j + h/2]`; the Poisson kernel
//! is integrated exactly over every panel, so the rule stays positive and
//! accurate all the way up to the circle. On a fixed radius the node values
//! are a circular convolution, evaluated by FFT.

use crate::grid::angle;
use crate::scalar::{Cplx, Scalar};
use crate::spectral::Plan;

/// Mass of `(1/2π)P_r(t)` over `[lo, hi] ⊂ [0, π]`, with `q = (1+r)/(1-r)`.
fn mass_between<T: Scalar>(q: T, lo: T, hi: T) -> T {
    let half = T::lit(0.5);
    let x = q * (hi * half).tan();
    let y = q * (lo * half).tan();
    // arctan x − arctan y without cancellation (x, y ≥ 0)
    ((x - y) / (T::one() + x * y)).atan() / T::PI()
}

/// Panel masses `w_j` of the Poisson kernel at radius `r` for panels centred
/// at the signed offsets `θ_j` (`j > n/2` wraps to negative offsets).
pub fn panel_masses<T: Scalar>(n: usize, r: T) -> Vec<T> {
    let h = T::two_pi() / T::from_usize_lossy(n);
    let half_h = h * T::lit(0.5);
    let pi = T::PI();
    if r <= T::zero() {
        return vec![h / T::two_pi(); n];
    }
    let q = (T::one() + r) / (T::one() - r);
    (0..n)
        .map(|j| {
            let k = if j <= n / 2 { j } else { n - j };
            let s = angle::<T>(n, k);
            if k == 0 {
                T::lit(2.0) * (q * (half_h * T::lit(0.5)).tan()).atan() / pi
            } else if 2 * k == n {
                // panel straddles ±π
                T::lit(2.0) * (T::one() / (q * ((pi - half_h) * T::lit(0.5)).tan())).atan() / pi
            } else {
                mass_between(q, s - half_h, s + half_h)
            }
        })
        .collect()
}

/// Panel masses of the Poisson kernel at an arbitrary interior point,
/// i.e. the weight of every boundary node in `P[u](z) = Σ_j u_j w_j(z)`.
pub fn panel_masses_at<T: Scalar>(n: usize, z: Cplx<T>) -> Vec<T> {
    let r = z.norm();
    if r <= T::zero() {
        return vec![T::one() / T::from_usize_lossy(n); n];
    }
    let phi = z.arg();
    let h = T::two_pi() / T::from_usize_lossy(n);
    let half_h = h * T::lit(0.5);
    let q = (T::one() + r) / (T::one() - r);
    let pi = T::PI();
    (0..n)
        .map(|j| {
            // signed offset in (-π, π]
            let mut s = angle::<T>(n, j) - phi;
            while s > pi {
                s -= T::two_pi();
            }
            while s <= -pi {
                s += T::two_pi();
            }
            let (lo, hi) = (s - half_h, s + half_h);
            if lo >= T::zero() && hi <= pi {
                mass_between(q, lo, hi)
            } else if hi <= T::zero() && lo >= -pi {
                mass_between(q, -hi, -lo)
            } else if lo < T::zero() && hi > T::zero() {
                let g = |t: T| (q * (t * T::lit(0.5)).tan()).atan() / pi;
                g(hi) + g(-lo)
            } else {
                // straddles ±π
                let (a, b) = if hi > pi { (lo, T::lit(2.0) * pi - hi) } else { (-hi, T::lit(2.0) * pi + lo) };
                let tail = |t: T| (T::one() / (q * (t * T::lit(0.5)).tan())).atan() / pi;
                tail(a) + tail(b)
            }
        })
        .collect()
}

/// Poisson integral of node data `u` at `z`.
pub fn poisson_at<T: Scalar>(u: &[T], z: Cplx<T>) -> T {
    panel_masses_at(u.len(), z)
        .iter()
        .zip(u)
        .map(|(&w, &x)| w * x)
        .sum()
}

/// Evaluates Poisson integrals of fixed data on whole circles `|z| = r`.
pub struct PoissonField<T: Scalar> {
    plan: Plan<T>,
    data_hat: Vec<Cplx<T>>,
}

impl<T: Scalar> PoissonField<T> {
    pub fn new(plan: Plan<T>, u: &[T]) -> Self {
        let mut data_hat: Vec<Cplx<T>> = u.iter().map(|&x| Cplx::new(x, T::zero())).collect();
        plan.forward(&mut data_hat);
        Self { plan, data_hat }
    }

    /// `P[u](r e^{iθ_k})` for every node `k`.
    pub fn on_circle(&self, r: T) -> Vec<T> {
        let n = self.plan.n();
        let mut w: Vec<Cplx<T>> = panel_masses(n, r)
            .into_iter()
            .map(|x| Cplx::new(x, T::zero()))
            .collect();
        self.plan.forward(&mut w);
        for (a, b) in w.iter_mut().zip(&self.data_hat) {
            *a = *a * *b;
        }
        self.plan.inverse(&mut w);
        let scale = T::one() / T::from_usize_lossy(n);
        w.into_iter().map(|v| v.re * scale).collect()
    }
}
