//! FFT-backed analysis and synthesis between boundary samples and Taylor
//! coefficients, plus the discrete conjugate-function transform.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::grid::BoundaryGrid;
use crate::scalar::{Cplx, Scalar};
use crate::taylor::TaylorCoefficients;

/// Forward and inverse transforms of one size.
#[derive(Clone)]
pub struct Plan<T: Scalar> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> Plan<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `X_k = Σ_j x_j e^{-2πijk/n}` in place (unnormalized).
    pub fn forward(&self, buf: &mut [Cplx<T>]) {
        self.forward.process(buf);
    }

    /// `x_j = Σ_k X_k e^{2πijk/n}` in place (unnormalized).
    pub fn inverse(&self, buf: &mut [Cplx<T>]) {
        self.inverse.process(buf);
    }

    /// DFT coefficients `(1/n) Σ_j x_j e^{-ikθ_j}` for `k = 0..n`.
    pub fn coefficients(&self, values: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        let scale = T::one() / T::from_usize_lossy(self.n);
        buf.iter_mut().for_each(|v| *v = *v * scale);
        buf
    }

    /// Values `Σ_k c_k r^k e^{ikθ_j}` at the grid nodes on the circle of radius `r`.
    /// Coefficients beyond index `n-1` are ignored.
    pub fn synthesize_on_circle(&self, coeffs: &[Cplx<T>], r: T) -> Vec<Cplx<T>> {
        let mut buf = vec![Cplx::new(T::zero(), T::zero()); self.n];
        let mut rk = T::one();
        for (slot, &c) in buf.iter_mut().zip(coeffs) {
            *slot = c * rk;
            rk = rk * r;
        }
        self.inverse(&mut buf);
        buf
    }

    /// Values of the derivative `Σ_k k c_k z^{k-1}` at `z = r e^{iθ_j}`.
    pub fn synthesize_derivative_on_circle(&self, coeffs: &[Cplx<T>], r: T) -> Vec<Cplx<T>> {
        let mut buf = vec![Cplx::new(T::zero(), T::zero()); self.n];
        // k c_k r^{k-1} e^{ikθ}; the e^{-iθ} factor is applied afterwards.
        let mut rk1 = T::one();
        for (k, &c) in coeffs.iter().enumerate().take(self.n).skip(1) {
            buf[k] = c * (T::from_usize_lossy(k) * rk1);
            rk1 = rk1 * r;
        }
        self.inverse(&mut buf);
        let n = self.n;
        for (j, v) in buf.iter_mut().enumerate() {
            *v = *v * crate::grid::node::<T>(n, j).conj();
        }
        buf
    }
}

/// Result of [`analyze`]: Taylor part plus the energy of the discarded
/// negative frequencies.
#[derive(Debug, Clone)]
pub struct Analysis<T: Scalar> {
    pub coeffs: TaylorCoefficients<T>,
    pub analyticity_defect: T,
}

/// Discrete Fourier analysis keeping indices `0..=n/2` as Taylor coefficients.
pub fn analyze<T: Scalar>(grid: &BoundaryGrid<T>) -> Analysis<T> {
    analyze_with(&Plan::new(grid.n()), grid.values())
}

pub fn analyze_with<T: Scalar>(plan: &Plan<T>, values: &[Cplx<T>]) -> Analysis<T> {
    let n = plan.n();
    let all = plan.coefficients(values);
    let half = n / 2;
    let defect = all[half + 1..].iter().map(|c| c.norm_sqr()).sum::<T>();
    Analysis {
        coeffs: TaylorCoefficients::new(all[..=half].to_vec()),
        analyticity_defect: defect,
    }
}

/// Taylor coefficients (indices `0..=n/2`) of the Herglotz integral
/// `(1/2π)∫ (e^{iθ}+z)/(e^{iθ}-z) u(θ) dθ` under the trapezoid rule.
///
/// On the grid nodes the resulting series has real part exactly `u_j` and
/// imaginary part equal to the discrete conjugate function (multiplier `-i·sgn k`).
pub fn herglotz_coefficients<T: Scalar>(plan: &Plan<T>, u: &[T]) -> Vec<Cplx<T>> {
    let n = plan.n();
    let values: Vec<Cplx<T>> = u.iter().map(|&x| Cplx::new(x, T::zero())).collect();
    let hat = plan.coefficients(&values);
    let half = n / 2;
    let two = T::lit(2.0);
    let mut c = Vec::with_capacity(half + 1);
    c.push(Cplx::new(hat[0].re, T::zero()));
    for h in &hat[1..half] {
        c.push(*h * two);
    }
    c.push(hat[half]);
    c
}

/// Discrete conjugate function of real samples (the imaginary part of the
/// analytic extension whose real part is `u`, normalized to vanish at the origin).
pub fn conjugate<T: Scalar>(plan: &Plan<T>, u: &[T]) -> Vec<T> {
    let c = herglotz_coefficients(plan, u);
    plan.synthesize_on_circle(&c, T::one())
        .into_iter()
        .map(|v| v.im)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::node;

    #[test]
    fn pure_mode() {
        let g = BoundaryGrid::<f64>::from_fn(64, |z| z).unwrap();
        let a = analyze(&g);
        for (j, c) in a.coeffs.coeffs().iter().enumerate() {
            let want = if j == 1 { 1.0 } else { 0.0 };
            assert!((c - Cplx::new(want, 0.0)).norm() < 1e-14, "j={j}");
        }
        assert!(a.analyticity_defect < 1e-28);
    }

    #[test]
    fn constant() {
        let g = BoundaryGrid::<f64>::from_fn(32, |_| Cplx::new(3.0, 0.0)).unwrap();
        let a = analyze(&g);
        assert!((a.coeffs.coeffs()[0].re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn anti_analytic_mode_is_all_defect() {
        let g = BoundaryGrid::<f64>::from_fn(64, |z| z.conj()).unwrap();
        let a = analyze(&g);
        assert!(a.coeffs.coeffs().iter().all(|c| c.norm() < 1e-14));
        assert!((a.analyticity_defect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_of_cosine_is_sine() {
        let n = 128;
        let plan = Plan::<f64>::new(n);
        let u: Vec<f64> = (0..n).map(|j| (3.0 * crate::grid::angle::<f64>(n, j)).cos()).collect();
        let v = conjugate(&plan, &u);
        for j in 0..n {
            let want = (3.0 * crate::grid::angle::<f64>(n, j)).sin();
            assert!((v[j] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_synthesis_matches_horner() {
        let n = 64;
        let plan = Plan::<f64>::new(n);
        let c = vec![
            Cplx::new(1.0, 0.5),
            Cplx::new(-0.25, 0.0),
            Cplx::new(0.0, 2.0),
            Cplx::new(0.3, -0.1),
        ];
        let t = TaylorCoefficients::new(c.clone());
        let r = 0.7;
        let d = plan.synthesize_derivative_on_circle(&c, r);
        let v = plan.synthesize_on_circle(&c, r);
        for j in 0..n {
            let z = node::<f64>(n, j) * r;
            assert!((d[j] - t.derivative_at(z)).norm() < 1e-13);
            assert!((v[j] - t.eval(z)).norm() < 1e-13);
        }
    }
}
