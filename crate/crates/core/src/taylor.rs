//! Taylor coefficient arrays and their evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Scalar};

/// Default relative tail tolerance for the decay diagnostic.
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Coefficients `a_0..a_K` of a polynomial / truncated power series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TaylorCoefficients<T: Scalar> {
    coeffs: Vec<Cplx<T>>,
}

impl<T: Scalar> TaylorCoefficients<T> {
    /// An empty input becomes the zero constant.
    pub fn new(mut coeffs: Vec<Cplx<T>>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Cplx::new(T::zero(), T::zero()));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Cplx::new(c, T::zero())).collect())
    }

    pub fn constant(c: Cplx<T>) -> Self {
        Self::new(vec![c])
    }

    #[inline]
    pub fn coeffs(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `|a_K|`.
    pub fn tail_magnitude(&self) -> T {
        self.coeffs.last().map(|c| c.norm()).unwrap_or_else(T::zero)
    }

    /// Whether `|a_K| > tail_tol · max_j |a_j|`.
    pub fn tail_flagged(&self, tail_tol: T) -> bool {
        let max = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        self.tail_magnitude() > tail_tol * max
    }

    /// Horner evaluation without a domain check.
    pub fn eval(&self, z: Cplx<T>) -> Cplx<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Cplx::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
    }

    pub fn derivative_at(&self, z: Cplx<T>) -> Cplx<T> {
        let mut acc = Cplx::new(T::zero(), T::zero());
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * T::from_usize_lossy(k);
        }
        acc
    }

    /// Coefficients of the derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize_lossy(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Coefficientwise linear combination `self + s·other` (lengths padded).
    pub fn axpy(&self, s: Cplx<T>, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Cplx::new(T::zero(), T::zero());
        Self::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + other.coeffs.get(k).copied().unwrap_or(zero) * s
                })
                .collect(),
        )
    }
}

/// Evaluates `Σ a_j z^j` on the closed disc.
pub fn synthesize<T: Scalar>(c: &TaylorCoefficients<T>, z: Cplx<T>) -> Result<Cplx<T>> {
    let r = z.norm();
    if r > T::one() + T::epsilon() * T::lit(16.0) {
        return Err(Error::OutsideDisc(r.to_f64_lossy()));
    }
    Ok(c.eval(z))
}

/// Coefficients of `exp(h)` truncated to the length of `h`, via the
/// recurrence `k b_k = Σ_{j=1}^{k} j h_j b_{k-j}`.
pub fn series_exp<T: Scalar>(h: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let len = h.len();
    if len == 0 {
        return Vec::new();
    }
    let weighted: Vec<Cplx<T>> = h
        .iter()
        .enumerate()
        .map(|(j, &c)| c * T::from_usize_lossy(j))
        .collect();
    let mut b = Vec::with_capacity(len);
    b.push(h[0].exp());
    for k in 1..len {
        let mut re = T::zero();
        let mut im = T::zero();
        for j in 1..=k {
            let w = weighted[j];
            let p = b[k - j];
            re += w.re * p.re - w.im * p.im;
            im += w.re * p.im + w.im * p.re;
        }
        let inv = T::one() / T::from_usize_lossy(k);
        b.push(Cplx::new(re * inv, im * inv));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn synthesize_examples() {
        let t = TaylorCoefficients::from_real(&[0.0, 1.0]);
        assert!((synthesize(&t, c(0.0, 0.5)).unwrap() - c(0.0, 0.5)).norm() < 1e-15);
        let t = TaylorCoefficients::from_real(&[2.0, 1.0]);
        assert!((synthesize(&t, c(-1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let t = TaylorCoefficients::from_real(&[1.0, 1.0, 1.0]);
        assert!((synthesize(&t, c(0.5, 0.0)).unwrap() - c(1.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn synthesize_rejects_outside() {
        let t = TaylorCoefficients::from_real(&[1.0]);
        assert!(matches!(synthesize(&t, c(1.1, 0.0)), Err(Error::OutsideDisc(_))));
    }

    #[test]
    fn series_exp_of_linear() {
        // exp(z) = Σ z^k / k!
        let mut h = vec![c(0.0, 0.0); 12];
        h[1] = c(1.0, 0.0);
        let b = series_exp(&h);
        let mut fact = 1.0;
        for (k, bk) in b.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((bk.re - 1.0 / fact).abs() < 1e-15 && bk.im.abs() < 1e-15);
        }
    }

    #[test]
    fn series_exp_of_log_affine() {
        // log(2+z) = log 2 + Σ (-1)^{k+1} z^k/(k 2^k); exp gives [2, 1, 0, ...]
        let mut h = vec![c(2f64.ln(), 0.0)];
        for k in 1..40 {
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            h.push(c(s / (k as f64 * 2f64.powi(k)), 0.0));
        }
        let b = series_exp(&h);
        assert!((b[0].re - 2.0).abs() < 1e-13);
        assert!((b[1].re - 1.0).abs() < 1e-13);
        assert!(b[2..].iter().all(|x| x.norm() < 1e-11));
    }

    #[test]
    fn tail_diagnostic() {
        let t = TaylorCoefficients::from_real(&[1.0, 0.5, 1e-9]);
        assert!(!t.tail_flagged(1e-6));
        let t = TaylorCoefficients::from_real(&[1.0, 0.5, 1e-3]);
        assert!(t.tail_flagged(1e-6));
    }
}
