//! Outer functions, localized outer factors, the derivative kernel `g_Γ`,
//! inner–outer splitting and outer powers.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::grid::{check_grid_size, node, BoundaryGrid};
use crate::poisson::poisson_at;
use crate::scalar::{Cplx, Scalar};
use crate::sets::{ArcSet, BoundaryPointSet};
use crate::spectral::{analyze_with, herglotz_coefficients, Plan};
use crate::taylor::{series_exp, TaylorCoefficients};

/// Default clamp floor `Λ`: `|f|` is floored at `e^{-Λ}`.
pub const DEFAULT_CLAMP: f64 = 30.0;
/// Largest clamped-node fraction accepted for outer reconstruction.
pub const MAX_CLAMPED_FRACTION: f64 = 0.25;
/// Largest factorization defect accepted by [`inner_outer_split`].
pub const MAX_FACTORIZATION_DEFECT: f64 = 0.05;

/// Width `δ_eval = 10/n` of the band near the circle excluded from direct quadrature.
pub fn delta_eval<T: Scalar>(n: usize) -> T {
    T::lit(10.0) / T::from_usize_lossy(n)
}

fn check_interior<T: Scalar>(z: Cplx<T>, n: usize) -> Result<()> {
    let delta = delta_eval::<T>(n);
    let r = z.norm();
    if r > T::one() - delta {
        return Err(Error::TooCloseToBoundary {
            radius: r.to_f64_lossy(),
            delta: delta.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Integration set for Herglotz-type integrals. Node `j` enters with the
/// fraction of its cell covered by the set, so that the weights of `Γ` and
/// `T \ Γ` add up to one.
#[derive(Debug, Clone, PartialEq)]
pub enum Support<T: Scalar> {
    Full,
    Arcs(ArcSet<T>),
    /// `T \ Γ`.
    Complement(ArcSet<T>),
}

impl<T: Scalar> Support<T> {
    pub fn weights(&self, n: usize) -> Vec<T> {
        match self {
            Support::Full => vec![T::one(); n],
            Support::Arcs(a) => a.coverage(n),
            Support::Complement(a) => a.coverage(n).into_iter().map(|w| T::one() - w).collect(),
        }
    }

    /// Nodes with positive weight.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        self.weights(n).into_iter().map(|w| w > T::lit(1e-12)).collect()
    }
}

impl<T: Scalar> From<ArcSet<T>> for Support<T> {
    fn from(a: ArcSet<T>) -> Self {
        Support::Arcs(a)
    }
}

impl<T: Scalar> From<&ArcSet<T>> for Support<T> {
    fn from(a: &ArcSet<T>) -> Self {
        Support::Arcs(a.clone())
    }
}

/// Samples of `log|f(e^{iθ_j})|`, floored at `-Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogModulus<T: Scalar> {
    values: Vec<T>,
    quadrature: Vec<T>,
    clamp: T,
    clamped: Vec<bool>,
}

impl<T: Scalar> LogModulus<T> {
    /// Floors raw log-moduli (which may be `-∞`) at `-clamp`.
    pub fn from_log_values(raw: Vec<T>, clamp: T) -> Result<Self> {
        check_grid_size(raw.len())?;
        if !(clamp > T::zero()) {
            return Err(Error::InvalidParameter("clamp must be positive".into()));
        }
        let mut clamped = vec![false; raw.len()];
        let mut values = raw;
        for (v, c) in values.iter_mut().zip(clamped.iter_mut()) {
            if v.is_nan() || *v == T::infinity() {
                return Err(Error::NonFinite);
            }
            if *v <= -clamp {
                *v = -clamp;
                *c = true;
            }
        }
        let quadrature = singularity_corrected(&values, clamp);
        Ok(Self {
            values,
            quadrature,
            clamp,
            clamped,
        })
    }

    pub fn from_moduli(moduli: &[T], clamp: T) -> Result<Self> {
        Self::from_log_values(moduli.iter().map(|m| m.ln()).collect(), clamp)
    }

    pub fn from_grid(grid: &BoundaryGrid<T>, clamp: T) -> Result<Self> {
        Self::from_log_values(grid.values().iter().map(|v| v.norm().ln()).collect(), clamp)
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Values for interior quadrature; see [`singularity_corrected`].
    #[inline]
    pub fn quadrature(&self) -> &[T] {
        &self.quadrature
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn clamp(&self) -> T {
        self.clamp
    }

    pub fn clamped_mask(&self) -> &[bool] {
        &self.clamped
    }

    pub fn clamped_fraction(&self) -> T {
        T::from_usize_lossy(self.clamped.iter().filter(|&&c| c).count())
            / T::from_usize_lossy(self.n())
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Values weighted by the support.
    pub fn masked(&self, support: &Support<T>) -> Vec<T> {
        weighted(&self.values, support)
    }

    /// Quadrature values weighted by the support.
    pub fn masked_quadrature(&self, support: &Support<T>) -> Vec<T> {
        weighted(&self.quadrature, support)
    }

    /// `(masked, masked_quadrature)`, the density pair of `f_Γ`.
    pub fn density_pair(&self, support: &Support<T>) -> (Vec<T>, Vec<T>) {
        let w = support.weights(self.n());
        let apply = |v: &[T]| v.iter().zip(&w).map(|(&x, &c)| x * c).collect();
        (apply(&self.values), apply(&self.quadrature))
    }

    fn check_usable(&self) -> Result<()> {
        let frac = self.clamped_fraction();
        if frac >= T::lit(MAX_CLAMPED_FRACTION) {
            return Err(Error::DegenerateModulus(frac.to_f64_lossy()));
        }
        Ok(())
    }
}

fn weighted<T: Scalar>(values: &[T], support: &Support<T>) -> Vec<T> {
    support
        .weights(values.len())
        .into_iter()
        .zip(values)
        .map(|(w, &v)| v * w)
        .collect()
}

/// Real boundary density `u` of a Herglotz potential
/// `h(z) = (1/2π)∫ (e^{iθ}+z)/(e^{iθ}-z) u(θ) dθ`, with its Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T: Scalar> {
    density: Vec<T>,
    quadrature: Vec<T>,
    coeffs: Vec<Cplx<T>>,
}

/// Node values for interior quadrature of a density with isolated clamped
/// log singularities.
///
/// A node at least `Λ/2` below both neighbours marks a zero of `f` at a grid
/// node. Its value is replaced by the cell average of `β ln|t| + c` fitted to
/// the two neighbours on each side, which keeps the trapezoid rule consistent
/// with an integrable logarithmic singularity instead of adding a spike of
/// mass `Λ/n`. Runs of clamped nodes are left alone.
pub fn singularity_corrected<T: Scalar>(u: &[T], clamp: T) -> Vec<T> {
    let n = u.len();
    let mut out = u.to_vec();
    if n < 5 {
        return out;
    }
    let drop = clamp * T::lit(0.5);
    for j in 0..n {
        let at = |k: isize| u[(j as isize + k).rem_euclid(n as isize) as usize];
        let (l1, r1, l2, r2) = (at(-1), at(1), at(-2), at(2));
        if u[j] > l1 - drop || u[j] > r1 - drop {
            continue;
        }
        let near = (l1 + r1) * T::lit(0.5);
        let far = (l2 + r2) * T::lit(0.5);
        let ln2 = T::lit(std::f64::consts::LN_2);
        let beta = ((far - near) / ln2).max(T::zero());
        // the mean of β ln|t| over |t| < h/2 is (1 + ln 2)β below its value at h
        out[j] = near - beta * (T::one() + ln2);
    }
    out
}

impl<T: Scalar> Potential<T> {
    fn new(plan: &Plan<T>, density: Vec<T>, quadrature: Vec<T>) -> Self {
        let coeffs = herglotz_coefficients(plan, &quadrature);
        Self {
            density,
            quadrature,
            coeffs,
        }
    }

    /// Boundary log-modulus (clamped).
    #[inline]
    pub fn density(&self) -> &[T] {
        &self.density
    }

    /// Node values used for interior evaluation; see [`singularity_corrected`].
    #[inline]
    pub fn quadrature_density(&self) -> &[T] {
        &self.quadrature
    }

    /// Taylor coefficients of `h`.
    #[inline]
    pub fn coeffs(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    /// Trapezoid evaluation of `h(z)`.
    pub fn eval(&self, z: Cplx<T>) -> Cplx<T> {
        herglotz_sum(&self.quadrature, z, |_| true)
    }

    /// Trapezoid evaluation of `h'(z)`.
    pub fn derivative(&self, z: Cplx<T>) -> Cplx<T> {
        kernel_sum(&self.quadrature, z, |_| true)
    }
}

fn herglotz_sum<T: Scalar>(u: &[T], z: Cplx<T>, keep: impl Fn(usize) -> bool) -> Cplx<T> {
    let n = u.len();
    let mut acc = Cplx::new(T::zero(), T::zero());
    for (j, &v) in u.iter().enumerate() {
        if v == T::zero() || !keep(j) {
            continue;
        }
        let e = node::<T>(n, j);
        acc = acc + (e + z) / (e - z) * v;
    }
    acc / T::from_usize_lossy(n)
}

fn kernel_sum<T: Scalar>(u: &[T], z: Cplx<T>, keep: impl Fn(usize) -> bool) -> Cplx<T> {
    let n = u.len();
    let mut acc = Cplx::new(T::zero(), T::zero());
    for (j, &v) in u.iter().enumerate() {
        if v == T::zero() || !keep(j) {
            continue;
        }
        let e = node::<T>(n, j);
        let d = e - z;
        acc = acc + e / (d * d) * v;
    }
    acc * (T::lit(2.0) / T::from_usize_lossy(n))
}

/// An analytic function on the disc: boundary samples, Taylor coefficients
/// `a_0..a_{n/2}` and, for outer functions, the Herglotz potential.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscFunction<T: Scalar> {
    boundary: BoundaryGrid<T>,
    coeffs: TaylorCoefficients<T>,
    potential: Option<Potential<T>>,
    clamp: T,
}

impl<T: Scalar> DiscFunction<T> {
    /// Coefficients by discrete analysis of the samples; no potential.
    pub fn from_boundary(boundary: BoundaryGrid<T>, clamp: T) -> Self {
        let plan = Plan::new(boundary.n());
        let coeffs = analyze_with(&plan, boundary.values()).coeffs;
        Self {
            boundary,
            coeffs,
            potential: None,
            clamp,
        }
    }

    /// Boundary samples synthesized from coefficients (at most `n/2 + 1` of them).
    pub fn from_taylor(coeffs: TaylorCoefficients<T>, n: usize, clamp: T) -> Result<Self> {
        check_grid_size(n)?;
        if coeffs.coeffs().len() > n / 2 + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients exceed the grid's {} Taylor slots",
                coeffs.coeffs().len(),
                n / 2 + 1
            )));
        }
        let plan = Plan::new(n);
        let values = plan.synthesize_on_circle(coeffs.coeffs(), T::one());
        Ok(Self {
            boundary: BoundaryGrid::from_values(values)?,
            coeffs,
            potential: None,
            clamp,
        })
    }

    /// The outer function `exp(h)` of a real density `u`.
    ///
    /// Boundary samples are `exp` of the discrete analytic signal (modulus
    /// exactly `e^{u_j}`); coefficients are the power-series exponential of the
    /// Herglotz coefficients, so interior values carry no aliasing.
    pub fn from_potential(density: Vec<T>, clamp: T) -> Result<Self> {
        let quadrature = singularity_corrected(&density, clamp);
        Self::from_density_pair(density, quadrature, clamp)
    }

    /// As [`from_potential`](Self::from_potential) with explicit interior
    /// quadrature values (boundary modulus stays `e^{density}`).
    pub fn from_density_pair(density: Vec<T>, quadrature: Vec<T>, clamp: T) -> Result<Self> {
        let n = density.len();
        check_grid_size(n)?;
        if quadrature.len() != n {
            return Err(Error::GridMismatch(n, quadrature.len()));
        }
        if density.iter().chain(&quadrature).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let plan = Plan::new(n);
        let potential = Potential::new(&plan, density, quadrature);
        let h_boundary = plan.synthesize_on_circle(potential.coeffs(), T::one());
        let values: Vec<Cplx<T>> = h_boundary
            .iter()
            .zip(potential.density())
            .map(|(h, &u)| Cplx::from_polar(u.exp(), h.im))
            .collect();
        let coeffs = TaylorCoefficients::new(series_exp(potential.coeffs()));
        Ok(Self {
            boundary: BoundaryGrid::from_values(values)?,
            coeffs,
            potential: Some(potential),
            clamp,
        })
    }

    pub fn constant(c: Cplx<T>, n: usize, clamp: T) -> Result<Self> {
        Self::from_taylor(TaylorCoefficients::constant(c), n, clamp)
    }

    /// Reassembles a function from stored parts. When `has_potential` is set
    /// the potential density is the clamped boundary log-modulus.
    pub fn from_parts(
        boundary: BoundaryGrid<T>,
        coeffs: TaylorCoefficients<T>,
        has_potential: bool,
        clamp: T,
    ) -> Result<Self> {
        let potential = if has_potential {
            let lm = LogModulus::from_grid(&boundary, clamp)?;
            Some(Potential::new(&Plan::new(boundary.n()), lm.values().to_vec(), lm.quadrature().to_vec()))
        } else {
            None
        };
        Ok(Self {
            boundary,
            coeffs,
            potential,
            clamp,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.boundary.n()
    }

    #[inline]
    pub fn boundary(&self) -> &BoundaryGrid<T> {
        &self.boundary
    }

    #[inline]
    pub fn coeffs(&self) -> &TaylorCoefficients<T> {
        &self.coeffs
    }

    #[inline]
    pub fn potential(&self) -> Option<&Potential<T>> {
        self.potential.as_ref()
    }

    #[inline]
    pub fn has_potential(&self) -> bool {
        self.potential.is_some()
    }

    #[inline]
    pub fn clamp(&self) -> T {
        self.clamp
    }

    /// Value through the Taylor coefficients.
    #[inline]
    pub fn eval(&self, z: Cplx<T>) -> Cplx<T> {
        self.coeffs.eval(z)
    }

    #[inline]
    pub fn derivative_at(&self, z: Cplx<T>) -> Cplx<T> {
        self.coeffs.derivative_at(z)
    }

    /// `exp(h(z))` with `h` by the trapezoid rule; outer functions only.
    pub fn eval_outer(&self, z: Cplx<T>) -> Result<Cplx<T>> {
        let p = self.potential.as_ref().ok_or(Error::MissingPotential)?;
        check_interior(z, self.n())?;
        Ok(p.eval(z).exp())
    }

    /// `|f(z)| = exp(P[u](z))` with the panel-integrated Poisson rule; valid
    /// on the whole open disc for outer functions.
    pub fn modulus_from_potential(&self, z: Cplx<T>) -> Result<T> {
        let p = self.potential.as_ref().ok_or(Error::MissingPotential)?;
        Ok(poisson_at(p.quadrature_density(), z).exp())
    }

    /// Clamped log-modulus of the boundary samples (the potential density for
    /// outer functions).
    pub fn log_modulus(&self) -> Result<LogModulus<T>> {
        match &self.potential {
            Some(p) => LogModulus::from_log_values(p.density().to_vec(), self.clamp),
            None => LogModulus::from_grid(&self.boundary, self.clamp),
        }
    }

    /// Largest relative mismatch between synthesized coefficients and the
    /// boundary samples over nodes where `|f| > e^{-Λ/2}`.
    pub fn synthesis_defect(&self) -> T {
        let plan = Plan::new(self.n());
        let synth = plan.synthesize_on_circle(self.coeffs.coeffs(), T::one());
        let floor = (-self.clamp * T::lit(0.5)).exp();
        synth
            .iter()
            .zip(self.boundary.values())
            .filter(|(_, b)| b.norm() > floor)
            .map(|(s, b)| (s - b).norm() / b.norm())
            .fold(T::zero(), T::max)
    }

    /// `c·f`; a positive real factor keeps the potential.
    pub fn scale(&self, c: Cplx<T>) -> Result<Self> {
        if c.im == T::zero() && c.re > T::zero() {
            if let Some(p) = &self.potential {
                let shift = c.re.ln();
                return Self::from_density_pair(
                    p.density().iter().map(|&u| u + shift).collect(),
                    p.quadrature_density().iter().map(|&u| u + shift).collect(),
                    self.clamp,
                );
            }
        }
        Ok(Self {
            boundary: self.boundary.map(|v| v * c)?,
            coeffs: self.coeffs.scale(c),
            potential: None,
            clamp: self.clamp,
        })
    }

    /// `self + s·other`; the result carries no potential.
    pub fn axpy(&self, s: Cplx<T>, other: &Self) -> Result<Self> {
        Ok(Self {
            boundary: self.boundary.zip_with(&other.boundary, |a, b| a + b * s)?,
            coeffs: self.coeffs.axpy(s, &other.coeffs),
            potential: None,
            clamp: self.clamp,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Cplx::new(-T::one(), T::zero()), other)
    }

    /// Pointwise product. Two outer factors multiply through their potentials;
    /// otherwise coefficients come from the truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch(self.n(), other.n()));
        }
        if let (Some(p), Some(q)) = (&self.potential, &other.potential) {
            let add = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| *x + *y).collect();
            return Self::from_density_pair(
                add(p.density(), q.density()),
                add(p.quadrature_density(), q.quadrature_density()),
                self.clamp,
            );
        }
        let boundary = self.boundary.zip_with(&other.boundary, |a, b| a * b)?;
        let coeffs = truncated_product(self.coeffs.coeffs(), other.coeffs.coeffs(), self.n());
        Ok(Self {
            boundary,
            coeffs: TaylorCoefficients::new(coeffs),
            potential: None,
            clamp: self.clamp,
        })
    }

    /// Modulus below which a boundary sample counts as a zero: `e^{-Λ/2}`.
    pub fn vanishing_threshold(&self) -> T {
        (-self.clamp * T::lit(0.5)).exp()
    }

    /// One point per circular run of nodes with `|f| ≤ e^{-Λ/2}`, placed at the
    /// smallest sample of the run.
    pub fn boundary_zeros(&self) -> BoundaryPointSet<T> {
        let n = self.n();
        let thr = self.vanishing_threshold();
        let small: Vec<bool> = self.boundary.values().iter().map(|v| v.norm() <= thr).collect();
        if small.iter().all(|&s| !s) {
            return BoundaryPointSet::empty();
        }
        // start scanning right after a non-small node so runs do not wrap
        let start = (0..n).find(|&j| !small[j]).map_or(0, |j| j + 1);
        let mut points = Vec::new();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let j = (start + s) % n;
            if small[j] {
                let m = self.boundary.values()[j].norm();
                if best.map_or(true, |b| m < self.boundary.values()[b].norm()) {
                    best = Some(j);
                }
            } else if let Some(b) = best.take() {
                points.push(self.boundary.angle(b));
            }
        }
        if let Some(b) = best {
            points.push(self.boundary.angle(b));
        }
        BoundaryPointSet::new(points).expect("grid angles are distinct")
    }

    /// `f / B` through the boundary samples (`B` is unimodular on the circle).
    pub fn divide_inner(&self, b: &BlaschkeProduct<T>) -> Result<Self> {
        let n = self.n();
        let values = self
            .boundary
            .values()
            .iter()
            .enumerate()
            .map(|(j, &v)| v / b.eval(node(n, j)))
            .collect();
        Ok(Self::from_boundary(BoundaryGrid::from_values(values)?, self.clamp))
    }
}

/// First `n/2 + 1` coefficients of the product of two series (FFT of size `2n`).
fn truncated_product<T: Scalar>(a: &[Cplx<T>], b: &[Cplx<T>], n: usize) -> Vec<Cplx<T>> {
    let len = n / 2 + 1;
    let m = 2 * n;
    let plan = Plan::<T>::new(m);
    let zero = Cplx::new(T::zero(), T::zero());
    let mut fa = vec![zero; m];
    let mut fb = vec![zero; m];
    fa[..a.len().min(len)].copy_from_slice(&a[..a.len().min(len)]);
    fb[..b.len().min(len)].copy_from_slice(&b[..b.len().min(len)]);
    plan.forward(&mut fa);
    plan.forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * *y;
    }
    plan.inverse(&mut fa);
    let scale = T::one() / T::from_usize_lossy(m);
    fa.truncate(len);
    fa.into_iter().map(|v| v * scale).collect()
}

/// `h_Γ(z) = (1/2π)∫_Γ (e^{iθ}+z)/(e^{iθ}-z) log|f(e^{iθ})| dθ` by the trapezoid rule.
pub fn herglotz_potential<T: Scalar>(
    log_modulus: &LogModulus<T>,
    support: &Support<T>,
    z: Cplx<T>,
) -> Result<Cplx<T>> {
    check_interior(z, log_modulus.n())?;
    Ok(herglotz_sum(&log_modulus.masked_quadrature(support), z, |_| true))
}

/// `O_f` (full support) or the localized factor `f_Γ`.
pub fn outer_from_modulus<T: Scalar>(
    log_modulus: &LogModulus<T>,
    support: &Support<T>,
) -> Result<DiscFunction<T>> {
    log_modulus.check_usable()?;
    let (density, quadrature) = log_modulus.density_pair(support);
    DiscFunction::from_density_pair(density, quadrature, log_modulus.clamp())
}

/// `f_Γ^N = exp(N·h_Γ)`.
pub fn localized_outer_power<T: Scalar>(
    log_modulus: &LogModulus<T>,
    arcs: &ArcSet<T>,
    power: u32,
) -> Result<DiscFunction<T>> {
    if power == 0 {
        return Err(Error::InvalidParameter("power N must be at least 1".into()));
    }
    log_modulus.check_usable()?;
    let scale = T::from_u32(power).expect("u32 representable");
    let (density, quadrature) = log_modulus.density_pair(&Support::Arcs(arcs.clone()));
    let times = |v: Vec<T>| v.into_iter().map(|x| x * scale).collect();
    DiscFunction::from_density_pair(times(density), times(quadrature), log_modulus.clamp())
}

/// `g_Γ(z) = (1/π)∫_Γ e^{iθ}/(e^{iθ}-z)² log|f(e^{iθ})| dθ` by the trapezoid rule.
pub fn g_kernel<T: Scalar>(
    log_modulus: &LogModulus<T>,
    support: &Support<T>,
    z: Cplx<T>,
) -> Result<Cplx<T>> {
    check_interior(z, log_modulus.n())?;
    Ok(kernel_sum(&log_modulus.masked_quadrature(support), z, |_| true))
}

/// [`g_kernel`] at many points, weighting the density once.
pub fn g_kernel_at<T: Scalar>(
    log_modulus: &LogModulus<T>,
    support: &Support<T>,
    points: &[Cplx<T>],
) -> Result<Vec<Cplx<T>>> {
    for &z in points {
        check_interior(z, log_modulus.n())?;
    }
    let u = log_modulus.masked_quadrature(support);
    Ok(points.iter().map(|&z| kernel_sum(&u, z, |_| true)).collect())
}

/// Result of [`inner_outer_split`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Factorization<T: Scalar> {
    pub inner: DiscFunction<T>,
    pub outer: DiscFunction<T>,
    /// `max ||inner(ξ_j)| - 1|` over unclamped nodes, with `inner` synthesized
    /// from its coefficients.
    pub defect: T,
    /// `max |inner|` on the circle of radius `1 - δ_eval`.
    pub interior_max: T,
    pub clamped_fraction: T,
}

/// `f = inner · outer` with `outer = O_f`.
pub fn inner_outer_split<T: Scalar>(f: &DiscFunction<T>) -> Result<Factorization<T>> {
    let n = f.n();
    if f.boundary().max_abs() == T::zero() {
        return Err(Error::ZeroFunction);
    }
    let lm = LogModulus::from_grid(f.boundary(), f.clamp())?;
    let outer = outer_from_modulus(&lm, &Support::Full)?;
    let clamped = lm.clamped_mask();
    let mut ratio: Vec<Option<Cplx<T>>> = f
        .boundary()
        .values()
        .iter()
        .zip(outer.boundary().values())
        .zip(clamped)
        .map(|((&a, &b), &c)| if c { None } else { Some(a / b) })
        .collect();
    fill_clamped_phases(&mut ratio);
    let values: Vec<Cplx<T>> = ratio.into_iter().map(|v| v.expect("filled")).collect();
    let inner = DiscFunction::from_boundary(BoundaryGrid::from_values(values)?, f.clamp());

    let plan = Plan::new(n);
    let synth = plan.synthesize_on_circle(inner.coeffs().coeffs(), T::one());
    let defect = synth
        .iter()
        .zip(clamped)
        .filter(|(_, &c)| !c)
        .map(|(v, _)| (v.norm() - T::one()).abs())
        .fold(T::zero(), T::max);
    let r = T::one() - delta_eval::<T>(n);
    let interior_max = plan
        .synthesize_on_circle(inner.coeffs().coeffs(), r)
        .iter()
        .fold(T::zero(), |m, v| m.max(v.norm()));
    if defect > T::lit(MAX_FACTORIZATION_DEFECT) {
        return Err(Error::FactorizationDefect(defect.to_f64_lossy()));
    }
    Ok(Factorization {
        inner,
        outer,
        defect,
        interior_max,
        clamped_fraction: lm.clamped_fraction(),
    })
}

/// Replaces missing unimodular samples by the normalized mean of the nearest
/// known neighbours on either side.
fn fill_clamped_phases<T: Scalar>(vals: &mut [Option<Cplx<T>>]) {
    let n = vals.len();
    let known: Vec<usize> = (0..n).filter(|&j| vals[j].is_some()).collect();
    if known.is_empty() {
        vals.iter_mut().for_each(|v| *v = Some(Cplx::new(T::one(), T::zero())));
        return;
    }
    let snapshot: Vec<Option<Cplx<T>>> = vals.to_vec();
    for j in 0..n {
        if snapshot[j].is_some() {
            continue;
        }
        let next = (1..n).map(|s| (j + s) % n).find(|&k| snapshot[k].is_some());
        let prev = (1..n).map(|s| (j + n - s) % n).find(|&k| snapshot[k].is_some());
        let unit = |v: Cplx<T>| if v.norm() > T::zero() { v / v.norm() } else { Cplx::new(T::one(), T::zero()) };
        let mut acc = Cplx::new(T::zero(), T::zero());
        for k in [prev, next].into_iter().flatten() {
            acc = acc + unit(snapshot[k].expect("known"));
        }
        vals[j] = Some(unit(acc));
    }
}

/// `f^ρ = exp(ρ·h)` for an outer `f`.
pub fn outer_power<T: Scalar>(f: &DiscFunction<T>, rho: T) -> Result<DiscFunction<T>> {
    let p = f.potential().ok_or(Error::MissingPotential)?;
    if !(rho >= T::zero()) {
        return Err(Error::InvalidParameter("exponent must be nonnegative".into()));
    }
    DiscFunction::from_density_pair(
        p.density().iter().map(|&u| u * rho).collect(),
        p.quadrature_density().iter().map(|&u| u * rho).collect(),
        f.clamp(),
    )
}

#[derive(Serialize, Deserialize)]
struct DiscFunctionJson {
    n: usize,
    boundary_re: Vec<f64>,
    boundary_im: Vec<f64>,
    coeffs_re: Vec<f64>,
    coeffs_im: Vec<f64>,
    has_potential: bool,
    lambda: f64,
}

impl<T: Scalar> Serialize for DiscFunction<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let b = self.boundary.values();
        let c = self.coeffs.coeffs();
        DiscFunctionJson {
            n: self.n(),
            boundary_re: b.iter().map(|v| v.re.to_f64_lossy()).collect(),
            boundary_im: b.iter().map(|v| v.im.to_f64_lossy()).collect(),
            coeffs_re: c.iter().map(|v| v.re.to_f64_lossy()).collect(),
            coeffs_im: c.iter().map(|v| v.im.to_f64_lossy()).collect(),
            has_potential: self.has_potential(),
            lambda: self.clamp.to_f64_lossy(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for DiscFunction<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DiscFunctionJson::deserialize(d)?;
        if raw.boundary_re.len() != raw.n
            || raw.boundary_im.len() != raw.n
            || raw.coeffs_re.len() != raw.coeffs_im.len()
        {
            return Err(D::Error::custom("inconsistent array lengths"));
        }
        let boundary = BoundaryGrid::from_values(
            raw.boundary_re
                .iter()
                .zip(&raw.boundary_im)
                .map(|(&re, &im)| Cplx::new(T::lit(re), T::lit(im)))
                .collect(),
        )
        .map_err(D::Error::custom)?;
        let coeffs = TaylorCoefficients::new(
            raw.coeffs_re
                .iter()
                .zip(&raw.coeffs_im)
                .map(|(&re, &im)| Cplx::new(T::lit(re), T::lit(im)))
                .collect(),
        );
        DiscFunction::from_parts(boundary, coeffs, raw.has_potential, T::lit(raw.lambda))
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::angle;

    const N: usize = 1024;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    fn log_affine(n: usize) -> LogModulus<f64> {
        let m: Vec<f64> = (0..n).map(|j| (node::<f64>(n, j) + 2.0).norm()).collect();
        LogModulus::from_moduli(&m, DEFAULT_CLAMP).unwrap()
    }

    fn zero_lm(n: usize) -> LogModulus<f64> {
        LogModulus::from_log_values(vec![0.0; n], DEFAULT_CLAMP).unwrap()
    }

    fn arcs() -> ArcSet<f64> {
        ArcSet::from_endpoints(&[(0.5, 1.5), (3.0, 4.0)]).unwrap()
    }

    #[test]
    fn herglotz_examples() {
        let z = c(0.3, 0.0);
        assert_eq!(herglotz_potential(&zero_lm(N), &Support::Arcs(arcs()), z).unwrap(), c(0.0, 0.0));
        let h = herglotz_potential(&log_affine(N), &Support::Full, c(0.0, 0.0)).unwrap();
        assert!((h - c(2f64.ln(), 0.0)).norm() < 1e-8);
        let h = herglotz_potential(&log_affine(N), &Support::Arcs(ArcSet::empty()), z).unwrap();
        assert_eq!(h, c(0.0, 0.0));
        assert!(matches!(
            herglotz_potential(&log_affine(N), &Support::Full, c(0.999, 0.0)),
            Err(Error::TooCloseToBoundary { .. })
        ));
    }

    #[test]
    fn outer_examples() {
        let lm = LogModulus::from_log_values(vec![1.0; N], DEFAULT_CLAMP).unwrap();
        let f = outer_from_modulus(&lm, &Support::Full).unwrap();
        assert!((f.coeffs().coeffs()[0] - c(1f64.exp(), 0.0)).norm() < 1e-12);
        assert!(f.coeffs().coeffs()[1..].iter().all(|a| a.norm() < 1e-12));

        let f = outer_from_modulus(&log_affine(N), &Support::Full).unwrap();
        let a = f.coeffs().coeffs();
        assert!((a[0] - c(2.0, 0.0)).norm() + (a[1] - c(1.0, 0.0)).norm() < 1e-6);
        assert!(a[2..].iter().map(|x| x.norm_sqr()).sum::<f64>() < 1e-10);

        let f = outer_from_modulus(&log_affine(N), &Support::Arcs(ArcSet::empty())).unwrap();
        assert!((f.eval(c(0.4, 0.2)) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_modulus_rejected() {
        let mut raw = vec![0.0; 64];
        raw[..16].iter_mut().for_each(|v| *v = f64::NEG_INFINITY);
        let lm = LogModulus::from_log_values(raw, DEFAULT_CLAMP).unwrap();
        assert_eq!(lm.clamped_fraction(), 0.25);
        assert!(matches!(outer_from_modulus(&lm, &Support::Full), Err(Error::DegenerateModulus(_))));
    }

    #[test]
    fn localized_power_examples() {
        let lm = log_affine(N);
        let one = localized_outer_power(&lm, &ArcSet::empty(), 7).unwrap();
        assert!((one.eval(c(0.5, -0.3)) - c(1.0, 0.0)).norm() < 1e-14);
        let p1 = localized_outer_power(&lm, &arcs(), 1).unwrap();
        let o1 = outer_from_modulus(&lm, &Support::Arcs(arcs())).unwrap();
        assert_eq!(p1.coeffs(), o1.coeffs());
        let p2 = localized_outer_power(&lm, &arcs(), 2).unwrap();
        for k in 0..50 {
            let z = Cplx::from_polar(0.9 * (k as f64 / 49.0), 0.37 * k as f64);
            assert!((p2.eval(z) - p1.eval(z) * p1.eval(z)).norm() < 1e-8);
        }
        assert!(localized_outer_power(&lm, &arcs(), 0).is_err());
    }

    #[test]
    fn g_kernel_examples() {
        let z = c(0.2, 0.1);
        assert_eq!(g_kernel(&zero_lm(N), &Support::Arcs(arcs()), z).unwrap(), c(0.0, 0.0));
        let g = g_kernel(&log_affine(N), &Support::Full, c(0.0, 0.0)).unwrap();
        assert!((g - c(0.5, 0.0)).norm() < 1e-8);
        assert_eq!(g_kernel(&log_affine(N), &Support::Arcs(ArcSet::empty()), z).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn split_of_outer_and_of_z_times_outer() {
        let f = DiscFunction::from_boundary(
            BoundaryGrid::from_fn(N, |z| z + 2.0).unwrap(),
            DEFAULT_CLAMP,
        );
        let s = inner_outer_split(&f).unwrap();
        assert!(s.defect < 1e-6);
        assert!((s.inner.eval(c(0.3, 0.3)) - c(1.0, 0.0)).norm() < 1e-6);

        let f = DiscFunction::from_boundary(
            BoundaryGrid::from_fn(N, |z| z * (z + 2.0)).unwrap(),
            DEFAULT_CLAMP,
        );
        let s = inner_outer_split(&f).unwrap();
        assert!(s.defect < 1e-6);
        let z = c(0.1, -0.4);
        assert!((s.inner.eval(z) - z).norm() < 1e-6);
        assert!((s.outer.eval(z) - (z + 2.0)).norm() < 1e-6);
        assert!(s.interior_max <= 1.0 + 1e-9);
    }

    #[test]
    fn split_rejects_zero_and_singular() {
        let f = DiscFunction::from_boundary(make_zero(N), DEFAULT_CLAMP);
        assert_eq!(inner_outer_split(&f).unwrap_err(), Error::ZeroFunction);
        // atomic singular inner factor exp(-(1+z)/(1-z)): boundary values spin
        // infinitely often near z = 1 and cannot be resolved.
        let f = DiscFunction::from_boundary(
            BoundaryGrid::from_fn(N, |z| {
                let w = (z + 1.0) / (c(1.0, 0.0) - z);
                if w.is_finite() { (-w).exp() } else { c(0.0, 0.0) }
            })
            .unwrap(),
            DEFAULT_CLAMP,
        );
        assert!(matches!(inner_outer_split(&f), Err(Error::FactorizationDefect(_))));
    }

    fn make_zero(n: usize) -> BoundaryGrid<f64> {
        crate::grid::make_grid(n).unwrap()
    }

    #[test]
    fn outer_power_examples() {
        let f = outer_from_modulus(&log_affine(N), &Support::Full).unwrap();
        let same = outer_power(&f, 1.0).unwrap();
        assert_eq!(same.coeffs(), f.coeffs());
        let one = outer_power(&f, 0.0).unwrap();
        assert!((one.eval(c(0.7, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
        let sq = outer_power(&f, 2.0).unwrap();
        let a = sq.coeffs().coeffs();
        assert!((a[0] - c(4.0, 0.0)).norm() < 1e-8);
        assert!((a[1] - c(4.0, 0.0)).norm() < 1e-8);
        assert!((a[2] - c(1.0, 0.0)).norm() < 1e-8);
        assert!(a[3..].iter().all(|x| x.norm() < 1e-8));
        for j in (0..N).step_by(31) {
            assert!((sq.boundary().values()[j].norm() - f.boundary().values()[j].norm().powi(2)).abs() < 1e-8);
        }
        let plain = DiscFunction::from_boundary(f.boundary().clone(), DEFAULT_CLAMP);
        assert_eq!(outer_power(&plain, 2.0).unwrap_err(), Error::MissingPotential);
    }

    #[test]
    fn json_roundtrip_keeps_shape() {
        let f = outer_from_modulus(&log_affine(64), &Support::Full).unwrap();
        let s = serde_json::to_value(&f).unwrap();
        for key in ["n", "boundary_re", "boundary_im", "coeffs_re", "coeffs_im", "has_potential", "lambda"] {
            assert!(s.get(key).is_some(), "{key}");
        }
        let back: DiscFunction<f64> = serde_json::from_value(s).unwrap();
        assert!(back.has_potential());
        assert!((back.eval(c(0.3, 0.1)) - f.eval(c(0.3, 0.1))).norm() < 1e-12);
    }

    #[test]
    fn boundary_zero_detection() {
        let f = DiscFunction::from_boundary(
            BoundaryGrid::from_fn(64, |z| (c(1.0, 0.0) - z) * (c(1.0, 0.0) + z)).unwrap(),
            DEFAULT_CLAMP,
        );
        let e = f.boundary_zeros();
        assert_eq!(e.points(), &[0.0, std::f64::consts::PI]);
        let g = DiscFunction::from_boundary(BoundaryGrid::from_fn(64, |z| z + 2.0).unwrap(), DEFAULT_CLAMP);
        assert!(g.boundary_zeros().is_empty());
    }

    #[test]
    fn angles_helper_consistent() {
        assert!((angle::<f64>(8, 2) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
