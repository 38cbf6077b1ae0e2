//! Constructive approximation by functions with boundary zeros of high order:
//! convex selection in the Dirichlet metric, pinching factors, the full
//! approximating sequence and the standard-ideal membership predicate.

use std::io::Write;

use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::factorization::{
    delta_eval, inner_outer_split, localized_outer_power, outer_from_modulus, outer_power, DiscFunction,
    LogModulus, Support,
};
use crate::grid::angle;
use crate::norms::aalpha;
use crate::quadrature::AnnularGrid;
use crate::scalar::{Cplx, Scalar};
use crate::sets::{complement_arcs, distance_to_set, tail_arcs, BoundaryPointSet};
use crate::spectral::{analyze_with, Plan};

/// Iteration budget of [`convex_approx`].
pub const DEFAULT_BUDGET: usize = 500;
/// Relative Frank–Wolfe gap at which [`convex_approx`] stops.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Maximal number of `δ` trials in [`pinch_to_tolerance`].
pub const BISECTION_STEPS: usize = 60;
/// Pinching scales below this many grid spacings are not resolved by the grid.
pub const PINCH_MIN_NODES: f64 = 4.0;
/// Refinement steps spent on a bracket once a feasible `δ` is known.
const REFINE_STEPS: usize = 10;

/// Convex weights `c_0..c_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SimplexWeights<T: Scalar> {
    weights: Vec<T>,
}

impl<T: Scalar> SimplexWeights<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w >= T::zero())) {
            return Err(Error::InvalidParameter("weights must be nonnegative".into()));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn vertex(k: usize, i: usize) -> Self {
        let mut weights = vec![T::zero(); k];
        weights[i] = T::one();
        Self { weights }
    }

    #[inline]
    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

/// Result of [`convex_approx`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvexFit<T: Scalar> {
    pub weights: SimplexWeights<T>,
    /// `‖Σ c_i v_i - target‖_D`.
    pub distance: T,
    pub iterations: usize,
    pub converged: bool,
}

/// `Σ (1+k) a_k conj(b_k)`.
pub fn d_inner<T: Scalar>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (x, y))| x * y.conj() * T::from_usize_lossy(k + 1))
        .fold(Cplx::new(T::zero(), T::zero()), |s, v| s + v)
}

fn combination<T: Scalar>(candidates: &[DiscFunction<T>], weights: &[T]) -> Vec<Cplx<T>> {
    let len = candidates.iter().map(|c| c.coeffs().coeffs().len()).max().unwrap_or(0);
    let mut out = vec![Cplx::new(T::zero(), T::zero()); len];
    for (c, &w) in candidates.iter().zip(weights) {
        if w == T::zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(c.coeffs().coeffs()) {
            *o = *o + a * w;
        }
    }
    out
}

fn d_distance<T: Scalar>(a: &[Cplx<T>], b: &[Cplx<T>]) -> T {
    let len = a.len().max(b.len());
    let zero = Cplx::new(T::zero(), T::zero());
    (0..len)
        .map(|k| {
            let d = a.get(k).copied().unwrap_or(zero) - b.get(k).copied().unwrap_or(zero);
            d.norm_sqr() * T::from_usize_lossy(k + 1)
        })
        .sum::<T>()
        .sqrt()
}

/// Minimizes `‖Σ c_i v_i - target‖_D` over the simplex by pairwise
/// conditional-gradient steps with exact line search.
pub fn convex_approx<T: Scalar>(
    candidates: &[DiscFunction<T>],
    target: &DiscFunction<T>,
    budget: usize,
    tol: T,
) -> Result<ConvexFit<T>> {
    let k = candidates.len();
    if k == 0 {
        return Err(Error::NoCandidates);
    }
    if let Some(c) = candidates.iter().find(|c| c.n() != target.n()) {
        return Err(Error::GridMismatch(c.n(), target.n()));
    }
    let vs: Vec<&[Cplx<T>]> = candidates.iter().map(|c| c.coeffs().coeffs()).collect();
    let t = target.coeffs().coeffs();
    let mut gram = vec![vec![T::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let g = d_inner(vs[i], vs[j]).re;
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let b: Vec<T> = vs.iter().map(|v| d_inner(v, t).re).collect();
    let tt = d_inner(t, t).re;
    let scale = if tt > T::zero() { tt } else { T::one() };

    let start = (0..k)
        .min_by(|&i, &j| {
            let qi = gram[i][i] - T::lit(2.0) * b[i];
            let qj = gram[j][j] - T::lit(2.0) * b[j];
            qi.partial_cmp(&qj).expect("finite energies")
        })
        .expect("nonempty");
    let mut c = vec![T::zero(); k];
    c[start] = T::one();
    let mut gc: Vec<T> = (0..k).map(|i| gram[i][start]).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < budget {
        let grad: Vec<T> = (0..k).map(|i| T::lit(2.0) * (gc[i] - b[i])).collect();
        let s = argmin(&grad, |_| true);
        let a = argmax(&grad, |i| c[i] > T::zero());
        let gap = (0..k).map(|i| grad[i] * c[i]).sum::<T>() - grad[s];
        if gap <= tol * scale || s == a {
            converged = true;
            break;
        }
        iterations += 1;
        let slope = grad[s] - grad[a];
        let curv = gram[s][s] + gram[a][a] - T::lit(2.0) * gram[s][a];
        let step = if curv > T::zero() {
            (-slope / (T::lit(2.0) * curv)).min(c[a])
        } else {
            c[a]
        };
        if !(step > T::zero()) {
            converged = true;
            break;
        }
        c[s] += step;
        c[a] -= step;
        if c[a] < T::zero() {
            c[a] = T::zero();
        }
        for (i, g) in gc.iter_mut().enumerate() {
            *g += step * (gram[i][s] - gram[i][a]);
        }
    }
    let total: T = c.iter().copied().sum();
    c.iter_mut().for_each(|w| *w /= total);
    let distance = d_distance(&combination(candidates, &c), t);
    Ok(ConvexFit {
        weights: SimplexWeights::new(c)?,
        distance,
        iterations,
        converged,
    })
}

fn argmin<T: Scalar>(v: &[T], keep: impl Fn(usize) -> bool) -> usize {
    (0..v.len())
        .filter(|&i| keep(i))
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if v[b] <= v[i] => Some(b),
            _ => Some(i),
        })
        .expect("nonempty selection")
}

fn argmax<T: Scalar>(v: &[T], keep: impl Fn(usize) -> bool) -> usize {
    (0..v.len())
        .filter(|&i| keep(i))
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if v[b] >= v[i] => Some(b),
            _ => Some(i),
        })
        .expect("nonempty selection")
}

/// `Σ c_i v_i`; a single active weight returns that candidate unchanged so
/// its potential survives.
pub fn combine<T: Scalar>(candidates: &[DiscFunction<T>], weights: &SimplexWeights<T>) -> Result<DiscFunction<T>> {
    let w = weights.weights();
    let active: Vec<usize> = (0..w.len()).filter(|&i| w[i] > T::zero()).collect();
    if active.len() == 1 {
        return Ok(candidates[active[0]].clone());
    }
    let mut acc = candidates[active[0]].scale(Cplx::new(w[active[0]], T::zero()))?;
    for &i in &active[1..] {
        acc = acc.axpy(Cplx::new(w[i], T::zero()), &candidates[i])?;
    }
    Ok(acc)
}

/// Outer function with boundary modulus `min(1, (d(ξ, E')/δ)^M)`.
pub fn pinching_factor<T: Scalar>(
    points: &BoundaryPointSet<T>,
    order: T,
    delta: T,
    n: usize,
    clamp: T,
) -> Result<DiscFunction<T>> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::InvalidParameter(format!("pinching scale {delta} outside (0, 1]")));
    }
    if !(order >= T::zero()) {
        return Err(Error::InvalidParameter("pinching order must be nonnegative".into()));
    }
    let raw: Vec<T> = (0..n)
        .map(|j| {
            let d = distance_to_set(angle::<T>(n, j), points)?;
            Ok(if d >= delta || order == T::zero() {
                T::zero()
            } else {
                order * (d / delta).ln()
            })
        })
        .collect::<Result<_>>()?;
    let lm = LogModulus::from_log_values(raw, clamp)?;
    if lm.clamped_mask().iter().all(|&c| c) {
        return Err(Error::ClampSaturation);
    }
    outer_from_modulus(&lm, &Support::Full)
}

/// Result of [`pinch_to_tolerance`].
#[derive(Debug, Clone)]
pub struct Pinch<T: Scalar> {
    pub factor: DiscFunction<T>,
    pub delta: T,
    /// `‖F f - f‖_{A_α}`.
    pub error: T,
    pub trials: usize,
}

/// Smallest pinching scale the grid resolves.
pub fn min_pinch_scale<T: Scalar>(n: usize) -> T {
    T::lit(PINCH_MIN_NODES) * T::two_pi() / T::from_usize_lossy(n)
}

/// Nodes nearest to each point of `E`.
pub fn nearest_nodes<T: Scalar>(points: &BoundaryPointSet<T>, n: usize) -> Vec<usize> {
    let h = T::two_pi() / T::from_usize_lossy(n);
    points
        .points()
        .iter()
        .map(|&p| (p / h).round().to_usize().expect("angle in range") % n)
        .collect()
}

/// Largest `δ` (by halving from 1, then bisecting the last bracket) with
/// `‖F_δ f - f‖_{A_α} ≤ ε`. Scales below [`min_pinch_scale`] are not tried.
pub fn pinch_to_tolerance<T: Scalar>(
    f: &DiscFunction<T>,
    points: &BoundaryPointSet<T>,
    order: T,
    eps: T,
    alpha: T,
) -> Result<Pinch<T>> {
    let n = f.n();
    let thr = f.vanishing_threshold();
    for j in nearest_nodes(points, n) {
        let m = f.boundary().values()[j].norm();
        if m > thr {
            return Err(Error::NotVanishing(m.to_f64_lossy()));
        }
    }
    let floor = min_pinch_scale::<T>(n);
    let trial = |delta: T| -> Result<(DiscFunction<T>, T)> {
        let factor = pinching_factor(points, order, delta, n, f.clamp())?;
        let err = aalpha(&factor.mul(f)?.sub(f)?, alpha)?;
        Ok((factor, err))
    };
    let mut trials = 0;
    let mut bad: Option<T> = None;
    let mut delta = T::one();
    let mut best: Option<(T, T)> = None;
    let (good_delta, mut good) = loop {
        trials += 1;
        let (factor, err) = trial(delta)?;
        if best.map_or(true, |(_, e)| err < e) {
            best = Some((delta, err));
        }
        if err <= eps {
            break (delta, (factor, err));
        }
        bad = Some(delta);
        let next = delta * T::lit(0.5);
        if trials >= BISECTION_STEPS || next < floor {
            let (_, e) = best.expect("at least one trial");
            return Err(Error::ToleranceUnreachable {
                target: eps.to_f64_lossy(),
                best: e.to_f64_lossy(),
                steps: trials,
            });
        }
        delta = next;
    };
    let mut lo = good_delta;
    if let Some(mut hi) = bad {
        for _ in 0..REFINE_STEPS {
            if trials >= BISECTION_STEPS {
                break;
            }
            trials += 1;
            let mid = (lo + hi) * T::lit(0.5);
            let (factor, err) = trial(mid)?;
            if err <= eps {
                lo = mid;
                good = (factor, err);
            } else {
                hi = mid;
            }
        }
    }
    Ok(Pinch {
        factor: good.0,
        delta: lo,
        error: good.1,
        trials,
    })
}

/// Parameters of [`theorem1_pipeline`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PipelineConfig<T: Scalar> {
    pub alpha: T,
    /// Vanishing order `M`.
    pub order: T,
    pub eps: T,
    /// Power `N` of the localized factors.
    pub power: u32,
    pub schedule: Vec<usize>,
    pub budget: usize,
    pub tol: T,
}

impl<T: Scalar> PipelineConfig<T> {
    /// `N = ⌈M/α⌉`, schedule `1..=8`.
    pub fn new(alpha: T, order: T, eps: T) -> Self {
        let power = (order / alpha).ceil().to_u32().unwrap_or(1).max(1);
        Self {
            alpha,
            order,
            eps,
            power,
            schedule: (1..=8).collect(),
            budget: DEFAULT_BUDGET,
            tol: T::lit(DEFAULT_TOL),
        }
    }
}

/// One row of an [`ApproxRun`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ApproxStep<T: Scalar> {
    pub m: usize,
    pub rho: T,
    /// `‖f O^{1/m} - f‖`.
    pub err_power: T,
    /// `‖f O^{1/m} k_m - f O^{1/m}‖`.
    pub err_convex: T,
    /// `‖f O^{1/m} k_m F_m - f O^{1/m} k_m‖`.
    pub err_pinch: T,
    /// `‖f g_m - f‖`.
    pub err_total: T,
    /// `max |g_m(ξ)| / d^M(ξ, E_f)` over nodes off `E_f`.
    pub c_m: T,
    /// Least-squares slope of `log|g_m|` against `log d` on nodes with `0 < d < δ`.
    pub decay_slope: Option<T>,
    pub delta: T,
    /// Set when the pinch tolerance was not reached and the finest resolved scale was used.
    pub pinch_best_effort: bool,
    /// `D`-distance achieved by the convex selection.
    pub convex_distance: T,
    pub weights: SimplexWeights<T>,
    /// `max |f g_m|` on the nodes nearest `E_f`.
    pub zero_residual: T,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ApproxRun<T: Scalar> {
    pub alpha: T,
    pub order: T,
    pub power: u32,
    pub eps: T,
    pub f_norm: T,
    pub schedule: Vec<usize>,
    pub steps: Vec<ApproxStep<T>>,
    /// Last total error below `ε`.
    pub converged: bool,
    /// First `m` at which each piece drops below `ε/3` (power, convex, pinch).
    pub thresholds: [Option<usize>; 3],
}

impl<T: Scalar> ApproxRun<T> {
    /// CSV with columns `m, err_power, err_convex, err_pinch, err_total, C_m`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        out.write_record(["m", "err_power", "err_convex", "err_pinch", "err_total", "C_m"])
            .map_err(io)?;
        for s in &self.steps {
            out.write_record([
                s.m.to_string(),
                format!("{:e}", s.err_power),
                format!("{:e}", s.err_convex),
                format!("{:e}", s.err_pinch),
                format!("{:e}", s.err_total),
                format!("{:e}", s.c_m),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Builds `g_m = O_f^{1/m} k_m F_m` for each `m` of the schedule and records
/// the three pieces of the error split.
pub fn theorem1_pipeline<T: Scalar>(f: &DiscFunction<T>, cfg: &PipelineConfig<T>) -> Result<ApproxRun<T>> {
    if !(cfg.alpha > T::zero() && cfg.alpha <= T::lit(0.5)) {
        return Err(Error::InvalidParameter("alpha must lie in (0, 1/2]".into()));
    }
    let needed = (cfg.order / cfg.alpha).ceil();
    if T::from_u32(cfg.power).expect("u32") < needed {
        return Err(Error::InvalidParameter(format!("N = {} is below M/α = {needed}", cfg.power)));
    }
    if cfg.schedule.is_empty() || cfg.schedule.contains(&0) {
        return Err(Error::InvalidParameter("schedule must be nonempty with m ≥ 1".into()));
    }
    let zeros = f.boundary_zeros();
    if zeros.is_empty() {
        return Err(Error::NoBoundaryZeros);
    }
    let split = inner_outer_split(f)?;
    let inner0 = split.inner.eval(Cplx::new(T::zero(), T::zero())).norm();
    if inner0 < T::one() - T::lit(1e-3) {
        return Err(Error::Hypothesis(format!(
            "inner factor is not a unimodular constant (|U(0)| = {inner0})"
        )));
    }
    let outer = split.outer;
    let lm = outer.log_modulus()?;
    let arcs = complement_arcs(&zeros)?;
    let n = f.n();
    let f_norm = aalpha(f, cfg.alpha)?;
    let dist: Vec<T> = (0..n)
        .map(|j| distance_to_set(angle::<T>(n, j), &zeros))
        .collect::<Result<_>>()?;
    let zero_nodes = nearest_nodes(&zeros, n);

    let mut steps = Vec::with_capacity(cfg.schedule.len());
    for &m in &cfg.schedule {
        let inv_m = T::one() / T::from_usize_lossy(m);
        let rho = T::one() + inv_m;
        let o_root = outer_power(&outer, inv_m)?;
        let target = outer_power(&outer, rho)?;
        let h0 = f.mul(&o_root)?;
        let err_power = aalpha(&h0.sub(f)?, cfg.alpha)?;

        let first = m.min(arcs.len());
        let factors: Vec<DiscFunction<T>> = (first..=arcs.len())
            .map(|p| localized_outer_power(&lm, &tail_arcs(&arcs, p), cfg.power))
            .collect::<Result<_>>()?;
        let candidates: Vec<DiscFunction<T>> =
            factors.iter().map(|k| target.mul(k)).collect::<Result<_>>()?;
        let fit = convex_approx(&candidates, &target, cfg.budget, cfg.tol)?;
        let k_m = combine(&factors, &fit.weights)?;
        let h1 = h0.mul(&k_m)?;
        let err_convex = aalpha(&h1.sub(&h0)?, cfg.alpha)?;

        let third = cfg.eps / T::lit(3.0);
        let (pinch, best_effort) = match pinch_to_tolerance(&h1, &zeros, cfg.order, third, cfg.alpha) {
            Ok(p) => (p, false),
            Err(Error::ToleranceUnreachable { .. }) => {
                let delta = min_pinch_scale::<T>(n);
                let factor = pinching_factor(&zeros, cfg.order, delta, n, f.clamp())?;
                let error = aalpha(&factor.mul(&h1)?.sub(&h1)?, cfg.alpha)?;
                (Pinch { factor, delta, error, trials: BISECTION_STEPS }, true)
            }
            Err(e) => return Err(e),
        };
        let g_m = o_root.mul(&k_m)?.mul(&pinch.factor)?;
        let fg = f.mul(&g_m)?;
        let err_total = aalpha(&fg.sub(f)?, cfg.alpha)?;

        let g_abs: Vec<T> = g_m.boundary().values().iter().map(|v| v.norm()).collect();
        let c_m = g_abs
            .iter()
            .zip(&dist)
            .filter(|(_, &d)| d > T::zero())
            .map(|(&g, &d)| g / d.powf(cfg.order))
            .fold(T::zero(), T::max);
        let near: Vec<(T, T)> = g_abs
            .iter()
            .zip(&dist)
            .filter(|(&g, &d)| d > T::zero() && d < pinch.delta && g > T::zero())
            .map(|(&g, &d)| (d.ln(), g.ln()))
            .collect();
        let zero_residual = zero_nodes
            .iter()
            .map(|&j| fg.boundary().values()[j].norm())
            .fold(T::zero(), T::max);
        steps.push(ApproxStep {
            m,
            rho,
            err_power,
            err_convex,
            err_pinch: pinch.error,
            err_total,
            c_m,
            decay_slope: fit_slope(&near),
            delta: pinch.delta,
            pinch_best_effort: best_effort,
            convex_distance: fit.distance,
            weights: fit.weights,
            zero_residual,
        });
    }
    let third = cfg.eps / T::lit(3.0);
    let first_below = |get: fn(&ApproxStep<T>) -> T| steps.iter().find(|s| get(s) < third).map(|s| s.m);
    let thresholds = [
        first_below(|s| s.err_power),
        first_below(|s| s.err_convex),
        first_below(|s| s.err_pinch),
    ];
    let converged = steps.last().is_some_and(|s| s.err_total < cfg.eps);
    Ok(ApproxRun {
        alpha: cfg.alpha,
        order: cfg.order,
        power: cfg.power,
        eps: cfg.eps,
        f_norm,
        schedule: cfg.schedule.clone(),
        steps,
        converged,
        thresholds,
    })
}

/// Ordinary least-squares slope; `None` with fewer than two distinct abscissae.
pub fn fit_slope<T: Scalar>(pts: &[(T, T)]) -> Option<T> {
    if pts.len() < 2 {
        return None;
    }
    let k = T::from_usize_lossy(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / k;
    let my = pts.iter().map(|p| p.1).sum::<T>() / k;
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == T::zero() {
        return None;
    }
    Some(sxy / sxx)
}

/// Verdict of [`ideal_membership`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Membership<T: Scalar> {
    pub member: bool,
    /// `max |f|` over the nodes nearest `E` (0 for empty `E`).
    pub boundary_max: T,
    /// Relative energy of negative frequencies in the boundary quotient `f/U`;
    /// it must stay below `max(tol, 10 × the same quantity for f)`.
    pub quotient_defect: T,
    /// `sup |f/U|` over the boundary and the resolved annular radii, through
    /// the re-synthesized quotient.
    pub quotient_sup: T,
    pub diagnostic: String,
}

/// Whether `f` vanishes on `E` and `f/U` is bounded analytic.
pub fn ideal_membership<T: Scalar>(
    f: &DiscFunction<T>,
    points: &BoundaryPointSet<T>,
    u: &BlaschkeProduct<T>,
    tol: T,
) -> Result<Membership<T>> {
    let n = f.n();
    let boundary_max = nearest_nodes(points, n)
        .into_iter()
        .map(|j| f.boundary().values()[j].norm())
        .fold(T::zero(), T::max);
    let q = f.divide_inner(u)?;
    let plan = Plan::new(n);
    let analysis = analyze_with(&plan, q.boundary().values());
    let energy: T = q.boundary().values().iter().map(|v| v.norm_sqr()).sum::<T>() / T::from_usize_lossy(n);
    let quotient_defect = if energy > T::zero() {
        analysis.analyticity_defect / energy
    } else {
        T::zero()
    };
    // f itself aliases some energy into negative frequencies when its spectrum
    // is not band-limited; only defect beyond that level signals a non-divisor
    let own = analyze_with(&plan, f.boundary().values());
    let f_energy: T = f.boundary().values().iter().map(|v| v.norm_sqr()).sum::<T>() / T::from_usize_lossy(n);
    let own_defect = if f_energy > T::zero() {
        own.analyticity_defect / f_energy
    } else {
        T::zero()
    };
    let defect_limit = tol.max(T::lit(10.0) * own_defect);
    let grid = AnnularGrid::<T>::with_defaults(n);
    let coeffs = q.coeffs().coeffs();
    let r_max = T::one() - delta_eval::<T>(n);
    let quotient_sup = grid
        .max_over_rings(|_, r| {
            if r > r_max {
                return T::zero();
            }
            plan.synthesize_on_circle(coeffs, r)
                .iter()
                .fold(T::zero(), |m, v| m.max(v.norm()))
        })
        .max(q.boundary().max_abs());
    let mut reasons = Vec::new();
    if boundary_max >= tol {
        reasons.push(format!("|f| = {boundary_max:e} on E exceeds {tol:e}"));
    }
    if quotient_defect > defect_limit {
        reasons.push(format!(
            "f/U has negative-frequency energy fraction {quotient_defect:e}: U does not divide f"
        ));
    }
    if quotient_sup >= T::one() / tol {
        reasons.push(format!("sup |f/U| = {quotient_sup:e} exceeds 1/tol"));
    }
    Ok(Membership {
        member: reasons.is_empty(),
        boundary_max,
        quotient_defect,
        quotient_sup,
        diagnostic: if reasons.is_empty() { "ok".into() } else { reasons.join("; ") },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::DEFAULT_CLAMP;
    use crate::families::{polynomial, Family};
    use crate::sets::chord;

    fn c(re: f64) -> Cplx<f64> {
        Cplx::new(re, 0.0)
    }

    #[test]
    fn convex_trivial_cases() {
        let t = polynomial::<f64>(&[1.0, 0.5, 0.25], 64, DEFAULT_CLAMP).unwrap();
        let fit = convex_approx(&[t.clone()], &t, DEFAULT_BUDGET, DEFAULT_TOL).unwrap();
        assert_eq!(fit.weights.weights(), &[1.0]);
        assert!(fit.distance < 1e-14);
        let zero = t.scale(c(0.0)).unwrap();
        let twice = t.scale(c(2.0)).unwrap();
        let fit = convex_approx(&[zero, twice], &t, DEFAULT_BUDGET, DEFAULT_TOL).unwrap();
        assert!((fit.weights.weights()[0] - 0.5).abs() < 1e-12);
        assert!(fit.distance < 1e-12);
        assert_eq!(convex_approx(&[], &t, 10, 1e-6).unwrap_err(), Error::NoCandidates);
    }

    #[test]
    fn simplex_weights_validated() {
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![-0.5, 1.5]).is_err());
        assert!(SimplexWeights::new(vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn pinching_zero_order_is_one() {
        let e = BoundaryPointSet::new([0.0]).unwrap();
        let f = pinching_factor(&e, 0.0, 0.5, 256, DEFAULT_CLAMP).unwrap();
        assert!((f.eval(Cplx::new(0.3, 0.2)) - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn pinching_boundary_bound() {
        let n = 1024;
        let e = BoundaryPointSet::new([0.0]).unwrap();
        let f = pinching_factor(&e, 3.0, 0.5, n, DEFAULT_CLAMP).unwrap();
        for (j, v) in f.boundary().values().iter().enumerate() {
            let d = chord(angle::<f64>(n, j), 0.0);
            if d > 0.0 {
                assert!(v.norm() <= (d / 0.5f64).powi(3).min(1.0) * (1.0 + 1e-6));
            }
        }
        let s = crate::norms::sup_norm(&f);
        assert!(s <= 1.0 + 1e-9, "{s}");
    }

    #[test]
    fn pinch_requires_vanishing() {
        let f = polynomial::<f64>(&[2.0, 1.0], 256, DEFAULT_CLAMP).unwrap();
        let e = BoundaryPointSet::new([0.0]).unwrap();
        assert!(matches!(pinch_to_tolerance(&f, &e, 3.0, 0.1, 0.5), Err(Error::NotVanishing(_))));
    }

    #[test]
    fn pipeline_needs_boundary_zeros() {
        let f = polynomial::<f64>(&[2.0, 1.0], 256, DEFAULT_CLAMP).unwrap();
        let cfg = PipelineConfig::new(0.5, 3.0, 0.1);
        assert_eq!(theorem1_pipeline(&f, &cfg).unwrap_err(), Error::NoBoundaryZeros);
    }

    #[test]
    fn slope_of_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 + 1.0)).collect();
        assert!((fit_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert!(fit_slope(&pts[..1]).is_none());
    }

    #[test]
    fn membership_examples() {
        let origin = BlaschkeProduct::simple(&[Cplx::new(0.0, 0.0)]).unwrap();
        let none = BoundaryPointSet::<f64>::empty();
        let f = polynomial::<f64>(&[0.0, 2.0, 1.0], 256, DEFAULT_CLAMP).unwrap();
        assert!(ideal_membership(&f, &none, &origin, 1e-3).unwrap().member);
        let g = polynomial::<f64>(&[2.0, 1.0], 256, DEFAULT_CLAMP).unwrap();
        assert!(!ideal_membership(&g, &none, &origin, 1e-3).unwrap().member);
        let h = Family::Canonical.build::<f64>(1024, DEFAULT_CLAMP).unwrap();
        let v = ideal_membership(&h, &Family::Canonical.zeros(), &BlaschkeProduct::empty(), 1e-3).unwrap();
        assert!(v.member, "{}", v.diagnostic);
    }
}
