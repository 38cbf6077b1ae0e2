//! Random sweeps of `‖f^ρ f_Γ^N‖_{A_α}` over unions `Γ` of complement arcs.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use crate::error::{Error, Result};
use crate::factorization::{DiscFunction, LogModulus, Support};
use crate::norms::aalpha;
use crate::scalar::Scalar;
use crate::sets::{gaps, split_arcs, ArcSet, MAX_ARC_LENGTH};

/// Growth allowed between consecutive doubled arc counts.
pub const GROWTH_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub arc_count: usize,
    pub trials: usize,
    pub max: f64,
    pub mean: f64,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub arc_count: usize,
    pub trial: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub alpha: f64,
    pub rho: f64,
    pub power: u32,
    pub seed: u64,
    /// `‖f^ρ‖_{A_α}`, the `Γ = ∅` value.
    pub baseline: f64,
    pub cap: f64,
    pub pool_size: usize,
    pub rows: Vec<SweepRow>,
    pub records: Vec<TrialRecord>,
    pub max_norm: f64,
    pub bounded: bool,
    pub growth_ok: bool,
    pub passed: bool,
}

impl SweepReport {
    pub fn write_csv(&self, out: impl std::io::Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["arc_count", "trials", "max", "mean", "min"])?;
        for r in &self.rows {
            w.write_record([
                r.arc_count.to_string(),
                r.trials.to_string(),
                r.max.to_string(),
                r.mean.to_string(),
                r.min.to_string(),
            ])?;
        }
        w.flush()
    }
}

/// The arc pool: gaps of `E_f`, split so that it holds at least twice the
/// largest requested count (and every arc is shorter than 1/2).
pub fn arc_pool<T: Scalar>(f: &DiscFunction<T>, max_count: usize) -> Result<ArcSet<T>> {
    let zeros = f.boundary_zeros();
    if zeros.is_empty() {
        return Err(Error::NoBoundaryZeros);
    }
    let all = gaps(&zeros)?;
    let target = (2 * max_count).max(1);
    let max_len = T::lit(MAX_ARC_LENGTH).min(all.total_length() / T::from_usize_lossy(target));
    split_arcs(&all, max_len)
}

/// `‖f^ρ f_Γ^N‖_{A_α}` with the product built from potentials.
pub fn product_norm<T: Scalar>(lm: &LogModulus<T>, big_gamma: &ArcSet<T>, cfg: &SweepConfig) -> Result<T> {
    let rho = T::lit(cfg.rho);
    let nn = T::from_u32(cfg.power).expect("u32 representable");
    let (local, local_q) = lm.density_pair(&Support::Arcs(big_gamma.clone()));
    let combine = |full: &[T], part: &[T]| -> Vec<T> { full.iter().zip(part).map(|(&u, &v)| rho * u + nn * v).collect() };
    let (density, quadrature) = (combine(lm.values(), &local), combine(lm.quadrature(), &local_q));
    aalpha(&DiscFunction::from_density_pair(density, quadrature, lm.clamp())?, T::lit(cfg.alpha))
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sweep_theorem2<T: Scalar>(f: &DiscFunction<T>, cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    if !f.has_potential() {
        return Err(Error::Hypothesis("f must be outer (carry a Herglotz potential)".into()));
    }
    let alpha = T::lit(cfg.alpha);
    let norm = aalpha(f, alpha)?;
    if norm > T::one() + T::lit(1e-9) {
        return Err(Error::Hypothesis(format!("‖f‖_A_α = {norm} exceeds 1; rescale first")));
    }
    let max_count = cfg.arc_counts.iter().copied().max().unwrap_or(0);
    let pool = arc_pool(f, max_count)?;
    if max_count > pool.len() {
        return Err(Error::InvalidParameter(format!(
            "arc count {max_count} exceeds the pool of {} arcs",
            pool.len()
        )));
    }
    let lm = f.log_modulus()?;
    let baseline = product_norm(&lm, &ArcSet::empty(), cfg)?.to_f64_lossy();

    let jobs: Vec<(usize, usize, usize)> = cfg
        .arc_counts
        .iter()
        .enumerate()
        .flat_map(|(ci, &k)| (0..cfg.trials).map(move |t| (ci, k, t)))
        .collect();
    let norms: Vec<f64> = jobs
        .par_iter()
        .map(|&(ci, k, t)| {
            let mut rng = trial_rng(cfg.seed, (ci * cfg.trials + t) as u64);
            let mut idx = sample(&mut rng, pool.len(), k).into_vec();
            idx.sort_unstable();
            product_norm(&lm, &pool.select(&idx), cfg).map(|v| v.to_f64_lossy())
        })
        .collect::<Result<Vec<_>>>()?;

    let records: Vec<TrialRecord> = jobs
        .iter()
        .zip(&norms)
        .map(|(&(_, k, t), &norm)| TrialRecord { arc_count: k, trial: t, norm })
        .collect();
    let rows: Vec<SweepRow> = cfg
        .arc_counts
        .iter()
        .enumerate()
        .map(|(ci, &k)| {
            let vals = &norms[ci * cfg.trials..(ci + 1) * cfg.trials];
            let (max, min, sum) = vals
                .iter()
                .fold((f64::NEG_INFINITY, f64::INFINITY, 0.0), |(a, b, s), &v| (a.max(v), b.min(v), s + v));
            SweepRow {
                arc_count: k,
                trials: vals.len(),
                max,
                mean: sum / vals.len().max(1) as f64,
                min,
            }
        })
        .collect();
    let max_norm = norms.iter().copied().fold(baseline, f64::max);
    let cap = cfg.sweep_cap_factor * baseline;
    let bounded = max_norm <= cap;
    let growth_ok = rows
        .windows(2)
        .filter(|w| w[1].arc_count == 2 * w[0].arc_count)
        .all(|w| w[1].max <= GROWTH_FACTOR * w[0].max);
    Ok(SweepReport {
        alpha: cfg.alpha,
        rho: cfg.rho,
        power: cfg.power,
        seed: cfg.seed,
        baseline,
        cap,
        pool_size: pool.len(),
        rows,
        records,
        max_norm,
        bounded,
        growth_ok,
        passed: bounded && growth_ok,
    })
}
