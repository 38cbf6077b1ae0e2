//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and fails
//! if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unitdisc::approx::{theorem1_pipeline, ApproxRun, PipelineConfig};
use unitdisc::carleson::{carleson_integral, carleson_integral_of, ZeroSet};
use unitdisc::factorization::{
    g_kernel_at, inner_outer_split, localized_outer_power, outer_from_modulus, LogModulus,
    Support, DEFAULT_CLAMP,
};
use unitdisc::families::{monomial, polynomial, Family};
use unitdisc::harness::checks::{arcs_from_config, rescale_to_unit, run_all};
use unitdisc::harness::{sweep_theorem2, InequalityReport, SweepConfig, SweepReport};
use unitdisc::norms::{aalpha, dirichlet_energy_coeff, dirichlet_energy_quad, Region};
use unitdisc::sets::{complement_arcs, Arc, ArcSet, BoundaryPointSet};
use unitdisc::Cplx;

const C1_COEFF_TOL: f64 = 1e-12;
const C1_QUAD_TOL: f64 = 1e-6;
const C1_NORM_TOL: f64 = 1e-8;
const C1_TIME: Duration = Duration::from_secs(1);
const C2_COEFF_TOL: f64 = 1e-6;
const C2_TAIL_TOL: f64 = 1e-10;
const C2_DEFECT_TOL: f64 = 1e-6;
const C3_REL_TOL: f64 = 1e-3;
const C3_TIME: Duration = Duration::from_secs(60);
const C4_TOL: f64 = 1e-3;
const C5_CAP_FACTOR: f64 = 5.0;
const C5_GROWTH: f64 = 1.10;
const C5_TIME: Duration = Duration::from_secs(300);
const C6_CAP: f64 = 100.0;
const C6_VARIATION: f64 = 0.10;
const C7_SLOPE: f64 = 2.5;
const C7_TIME: Duration = Duration::from_secs(600);
const C8_SLACK: f64 = 1.1;

struct Line {
    id: u32,
    passed: bool,
    detail: String,
}

fn line(id: u32, passed: bool, detail: String) -> Line {
    Line { id, passed, detail }
}

fn criterion1() -> Line {
    let t = Instant::now();
    let z5 = monomial::<f64>(5, 64, DEFAULT_CLAMP).unwrap();
    let coeff = dirichlet_energy_coeff(&z5).dirichlet;
    let quad = dirichlet_energy_quad(&z5, &Region::Disc).value;
    let z = monomial::<f64>(1, 64, DEFAULT_CLAMP).unwrap();
    let norm = aalpha(&z, 0.5).unwrap();
    let elapsed = t.elapsed();
    let ok = (coeff - 5.0).abs() < C1_COEFF_TOL
        && (quad - 5.0).abs() < C1_QUAD_TOL
        && (norm - 3.0).abs() < C1_NORM_TOL
        && elapsed < C1_TIME;
    line(
        1,
        ok,
        format!(
            "D(z^5) coeff err {:.1e}, quad err {:.1e}; ||z|| err {:.1e}; {:.2?}",
            (coeff - 5.0).abs(),
            (quad - 5.0).abs(),
            (norm - 3.0).abs(),
            elapsed
        ),
    )
}

fn criterion2() -> Line {
    let n = 1024;
    let moduli: Vec<f64> = (0..n)
        .map(|j| (Cplx::new(2.0, 0.0) + Cplx::from_polar(1.0, unitdisc::grid::angle::<f64>(n, j))).norm())
        .collect();
    let lm = LogModulus::from_moduli(&moduli, DEFAULT_CLAMP).unwrap();
    let o = outer_from_modulus(&lm, &Support::Full).unwrap();
    let c = o.coeffs().coeffs();
    let head = (c[0] - 2.0).norm() + (c[1] - 1.0).norm();
    let tail: f64 = c.iter().skip(2).map(|a| a.norm_sqr()).sum();
    let g = polynomial::<f64>(&[0.0, 2.0, 1.0], n, DEFAULT_CLAMP).unwrap();
    let defect = inner_outer_split(&g).unwrap().defect;
    let ok = head < C2_COEFF_TOL && tail < C2_TAIL_TOL && defect < C2_DEFECT_TOL;
    line(
        2,
        ok,
        format!("|a0-2|+|a1-1| = {head:.1e}, tail energy {tail:.1e}, defect of z(2+z) {defect:.1e}"),
    )
}

fn criterion3() -> Line {
    let t = Instant::now();
    let n = 1 << 14;
    let power = 6;
    let f = Family::Canonical.build::<f64>(n, DEFAULT_CLAMP).unwrap();
    let lm = f.log_modulus().unwrap();
    let pool = complement_arcs(&f.boundary_zeros()).unwrap();
    let points: Vec<Cplx<f64>> = (1..=9)
        .flat_map(|i| (0..48).map(move |k| Cplx::from_polar(0.1 * i as f64, k as f64 * std::f64::consts::TAU / 48.0)))
        .chain(std::iter::once(Cplx::new(0.0, 0.0)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut worst_split, mut worst_power) = (0.0_f64, 0.0_f64);
    for _ in 0..20 {
        let idx: Vec<usize> = (0..pool.len()).filter(|_| rng.gen_bool(0.5)).collect();
        let gamma = pool.select(&idx);
        let on = Support::Arcs(gamma.clone());
        let off = Support::Complement(gamma.clone());
        let g_on = g_kernel_at(&lm, &on, &points).unwrap();
        let g_off = g_kernel_at(&lm, &off, &points).unwrap();
        let f_n = localized_outer_power(&lm, &gamma, power).unwrap();
        for (k, &z) in points.iter().enumerate() {
            let lhs = f.derivative_at(z);
            let rhs = f.eval(z) * (g_on[k] + g_off[k]);
            worst_split = worst_split.max((lhs - rhs).norm() / lhs.norm());
            let lhs = f_n.derivative_at(z);
            let rhs = f_n.eval(z) * g_on[k] * power as f64;
            let scale = lhs.norm().max(rhs.norm());
            if scale > 0.0 {
                worst_power = worst_power.max((lhs - rhs).norm() / scale);
            }
        }
    }
    let elapsed = t.elapsed();
    let ok = worst_split < C3_REL_TOL && worst_power < C3_REL_TOL && elapsed < C3_TIME;
    line(
        3,
        ok,
        format!("max rel err f'=f(g+g'): {worst_split:.1e}, (f_G^N)'=N f_G^N g: {worst_power:.1e}; {elapsed:.1?}"),
    )
}

fn criterion4() -> Line {
    let zero = carleson_integral(&BoundaryPointSet::new([0.0_f64]).unwrap(), 1 << 16).unwrap();
    let m = 64;
    let width = 0.5 / m as f64;
    let arcs: Vec<Arc<f64>> = (0..m)
        .map(|j| Arc::new(j as f64 * std::f64::consts::TAU / m as f64 - width / 2.0, width).unwrap())
        .collect();
    let fat = carleson_integral_of(&ZeroSet::Fattened(ArcSet::new(arcs).unwrap()), 1 << 16).unwrap();
    let ok = zero.value.abs() < C4_TOL && !zero.diverged && fat.diverged;
    line(4, ok, format!("I({{0}}) = {:.1e}; fattened diverged = {}", zero.value, fat.diverged))
}

fn sweep_run() -> (SweepReport, String, Vec<u8>) {
    let n = 4096;
    let f = rescale_to_unit(&Family::Canonical.build::<f64>(n, DEFAULT_CLAMP).unwrap(), 0.5).unwrap();
    let mut cfg = SweepConfig::new(0.5, 1.5, 4);
    cfg.grid_n = n;
    cfg.trials = 50;
    cfg.seed = 42;
    cfg.arc_counts = vec![8, 16, 32, 64];
    cfg.sweep_cap_factor = C5_CAP_FACTOR;
    let report = sweep_theorem2(&f, &cfg).unwrap();
    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    (report, json, csv)
}

fn criterion5(report: &SweepReport, elapsed: Duration) -> Line {
    let bounded = report.max_norm <= C5_CAP_FACTOR * report.baseline;
    let growth: Vec<String> = report
        .rows
        .windows(2)
        .map(|w| format!("{:+.1}%", (w[1].max / w[0].max - 1.0) * 100.0))
        .collect();
    let grows_ok = report.rows.windows(2).all(|w| w[1].max <= C5_GROWTH * w[0].max);
    let ok = bounded && grows_ok && elapsed < C5_TIME;
    line(
        5,
        ok,
        format!(
            "max {:.3} vs cap {:.3} (baseline {:.3}); growth per doubling {}; {elapsed:.1?}",
            report.max_norm,
            C5_CAP_FACTOR * report.baseline,
            report.baseline,
            growth.join(" ")
        ),
    )
}

struct SuiteRun {
    family: Family,
    reports: Vec<InequalityReport>,
    partition: bool,
    d23_decay: f64,
    lem6: f64,
    d22_nodes: usize,
    d23_nodes: usize,
}

fn suite_runs() -> (Vec<SuiteRun>, String) {
    let mut runs = Vec::new();
    let mut json = String::new();
    for family in [Family::Canonical, Family::TwoZero] {
        for n in [1 << 12, 1 << 13] {
            let mut cfg = SweepConfig::new(0.5, 1.5, 4);
            cfg.grid_n = n;
            cfg.family = family;
            cfg.constant_cap = C6_CAP;
            let f = rescale_to_unit(&family.build::<f64>(n, DEFAULT_CLAMP).unwrap(), 0.5).unwrap();
            let (gamma, big) = arcs_from_config(&f, &cfg).unwrap();
            let (reports, s) = run_all(&f, &gamma, &big, &cfg).unwrap();
            json.push_str(&serde_json::to_string(&reports).unwrap());
            runs.push(SuiteRun {
                family,
                reports,
                partition: s.partition_holds(),
                d23_decay: s.d23_decay,
                lem6: s.lem6,
                d22_nodes: s.counts[2],
                d23_nodes: s.counts[3],
            });
        }
    }
    (runs, json)
}

/// Relative variation of two constants; both at rounding level counts as none.
fn variation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-14 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn criterion6(runs: &[SuiteRun]) -> Line {
    let all_pass = runs.iter().all(|r| r.reports.iter().all(|c| c.passed && c.empirical_constant <= C6_CAP));
    let mut worst = (0.0_f64, String::new());
    for pair in runs.chunks(2) {
        for (a, b) in pair[0].reports.iter().zip(&pair[1].reports) {
            let v = variation(a.empirical_constant, b.empirical_constant);
            if v >= worst.0 {
                worst = (v, format!("{:?}/{}", pair[0].family, a.name));
            }
        }
    }
    let max_c = runs
        .iter()
        .flat_map(|r| r.reports.iter().map(|c| c.empirical_constant))
        .fold(0.0_f64, f64::max);
    let ok = all_pass && worst.0 < C6_VARIATION;
    line(
        6,
        ok,
        format!(
            "largest constant {max_c:.3}; largest 2^12 vs 2^13 variation {:.2}% ({})",
            worst.0 * 100.0,
            worst.1
        ),
    )
}

fn criterion8(runs: &[SuiteRun]) -> Line {
    let partition = runs.iter().all(|r| r.partition);
    let d23 = runs.iter().map(|r| r.d23_decay).fold(0.0_f64, f64::max);
    let lem6 = runs.iter().map(|r| r.lem6).fold(0.0_f64, f64::max);
    let exercised = runs.iter().any(|r| r.d22_nodes > 0 && r.d23_nodes > 0);
    let ok = partition && d23 <= C8_SLACK && lem6 <= C8_SLACK && exercised;
    line(
        8,
        ok,
        format!("partition exact: {partition}; max |f|/d^8 on D23 {d23:.3}; max |f(mu z)|/d^2 on D22 {lem6:.3}"),
    )
}

fn pipeline_run() -> (ApproxRun<f64>, String, Vec<u8>) {
    let f = Family::Canonical.build::<f64>(4096, DEFAULT_CLAMP).unwrap();
    let norm = aalpha(&f, 0.5).unwrap();
    let mut cfg = PipelineConfig::new(0.5, 3.0, 0.1 * norm);
    cfg.power = 6;
    cfg.schedule = (1..=8).collect();
    let run = theorem1_pipeline(&f, &cfg).unwrap();
    let mut csv = Vec::new();
    run.write_csv(&mut csv).unwrap();
    let json = serde_json::to_string(&run).unwrap();
    (run, json, csv)
}

fn criterion7(run: &ApproxRun<f64>, elapsed: Duration) -> Line {
    let last = run.steps.last().expect("schedule is nonempty");
    let decay_ok = run
        .steps
        .iter()
        .all(|s| s.c_m.is_finite() && s.decay_slope.is_some_and(|k| k >= C7_SLOPE));
    let min_slope = run.steps.iter().filter_map(|s| s.decay_slope).fold(f64::INFINITY, f64::min);
    let ok = last.err_total < run.eps && decay_ok && elapsed < C7_TIME;
    line(
        7,
        ok,
        format!(
            "terminal error {:.4} vs eps {:.4}; min decay slope {min_slope:.2}; {elapsed:.1?}",
            last.err_total, run.eps
        ),
    )
}

#[test]
fn acceptance() {
    let mut lines = vec![criterion1(), criterion2(), criterion3(), criterion4()];

    let t = Instant::now();
    let (sweep, sweep_json, sweep_csv) = sweep_run();
    lines.push(criterion5(&sweep, t.elapsed()));

    let (runs, suite_json) = suite_runs();
    lines.push(criterion6(&runs));

    let t = Instant::now();
    let (pipeline, pipe_json, pipe_csv) = pipeline_run();
    lines.push(criterion7(&pipeline, t.elapsed()));
    lines.push(criterion8(&runs));

    let (_, sweep_json2, sweep_csv2) = sweep_run();
    let (_, suite_json2) = suite_runs();
    let (_, pipe_json2, pipe_csv2) = pipeline_run();
    let same = sweep_json == sweep_json2
        && sweep_csv == sweep_csv2
        && suite_json == suite_json2
        && pipe_json == pipe_json2
        && pipe_csv == pipe_csv2;
    lines.push(line(9, same, "sweep JSON/CSV, lemma reports, pipeline JSON/CSV re-run byte-for-byte".into()));

    lines.sort_by_key(|l| l.id);
    for l in &lines {
        println!("criterion {}: {} - {}", l.id, if l.passed { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
