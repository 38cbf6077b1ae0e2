use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use unitdisc::approx::{theorem1_pipeline, PipelineConfig};
use unitdisc::carleson::{carleson_integral_of, ZeroSet, MIN_REFINEMENT};
use unitdisc::factorization::{inner_outer_split, DiscFunction};
use unitdisc::families::Family;
use unitdisc::harness::checks::{arcs_from_config, rescale_to_unit, run_all, run_inequality};
use unitdisc::harness::{sweep_theorem2, SweepConfig};
use unitdisc::norms::{aalpha, aalpha_norm};
use unitdisc::sets::{Arc, ArcSet, BoundaryPointSet};

#[derive(Parser)]
#[command(name = "unitdisc", version, about = "Outer functions, A_α norms and lemma checks on the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a test-family function as JSON.
    Sample {
        #[arg(long, value_enum, default_value = "canonical")]
        family: FamilyArg,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long, default_value_t = 30.0)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner-outer split of a function given as JSON.
    Factor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sup, Lipschitz, Dirichlet and A_α norms.
    Norms {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Run the polynomial approximation pipeline on the configured family.
    Approximate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run one lemma check (or `all`) on the configured family.
    Verify {
        #[arg(long)]
        check: String,
        #[arg(long)]
        config: PathBuf,
    },
    /// Random sweep of ‖f^ρ f_Γ^N‖ over unions of complement arcs.
    #[command(name = "sweep-theorem2")]
    SweepTheorem2 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Carleson integral of a finite set, optionally fattened into arcs.
    Carleson {
        /// Comma-separated angles.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        points: Vec<f64>,
        /// Replace each point by an arc of this total length.
        #[arg(long)]
        fatten: Option<f64>,
        #[arg(long, default_value_t = 1 << 16)]
        refinement: usize,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FamilyArg {
    Canonical,
    TwoZero,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Canonical => Family::Canonical,
            FamilyArg::TwoZero => Family::TwoZero,
        }
    }
}

/// Usage or input error (exit code 2).
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn emit(value: &impl Serialize, out: Option<&Path>) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_function(path: &Path) -> std::result::Result<DiscFunction<f64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn configured_function(cfg: &SweepConfig) -> std::result::Result<DiscFunction<f64>, Failure> {
    Ok(cfg.family.build::<f64>(cfg.grid_n, cfg.clamp)?)
}

#[derive(Serialize)]
struct VerifyAll {
    reports: Vec<unitdisc::harness::InequalityReport>,
    region_counts: [usize; 4],
    partition: bool,
    chain: bool,
    d23_decay: f64,
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Sample { family, n, lambda, out } => {
            let f = Family::from(family).build::<f64>(n, lambda)?;
            emit(&f, out.as_deref())?;
            Ok(true)
        }
        Command::Factor { input, out } => {
            let split = inner_outer_split(&read_function(&input)?)?;
            emit(&split, out.as_deref())?;
            Ok(true)
        }
        Command::Norms { input, alpha } => {
            emit(&aalpha_norm(&read_function(&input)?, alpha)?, None)?;
            Ok(true)
        }
        Command::Approximate { config, csv } => {
            let cfg = SweepConfig::load(&config)?;
            let f = configured_function(&cfg)?;
            let eps = cfg.eps_factor * aalpha(&f, cfg.alpha)?;
            let mut pc = PipelineConfig::new(cfg.alpha, cfg.order, eps);
            pc.power = cfg.power;
            pc.schedule = cfg.schedule.clone();
            let run = theorem1_pipeline(&f, &pc)?;
            if let Some(path) = csv {
                run.write_csv(fs::File::create(path)?)?;
            }
            emit(&run, None)?;
            Ok(run.converged)
        }
        Command::Verify { check, config } => {
            let cfg = SweepConfig::load(&config)?;
            let f = rescale_to_unit(&configured_function(&cfg)?, cfg.alpha)?;
            let (gamma, big_gamma): (Arc<f64>, ArcSet<f64>) = arcs_from_config(&f, &cfg)?;
            if check.eq_ignore_ascii_case("all") {
                let (reports, s) = run_all(&f, &gamma, &big_gamma, &cfg)?;
                let ok = reports.iter().all(|r| r.passed) && s.partition_holds() && s.chain_holds();
                emit(
                    &VerifyAll {
                        reports,
                        region_counts: s.counts,
                        partition: s.partition_holds(),
                        chain: s.chain_holds(),
                        d23_decay: s.d23_decay,
                    },
                    None,
                )?;
                return Ok(ok);
            }
            let report = run_inequality(&check, &f, &gamma, &big_gamma, &cfg)?;
            emit(&report, None)?;
            Ok(report.passed)
        }
        Command::SweepTheorem2 { config, csv } => {
            let cfg = SweepConfig::load(&config)?;
            let f = rescale_to_unit(&configured_function(&cfg)?, cfg.alpha)?;
            let report = sweep_theorem2(&f, &cfg)?;
            if let Some(path) = csv {
                report.write_csv(fs::File::create(path)?)?;
            }
            emit(&report, None)?;
            Ok(report.passed)
        }
        Command::Carleson { points, fatten, refinement } => {
            if refinement < MIN_REFINEMENT {
                return Err(Failure(format!("refinement must be at least {MIN_REFINEMENT}")));
            }
            let set = BoundaryPointSet::new(points)?;
            let zero_set = match fatten {
                None => ZeroSet::Points(set),
                Some(len) => {
                    let arcs = set
                        .points()
                        .iter()
                        .map(|&p| Arc::new(p - 0.5 * len, len))
                        .collect::<unitdisc::Result<Vec<_>>>()?;
                    ZeroSet::Fattened(ArcSet::new(arcs)?)
                }
            };
            emit(&carleson_integral_of(&zero_set, refinement)?, None)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
