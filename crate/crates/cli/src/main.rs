//! `cvrobust` command-line tool.
//!
//! Exit status is 0 on success, 1 when an input fails validation or cannot be
//! read, and 2 on a usage error.

mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvrobust::channel::{attenuate, transmittance_from_link, LinkBudget, Transmittance};
use cvrobust::families::{
    build, epr_summary, family_witnesses, random_physical_state, region_map_correlations, region_map_epr,
    FamilySpec, RandomStateParams,
};
use cvrobust::format::{contour_csv, scan, StateFile};
use cvrobust::robustify::{robustify, RobustifyOptions};
use cvrobust::robustness::esd_contour;
use cvrobust::CovMatrix;

use crate::report::{ClassifyReport, FamilyReport, RobustifyReport, ValidateReport};

#[derive(Parser)]
#[command(name = "cvrobust", version, about = "Entanglement robustness of two-mode Gaussian states under loss")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check symmetry and the uncertainty principle.
    Validate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Witnesses, robustness class and critical transmittances.
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Attenuated PPT witness and reduced witness over the transmittance square.
    Scan {
        #[command(flatten)]
        input: Input,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Disentanglement curve W_R(T1, T2) = 0 inside the unit square.
    Contour {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Send the modes through pure-loss channels.
    Attenuate {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with_all = ["length1_km", "length2_km"])]
        t1: Option<f64>,
        #[arg(long, conflicts_with_all = ["length1_km", "length2_km"])]
        t2: Option<f64>,
        /// Fiber length for mode 1.
        #[arg(long)]
        length1_km: Option<f64>,
        /// Fiber length for mode 2.
        #[arg(long)]
        length2_km: Option<f64>,
        #[arg(long, env = "CVROBUST_ALPHA_DB_PER_KM", default_value_t = cvrobust::channel::DEFAULT_ALPHA_DB_PER_KM)]
        alpha_db_per_km: f64,
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Build a member of a state family, e.g.
    /// `symmetric-modes:dq=2.55,dp=1.80,cq=1.033,cp=-1.26`.
    Family {
        spec: FamilySpec,
        /// Emit closed-form witnesses and EPR variables instead of the state.
        #[arg(long)]
        witnesses: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Labeled region maps of the symmetric-mode family.
    Map {
        #[command(subcommand)]
        kind: MapKind,
    },
    /// A random physical state.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        nu_min: f64,
        #[arg(long, default_value_t = 3.0)]
        nu_max: f64,
        #[arg(long, default_value_t = 1.0)]
        max_squeeze: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Search for local squeezing and rotations that make the state fully robust.
    Robustify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_evaluations: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum MapKind {
    /// Over normalized correlations (cp/dp, cq/dq) in [-1, 1]^2.
    Correlations {
        #[arg(long, default_value_t = 2.55)]
        dq: f64,
        #[arg(long, default_value_t = 1.80)]
        dp: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Over EPR variances (var q+, var p-) at fixed partial purities.
    Epr {
        #[arg(long, default_value_t = 0.7267)]
        mu_minus: f64,
        #[arg(long, default_value_t = 0.4529)]
        mu_plus: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Upper end of both axes.
        #[arg(long, default_value_t = 4.0)]
        extent: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// State file (JSON with label, ordering and matrix).
    #[arg(long, short = 's')]
    state: Option<PathBuf>,
    /// Family specification instead of a state file.
    #[arg(long, short = 'f')]
    family: Option<FamilySpec>,
}

#[derive(Args)]
struct Output {
    /// Write here instead of standard output.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

/// A failure reported with exit status 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load(input: &Input) -> Result<(String, CovMatrix), Failure> {
    if let Some(spec) = &input.family {
        return Ok((spec.to_string(), build(spec)?));
    }
    let path = input.state.as_ref().expect("clap enforces one input");
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let file = StateFile::parse(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let v = file.covariance()?;
    Ok((file.label, v))
}

fn emit(output: &Output, text: &str) -> Outcome {
    match &output.output {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => write_atomic(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { input, output } => {
            let (label, v) = load(&input)?;
            let report = ValidateReport::new(label, &v);
            emit(&output, &json(&report)?)?;
            if report.physical {
                Ok(())
            } else {
                Err(Failure("state is not physical".into()))
            }
        }
        Command::Classify { input, output } => {
            let (label, v) = load(&input)?;
            emit(&output, &json(&ClassifyReport::new(label, &v)?)?)
        }
        Command::Scan { input, grid, output } => {
            let (_, v) = load(&input)?;
            v.require_physical()?;
            emit(&output, &scan(&v, grid)?.to_csv())
        }
        Command::Contour { input, samples, output } => {
            let (_, v) = load(&input)?;
            v.require_physical()?;
            emit(&output, &contour_csv(&esd_contour(&v, samples)))
        }
        Command::Attenuate {
            input,
            t1,
            t2,
            length1_km,
            length2_km,
            alpha_db_per_km,
            label,
            output,
        } => {
            let (source, v) = load(&input)?;
            v.require_physical()?;
            let t = if length1_km.is_some() || length2_km.is_some() {
                let link = LinkBudget::dual(length1_km.unwrap_or(0.0), length2_km.unwrap_or(0.0))
                    .with_alpha(alpha_db_per_km);
                transmittance_from_link(&link)?
            } else {
                Transmittance::new(t1.unwrap_or(1.0), t2.unwrap_or(1.0))?
            };
            let label = label.unwrap_or_else(|| format!("{source} @ T = ({}, {})", t.t1(), t.t2()));
            emit(&output, &StateFile::new(label, &attenuate(&v, t)).to_json())
        }
        Command::Family { spec, witnesses, output } => {
            let v = build(&spec)?;
            if witnesses {
                let report = FamilyReport {
                    family: spec.to_string(),
                    closed_form: family_witnesses(&spec)?,
                    epr: epr_summary(&v),
                };
                emit(&output, &json(&report)?)
            } else {
                emit(&output, &StateFile::new(spec.to_string(), &v).to_json())
            }
        }
        Command::Map { kind } => match kind {
            MapKind::Correlations { dq, dp, grid, output } => {
                emit(&output, &region_map_correlations(dq, dp, grid)?.to_csv())
            }
            MapKind::Epr {
                mu_minus,
                mu_plus,
                grid,
                extent,
                output,
            } => emit(&output, &region_map_epr(mu_minus, mu_plus, grid, extent)?.to_csv()),
        },
        Command::Random {
            seed,
            nu_min,
            nu_max,
            max_squeeze,
            output,
        } => {
            let params = RandomStateParams {
                nu_min,
                nu_max,
                max_squeeze,
            };
            let v = random_physical_state(seed, &params)?;
            emit(&output, &StateFile::new(format!("random seed {seed}"), &v).to_json())
        }
        Command::Robustify {
            input,
            seed,
            max_evaluations,
            restarts,
            output,
        } => {
            let (label, v) = load(&input)?;
            let options = RobustifyOptions {
                max_evaluations,
                restarts,
                seed,
                ..RobustifyOptions::default()
            };
            match robustify(&v, &options)? {
                Some(found) => emit(&output, &json(&RobustifyReport::new(label, found)?)?),
                None => Err(Failure(format!(
                    "no fully robust form found within {max_evaluations} evaluations"
                ))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
