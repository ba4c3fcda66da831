use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bhshock::config::{parse_b_variant, parse_sigma, Format, RunConfig};
use bhshock::run::cmd_run;
use bhshock::sweep::{cmd_sweep, parse_sigma_list};
use bhshock::verify::{format_table, run_checks, VerifyConfig, CHECK_NAMES};
use clap::{Args, Parser, Subcommand};

/// Shock-wave cosmology inside a black hole: orbit integration,
/// reconstruction and verification.
#[derive(Parser)]
#[command(name = "bhshock", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate and reconstruct one solution; writes shock.{csv,json} and summary.json.
    Run {
        /// Equation of state p = sigma*rho, in [0, 1); fractions like 1/3 are accepted.
        #[arg(long, default_value = "1/3")]
        sigma: String,
        #[command(flatten)]
        common: Common,
    },
    /// Observability reports for several sigma values; writes sweep.{csv,json}.
    Sweep {
        /// Sigma values, separate or comma-separated.
        sigmas: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the property suite and print a pass/fail table.
    Verify {
        /// Run only the named checks (repeatable).
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CHECK_NAMES))]
        only: Vec<String>,
        /// Largest ln B error accepted on the vacuum profile.
        #[arg(long, default_value_t = 1e-6)]
        b_mismatch_tol: f64,
        /// Seed for the random state batteries.
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Hubble constant of the background.
    #[arg(long, default_value_t = 1.0)]
    h0: f64,
    /// Smallest S = 1/N reached by the orbit.
    #[arg(long = "smin", default_value_t = 1e-9)]
    s_min: f64,
    /// Relative tolerance of the orbit integrator.
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    /// Quadrature for the TOV metric coefficient B: radial, dimensional or paper-literal.
    #[arg(long, default_value = "radial")]
    b_variant: String,
    /// B is only computed where N > 1 + horizon-eps.
    #[arg(long, default_value_t = 1e-6)]
    horizon_eps: f64,
    /// Output directory.
    #[arg(long, default_value = "bhshock-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Common {
    fn config(self, sigma: f64) -> anyhow::Result<RunConfig> {
        Ok(RunConfig {
            sigma,
            h0: self.h0,
            s_min: self.s_min,
            rel_tol: self.rel_tol,
            b_variant: parse_b_variant(&self.b_variant)?,
            horizon_eps: self.horizon_eps,
            out: self.out,
            format: self.format,
        })
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn real_main() -> anyhow::Result<ExitCode> {
    let mut stdout = io::stdout().lock();
    match Cli::parse().command {
        Command::Run { sigma, common } => {
            let cfg = common.config(parse_sigma(&sigma)?)?;
            let (summary, files) = cmd_run(&cfg)?;
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            writeln!(stdout, "{}", serde_json::to_string_pretty(&summary)?)?;
            eprintln!("wrote {} and {}", files.table.display(), files.summary.display());
        }
        Command::Sweep { sigmas, common } => {
            let sigmas = parse_sigma_list(&sigmas)?;
            let cfg = common.config(0.0)?;
            let (rows, warnings, path) = cmd_sweep(sigmas, &cfg)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            for row in &rows {
                if let Some(e) = &row.error {
                    eprintln!("sigma = {}: {e}", row.sigma);
                }
            }
            eprintln!("wrote {} ({} rows)", path.display(), rows.len());
        }
        Command::Verify {
            only,
            b_mismatch_tol,
            seed,
            common,
        } => {
            let cfg = VerifyConfig {
                run: common.config(1.0 / 3.0)?,
                only,
                b_mismatch_tol,
                seed,
            };
            cfg.run.validate().context("verify settings")?;
            let outcomes = run_checks(&cfg)?;
            write!(stdout, "{}", format_table(&outcomes))?;
            if let Some(first) = outcomes.iter().find(|o| !o.passed) {
                let failed = outcomes.iter().filter(|o| !o.passed).count();
                eprintln!(
                    "{failed} of {} checks failed; first failure: {}",
                    outcomes.len(),
                    first.name
                );
                return Ok(ExitCode::FAILURE);
            }
            writeln!(stdout, "all {} checks passed", outcomes.len())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
