//! The `run` subcommand: one σ, one reconstructed solution.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::Context;
use bhshock_core::estimates::{numeric_report, os_report, ObservabilityReport};
use bhshock_core::phase::{classify_limit_speed, fit_m_star, integrate_orbit_with, is_radiation, SpeedClass};
use bhshock_core::reconstruct::{assemble, ShockSolution, ShockSolutionRow};
use bhshock_core::tov::BVariant;
use serde::Serialize;

use crate::config::{Format, RunConfig, Settings};
use crate::output::{self, ReportJson, BOUND_SLACK};

/// Orbits must reach this far toward the Big Bang for the speed limit and
/// `m*` to be estimated.
pub const ASYMPTOTIC_S: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub sigma: f64,
    pub h0: f64,
    pub m_star: Option<f64>,
    pub speed_class: String,
    pub exploratory: bool,
    pub rows: usize,
    pub report: Option<ReportJson>,
    pub r_star_error_bar: Option<f64>,
    pub settings: Settings,
    pub warnings: Vec<String>,
}

/// Everything a run computes, before anything is written.
#[derive(Debug, Clone)]
pub struct Solved {
    pub summary: Summary,
    pub report: Option<ObservabilityReport>,
    pub solution: Option<ShockSolution>,
}

impl Solved {
    pub fn rows(&self) -> &[ShockSolutionRow] {
        self.solution.as_ref().map(|s| s.rows.as_slice()).unwrap_or(&[])
    }
}

pub fn solve(cfg: &RunConfig) -> anyhow::Result<Solved> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    match cfg.b_variant {
        BVariant::Radial => {}
        BVariant::Dimensional => warnings.push(
            "b-variant dimensional integrates kappa*rhobar*rbar in N instead of rbar; B is not the metric coefficient".into(),
        ),
        BVariant::PaperLiteral => warnings.push(
            "b-variant paper-literal integrates kappa*rhobar in N; the integrand is not dimensionless and B is not the metric coefficient".into(),
        ),
    }

    if cfg.sigma == 0.0 {
        warnings.push("sigma = 0 is served by the Oppenheimer-Snyder closed form; no orbit is integrated".into());
        let report = os_report()?;
        warn_tcrit(&report, &mut warnings);
        return Ok(Solved {
            summary: Summary {
                sigma: cfg.sigma,
                h0: cfg.h0,
                m_star: None,
                speed_class: SpeedClass::Zero.name().into(),
                exploratory: false,
                rows: 0,
                report: Some(ReportJson::from(&report)),
                r_star_error_bar: None,
                settings: cfg.settings(),
                warnings,
            },
            report: Some(report),
            solution: None,
        });
    }

    let orbit = integrate_orbit_with(cfg.sigma, &cfg.orbit_options())
        .with_context(|| format!("integrating the orbit for sigma = {}", cfg.sigma))?;
    let solution = assemble(&orbit, cfg.h0, &cfg.assemble_options()).context("reconstructing the shock")?;
    let exploratory = orbit.is_exploratory();

    let speed_class = if orbit.s_min() <= ASYMPTOTIC_S {
        classify_limit_speed(cfg.sigma, &orbit)?
    } else {
        warnings.push(format!(
            "smin > {ASYMPTOTIC_S:e}: the limiting shock speed is not classified"
        ));
        SpeedClass::Inconclusive
    };
    let m_star = if is_radiation(cfg.sigma) && orbit.s_min() <= ASYMPTOTIC_S {
        Some(fit_m_star(&orbit)?)
    } else {
        None
    };

    if let Some(i) = orbit.asymptotic_from() {
        warnings.push(format!(
            "rows with S <= {:e} follow the asymptotic law u = 1/3 - (4/3)sqrt(S) below the cancellation floor",
            orbit.samples()[i].s
        ));
    }

    let report = if exploratory {
        warnings.push(
            "sigma > 1/3: the orbit is exploratory and uncertified; r is normalized by r(1) = 1 and no observability report is produced".into(),
        );
        None
    } else {
        let report = numeric_report(&solution)?;
        warn_tcrit(&report, &mut warnings);
        Some(report)
    };

    if !exploratory {
        let interior = &solution.rows[..solution.rows.len().saturating_sub(1)];
        let entropy_bad = interior.iter().filter(|r| !r.entropy_ok).count();
        let invariant_bad = solution.rows.iter().filter(|r| !r.invariant_ok).count();
        if entropy_bad > 0 {
            warnings.push(format!("{entropy_bad} rows violate the entropy conditions"));
        }
        if invariant_bad > 0 {
            warnings.push(format!("{invariant_bad} rows leave the invariant regions"));
        }
    }

    Ok(Solved {
        summary: Summary {
            sigma: cfg.sigma,
            h0: cfg.h0,
            m_star,
            speed_class: speed_class.name().into(),
            exploratory,
            rows: solution.rows.len(),
            report: report.as_ref().map(ReportJson::from),
            r_star_error_bar: (!exploratory).then_some(solution.r_star_error_bar),
            settings: cfg.settings(),
            warnings,
        },
        report,
        solution: Some(solution),
    })
}

fn warn_tcrit(report: &ObservabilityReport, warnings: &mut Vec<String>) {
    if !report.tcrit_within_bounds(BOUND_SLACK) {
        warnings.push(format!(
            "t_crit/t0 = {} from (H0 r(1))^(3(1+sigma)/(1+3sigma)) lies outside the bounds [{}, {}]; H0 r(1) = {} {} inside them",
            report.tcrit_ratio_numeric,
            report.tcrit_ratio_lower,
            report.tcrit_ratio_upper,
            report.h0_r_emergence,
            if report.h0_r_emergence_within_tcrit_bounds(BOUND_SLACK) { "is" } else { "is not" },
        ));
    }
}

/// Files written by [`cmd_run`].
#[derive(Debug, Clone)]
pub struct RunFiles {
    pub table: PathBuf,
    pub summary: PathBuf,
}

/// Solve, write the row table and `summary.json` into `cfg.out`, and return
/// the summary.
pub fn cmd_run(cfg: &RunConfig) -> anyhow::Result<(Summary, RunFiles)> {
    let solved = solve(cfg)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let table = cfg.out.join(format!("shock.{}", cfg.format.extension()));
    let file = BufWriter::new(File::create(&table).with_context(|| format!("creating {}", table.display()))?);
    match cfg.format {
        Format::Csv => output::write_rows_csv(file, solved.rows())?,
        Format::Json => output::write_rows_json(file, solved.rows())?,
    }
    let summary = cfg.out.join("summary.json");
    let text = serde_json::to_string_pretty(&solved.summary)? + "\n";
    fs::write(&summary, text).with_context(|| format!("writing {}", summary.display()))?;
    Ok((solved.summary, RunFiles { table, summary }))
}
