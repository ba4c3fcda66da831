//! The `sweep` subcommand: observability reports over a list of σ.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::thread;

use anyhow::Context;
use bhshock_core::phase::is_radiation;

use crate::config::{parse_sigma, Format, RunConfig};
use crate::output::{self, SweepRow};
use crate::run::solve;

/// Parse σ values given as separate arguments and/or comma-separated lists.
pub fn parse_sigma_list<S: AsRef<str>>(args: &[S]) -> anyhow::Result<Vec<f64>> {
    args.iter()
        .flat_map(|a| a.as_ref().split(',').map(str::to_owned).collect::<Vec<_>>())
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_sigma(&s))
        .collect()
}

/// Sort ascending and drop duplicates, returning how many were dropped.
pub fn normalize(mut sigmas: Vec<f64>) -> (Vec<f64>, usize) {
    sigmas.sort_by(f64::total_cmp);
    let before = sigmas.len();
    sigmas.dedup();
    let dropped = before - sigmas.len();
    (sigmas, dropped)
}

fn sweep_one(sigma: f64, base: &RunConfig) -> SweepRow {
    let cfg = RunConfig { sigma, ..base.clone() };
    let outcome = if sigma > 1.0 / 3.0 && !is_radiation(sigma) {
        Err(anyhow::anyhow!("observability estimates hold for 0 <= sigma <= 1/3"))
    } else {
        solve(&cfg)
    };
    match outcome {
        Ok(solved) => SweepRow {
            sigma,
            report: solved.summary.report,
            speed_class: Some(solved.summary.speed_class),
            error: None,
        },
        Err(e) => SweepRow {
            sigma,
            report: None,
            speed_class: None,
            error: Some(format!("{e:#}")),
        },
    }
}

/// One row per distinct σ, in ascending order. Each σ runs on its own
/// thread; a failing σ becomes a row with its error recorded.
pub fn sweep(sigmas: &[f64], base: &RunConfig) -> Vec<SweepRow> {
    thread::scope(|scope| {
        let handles: Vec<_> = sigmas
            .iter()
            .map(|&sigma| scope.spawn(move || sweep_one(sigma, base)))
            .collect();
        handles
            .into_iter()
            .zip(sigmas)
            .map(|(h, &sigma)| {
                h.join().unwrap_or_else(|_| SweepRow {
                    sigma,
                    report: None,
                    speed_class: None,
                    error: Some("worker panicked".into()),
                })
            })
            .collect()
    })
}

/// Run a sweep and write `sweep.csv` or `sweep.json` into `base.out`.
pub fn cmd_sweep(sigmas: Vec<f64>, base: &RunConfig) -> anyhow::Result<(Vec<SweepRow>, Vec<String>, PathBuf)> {
    let (sigmas, dropped) = normalize(sigmas);
    let mut warnings = Vec::new();
    if dropped > 0 {
        warnings.push(format!("dropped {dropped} duplicate sigma values"));
    }
    let rows = sweep(&sigmas, base);
    fs::create_dir_all(&base.out).with_context(|| format!("creating {}", base.out.display()))?;
    let path = base.out.join(format!("sweep.{}", base.format.extension()));
    let file = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
    match base.format {
        Format::Csv => output::write_sweep_csv(file, &rows)?,
        Format::Json => output::write_sweep_json(file, &rows)?,
    }
    Ok((rows, warnings, path))
}
