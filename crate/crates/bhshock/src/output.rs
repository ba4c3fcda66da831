//! CSV and JSON writers.
//!
//! Floats are written with 17 significant digits so every value round-trips.

use std::io::Write;

use bhshock_core::estimates::ObservabilityReport;
use bhshock_core::reconstruct::ShockSolutionRow;
use serde::Serialize;

pub const ROW_COLUMNS: [&str; 16] = [
    "S",
    "N",
    "u",
    "v",
    "rbar",
    "r",
    "t",
    "rho",
    "p",
    "pbar",
    "rhobar",
    "s",
    "B",
    "B_valid",
    "entropy_ok",
    "invariant_ok",
];

/// Slack allowed when comparing a numeric value with its analytic bounds.
pub const BOUND_SLACK: f64 = 1e-9;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_rows_csv<W: Write>(w: W, rows: &[ShockSolutionRow]) -> anyhow::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(ROW_COLUMNS)?;
    for row in rows {
        let b = row.b().map(float).unwrap_or_default();
        out.write_record([
            float(row.s),
            float(row.n),
            float(row.u),
            float(row.v),
            float(row.rbar),
            float(row.r),
            float(row.t),
            float(row.rho),
            float(row.p),
            float(row.pbar),
            float(row.rhobar),
            float(row.speed),
            b,
            row.b_valid().to_string(),
            row.entropy_ok.to_string(),
            row.invariant_ok.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
struct RowJson {
    S: f64,
    N: f64,
    u: f64,
    v: f64,
    rbar: f64,
    r: f64,
    t: f64,
    rho: f64,
    p: f64,
    pbar: f64,
    rhobar: f64,
    s: f64,
    B: Option<f64>,
    B_valid: bool,
    entropy_ok: bool,
    invariant_ok: bool,
}

impl From<&ShockSolutionRow> for RowJson {
    fn from(row: &ShockSolutionRow) -> Self {
        RowJson {
            S: row.s,
            N: row.n,
            u: row.u,
            v: row.v,
            rbar: row.rbar,
            r: row.r,
            t: row.t,
            rho: row.rho,
            p: row.p,
            pbar: row.pbar,
            rhobar: row.rhobar,
            s: row.speed,
            B: row.b(),
            B_valid: row.b_valid(),
            entropy_ok: row.entropy_ok,
            invariant_ok: row.invariant_ok,
        }
    }
}

pub fn write_rows_json<W: Write>(mut w: W, rows: &[ShockSolutionRow]) -> anyhow::Result<()> {
    let rows: Vec<RowJson> = rows.iter().map(RowJson::from).collect();
    serde_json::to_writer_pretty(&mut w, &rows)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// [`ObservabilityReport`] plus its bracketing verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportJson {
    pub sigma: f64,
    pub h0_r_star: f64,
    pub s0: f64,
    pub sqrt_n0_numeric: f64,
    pub sqrt_n0_lower: f64,
    pub sqrt_n0_upper: f64,
    pub tcrit_ratio_numeric: f64,
    pub tcrit_ratio_lower: f64,
    pub tcrit_ratio_upper: f64,
    pub h0_r_emergence: f64,
    pub sqrt_n0_within_bounds: bool,
    pub tcrit_within_bounds: bool,
    pub h0_r_emergence_within_tcrit_bounds: bool,
}

impl From<&ObservabilityReport> for ReportJson {
    fn from(r: &ObservabilityReport) -> Self {
        ReportJson {
            sigma: r.sigma,
            h0_r_star: r.h0_r_star,
            s0: r.s0,
            sqrt_n0_numeric: r.sqrt_n0_numeric,
            sqrt_n0_lower: r.sqrt_n0_lower,
            sqrt_n0_upper: r.sqrt_n0_upper,
            tcrit_ratio_numeric: r.tcrit_ratio_numeric,
            tcrit_ratio_lower: r.tcrit_ratio_lower,
            tcrit_ratio_upper: r.tcrit_ratio_upper,
            h0_r_emergence: r.h0_r_emergence,
            sqrt_n0_within_bounds: r.sqrt_n0_within_bounds(BOUND_SLACK),
            tcrit_within_bounds: r.tcrit_within_bounds(BOUND_SLACK),
            h0_r_emergence_within_tcrit_bounds: r.h0_r_emergence_within_tcrit_bounds(BOUND_SLACK),
        }
    }
}

pub const SWEEP_COLUMNS: [&str; 15] = [
    "sigma",
    "h0_r_star",
    "s0",
    "sqrt_n0",
    "sqrt_n0_lower",
    "sqrt_n0_upper",
    "tcrit_ratio",
    "tcrit_ratio_lower",
    "tcrit_ratio_upper",
    "h0_r_emergence",
    "sqrt_n0_ok",
    "tcrit_ok",
    "h0_r_emergence_ok",
    "speed_class",
    "error",
];

/// One σ of a sweep: a report, or the error that prevented one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub report: Option<ReportJson>,
    pub speed_class: Option<String>,
    pub error: Option<String>,
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> anyhow::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(SWEEP_COLUMNS)?;
    for row in rows {
        let mut record = vec![float(row.sigma)];
        match &row.report {
            Some(r) => {
                record.extend(
                    [
                        r.h0_r_star,
                        r.s0,
                        r.sqrt_n0_numeric,
                        r.sqrt_n0_lower,
                        r.sqrt_n0_upper,
                        r.tcrit_ratio_numeric,
                        r.tcrit_ratio_lower,
                        r.tcrit_ratio_upper,
                        r.h0_r_emergence,
                    ]
                    .map(float),
                );
                record.extend(
                    [
                        r.sqrt_n0_within_bounds,
                        r.tcrit_within_bounds,
                        r.h0_r_emergence_within_tcrit_bounds,
                    ]
                    .map(|b| b.to_string()),
                );
            }
            None => record.extend(std::iter::repeat_n(String::new(), 12)),
        }
        record.push(row.speed_class.clone().unwrap_or_default());
        record.push(row.error.clone().unwrap_or_default());
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_sweep_json<W: Write>(mut w: W, rows: &[SweepRow]) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    w.write_all(b"\n")?;
    Ok(())
}
