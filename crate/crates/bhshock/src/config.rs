//! Run settings shared by every subcommand.

use std::path::PathBuf;

use anyhow::{bail, Context};
use bhshock_core::phase::OrbitOptions;
use bhshock_core::reconstruct::AssembleOptions;
use bhshock_core::tov::{BVariant, DEFAULT_HORIZON_EPS};
use serde::Serialize;

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sigma: f64,
    pub h0: f64,
    pub s_min: f64,
    pub rel_tol: f64,
    pub b_variant: BVariant,
    pub horizon_eps: f64,
    pub out: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let orbit = OrbitOptions::default();
        Self {
            sigma: 1.0 / 3.0,
            h0: 1.0,
            s_min: orbit.s_min,
            rel_tol: orbit.rel_tol,
            b_variant: BVariant::default(),
            horizon_eps: DEFAULT_HORIZON_EPS,
            out: PathBuf::from("bhshock-out"),
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.sigma >= 0.0 && self.sigma < 1.0) {
            bail!("sigma = {} must lie in [0, 1)", self.sigma);
        }
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            bail!("h0 = {} must be positive", self.h0);
        }
        if !(self.s_min > 0.0 && self.s_min < 1.0) {
            bail!("smin = {} must lie in (0, 1)", self.s_min);
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-2) {
            bail!("rel-tol = {} must lie in (0, 1e-2)", self.rel_tol);
        }
        if !(self.horizon_eps > 0.0 && self.horizon_eps < 1.0) {
            bail!("horizon-eps = {} must lie in (0, 1)", self.horizon_eps);
        }
        Ok(())
    }

    pub fn orbit_options(&self) -> OrbitOptions {
        OrbitOptions {
            s_min: self.s_min,
            rel_tol: self.rel_tol,
            ..OrbitOptions::default()
        }
    }

    pub fn assemble_options(&self) -> AssembleOptions {
        AssembleOptions {
            b_variant: self.b_variant,
            horizon_eps: self.horizon_eps,
            ..AssembleOptions::default()
        }
    }

    pub fn settings(&self) -> Settings {
        let orbit = self.orbit_options();
        Settings {
            sigma: self.sigma,
            h0: self.h0,
            s_min: self.s_min,
            rel_tol: self.rel_tol,
            abs_tol: orbit.abs_tol,
            points_per_decade: orbit.points_per_decade,
            max_steps: orbit.max_steps,
            b_variant: self.b_variant.name(),
            b0: self.assemble_options().b0,
            horizon_eps: self.horizon_eps,
            format: self.format,
        }
    }
}

/// Every setting that influences the output, echoed into metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub sigma: f64,
    pub h0: f64,
    pub s_min: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub points_per_decade: usize,
    pub max_steps: usize,
    pub b_variant: &'static str,
    pub b0: f64,
    pub horizon_eps: f64,
    pub format: Format,
}

/// Parse `σ` as a decimal or a fraction such as `1/3`.
pub fn parse_sigma(text: &str) -> anyhow::Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .with_context(|| format!("bad numerator in {text:?}"))?;
            let den: f64 = den
                .trim()
                .parse()
                .with_context(|| format!("bad denominator in {text:?}"))?;
            if den == 0.0 {
                bail!("zero denominator in {text:?}");
            }
            num / den
        }
        None => text.parse().with_context(|| format!("bad sigma {text:?}"))?,
    };
    if !value.is_finite() {
        bail!("sigma {text:?} is not finite");
    }
    Ok(value)
}

pub fn parse_b_variant(text: &str) -> anyhow::Result<BVariant> {
    BVariant::from_name(text).with_context(|| {
        let names: Vec<_> = BVariant::ALL.iter().map(|v| v.name()).collect();
        format!("unknown b-variant {text:?}; expected one of {}", names.join(", "))
    })
}
