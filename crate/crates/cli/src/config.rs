//! Parameter ingestion: defaults, then the config file, then flags.

use crate::error::CliError;
use clap::{Args, ValueEnum};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use swanson_csm::model::{classify_region, derive_quantities, EP_TOLERANCE};
use swanson_csm::special::QuadraturePolicy;
use swanson_csm::{DerivedQuantities, ModelParams, RegionClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat TOML file with any of: omega, alpha, beta, hbar, b0, theta.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Scaling angle: a real number or `pi/4`, `pi/2`, `3pi/4`, ...
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub b0: Option<f64>,
    /// Gauss-Legendre panels per refinement level.
    #[arg(long, global = true)]
    pub quad_panels: Option<usize>,
    /// Absolute and relative quadrature target.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Multiplier on the default quadrature half-width.
    #[arg(long, global = true)]
    pub quad_halfwidth_scale: Option<f64>,
    /// Output file (or directory for figure presets). Stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub quad: QuadraturePolicy,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> Result<Self, CliError> {
        let mut p = ModelParams::new(1.0, -1.0, -0.5);
        if let Some(path) = &a.config {
            apply_config_file(&mut p, path)?;
        }
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut p.omega, a.omega);
        set(&mut p.alpha, a.alpha);
        set(&mut p.beta, a.beta);
        set(&mut p.hbar, a.hbar);
        set(&mut p.b0, a.b0);
        if let Some(t) = &a.theta {
            p.theta = parse_theta(t)?;
        }
        let mut quad = QuadraturePolicy::default();
        if let Some(n) = a.quad_panels {
            if n == 0 {
                return Err(CliError::Usage("--quad-panels must be positive".into()));
            }
            quad.panels = n;
        }
        if let Some(t) = a.quad_tol {
            if !(t > 0.0) {
                return Err(CliError::Usage("--quad-tol must be positive".into()));
            }
            quad = quad.with_tolerances(t, t);
        }
        if let Some(s) = a.quad_halfwidth_scale {
            if !(s > 0.0) {
                return Err(CliError::Usage("--quad-halfwidth-scale must be positive".into()));
            }
            quad.half_width *= s;
        }
        Ok(Self { params: p, quad, out: a.out.clone(), format: a.format })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn region(&self) -> Result<RegionClass, CliError> {
        Ok(classify_region(&self.params, EP_TOLERANCE)?)
    }

    /// Derived quantities, rejecting anything outside the inverted-oscillator region.
    pub fn inverted(&self) -> Result<DerivedQuantities, CliError> {
        let d = derive_quantities(&self.params)?;
        if self.region()? == RegionClass::ExceptionalPoint {
            return Err(CliError::Region(format!(
                "exceptional point: omega^2 - 4 alpha beta = {:e} (|.| <= {EP_TOLERANCE:e}); this subcommand needs omega^2 < 4 alpha beta",
                d.omega_sq
            )));
        }
        d.require_inverted()?;
        Ok(d)
    }
}

fn apply_config_file(p: &mut ModelParams, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    for (key, value) in &table {
        let num = || -> Result<f64, CliError> {
            match value {
                toml::Value::Float(f) => Ok(*f),
                toml::Value::Integer(i) => Ok(*i as f64),
                _ => Err(CliError::Usage(format!("config key `{key}` must be a number"))),
            }
        };
        match key.as_str() {
            "omega" => p.omega = num()?,
            "alpha" => p.alpha = num()?,
            "beta" => p.beta = num()?,
            "hbar" => p.hbar = num()?,
            "b0" => p.b0 = num()?,
            "theta" => {
                p.theta = match value {
                    toml::Value::String(s) => parse_theta(s)?,
                    _ => num()?,
                }
            }
            other => return Err(CliError::Usage(format!("unknown config key `{other}`"))),
        }
    }
    Ok(())
}

/// `0.3`, `pi`, `pi/4`, `3pi/4`, `3*pi/4`.
pub fn parse_theta(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || CliError::Usage(format!("cannot parse theta `{s}`"));
    let lower = s.to_ascii_lowercase();
    let (num, den) = match lower.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (lower.clone(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*').trim();
    let coef = if coef.is_empty() {
        1.0
    } else if coef == "-" {
        -1.0
    } else {
        coef.parse::<f64>().map_err(|_| bad())?
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(coef * PI / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn theta_literals() {
        assert_eq!(parse_theta("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_theta("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_theta("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_theta("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_theta("0.5").unwrap(), 0.5);
        assert!(parse_theta("tau/4").is_err());
        assert!(parse_theta("pi/0").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "alpha = -2\nbeta = -0.25\ntheta = \"pi/4\"\n").unwrap();
        let a = CommonArgs { config: Some(path), beta: Some(-0.5), ..Default::default() };
        let c = RunConfig::from_args(&a).unwrap();
        assert_eq!((c.params.alpha, c.params.beta, c.params.theta), (-2.0, -0.5, FRAC_PI_4));
    }

    #[test]
    fn unknown_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "gamma = 1\n").unwrap();
        let a = CommonArgs { config: Some(path), ..Default::default() };
        assert!(matches!(RunConfig::from_args(&a), Err(CliError::Usage(_))));
    }

    #[test]
    fn region_diagnostic_names_inequality() {
        let a = CommonArgs { alpha: Some(0.0), beta: Some(0.0), ..Default::default() };
        let e = RunConfig::from_args(&a).unwrap().inverted().unwrap_err();
        assert!(e.to_string().contains("omega^2 < 4 alpha beta"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }
}
