//! Figure presets. Each preset returns one table per panel.

use crate::commands::{kappa_family, linspace, persistence_table, survival_table, wigner_table, WignerSpec};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};
use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::FRAC_PI_4;
use swanson_csm::conformance::SURVIVAL_KAPPAS;
use swanson_csm::packets::{density_closed, DensityRegime, PacketKind};
use swanson_csm::{Branch, DerivedQuantities, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

/// `(panel, α, β)` at `ω = 1`: panels a-c have `|Ω| = 1`, d-f `|Ω| = 0.1`.
pub fn wigner_sets() -> [(&'static str, f64, f64); 6] {
    let h = 0.5f64.sqrt();
    let q = 101f64.sqrt() / 20.0;
    [
        ("a", -2.0, -0.25),
        ("b", -1.0, -0.5),
        ("c", -h, -h),
        ("d", -2.0, -101.0 / 800.0),
        ("e", -1.0, -101.0 / 400.0),
        ("f", -q, -q),
    ]
}

const PANELS: [(&str, PacketKind); 3] = [("a", PacketKind::Cosh), ("b", PacketKind::Sinh), ("c", PacketKind::Gaussian)];

/// `|Ω|` axis of the persistence heatmaps.
pub fn heatmap_kappas() -> Vec<f64> {
    (1..=50).map(|i| 0.02 * i as f64).collect()
}

pub fn run_figure(preset: Preset, cfg: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    match preset {
        Preset::Fig1 => wigner_panels(cfg, "fig1", 0),
        Preset::Fig2 => wigner_panels(cfg, "fig2", 2),
        Preset::Fig3 => fig3(cfg),
        Preset::Fig4 => fig4(cfg),
        Preset::Fig5 => fig5(cfg),
    }
}

fn wigner_panels(cfg: &RunConfig, name: &str, n: usize) -> Result<Vec<(String, Table)>, CliError> {
    wigner_sets()
        .par_iter()
        .map(|&(panel, alpha, beta)| {
            let p = ModelParams { omega: 1.0, alpha, beta, theta: FRAC_PI_4, ..cfg.params };
            let c = RunConfig { params: p, ..cfg.clone() };
            let spec = WignerSpec { n, m: n, branch: Branch::Minus, packet: None, t: 0.0, grid: (201, 201), extent: 6.0 };
            let t = wigner_table(&c, name, &spec)?.with_meta("panel", json!(panel));
            Ok((format!("{name}_{panel}"), t))
        })
        .collect()
}

fn base(cfg: &RunConfig) -> Result<(RunConfig, DerivedQuantities), CliError> {
    let c = RunConfig { params: ModelParams { theta: FRAC_PI_4, ..cfg.params }, ..cfg.clone() };
    let d = c.inverted()?;
    Ok((c, d))
}

fn fig3(cfg: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    let (c, d) = base(cfg)?;
    let times = linspace(0.0, 5.0 / d.kappa(), 101)?;
    let kappas: Vec<(f64, DerivedQuantities)> = SURVIVAL_KAPPAS.iter().map(|&k| Ok((k, kappa_family(&c.params, k)?))).collect::<Result<_, CliError>>()?;
    Ok(PANELS
        .iter()
        .map(|&(panel, k)| (format!("fig3_{panel}"), survival_table(&c, "fig3", &[k], &times, &kappas).with_meta("panel", json!(panel))))
        .collect())
}

fn fig4(cfg: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    let (c, d) = base(cfg)?;
    let kappa = d.kappa();
    let xs = linspace(-60.0, 60.0, 2401)?;
    let mut out = Vec::new();
    for &(panel, k) in &PANELS {
        let mut t = Table::new("fig4", &c, &["packet", "t", "kt", "X", "rho_X"])
            .with_meta("panel", json!(panel))
            .with_meta("coordinate", json!("scaled X; x = X b0/|sigma| at theta = pi/4"));
        for kt in [0.0, 3.0, 4.0] {
            for &x in &xs {
                t.push(vec![k.label().into(), (kt / kappa).into(), kt.into(), x.into(), density_closed(k, x, kt, DensityRegime::Exact).into()]);
            }
        }
        out.push((format!("fig4_{panel}"), t));
    }
    // centre traces: four travelling packets for cosh/sinh, one for the Gaussian
    let kts = linspace(0.0, 5.0, 101)?;
    for (panel, k) in [("d", PacketKind::Cosh), ("e", PacketKind::Sinh), ("f", PacketKind::Gaussian)] {
        let mut t = Table::new("fig4", &c, &["packet", "t", "kt", "centre", "X"]).with_meta("panel", json!(panel));
        for &kt in &kts {
            let centres: Vec<(&str, f64)> = match k {
                PacketKind::Gaussian => vec![("2cosh", 2.0 * kt.cosh())],
                _ => vec![("+2cosh", 2.0 * kt.cosh()), ("-2cosh", -2.0 * kt.cosh()), ("+2sinh", 2.0 * kt.sinh()), ("-2sinh", -2.0 * kt.sinh())],
            };
            for (id, r) in centres {
                t.push(vec![k.label().into(), (kt / kappa).into(), kt.into(), Cell::from(id), r.into()]);
            }
        }
        out.push((format!("fig4_{panel}"), t));
    }
    Ok(out)
}

fn fig5(cfg: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    let (c, d) = base(cfg)?;
    let times = linspace(0.0, 5.0 / d.kappa(), 101)?;
    let kappas: Vec<(f64, DerivedQuantities)> = heatmap_kappas().into_iter().map(|k| Ok((k, kappa_family(&c.params, k)?))).collect::<Result<_, CliError>>()?;
    PANELS
        .iter()
        .map(|&(panel, k)| Ok((format!("fig5_{panel}"), persistence_table(&c, "fig5", &[k], 200.0, &times, &kappas, false)?.with_meta("panel", json!(panel)))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CommonArgs;
    use swanson_csm::model::derive_quantities;

    #[test]
    fn wigner_sets_have_stated_rates() {
        for (i, (_, a, b)) in wigner_sets().iter().enumerate() {
            let d = derive_quantities(&ModelParams::new(1.0, *a, *b)).unwrap();
            let want = if i < 3 { 1.0 } else { 0.1 };
            assert!((d.kappa() - want).abs() < 1e-12, "{i}: {}", d.kappa());
        }
    }

    #[test]
    fn fig3_has_six_curves_per_panel() {
        let cfg = RunConfig::from_args(&CommonArgs::default()).unwrap();
        let panels = run_figure(Preset::Fig3, &cfg).unwrap();
        assert_eq!(panels.len(), 3);
        for (_, t) in &panels {
            assert_eq!(t.rows.len(), 6 * 101);
        }
    }
}
