//! `swanson`: data export for the complex-scaled Swanson oscillator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod figures;
mod output;

use clap::{Parser, Subcommand};
use commands::*;
use config::{CommonArgs, Format, RunConfig};
use error::CliError;
use figures::{run_figure, Preset};
use output::Table;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "swanson", version, about = "Complex scaling of the Swanson oscillator: spectra, evolution, phase space and figure data")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eigenvalues, optionally with sampled eigenfunctions.
    Spectrum(SpectrumArgs),
    /// Evolved Tilde/Bar fields of a packet or eigenstate.
    Evolve(EvolveArgs),
    /// Wigner function W_mn or packet Wigner function on an (x, p) grid.
    Wigner(WignerArgs),
    /// Survival probabilities.
    Survival(SurvivalArgs),
    /// Packet densities.
    Density(DensityArgs),
    /// Persistence probability in [-L, L].
    Persistence(PersistenceArgs),
    /// First and second moments of the packet densities.
    Moments(MomentsArgs),
    /// Compare the complex-scaled and generalized-eigenfunction treatments.
    RhsCompare(RhsArgs),
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    /// Run the conformance suite and emit a JSON report.
    Conformance,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(&cli.common)?;
    let out = cfg.out.clone();
    let table = |t: Table| output::emit(&t.render(cfg.format_or(Format::Csv)), out.as_deref());
    match &cli.cmd {
        Cmd::Spectrum(a) => table(spectrum(&cfg, a)?),
        Cmd::Evolve(a) => table(evolve(&cfg, a)?),
        Cmd::Wigner(a) => table(wigner(&cfg, a)?),
        Cmd::Survival(a) => table(survival(&cfg, a)?),
        Cmd::Density(a) => table(density(&cfg, a)?),
        Cmd::Persistence(a) => table(persistence(&cfg, a)?),
        Cmd::Moments(a) => table(moments_cmd(&cfg, a)?),
        Cmd::RhsCompare(a) => {
            let (t, f) = rhs_compare(&cfg, a)?;
            output::emit(&t.render(f), out.as_deref())
        }
        Cmd::Fig1 => figure(Preset::Fig1, &cfg),
        Cmd::Fig2 => figure(Preset::Fig2, &cfg),
        Cmd::Fig3 => figure(Preset::Fig3, &cfg),
        Cmd::Fig4 => figure(Preset::Fig4, &cfg),
        Cmd::Fig5 => figure(Preset::Fig5, &cfg),
        Cmd::Conformance => conformance(&cfg),
    }
}

fn figure(preset: Preset, cfg: &RunConfig) -> Result<(), CliError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    let tables = run_figure(preset, cfg)?;
    for p in output::emit_files(&dir, &tables, cfg.format_or(Format::Csv))? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn conformance(cfg: &RunConfig) -> Result<(), CliError> {
    let report = swanson_csm::conformance::run_conformance(&cfg.params)?;
    for c in &report.criteria {
        eprintln!("{}", c.line());
    }
    let mut text = serde_json::to_string_pretty(&serde_json::json!({"artifact": output::ARTIFACT, "report": report})).expect("serialisable");
    text.push('\n');
    output::emit(&text, cfg.out.as_deref())?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
        Err(CliError::Tolerance(format!("criteria failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swanson: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
