//! Single-table subcommands.

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Table};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use swanson_csm::eigen::{eigenfunction, eigenvalue, EigenstateId, Side};
use swanson_csm::model::{derive_quantities, theta_domain};
use swanson_csm::packets::{
    density_closed_complex, moments, moments_numeric, packet_evolved_closed, persistence_numeric, persistence_q, scale_factor,
    survival_probability, DensityRegime, PacketKind,
};
use swanson_csm::propagator::{eigenstate_evolved, evolve_quadrature, uniform_grid, ComplexField, FieldSide};
use swanson_csm::rhs::csm_rhs_equivalence_report;
use swanson_csm::wigner::{wigner_mn, wigner_packet_xp};
use swanson_csm::{Branch, Complex64, DerivedQuantities, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

fn branch_label(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "+",
        Branch::Minus => "-",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PacketArg {
    C,
    S,
    G,
    All,
}

impl PacketArg {
    pub fn kinds(self) -> Vec<PacketKind> {
        match self {
            PacketArg::C => vec![PacketKind::Cosh],
            PacketArg::S => vec![PacketKind::Sinh],
            PacketArg::G => vec![PacketKind::Gaussian],
            PacketArg::All => PacketKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Tilde,
    Bar,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<FieldSide> {
        match self {
            SideArg::Tilde => vec![FieldSide::Tilde],
            SideArg::Bar => vec![FieldSide::Bar],
            SideArg::Both => vec![FieldSide::Tilde, FieldSide::Bar],
        }
    }
}

fn side_label(s: FieldSide) -> &'static str {
    match s {
        FieldSide::Tilde => "tilde",
        FieldSide::Bar => "bar",
    }
}

/// Time samples: an explicit `--t` list, or `--t-points` on `[0, t_max]`.
#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    /// Comma-separated times.
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 101)]
    pub t_points: usize,
    /// Defaults to 5/|Omega|.
    #[arg(long)]
    pub t_max: Option<f64>,
}

impl TimeArgs {
    pub fn times(&self, kappa: f64) -> Result<Vec<f64>, CliError> {
        if !self.t.is_empty() {
            if self.t.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                return Err(CliError::Usage("times must be finite and >= 0".into()));
            }
            return Ok(self.t.clone());
        }
        let t_max = self.t_max.unwrap_or(5.0 / kappa);
        linspace(0.0, t_max, self.t_points)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if n < 2 || !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(CliError::Usage(format!("bad axis [{a}, {b}] with {n} points")));
    }
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { b } else { a + i as f64 * h }).collect())
}

/// 1-D grid in `x` (units of `b₀`).
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    /// Number of grid points.
    #[arg(long, visible_alias = "points")]
    pub grid: Option<usize>,
}

impl GridArgs {
    /// The requested grid, defaulting to `±half` with `points` samples.
    fn axis(&self, half: f64, points: usize) -> Result<Vec<f64>, CliError> {
        Ok(uniform_grid(self.xmin.unwrap_or(-half), self.xmax.unwrap_or(half), self.grid.unwrap_or(points))?)
    }

    fn given(&self) -> bool {
        self.xmin.is_some() || self.xmax.is_some() || self.grid.is_some()
    }
}

/// `|Ω|` sweep at fixed `ω`, `α`: `β = (ω² + |Ω|²)/4α`.
pub fn kappa_family(base: &ModelParams, kappa: f64) -> Result<DerivedQuantities, CliError> {
    if !(kappa > 0.0) || base.alpha == 0.0 {
        return Err(CliError::Usage(format!("cannot sweep |Omega| = {kappa} at alpha = {}", base.alpha)));
    }
    let p = ModelParams { beta: (base.omega * base.omega + kappa * kappa) / (4.0 * base.alpha), ..*base };
    let d = derive_quantities(&p)?;
    d.require_inverted()?;
    Ok(d)
}

fn sweep(cfg: &RunConfig, d: &DerivedQuantities, list: &[f64]) -> Result<Vec<(f64, DerivedQuantities)>, CliError> {
    if list.is_empty() {
        return Ok(vec![(d.kappa(), *d)]);
    }
    list.iter().map(|&k| Ok((k, kappa_family(&cfg.params, k)?))).collect()
}

fn c(z: Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Number of levels per branch.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Restrict to one branch.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Sample eigenfunctions on the grid (in-domain branch only).
    #[command(flatten)]
    pub grid: GridArgs,
}

pub fn spectrum(cfg: &RunConfig, a: &SpectrumArgs) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let theta = cfg.params.theta;
    let branches: Vec<Branch> = match a.branch {
        Some(b) => vec![b.into()],
        None => vec![Branch::Minus, Branch::Plus],
    };
    let sample = a.grid.given();
    let mut cols = vec!["n", "branch", "side", "re_e", "im_e"];
    if sample {
        cols.extend(["x", "re_f", "im_f"]);
    }
    let mut t = Table::new("spectrum", cfg, &cols).with_meta("levels", json!(a.n));
    let xs = if sample { a.grid.axis(8.0 / d.inv_length(), 401)? } else { Vec::new() };
    for &b in &branches {
        if sample && !theta_domain(b, theta) {
            continue;
        }
        for side in [Side::Tilde, Side::Bar] {
            for n in 0..a.n {
                let id = EigenstateId::new(n, b, side);
                let e = eigenvalue(id, &d).value;
                let head = [Cell::from(n), branch_label(b).into(), if side == Side::Tilde { "tilde" } else { "bar" }.into(), e.re.into(), e.im.into()];
                if !sample {
                    t.push(head.to_vec());
                    continue;
                }
                let vals: Vec<Complex64> = xs.par_iter().map(|&x| eigenfunction(id, &d, theta, x)).collect::<Result<_, _>>()?;
                for (&x, v) in xs.iter().zip(vals) {
                    let mut r = head.to_vec();
                    r.push(x.into());
                    r.extend(c(v));
                    t.push(r);
                }
            }
        }
    }
    Ok(t)
}

// ------------------------------------------------------------------ evolve

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    /// Packet to evolve (exclusive with --n).
    #[arg(long, value_enum, conflicts_with = "n")]
    pub packet: Option<PacketArg>,
    /// Eigenstate level to evolve.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "minus")]
    pub branch: BranchArg,
    #[arg(long, value_enum, default_value = "both")]
    pub side: SideArg,
    /// Comma-separated times.
    #[arg(long = "t", value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    /// Evolve the Tilde field by kernel quadrature instead of the closed form.
    #[arg(long)]
    pub kernel: bool,
    #[command(flatten)]
    pub grid: GridArgs,
}

pub fn evolve(cfg: &RunConfig, a: &EvolveArgs) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let theta = cfg.params.theta;
    let branch: Branch = a.branch.into();
    let kind = match (a.packet, a.n) {
        (Some(PacketArg::All), _) => return Err(CliError::Usage("evolve takes a single packet".into())),
        (Some(p), None) => Some(p.kinds()[0]),
        (None, Some(_)) => None,
        _ => return Err(CliError::Usage("give exactly one of --packet or --n".into())),
    };
    if a.t.iter().any(|t| !(*t >= 0.0)) {
        return Err(CliError::Usage("times must be >= 0".into()));
    }
    let xs = a.grid.axis(8.0 / d.inv_length(), 801)?;
    let field = |side: FieldSide, x: f64, t: f64| -> swanson_csm::Result<Complex64> {
        match kind {
            Some(k) => packet_evolved_closed(k, side, &d, theta, x, t),
            None => eigenstate_evolved(&d, theta, a.n.unwrap(), branch, side, x, t),
        }
    };
    let label = match kind {
        Some(k) => format!("packet {}", k.label()),
        None => format!("eigenstate n={} branch {}", a.n.unwrap(), branch_label(branch)),
    };
    let mut tab = Table::new("evolve", cfg, &["t", "side", "x", "re", "im"])
        .with_meta("state", json!(label))
        .with_meta("method", json!(if a.kernel { "kernel quadrature (tilde)" } else { "closed form" }));
    for &t in &a.t {
        for side in a.side.sides() {
            let vals: Vec<Complex64> = if a.kernel && t > 0.0 && side == FieldSide::Tilde {
                let f0 = ComplexField::new(xs.clone(), xs.iter().map(|&x| field(side, x, 0.0)).collect::<Result<_, _>>()?, theta, 0.0, side)?;
                evolve_quadrature(&f0, &d, t, &cfg.quad)?.values
            } else {
                xs.par_iter().map(|&x| field(side, x, t)).collect::<Result<_, _>>()?
            };
            for (&x, v) in xs.iter().zip(vals) {
                let mut r = vec![t.into(), side_label(side).into(), x.into()];
                r.extend(c(v));
                tab.push(r);
            }
        }
    }
    Ok(tab)
}

// ------------------------------------------------------------------ wigner

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Defaults to --n (diagonal element).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value = "minus")]
    pub branch: BranchArg,
    /// Packet Wigner function instead of W_mn.
    #[arg(long, value_enum)]
    pub packet: Option<PacketArg>,
    #[arg(long = "t", default_value_t = 0.0)]
    pub t: f64,
    /// `N` or `NXxNP` samples.
    #[arg(long, default_value = "201")]
    pub grid: String,
    /// Half-extent in units of b0/|sigma| (x) and hbar|sigma|/b0 (p).
    #[arg(long, default_value_t = 6.0)]
    pub extent: f64,
}

pub fn parse_grid2(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad grid `{s}`, expected N or NXxNP"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

pub struct WignerSpec {
    pub n: usize,
    pub m: usize,
    pub branch: Branch,
    pub packet: Option<PacketKind>,
    pub t: f64,
    pub grid: (usize, usize),
    pub extent: f64,
}

pub fn wigner_table(cfg: &RunConfig, command: &str, s: &WignerSpec) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let theta = cfg.params.theta;
    let sig = d.inv_length();
    let xs: Vec<f64> = linspace(-s.extent, s.extent, s.grid.0)?.into_iter().map(|u| u / sig).collect();
    let ps: Vec<f64> = linspace(-s.extent, s.extent, s.grid.1)?.into_iter().map(|u| u * d.hbar * sig).collect();
    let rows: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            ps.iter()
                .map(|&p| match s.packet {
                    Some(k) => Ok(wigner_packet_xp(k, &d, theta, x, p, s.t)),
                    None => wigner_mn(&d, theta, s.m, s.n, s.branch, x, p, s.t),
                })
                .collect::<swanson_csm::Result<Vec<_>>>()
        })
        .collect::<Result<_, _>>()?;
    let mut tab = Table::new(command, cfg, &["x", "p", "re_w", "im_w"])
        .with_meta("n", json!(s.n))
        .with_meta("m", json!(s.m))
        .with_meta("branch", json!(branch_label(s.branch)))
        .with_meta("t", json!(s.t))
        .with_meta("packet", json!(s.packet.map(|k| k.label())));
    for (i, &x) in xs.iter().enumerate() {
        for (j, &p) in ps.iter().enumerate() {
            let mut r = vec![x.into(), p.into()];
            r.extend(c(rows[i][j]));
            tab.push(r);
        }
    }
    Ok(tab)
}

pub fn wigner(cfg: &RunConfig, a: &WignerArgs) -> Result<Table, CliError> {
    let packet = match a.packet {
        Some(PacketArg::All) => return Err(CliError::Usage("wigner takes a single packet".into())),
        p => p.map(|p| p.kinds()[0]),
    };
    if !(a.extent > 0.0) {
        return Err(CliError::Usage("--extent must be positive".into()));
    }
    let spec = WignerSpec { n: a.n, m: a.m.unwrap_or(a.n), branch: a.branch.into(), packet, t: a.t, grid: parse_grid2(&a.grid)?, extent: a.extent };
    wigner_table(cfg, "wigner", &spec)
}

// ---------------------------------------------------------------- survival

#[derive(Debug, Clone, Args)]
pub struct SurvivalArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub packet: PacketArg,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Comma-separated |Omega| values (beta adjusted at fixed omega, alpha).
    #[arg(long, value_delimiter = ',')]
    pub omega_list: Vec<f64>,
}

pub fn survival_table(cfg: &RunConfig, command: &str, kinds: &[PacketKind], times: &[f64], kappas: &[(f64, DerivedQuantities)]) -> Table {
    let mut tab = Table::new(command, cfg, &["packet", "kappa", "t", "p", "ln_p"]);
    for &k in kinds {
        for (kappa, _) in kappas {
            for &t in times {
                let p = survival_probability(k, kappa * t);
                tab.push(vec![k.label().into(), (*kappa).into(), t.into(), p.into(), p.ln().into()]);
            }
        }
    }
    tab
}

pub fn survival(cfg: &RunConfig, a: &SurvivalArgs) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let kappas = sweep(cfg, &d, &a.omega_list)?;
    let times = a.time.times(d.kappa())?;
    Ok(survival_table(cfg, "survival", &a.packet.kinds(), &times, &kappas))
}

// ----------------------------------------------------------------- density

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Exact,
    Asymptotic,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub packet: PacketArg,
    /// Comma-separated times.
    #[arg(long = "t", value_delimiter = ',', default_value = "0")]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    pub regime: RegimeArg,
    #[command(flatten)]
    pub grid: GridArgs,
}

pub fn density(cfg: &RunConfig, a: &DensityArgs) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let theta = cfg.params.theta;
    let regime = match a.regime {
        RegimeArg::Exact => DensityRegime::Exact,
        RegimeArg::Asymptotic => DensityRegime::Asymptotic,
    };
    let kt_max = a.t.iter().fold(0.0f64, |m, t| m.max(d.kappa() * t));
    let xs = a.grid.axis((2.0 * kt_max.cosh() + 6.0) / d.inv_length(), 801)?;
    let z = scale_factor(&d, theta);
    let mut tab = Table::new("density", cfg, &["packet", "t", "x", "re_rho", "im_rho"]).with_meta("regime", json!(format!("{regime:?}")));
    for k in a.packet.kinds() {
        for &t in &a.t {
            let kt = d.kappa() * t;
            for &x in &xs {
                let mut r = vec![k.label().into(), t.into(), x.into()];
                r.extend(c(z * density_closed_complex(k, z * x, kt, regime)));
                tab.push(r);
            }
        }
    }
    Ok(tab)
}

// ------------------------------------------------------------- persistence

#[derive(Debug, Clone, Args)]
pub struct PersistenceArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub packet: PacketArg,
    /// Half-width of the region, in units of b0.
    #[arg(long = "L", default_value_t = 200.0)]
    pub l: f64,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long, value_delimiter = ',')]
    pub omega_list: Vec<f64>,
    /// Integrate the density numerically instead of the closed form.
    #[arg(long)]
    pub numeric: bool,
}

pub fn persistence_table(
    cfg: &RunConfig,
    command: &str,
    kinds: &[PacketKind],
    l: f64,
    times: &[f64],
    kappas: &[(f64, DerivedQuantities)],
    numeric: bool,
) -> Result<Table, CliError> {
    let theta = cfg.params.theta;
    let mut tab = Table::new(command, cfg, &["packet", "kappa", "t", "L", "re_q", "im_q"]).with_meta("L", json!(l));
    for &k in kinds {
        for (kappa, d) in kappas {
            let qs: Vec<Complex64> = times
                .par_iter()
                .map(|&t| if numeric { persistence_numeric(k, d, theta, l, t, &cfg.quad) } else { persistence_q(k, d, theta, l, t) })
                .collect::<Result<_, _>>()?;
            for (&t, q) in times.iter().zip(qs) {
                let mut r = vec![k.label().into(), (*kappa).into(), t.into(), l.into()];
                r.extend(c(q));
                tab.push(r);
            }
        }
    }
    Ok(tab)
}

pub fn persistence(cfg: &RunConfig, a: &PersistenceArgs) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let kappas = sweep(cfg, &d, &a.omega_list)?;
    let times = a.time.times(d.kappa())?;
    persistence_table(cfg, "persistence", &a.packet.kinds(), a.l, &times, &kappas, a.numeric)
}

// ----------------------------------------------------------------- moments

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub packet: PacketArg,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Quadrature of the density instead of the closed-form table.
    #[arg(long)]
    pub numeric: bool,
}

pub fn moments_cmd(cfg: &RunConfig, a: &MomentsArgs) -> Result<Table, CliError> {
    let d = cfg.inverted()?;
    let times = a.time.times(d.kappa())?;
    let mut tab = Table::new("moments", cfg, &["packet", "t", "kt", "mean_X", "mean_X2", "var_X"]).with_meta("coordinate", json!("scaled X"));
    for k in a.packet.kinds() {
        for &t in &times {
            let kt = d.kappa() * t;
            let m = if a.numeric { moments_numeric(k, kt, &cfg.quad)? } else { moments(k, kt) };
            tab.push(vec![k.label().into(), t.into(), kt.into(), m.mean_x.into(), m.mean_x2.into(), m.var_x.into()]);
        }
    }
    Ok(tab)
}

// ------------------------------------------------------------- rhs-compare

#[derive(Debug, Clone, Args)]
pub struct RhsArgs {
    /// Comma-separated times.
    #[arg(long = "t", value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub t: Vec<f64>,
    /// Comma-separated persistence half-widths, in units of b0.
    #[arg(long = "L", value_delimiter = ',', default_value = "1,3")]
    pub l: Vec<f64>,
}

pub fn rhs_compare(cfg: &RunConfig, a: &RhsArgs) -> Result<(Table, Format), CliError> {
    let d = cfg.inverted()?;
    let rep = csm_rhs_equivalence_report(&d, &a.t, &a.l)?;
    let mut tab = Table::new("rhs-compare", cfg, &["quantity", "t", "csm", "rhs", "abs_diff", "verdict"])
        .with_meta("field_constant", json!([rep.field_constant.0, rep.field_constant.1]))
        .with_meta("survival_ratio_law", json!(rep.survival.ratio_law))
        .with_meta("survival_max_deviation", json!(rep.survival.max_deviation));
    for r in rep.rows {
        tab.push(vec![r.quantity.into(), r.t.into(), r.csm.into(), r.rhs.into(), r.abs_diff.into(), r.verdict.into()]);
    }
    Ok((tab, cfg.format_or(Format::Json)))
}
