//! The cosh, sinh and Gaussian packets: closed-form evolution, survival,
//! densities, currents, persistence, moments and continuity residuals.
//!
//! Densities and currents are given in the scaled coordinate
//! `X = e^{i(θ−π/4)}|σ|x/b₀`, real at `θ = π/4`. The `x`-space density is
//! `ρ_x = (dX/dx)·ρ_X`; the current needs no Jacobian.

use crate::eigen::upsilon;
use crate::error::{CsmError, Result};
use crate::model::DerivedQuantities;
use crate::propagator::{binorm, evolve_quadrature, scale_initial_condition, FieldSide};
use crate::special::{erf_complex, integrate_interval, integrate_line, QuadraturePolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

/// Largest real part of a logarithm we exponentiate.
const LOG_GUARD: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PacketKind {
    Cosh,
    Sinh,
    Gaussian,
}

impl PacketKind {
    pub const ALL: [PacketKind; 3] = [PacketKind::Cosh, PacketKind::Sinh, PacketKind::Gaussian];

    pub fn label(self) -> &'static str {
        match self {
            PacketKind::Cosh => "c",
            PacketKind::Sinh => "s",
            PacketKind::Gaussian => "g",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityRegime {
    Exact,
    Asymptotic,
    ExceptionalPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledCoordinates {
    pub y: Complex64,
    pub x_scaled: Complex64,
    pub p_scaled: Complex64,
}

/// `dX/dx = e^{i(θ−π/4)}|σ|/b₀`.
pub fn scale_factor(d: &DerivedQuantities, theta: f64) -> Complex64 {
    Complex64::from_polar(d.inv_length(), theta - FRAC_PI_4)
}

/// `y = e^{i(θ−π/4)} x |σ|/b₀`.
pub fn y_coord(d: &DerivedQuantities, theta: f64, x: f64) -> Complex64 {
    scale_factor(d, theta) * x
}

fn ln_cosh(w: Complex64) -> Complex64 {
    if w.re >= 0.0 {
        w + (1.0 + (-2.0 * w).exp()).ln() - LN_2
    } else {
        -w + (1.0 + (2.0 * w).exp()).ln() - LN_2
    }
}

fn ln_sinh(w: Complex64) -> Complex64 {
    if w.re >= 0.0 {
        w + (1.0 - (-2.0 * w).exp()).ln() - LN_2
    } else {
        Complex64::new(0.0, PI) - w + (1.0 - (2.0 * w).exp()).ln() - LN_2
    }
}

fn guard(l: Complex64, what: &str) -> Result<Complex64> {
    if l.re > LOG_GUARD {
        return Err(CsmError::OverflowGuard(format!("{what}: log-magnitude {:.1} exceeds {LOG_GUARD}", l.re)));
    }
    Ok(l.exp())
}

/// `ln 𝒩` for each kind: `𝒩_g = (e^{i(θ−π/4)}|σ|/(√π b₀))^{1/2}`,
/// `𝒩_c = 𝒩_g/(e√cosh 2)`, `𝒩_s = 𝒩_g/(e√sinh 2)`.
fn ln_norm(kind: PacketKind, d: &DerivedQuantities, theta: f64) -> Complex64 {
    let g = 0.5 * (scale_factor(d, theta) / PI.sqrt()).ln();
    match kind {
        PacketKind::Gaussian => g,
        PacketKind::Cosh => g - 1.0 - 0.5 * 2f64.cosh().ln(),
        PacketKind::Sinh => g - 1.0 - 0.5 * 2f64.sinh().ln(),
    }
}

/// Log of the undressed evolved profile with contraction factor `s`
/// (`e^{−|Ω|t}` Tilde, `e^{|Ω|t}` Bar) and zero-point exponent `zp`.
fn ln_profile(kind: PacketKind, y: Complex64, s: f64, zp: f64) -> Complex64 {
    match kind {
        PacketKind::Gaussian => -(y - 2.0 * s).powi(2) / 2.0 + s * s - 1.0 + zp,
        PacketKind::Cosh => -y * y / 2.0 + ln_cosh(2.0 * s * y) + 1.0 - s * s + zp,
        PacketKind::Sinh => -y * y / 2.0 + ln_sinh(2.0 * s * y) + 1.0 - s * s + zp,
    }
}

/// The analytic function `f(w)` with `e^{iθ/2} f(e^{iθ}x) = packet_initial(θ,x)`
/// for `θ ∈ (−3π/4, 5π/4]`.
pub fn packet_analytic(kind: PacketKind, d: &DerivedQuantities, w: Complex64) -> Complex64 {
    let y = Complex64::from_polar(d.inv_length(), -FRAC_PI_4) * w;
    (ln_norm(kind, d, 0.0) + ln_profile(kind, y, 1.0, 0.0)).exp()
}

/// The initial packets `f_c`, `f_s`, `f_g` (undressed), normalised so that
/// `∫ f² dx = 1`.
pub fn packet_initial(kind: PacketKind, d: &DerivedQuantities, theta: f64, x: f64) -> Complex64 {
    (ln_norm(kind, d, theta) + ln_profile(kind, y_coord(d, theta, x), 1.0, 0.0)).exp()
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(CsmError::InvalidInput(format!("packet closed forms hold for 0 < theta <= pi/2, got {theta}")));
    }
    Ok(())
}

/// Evolved packet with its `Υ` dressing:
/// Tilde `Υ⁻¹(θ,x)F(θ,x,t)`, Bar `Υ(−θ,x) conj(F̄(θ,x,t))` where `F̄`
/// replaces `e^{−|Ω|t}` by `e^{|Ω|t}` throughout.
pub fn packet_evolved_closed(kind: PacketKind, side: FieldSide, d: &DerivedQuantities, theta: f64, x: f64, t: f64) -> Result<Complex64> {
    check_theta(theta)?;
    d.require_inverted()?;
    if !(t >= 0.0) {
        return Err(CsmError::TimeNonPositive(t));
    }
    let kt = d.kappa() * t;
    let y = y_coord(d, theta, x);
    let ln_dress = |inverse: bool, th: f64| {
        let s = if inverse { 1.0 } else { -1.0 };
        s * d.gamma * Complex64::from_polar(1.0, 2.0 * th) * x * x / (2.0 * d.b0 * d.b0)
    };
    match side {
        FieldSide::Tilde => {
            let l = ln_norm(kind, d, theta) + ln_profile(kind, y, (-kt).exp(), -kt / 2.0);
            guard(ln_dress(true, theta) + l, "Tilde packet")
        }
        FieldSide::Bar => {
            let l = ln_norm(kind, d, theta) + ln_profile(kind, y, kt.exp(), kt / 2.0);
            guard(ln_dress(false, -theta) + l.conj(), "Bar packet")
        }
    }
}

/// `P(t) = |∫ f̄(0)* f̃(t) dx|²` in closed form, as a function of `|Ω|t`:
/// `P_g = e^{4(e^{−|Ω|t}−1)} e^{−|Ω|t}`,
/// `P_c = (cosh(2e^{−|Ω|t})/cosh 2)² e^{−|Ω|t}`, `P_s` likewise with sinh.
pub fn survival_probability(kind: PacketKind, kt: f64) -> f64 {
    let s = (-kt).exp();
    let core = match kind {
        PacketKind::Gaussian => (4.0 * (s - 1.0)).exp(),
        PacketKind::Cosh => ((2.0 * s).cosh() / 2f64.cosh()).powi(2),
        PacketKind::Sinh => ((2.0 * s).sinh() / 2f64.sinh()).powi(2),
    };
    core * (-kt).exp()
}

/// Survival of an analytic initial function by quadrature: Tilde field
/// evolved by the kernel, paired with the Bar field at `t₀ = 0`.
pub fn survival_general<F: Fn(Complex64) -> Complex64>(
    f: F,
    d: &DerivedQuantities,
    theta: f64,
    t: f64,
    grid: &[f64],
    policy: &QuadraturePolicy,
) -> Result<f64> {
    let tilde = scale_initial_condition(&f, d, theta, FieldSide::Tilde, grid);
    let bar = scale_initial_condition(&f, d, theta, FieldSide::Bar, grid);
    let evolved = if t == 0.0 { tilde } else { evolve_quadrature(&tilde, d, t, policy)? };
    let q = binorm(&bar, &evolved)?;
    if q.error > policy.abs_tol.max(policy.rel_tol * q.value.norm()) {
        return Err(CsmError::ToleranceNotReached { estimate: q.error, target: policy.rel_tol * q.value.norm() });
    }
    Ok(q.value.norm_sqr())
}

fn gauss(u: Complex64) -> Complex64 {
    (-u * u).exp()
}

/// Density in `X` (complex continuation for complex `X`), as a function of `|Ω|t`.
pub fn density_closed_complex(kind: PacketKind, x: Complex64, kt: f64, regime: DensityRegime) -> Complex64 {
    let sp = PI.sqrt();
    match regime {
        DensityRegime::Exact => {
            let (c, sh) = (kt.cosh(), kt.sinh());
            let e2 = 2f64.exp();
            let big = gauss(x - 2.0 * c) + gauss(x + 2.0 * c);
            let small = gauss(x - 2.0 * sh) + gauss(x + 2.0 * sh);
            match kind {
                PacketKind::Gaussian => gauss(x - 2.0 * c) / sp,
                PacketKind::Cosh => (e2 * big + small / e2) / (4.0 * sp * 2f64.cosh()),
                PacketKind::Sinh => (e2 * big - small / e2) / (4.0 * sp * 2f64.sinh()),
            }
        }
        DensityRegime::Asymptotic => {
            let s = kt.exp();
            match kind {
                PacketKind::Gaussian => gauss(x - s) / sp,
                _ => (gauss(x - s) + gauss(x + s)) / (2.0 * sp),
            }
        }
        DensityRegime::ExceptionalPoint => {
            let e2 = 2f64.exp();
            match kind {
                PacketKind::Gaussian => gauss(x - 2.0) / sp,
                PacketKind::Cosh => (2.0 * x).cosh().powi(2) * (-x * x).exp() / (e2 * sp * 2f64.cosh()),
                PacketKind::Sinh => (2.0 * x).sinh().powi(2) * (-x * x).exp() / (e2 * sp * 2f64.sinh()),
            }
        }
    }
}

/// Real density in `X` at `θ = π/4`.
pub fn density_closed(kind: PacketKind, x: f64, kt: f64, regime: DensityRegime) -> f64 {
    density_closed_complex(kind, Complex64::new(x, 0.0), kt, regime).re
}

/// `ρ(θ,x,t) = (dX/dx)·ρ_X(X(x))`.
pub fn density_x(kind: PacketKind, d: &DerivedQuantities, theta: f64, x: f64, t: f64) -> Complex64 {
    let z = scale_factor(d, theta);
    z * density_closed_complex(kind, z * x, d.kappa() * t, DensityRegime::Exact)
}

/// `ρ = f̄* f̃` from the closed-form fields (fails with `OverflowGuard`
/// once the Bar field is unrepresentable).
pub fn density_from_fields(kind: PacketKind, d: &DerivedQuantities, theta: f64, x: f64, t: f64) -> Result<Complex64> {
    let bar = packet_evolved_closed(kind, FieldSide::Bar, d, theta, x, t)?;
    let tilde = packet_evolved_closed(kind, FieldSide::Tilde, d, theta, x, t)?;
    Ok(bar.conj() * tilde)
}

/// Probability current in closed form at scaled position `X`.
///
/// The prefactor is `(ħ/m)(|σ|/b₀)² = |Ω|`, which makes
/// `∂_t ρ_X + ∂_X J = 0` hold exactly.
pub fn current_closed(kind: PacketKind, d: &DerivedQuantities, x: Complex64, t: f64) -> Complex64 {
    let k = d.kappa();
    let kt = k * t;
    let sp = PI.sqrt();
    let (c, sh) = (kt.cosh(), kt.sinh());
    match kind {
        PacketKind::Gaussian => 2.0 * k * sh * gauss(x - 2.0 * c) / sp,
        PacketKind::Cosh | PacketKind::Sinh => {
            let (s, big) = ((-kt).exp(), kt.exp());
            let env = (-(x * x) - 2.0 * (2.0 * kt).cosh()).exp();
            let (a, b) = (2.0 * s * x, 2.0 * big * x);
            if kind == PacketKind::Cosh {
                k * env / (sp * 2f64.cosh()) * (big * a.cosh() * b.sinh() - s * b.cosh() * a.sinh())
            } else {
                k * env / (sp * 2f64.sinh()) * (big * b.cosh() * a.sinh() - s * a.cosh() * b.sinh())
            }
        }
    }
}

/// Current from a Bar/Tilde pair of fields (given as closures of `x`):
/// `J = (ħ/2mi) e^{−2iθ}(f̄*∂f̃ − ∂f̄*·f̃) + i(α−β)x f̄*f̃`, derivatives by
/// central differences with step `h`.
pub fn current_from_fields<B, T>(d: &DerivedQuantities, theta: f64, bar: B, tilde: T, x: f64, h: f64) -> Complex64
where
    B: Fn(f64) -> Complex64,
    T: Fn(f64) -> Complex64,
{
    let (b, f) = (bar(x).conj(), tilde(x));
    let db = (bar(x + h).conj() - bar(x - h).conj()) / (2.0 * h);
    let df = (tilde(x + h) - tilde(x - h)) / (2.0 * h);
    let pre = Complex64::new(0.0, -d.hbar / (2.0 * d.m)) * Complex64::from_polar(1.0, -2.0 * theta);
    pre * (b * df - db * f) + Complex64::new(0.0, d.alpha - d.beta) * x * b * f
}

/// Persistence `Q(L,t) = ∫_{−L}^{L} ρ dx` in closed form (complex for `θ ≠ π/4`).
pub fn persistence_q(kind: PacketKind, d: &DerivedQuantities, theta: f64, l: f64, t: f64) -> Result<Complex64> {
    if !(l > 0.0) {
        return Err(CsmError::InvalidInput(format!("L must be positive, got {l}")));
    }
    let ls = scale_factor(d, theta) * l;
    let kt = d.kappa() * t;
    let (c, sh) = (kt.cosh(), kt.sinh());
    let pair = |a: f64| -> Result<Complex64> { Ok(erf_complex(ls + a)? + erf_complex(ls - a)?) };
    let e2 = 2f64.exp();
    Ok(match kind {
        PacketKind::Gaussian => 0.5 * pair(2.0 * c)?,
        PacketKind::Cosh => (e2 * pair(2.0 * c)? + pair(2.0 * sh)? / e2) / (4.0 * 2f64.cosh()),
        PacketKind::Sinh => (e2 * pair(2.0 * c)? - pair(2.0 * sh)? / e2) / (4.0 * 2f64.sinh()),
    })
}

/// Persistence by direct quadrature of the `x`-space density over `[−L, L]`.
pub fn persistence_numeric(kind: PacketKind, d: &DerivedQuantities, theta: f64, l: f64, t: f64, policy: &QuadraturePolicy) -> Result<Complex64> {
    Ok(integrate_interval(|x| density_x(kind, d, theta, x, t), -l, l, policy)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub var_x: f64,
}

impl Moments {
    fn new(mean_x: f64, mean_x2: f64) -> Self {
        Self { mean_x, mean_x2, var_x: mean_x2 - mean_x * mean_x }
    }
}

/// `⟨X⟩` and `⟨X²⟩` from the closed-form table, as functions of `|Ω|t`.
pub fn moments(kind: PacketKind, kt: f64) -> Moments {
    match kind {
        PacketKind::Gaussian => Moments::new(2.0 * kt.cosh(), 0.5 + 4.0 * kt.cosh().powi(2)),
        PacketKind::Cosh => Moments::new(0.0, 0.5 + 2.0 * 2f64.tanh() + 2.0 * (2.0 * kt).cosh()),
        PacketKind::Sinh => Moments::new(0.0, 0.5 + 2.0 / 2f64.tanh() + 2.0 * (2.0 * kt).cosh()),
    }
}

/// Moments by quadrature of the closed-form density.
pub fn moments_numeric(kind: PacketKind, kt: f64, policy: &QuadraturePolicy) -> Result<Moments> {
    let pol = policy.with_half_width(policy.half_width.max(2.0 * kt.cosh() + 12.0));
    let m0 = integrate_line(|x| Complex64::new(density_closed(kind, x, kt, DensityRegime::Exact), 0.0), &pol)?.value.re;
    let m1 = integrate_line(|x| Complex64::new(x * density_closed(kind, x, kt, DensityRegime::Exact), 0.0), &pol)?.value.re;
    let m2 = integrate_line(|x| Complex64::new(x * x * density_closed(kind, x, kt, DensityRegime::Exact), 0.0), &pol)?.value.re;
    Ok(Moments::new(m1 / m0, m2 / m0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityResidual {
    /// `max |∂_t ρ + ∂_X J|` over the grid.
    pub max_residual: f64,
    /// `max |∂_t ρ|` over the grid.
    pub peak_dt_rho: f64,
}

impl ContinuityResidual {
    pub fn relative(&self) -> f64 {
        self.max_residual / self.peak_dt_rho
    }
}

/// Central-difference continuity residual of the closed-form density and
/// current in scaled units at time `t` (requires `t > dt`).
pub fn continuity_residual(kind: PacketKind, d: &DerivedQuantities, grid: &[f64], t: f64, dt: f64, dx: f64) -> Result<ContinuityResidual> {
    d.require_inverted()?;
    if !(t > dt) || !(dt > 0.0) || !(dx > 0.0) {
        return Err(CsmError::InvalidInput("continuity stencil needs t > dt > 0 and dx > 0".into()));
    }
    let k = d.kappa();
    let mut out = ContinuityResidual { max_residual: 0.0, peak_dt_rho: 0.0 };
    for &x in grid {
        let rho = |tt: f64| density_closed(kind, x, k * tt, DensityRegime::Exact);
        let j = |xx: f64| current_closed(kind, d, Complex64::new(xx, 0.0), t).re;
        let dt_rho = (rho(t + dt) - rho(t - dt)) / (2.0 * dt);
        let dx_j = (j(x + dx) - j(x - dx)) / (2.0 * dx);
        out.max_residual = out.max_residual.max((dt_rho + dx_j).abs());
        out.peak_dt_rho = out.peak_dt_rho.max(dt_rho.abs());
    }
    Ok(out)
}

/// Continuity residual in `x` for a field pair given as closures of `(x, t)`,
/// with `ρ = f̄*f̃` and the field current.
pub fn continuity_residual_fields<B, T>(d: &DerivedQuantities, theta: f64, bar: B, tilde: T, grid: &[f64], t: f64, dt: f64, dx: f64) -> ContinuityResidual
where
    B: Fn(f64, f64) -> Complex64,
    T: Fn(f64, f64) -> Complex64,
{
    let mut out = ContinuityResidual { max_residual: 0.0, peak_dt_rho: 0.0 };
    for &x in grid {
        let rho = |tt: f64| bar(x, tt).conj() * tilde(x, tt);
        let j = |xx: f64| current_from_fields(d, theta, |y| bar(y, t), |y| tilde(y, t), xx, dx);
        let dt_rho = (rho(t + dt) - rho(t - dt)) / (2.0 * dt);
        let dx_j = (j(x + dx) - j(x - dx)) / (2.0 * dx);
        out.max_residual = out.max_residual.max((dt_rho + dx_j).norm());
        out.peak_dt_rho = out.peak_dt_rho.max(dt_rho.norm());
    }
    out
}

/// `Υ` dressing used by the closed forms, exposed for cross-checks.
pub fn dressing(d: &DerivedQuantities, theta: f64, x: f64, side: FieldSide) -> Complex64 {
    match side {
        FieldSide::Tilde => upsilon(d, theta, x, true),
        FieldSide::Bar => upsilon(d, -theta, x, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_quantities, ModelParams};
    use crate::propagator::{uniform_grid, ComplexField};

    fn fig1b() -> DerivedQuantities {
        derive_quantities(&ModelParams::new(1.0, -1.0, -0.5)).unwrap()
    }

    #[test]
    fn initial_symmetries() {
        let d = fig1b();
        assert_eq!(packet_initial(PacketKind::Sinh, &d, FRAC_PI_4, 0.0), Complex64::new(0.0, 0.0));
        for x in [0.3, 1.7, 4.0] {
            let (a, b) = (packet_initial(PacketKind::Cosh, &d, 0.5, x), packet_initial(PacketKind::Cosh, &d, 0.5, -x));
            assert!((a - b).norm() < 1e-15 * a.norm());
        }
    }

    #[test]
    fn analytic_form_matches_initial() {
        let d = fig1b();
        for kind in PacketKind::ALL {
            for theta in [0.2, FRAC_PI_4, 1.3] {
                for x in [-1.1, 0.4, 2.5] {
                    let a = Complex64::from_polar(1.0, theta / 2.0) * packet_analytic(kind, &d, Complex64::from_polar(x, theta));
                    let b = packet_initial(kind, &d, theta, x);
                    assert!((a - b).norm() < 1e-13 * b.norm().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn bilinear_normalisation() {
        let d = fig1b();
        let pol = QuadraturePolicy::default().with_half_width(30.0);
        for kind in PacketKind::ALL {
            for theta in [0.3, FRAC_PI_4, 1.2] {
                let q = integrate_line(|x| packet_initial(kind, &d, theta, x).powi(2), &pol).unwrap();
                assert!((q.value - 1.0).norm() < 1e-10, "{kind:?} {theta}: {}", q.value);
            }
        }
    }

    #[test]
    fn closed_form_reduces_at_t0() {
        let d = fig1b();
        for kind in PacketKind::ALL {
            let x = 0.9;
            let f = packet_evolved_closed(kind, FieldSide::Tilde, &d, 0.6, x, 0.0).unwrap();
            let want = upsilon(&d, 0.6, x, true) * packet_initial(kind, &d, 0.6, x);
            assert!((f - want).norm() < 1e-14 * want.norm());
            let b = packet_evolved_closed(kind, FieldSide::Bar, &d, 0.6, x, 0.0).unwrap();
            let want = upsilon(&d, -0.6, x, false) * packet_initial(kind, &d, 0.6, x).conj();
            assert!((b - want).norm() < 1e-14 * want.norm());
        }
    }

    #[test]
    fn overflow_guard() {
        let d = fig1b();
        // The Bar field peaks at y = 2e^{|Ω|t} with modulus ~e^{e^{2|Ω|t}}.
        let x = 2.0 * 4f64.exp() / d.inv_length();
        let r = packet_evolved_closed(PacketKind::Gaussian, FieldSide::Bar, &d, FRAC_PI_4, x, 4.0);
        assert!(matches!(r, Err(CsmError::OverflowGuard(_))));
        assert!(packet_evolved_closed(PacketKind::Gaussian, FieldSide::Tilde, &d, FRAC_PI_4, 1.0, 40.0).is_ok());
        assert!(packet_evolved_closed(PacketKind::Gaussian, FieldSide::Tilde, &d, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn survival_examples() {
        for kind in PacketKind::ALL {
            assert_eq!(survival_probability(kind, 0.0), 1.0);
        }
        let want = (-4.0 * (1.0 - (-1f64).exp())).exp() * (-1f64).exp();
        assert!((survival_probability(PacketKind::Gaussian, 1.0) - want).abs() < 1e-16);
        assert!((survival_probability(PacketKind::Gaussian, 1.0) - 0.029_349_427_604_089_685).abs() < 1e-15);
    }

    #[test]
    fn survival_quadrature_agrees() {
        let d = fig1b();
        let l = 12.0 / d.inv_length();
        let grid = uniform_grid(-l, l, 1201).unwrap();
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-9);
        for kind in PacketKind::ALL {
            let p = survival_general(|w| packet_analytic(kind, &d, w), &d, FRAC_PI_4, 1.0, &grid, &pol).unwrap();
            let want = survival_probability(kind, d.kappa());
            assert!((p - want).abs() < 1e-8 * want, "{kind:?}: {p} vs {want}");
        }
    }

    #[test]
    fn tilde_closed_form_matches_quadrature() {
        let d = fig1b();
        let l = 12.0 / d.inv_length();
        let grid = uniform_grid(-l, l, 1201).unwrap();
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-9);
        for kind in PacketKind::ALL {
            let f0 = scale_initial_condition(|w| packet_analytic(kind, &d, w), &d, FRAC_PI_4, FieldSide::Tilde, &grid);
            let ev = evolve_quadrature(&f0, &d, 1.0, &pol).unwrap();
            let peak = ev.max_abs();
            for (x, v) in grid.iter().zip(&ev.values) {
                let want = packet_evolved_closed(kind, FieldSide::Tilde, &d, FRAC_PI_4, *x, 1.0).unwrap();
                assert!((v - want).norm() <= 1e-8 * peak);
            }
        }
        let _ = ComplexField::from_fn(&grid, 0.1, 0.0, FieldSide::Tilde, |_| Complex64::new(0.0, 0.0));
    }

    #[test]
    fn densities_normalised_and_symmetric() {
        let pol = QuadraturePolicy::default().with_half_width(60.0);
        for kind in PacketKind::ALL {
            for kt in [0.0, 1.0, 2.0, 3.0] {
                let q = integrate_line(|x| Complex64::new(density_closed(kind, x, kt, DensityRegime::Exact), 0.0), &pol).unwrap();
                assert!((q.value.re - 1.0).abs() < 1e-12, "{kind:?} {kt}");
            }
        }
        for x in [0.5, 2.0, 3.1] {
            for kind in [PacketKind::Cosh, PacketKind::Sinh] {
                assert_eq!(density_closed(kind, x, 1.3, DensityRegime::Exact), density_closed(kind, -x, 1.3, DensityRegime::Exact));
            }
        }
        assert!(density_closed(PacketKind::Gaussian, 2.0, 0.0, DensityRegime::Exact) > density_closed(PacketKind::Gaussian, -2.0, 0.0, DensityRegime::Exact));
    }

    #[test]
    fn density_matches_fields() {
        let d = fig1b();
        for kind in PacketKind::ALL {
            for x in [-3.0, -0.2, 1.0, 4.5] {
                let a = density_from_fields(kind, &d, FRAC_PI_4, x, 1.2).unwrap();
                let b = density_x(kind, &d, FRAC_PI_4, x, 1.2);
                assert!((a - b).norm() < 1e-12 * b.norm().max(1e-200), "{kind:?} {x}: {a} {b}");
            }
        }
    }

    #[test]
    fn asymptotic_and_ep_regimes() {
        // The asymptotic form drops a centre shift of e^{−|Ω|t}, so the
        // sup-norm gap relative to the peak is about 0.86·e^{−|Ω|t}.
        let gap = |kind, kt: f64| {
            let xs: Vec<f64> = (0..=40000).map(|i| -2.0 * kt.exp() - 10.0 + (4.0 * kt.exp() + 20.0) * i as f64 / 40000.0).collect();
            let peak = xs.iter().map(|&x| density_closed(kind, x, kt, DensityRegime::Exact)).fold(0.0, f64::max);
            let diff = xs
                .iter()
                .map(|&x| (density_closed(kind, x, kt, DensityRegime::Exact) - density_closed(kind, x, kt, DensityRegime::Asymptotic)).abs())
                .fold(0.0, f64::max);
            diff / peak
        };
        for kind in PacketKind::ALL {
            assert!(gap(kind, 5.0) <= (-5f64).exp(), "{kind:?}");
            assert!(gap(kind, 7.0) <= 1e-3, "{kind:?}");
            for x in [-1.0, 0.3, 2.2] {
                let e = density_closed(kind, x, 0.0, DensityRegime::Exact);
                let p = density_closed(kind, x, 7.0, DensityRegime::ExceptionalPoint);
                assert!((e - p).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn currents() {
        let d = fig1b();
        assert_eq!(current_closed(PacketKind::Gaussian, &d, Complex64::new(1.0, 0.0), 0.0), Complex64::new(0.0, 0.0));
        assert!(current_closed(PacketKind::Cosh, &d, Complex64::new(0.0, 0.0), 1.0).norm() < 1e-300);
        for kind in PacketKind::ALL {
            let grid: Vec<f64> = (0..=200).map(|i| -10.0 + 0.1 * i as f64).collect();
            let r = continuity_residual(kind, &d, &grid, 1.0, 1e-3, 1e-3).unwrap();
            assert!(r.relative() < 1e-5, "{kind:?}: {}", r.relative());
            let r2 = continuity_residual(kind, &d, &grid, 1.0, 2e-3, 2e-3).unwrap();
            let order = r2.max_residual / r.max_residual;
            assert!((order - 4.0).abs() < 0.2, "{kind:?}: {order}");
        }
    }

    #[test]
    fn field_current_satisfies_continuity() {
        let d = fig1b();
        let grid: Vec<f64> = (0..=80).map(|i| -8.0 + 0.2 * i as f64).collect();
        for theta in [FRAC_PI_4, 0.6] {
            for kind in PacketKind::ALL {
                let r = continuity_residual_fields(
                    &d,
                    theta,
                    |x, t| packet_evolved_closed(kind, FieldSide::Bar, &d, theta, x, t).unwrap(),
                    |x, t| packet_evolved_closed(kind, FieldSide::Tilde, &d, theta, x, t).unwrap(),
                    &grid,
                    0.8,
                    1e-3,
                    1e-3,
                );
                assert!(r.relative() < 1e-5, "{kind:?} {theta}: {}", r.relative());
            }
        }
    }

    #[test]
    fn field_current_matches_closed_form() {
        let d = fig1b();
        for kind in PacketKind::ALL {
            for x in [-2.0, 0.7, 3.0] {
                let jf = current_from_fields(
                    &d,
                    FRAC_PI_4,
                    |y| packet_evolved_closed(kind, FieldSide::Bar, &d, FRAC_PI_4, y, 0.9).unwrap(),
                    |y| packet_evolved_closed(kind, FieldSide::Tilde, &d, FRAC_PI_4, y, 0.9).unwrap(),
                    x,
                    1e-4,
                );
                let jc = current_closed(kind, &d, y_coord(&d, FRAC_PI_4, x), 0.9);
                assert!((jf - jc).norm() < 1e-6 * jc.norm().max(1e-3), "{kind:?} {x}: {jf} {jc}");
            }
        }
    }

    #[test]
    fn persistence() {
        let d = fig1b();
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-12);
        for kind in PacketKind::ALL {
            let q = persistence_q(kind, &d, FRAC_PI_4, 1e4, 1.0).unwrap();
            assert!((q.re - 1.0).abs() < 1e-14 && q.im.abs() < 1e-14);
            for t in [0.0, 1.0, 2.5] {
                let a = persistence_q(kind, &d, FRAC_PI_4, 7.0, t).unwrap();
                let b = persistence_numeric(kind, &d, FRAC_PI_4, 7.0, t, &pol).unwrap();
                assert!((a - b).norm() < 1e-10, "{kind:?} {t}");
            }
        }
        // Half the Gaussian remains when the centre sits at the boundary.
        let kt: f64 = 1.0;
        let l = 2.0 * kt.cosh() / d.inv_length();
        let q = persistence_q(PacketKind::Gaussian, &d, FRAC_PI_4, l, kt / d.kappa()).unwrap();
        let want = 0.5 * erf_complex(Complex64::new(4.0 * kt.cosh(), 0.0)).unwrap().re;
        assert!((q.re - want).abs() < 1e-14);
    }

    #[test]
    fn moment_table() {
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-13);
        for kind in PacketKind::ALL {
            for kt in [0.0, 1.0] {
                let a = moments(kind, kt);
                let b = moments_numeric(kind, kt, &pol).unwrap();
                assert!((a.mean_x - b.mean_x).abs() < 1e-10 && (a.mean_x2 - b.mean_x2).abs() < 1e-10 * a.mean_x2);
            }
        }
        assert_eq!(moments(PacketKind::Gaussian, 0.0).mean_x, 2.0);
        assert!((moments(PacketKind::Gaussian, 1.7).var_x - 0.5).abs() < 1e-12);
        let dv = moments(PacketKind::Sinh, 0.4).var_x - moments(PacketKind::Cosh, 0.4).var_x;
        assert!((dv - 2.0 * (1.0 / 2f64.tanh() - 2f64.tanh())).abs() < 1e-14);
    }

    #[test]
    fn ln_cosh_sinh_agree_with_direct() {
        for w in [Complex64::new(0.3, 0.2), Complex64::new(-1.5, 0.7), Complex64::new(2.0, -3.0), Complex64::new(-0.1, -0.1)] {
            assert!((ln_cosh(w).exp() - w.cosh()).norm() < 1e-14 * w.cosh().norm());
            assert!((ln_sinh(w).exp() - w.sinh()).norm() < 1e-14 * w.sinh().norm());
        }
    }
}
