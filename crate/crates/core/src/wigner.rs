//! Phase-space (Wigner) functions: closed-form matrix elements `W_mn^±`,
//! packet closed forms, a quadrature oracle and marginals.
//!
//! Normalisation: `W(x,p) = ∫ f̄*(x+y/2) f̃(x−y/2) e^{ipy/ħ} dy`, so that
//! `ρ(x) = ∫ W dp / 2πħ`. The packet closed forms are unit-normalised in
//! the scaled variables, `W = 2π·W_packet(𝒫, 𝒳)`.

use crate::error::{CsmError, Result};
use crate::model::{Branch, DerivedQuantities};
use crate::special::{assoc_laguerre, integrate_line, integrate_samples, Quadrature, QuadraturePolicy, N_MAX};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// `values[i][j]` at `(x_axis[i], p_axis[j])`.
    pub values: Vec<Vec<Complex64>>,
    pub theta: f64,
    pub time: f64,
}

impl PhaseSpaceGrid {
    pub fn from_fn<F: Fn(f64, f64) -> Complex64>(x_axis: &[f64], p_axis: &[f64], theta: f64, time: f64, f: F) -> Result<Self> {
        for axis in [x_axis, p_axis] {
            if axis.len() < 2 || axis.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(CsmError::InvalidInput("phase-space axes must be strictly increasing".into()));
            }
        }
        let values = x_axis.iter().map(|&x| p_axis.iter().map(|&p| f(x, p)).collect()).collect();
        Ok(Self { x_axis: x_axis.to_vec(), p_axis: p_axis.to_vec(), values, theta, time })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UVCoords {
    pub u: Complex64,
    pub v: Complex64,
}

/// `(𝒫, 𝒳)` with `𝒳 = e^{i(θ−π/4)}(|σ|/b₀)x` and
/// `𝒫 = e^{−i(θ−π/4)}(b₀/ħ|σ|)p − (γ/|σ|²)𝒳`.
pub fn ps_coords(d: &DerivedQuantities, theta: f64, x: f64, p: f64) -> (Complex64, Complex64) {
    let sig = d.inv_length();
    let xs = Complex64::from_polar(sig, theta - FRAC_PI_4) * x;
    let ps = Complex64::from_polar(1.0 / (d.hbar * sig), -(theta - FRAC_PI_4)) * p - d.gamma / (d.sigma_abs * d.sigma_abs) * xs;
    (ps, xs)
}

/// `u = 𝒫 − i𝒳`, `v = 𝒫 + i𝒳`.
pub fn uv_coords(d: &DerivedQuantities, theta: f64, x: f64, p: f64) -> UVCoords {
    let (ps, xs) = ps_coords(d, theta, x, p);
    let i = Complex64::new(0.0, 1.0);
    UVCoords { u: ps - i * xs, v: ps + i * xs }
}

fn ln_factorial_ratio(small: usize, large: usize) -> f64 {
    (small + 1..=large).map(|k| (k as f64).ln()).sum::<f64>()
}

/// Closed-form `W_mn^±` for the pair `(ψ̄ₘ^±, φ̃ₙ^±)` evolved to time `t`.
///
/// − branch, with `w = 2uv`:
/// `n = m`: `(−1)ⁿ 2e^{−uv} Lₙ(w)`;
/// `m < n`: `2√(m!/n!) e^{−(n−m)|Ω|t} e^{−uv} (−1)^m (−i√2 v)^{n−m} L_m^{n−m}(w)`;
/// `n < m`: `2√(n!/m!) e^{−(n−m)|Ω|t} e^{−uv} (−1)ⁿ (i√2 u)^{m−n} Lₙ^{m−n}(w)`.
/// The + branch has `e^{+uv}`, argument `−w`, `e^{+(n−m)|Ω|t}` and the
/// powers `(√2 u)^{n−m}`, `(√2 v)^{m−n}` with sign `(−1)^m`.
#[allow(clippy::too_many_arguments)]
pub fn wigner_mn(d: &DerivedQuantities, theta: f64, m: usize, n: usize, branch: Branch, x: f64, p: f64, t: f64) -> Result<Complex64> {
    if m > N_MAX || n > N_MAX {
        return Err(CsmError::DegreeTooLarge { n: m.max(n), max: N_MAX });
    }
    let UVCoords { u, v } = uv_coords(d, theta, x, p);
    let uv = u * v;
    let i = Complex64::new(0.0, 1.0);
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (lo, hi) = (m.min(n), m.max(n));
    let k = (hi - lo) as i64;
    let ratio = (-0.5 * ln_factorial_ratio(lo, hi)).exp();
    let time = ((n as f64 - m as f64) * branch.sign() * d.kappa() * t).exp();
    Ok(match branch {
        Branch::Minus => {
            let lag = assoc_laguerre(lo, k, 2.0 * uv)?;
            let base = 2.0 * ratio * time * (-uv).exp() * lag;
            if m == n {
                sign(n) * base
            } else if m < n {
                sign(m) * base * (-i * SQRT_2 * v).powi(k as i32)
            } else {
                sign(n) * base * (i * SQRT_2 * u).powi(k as i32)
            }
        }
        Branch::Plus => {
            let lag = assoc_laguerre(lo, k, -2.0 * uv)?;
            let base = 2.0 * ratio * time * uv.exp() * lag;
            if m == n {
                sign(n) * base
            } else if m < n {
                sign(m) * base * (SQRT_2 * u).powi(k as i32)
            } else {
                sign(m) * base * (SQRT_2 * v).powi(k as i32)
            }
        }
    })
}

/// Unit-normalised packet Wigner functions in `(𝒫, 𝒳)`, as functions of `|Ω|t`.
pub fn wigner_packet_closed(kind: crate::packets::PacketKind, ps: Complex64, xs: Complex64, kt: f64) -> Complex64 {
    use crate::packets::PacketKind;
    let (c, sh) = (kt.cosh(), kt.sinh());
    let i = Complex64::new(0.0, 1.0);
    match kind {
        PacketKind::Gaussian => (-(ps - 2.0 * i * sh).powi(2) - (xs - 2.0 * c).powi(2)).exp() / PI,
        PacketKind::Cosh | PacketKind::Sinh => {
            // env·cosh(A) = ½(e^{ln env + A} + e^{ln env − A}); the pieces
            // overflow separately once |𝒳| sinh|Ω|t is large.
            let ln_env = -ps * ps - xs * xs;
            let a = 4.0 * xs * sh + 4.0 * i * ps * c;
            let b = 4.0 * xs * c + 4.0 * i * ps * sh;
            let ch = |arg: Complex64, shift: f64| 0.5 * ((ln_env + arg + shift).exp() + (ln_env - arg + shift).exp());
            if kind == PacketKind::Cosh {
                (ch(a, 2.0) + ch(b, -2.0)) / (2.0 * PI * 2f64.cosh())
            } else {
                (-ch(a, 2.0) + ch(b, -2.0)) / (2.0 * PI * 2f64.sinh())
            }
        }
    }
}

/// The packet Wigner functions as sums of terms `w·exp(−𝒫² + b𝒫 + c)`;
/// returns `(w, b, c)` per term at scaled position `𝒳`.
pub fn wigner_packet_terms(kind: crate::packets::PacketKind, xs: Complex64, kt: f64) -> Vec<(f64, Complex64, Complex64)> {
    use crate::packets::PacketKind;
    let (c, sh) = (kt.cosh(), kt.sinh());
    let i = Complex64::new(0.0, 1.0);
    match kind {
        PacketKind::Gaussian => vec![(1.0 / PI, 4.0 * i * sh, 4.0 * sh * sh - (xs - 2.0 * c).powi(2))],
        PacketKind::Cosh | PacketKind::Sinh => {
            let (norm, sa) = if kind == PacketKind::Cosh { (2f64.cosh(), 1.0) } else { (2f64.sinh(), -1.0) };
            let w = 1.0 / (4.0 * PI * norm);
            let x2 = xs * xs;
            vec![
                (sa * w, 4.0 * i * c, -x2 + 4.0 * xs * sh + 2.0),
                (sa * w, -4.0 * i * c, -x2 - 4.0 * xs * sh + 2.0),
                (w, 4.0 * i * sh, -x2 + 4.0 * xs * c - 2.0),
                (w, -4.0 * i * sh, -x2 - 4.0 * xs * c - 2.0),
            ]
        }
    }
}

/// `∫ W_packet d𝒫` over real `𝒫`, each term integrated along its own
/// steepest-descent line `𝒫 = q + b/2`. On the real axis the terms reach
/// `e^{4sinh²|Ω|t}` and cancel, so the direct integral is useless past
/// `|Ω|t ≈ 1`.
pub fn packet_marginal_contour(kind: crate::packets::PacketKind, xs: f64, kt: f64, policy: &QuadraturePolicy) -> Result<Quadrature> {
    let mut total = Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 };
    for (w, b, c) in wigner_packet_terms(kind, Complex64::new(xs, 0.0), kt) {
        let shift = b / 2.0;
        let q = integrate_line(|q| w * (-(q + shift).powi(2) + b * (q + shift) + c).exp(), policy)?;
        total.value += q.value;
        total.error += q.error;
        total.evaluations += q.evaluations;
    }
    Ok(total)
}

/// Packet Wigner function in the `(x, p)` normalisation of [`wigner_numeric`].
pub fn wigner_packet_xp(kind: crate::packets::PacketKind, d: &DerivedQuantities, theta: f64, x: f64, p: f64, t: f64) -> Complex64 {
    let (ps, xs) = ps_coords(d, theta, x, p);
    2.0 * PI * wigner_packet_closed(kind, ps, xs, d.kappa() * t)
}

/// `y`-integration half-width `16·max(1, e^{|Ω|t})·b₀/|σ|`; wide enough for
/// packets centred at `|𝒳| ≈ 2cosh|Ω|t`.
pub fn wigner_half_width(d: &DerivedQuantities, t: f64) -> f64 {
    16.0 * (d.kappa() * t).exp().max(1.0) / d.inv_length()
}

/// `W(x,p) = ∫ f̄*(x+y/2) f̃(x−y/2) e^{ipy/ħ} dy` by adaptive quadrature over
/// `|y| ≤ policy.half_width`.
pub fn wigner_numeric<B, T>(fbar: B, ftilde: T, d: &DerivedQuantities, x: f64, p: f64, policy: &QuadraturePolicy) -> Result<Quadrature>
where
    B: Fn(f64) -> Complex64,
    T: Fn(f64) -> Complex64,
{
    integrate_line(|y| fbar(x + y / 2.0).conj() * ftilde(x - y / 2.0) * Complex64::new(0.0, p * y / d.hbar).exp(), policy)
}

/// `ρ(x) = ∫ W dp / 2πħ` per row of a sampled grid (trapezoid in `p`).
pub fn density_from_wigner(grid: &PhaseSpaceGrid, hbar: f64) -> Result<Vec<Quadrature>> {
    grid.values
        .iter()
        .map(|row| {
            let q = integrate_samples(&grid.p_axis, row)?;
            let s = 1.0 / (2.0 * PI * hbar);
            Ok(Quadrature { value: q.value * s, error: q.error * s, evaluations: q.evaluations })
        })
        .collect()
}

/// `ρ(x) = ∫ W(x,p) dp / 2πħ` for a Wigner function given as a closure of `p`.
pub fn density_from_wigner_fn<W: Fn(f64) -> Complex64>(w: W, hbar: f64, policy: &QuadraturePolicy) -> Result<Quadrature> {
    let q = integrate_line(w, policy)?;
    let s = 1.0 / (2.0 * PI * hbar);
    Ok(Quadrature { value: q.value * s, error: q.error * s, evaluations: q.evaluations })
}

/// Major axis of a real phase-space distribution from its second moments,
/// returned as `dx/dp` (`±∞` when the axis is the `x` direction).
pub fn principal_axis_slope(grid: &PhaseSpaceGrid) -> f64 {
    let (mut m0, mut mx, mut mp, mut mxx, mut mpp, mut mxp) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &x) in grid.x_axis.iter().enumerate() {
        for (j, &p) in grid.p_axis.iter().enumerate() {
            let w = grid.values[i][j].re;
            m0 += w;
            mx += w * x;
            mp += w * p;
            mxx += w * x * x;
            mpp += w * p * p;
            mxp += w * x * p;
        }
    }
    let (ex, ep) = (mx / m0, mp / m0);
    let cxx = mxx / m0 - ex * ex;
    let cpp = mpp / m0 - ep * ep;
    let cxp = mxp / m0 - ex * ep;
    // Largest eigenvalue of [[cxx, cxp], [cxp, cpp]] and its eigenvector.
    let half_tr = 0.5 * (cxx + cpp);
    let disc = (0.25 * (cxx - cpp).powi(2) + cxp * cxp).sqrt();
    let lam = half_tr + disc;
    if cxp.abs() <= 1e-12 * (cxx + cpp).abs() {
        return if cxx >= cpp { f64::INFINITY } else { 0.0 };
    }
    // (cxx − λ) ex + cxp ep = 0  ⇒  ex/ep = −cxp / (cxx − λ) = (λ − cpp)/cxp
    (lam - cpp) / cxp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{eigenfunction, EigenstateId, Side};
    use crate::model::{derive_quantities, stretch_slope, ModelParams};
    use crate::packets::{density_closed, packet_evolved_closed, DensityRegime, PacketKind};
    use crate::propagator::{eigenstate_evolved, FieldSide};

    fn fig1b() -> DerivedQuantities {
        derive_quantities(&ModelParams::new(1.0, -1.0, -0.5)).unwrap()
    }

    fn unit() -> DerivedQuantities {
        let mut d = derive_quantities(&ModelParams::new(1.0, -0.75, -0.75)).unwrap();
        d.sigma_abs = 1.0;
        d
    }

    #[test]
    fn uv_examples() {
        let d = unit();
        let c = uv_coords(&d, FRAC_PI_4, 0.7, -1.3);
        assert!((c.u - Complex64::new(-1.3, -0.7)).norm() < 1e-15);
        assert!((c.v - Complex64::new(-1.3, 0.7)).norm() < 1e-15);
        let uv = c.u * c.v;
        assert!(uv.im.abs() < 1e-15 && uv.re >= 0.0);
        let z = uv_coords(&fig1b(), 0.4, 0.0, 0.0);
        assert_eq!(z.u, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn w00_origin_and_diagonal_time_independence() {
        let d = fig1b();
        assert_eq!(wigner_mn(&d, FRAC_PI_4, 0, 0, Branch::Minus, 0.0, 0.0, 0.0).unwrap(), Complex64::new(2.0, 0.0));
        for n in 0..4 {
            let a = wigner_mn(&d, FRAC_PI_4, n, n, Branch::Minus, 0.3, 0.8, 0.0).unwrap();
            let b = wigner_mn(&d, FRAC_PI_4, n, n, Branch::Minus, 0.3, 0.8, 2.5).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn w22_has_negative_values() {
        let d = fig1b();
        let mut min = f64::INFINITY;
        for i in 0..=40 {
            for j in 0..=40 {
                let (x, p) = (-6.0 + 0.3 * i as f64, -6.0 + 0.3 * j as f64);
                min = min.min(wigner_mn(&d, FRAC_PI_4, 2, 2, Branch::Minus, x, p, 0.0).unwrap().re);
            }
        }
        assert!(min < -0.1);
    }

    fn oracle_check(d: &DerivedQuantities, theta: f64, branch: Branch, t: f64) {
        let pol = QuadraturePolicy::default().with_half_width(wigner_half_width(d, t)).with_tolerances(1e-13, 1e-10);
        for m in 0..3 {
            for n in 0..3 {
                let bar = |x: f64| eigenstate_evolved(d, theta, m, branch, FieldSide::Bar, x, t).unwrap();
                let tilde = |x: f64| eigenstate_evolved(d, theta, n, branch, FieldSide::Tilde, x, t).unwrap();
                let mut worst: f64 = 0.0;
                let mut scale: f64 = 0.0;
                for (x, p) in [(0.0, 0.0), (0.5, -0.3), (-1.2, 0.9), (2.0, 1.5)] {
                    let num = wigner_numeric(bar, tilde, d, x, p, &pol).unwrap().value;
                    let cf = wigner_mn(d, theta, m, n, branch, x, p, t).unwrap();
                    worst = worst.max((num - cf).norm());
                    scale = scale.max(cf.norm());
                }
                assert!(worst <= 1e-8 * scale, "{branch:?} theta={theta} (m,n)=({m},{n}): {worst} / {scale}");
            }
        }
    }

    #[test]
    fn matrix_elements_match_quadrature() {
        let d = fig1b();
        oracle_check(&d, FRAC_PI_4, Branch::Minus, 0.0);
        oracle_check(&d, FRAC_PI_4, Branch::Minus, 0.7);
        oracle_check(&d, 0.5, Branch::Minus, 0.3);
        oracle_check(&d, 3.0 * FRAC_PI_4, Branch::Plus, 0.0);
        oracle_check(&d, 3.0 * FRAC_PI_4, Branch::Plus, 0.4);
        oracle_check(&d, 2.1, Branch::Plus, 0.2);
    }

    #[test]
    fn packet_closed_forms_match_quadrature() {
        let d = fig1b();
        for t in [0.0, 1.0] {
            let pol = QuadraturePolicy::default().with_half_width(wigner_half_width(&d, t)).with_tolerances(1e-11, 1e-10);
            for kind in PacketKind::ALL {
                let bar = |x: f64| packet_evolved_closed(kind, FieldSide::Bar, &d, FRAC_PI_4, x, t).unwrap();
                let tilde = |x: f64| packet_evolved_closed(kind, FieldSide::Tilde, &d, FRAC_PI_4, x, t).unwrap();
                for (x, p) in [(0.0, 0.0), (3.0, 0.5), (-2.0, -1.0), (4.5, 2.0)] {
                    let num = wigner_numeric(bar, tilde, &d, x, p, &pol).unwrap().value;
                    let cf = wigner_packet_xp(kind, &d, FRAC_PI_4, x, p, t);
                    assert!((num - cf).norm() <= 1e-8, "{kind:?} t={t} ({x},{p}): {num} vs {cf}");
                }
            }
        }
    }

    #[test]
    fn packet_wigner_examples() {
        let w = wigner_packet_closed(PacketKind::Gaussian, Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), 0.0);
        assert!((w - 1.0 / PI).norm() < 1e-16);
        let a = wigner_packet_closed(PacketKind::Cosh, Complex64::new(0.4, 0.0), Complex64::new(-1.1, 0.0), 0.8);
        let b = wigner_packet_closed(PacketKind::Cosh, Complex64::new(-0.4, 0.0), Complex64::new(1.1, 0.0), 0.8);
        assert!((a - b).norm() < 1e-16);
        let g = wigner_packet_closed(PacketKind::Gaussian, Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0), 0.0);
        assert_eq!(g.im, 0.0);
        let pol = QuadraturePolicy::default().with_half_width(15.0);
        for kt in [0.0, 1.0] {
            let total = integrate_line(
                |xs| integrate_line(|ps| wigner_packet_closed(PacketKind::Gaussian, Complex64::new(ps, 0.0), Complex64::new(xs, 0.0), kt), &pol).unwrap().value,
                &pol,
            )
            .unwrap();
            assert!((total.value - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn packet_terms_resum() {
        for kind in PacketKind::ALL {
            for kt in [0.0, 0.7, 1.5] {
                for (p, x) in [(0.3, -1.0), (-1.2, 2.5), (0.0, 0.4)] {
                    let (ps, xs) = (Complex64::new(p, 0.0), Complex64::new(x, 0.0));
                    let sum: Complex64 = wigner_packet_terms(kind, xs, kt).iter().map(|&(w, b, c)| w * (-ps * ps + b * ps + c).exp()).sum();
                    let want = wigner_packet_closed(kind, ps, xs, kt);
                    assert!((sum - want).norm() < 1e-12 * want.norm().max(1e-3), "{kind:?} {kt}: {sum} {want}");
                }
            }
        }
        let pol = QuadraturePolicy::default().with_half_width(12.0);
        for kind in PacketKind::ALL {
            for kt in [0.0, 1.0, 3.0] {
                for x in [-1.0, 0.5, 2.0 * f64::cosh(kt)] {
                    let m = packet_marginal_contour(kind, x, kt, &pol).unwrap().value;
                    let want = density_closed(kind, x, kt, DensityRegime::Exact);
                    assert!((m - want).norm() < 1e-12, "{kind:?} {kt} {x}: {m} {want}");
                }
            }
        }
    }

    #[test]
    fn marginals() {
        let d = fig1b();
        let pol = QuadraturePolicy::default().with_half_width(40.0).with_tolerances(1e-13, 1e-11);
        for kind in PacketKind::ALL {
            for t in [0.0, 1.0] {
                for x in [-2.0, 0.3, 3.5] {
                    let rho = density_from_wigner_fn(|p| wigner_packet_xp(kind, &d, FRAC_PI_4, x, p, t), d.hbar, &pol).unwrap();
                    let want = d.inv_length() * density_closed(kind, d.inv_length() * x, d.kappa() * t, DensityRegime::Exact);
                    assert!((rho.value - want).norm() < 1e-10, "{kind:?} {t} {x}");
                }
            }
        }
        let xs: Vec<f64> = (0..=240).map(|i| -12.0 + 0.1 * i as f64).collect();
        let ps: Vec<f64> = (0..=240).map(|i| -12.0 + 0.1 * i as f64).collect();
        let g = PhaseSpaceGrid::from_fn(&xs, &ps, FRAC_PI_4, 0.0, |x, p| wigner_mn(&d, FRAC_PI_4, 0, 0, Branch::Minus, x, p, 0.0).unwrap()).unwrap();
        let rho = density_from_wigner(&g, d.hbar).unwrap();
        let vals: Vec<Complex64> = rho.iter().map(|q| q.value).collect();
        let total = integrate_samples(&xs, &vals).unwrap();
        assert!((total.value - 1.0).norm() < 1e-10);
        let x = 0.7;
        let direct = eigenfunction(EigenstateId::new(0, Branch::Minus, Side::Bar), &d, FRAC_PI_4, x).unwrap().conj()
            * eigenfunction(EigenstateId::new(0, Branch::Minus, Side::Tilde), &d, FRAC_PI_4, x).unwrap();
        assert!((vals[127] - direct).norm() < 1e-10);
    }

    #[test]
    fn stretch_axis_matches_slope_magnitude() {
        let sets = [(-2.0, -0.25), (-1.0, -0.5), (-2.0, -101.0 / 800.0), (-1.0, -101.0 / 400.0)];
        for (a, b) in sets {
            let d = derive_quantities(&ModelParams::new(1.0, a, b)).unwrap();
            let s = stretch_slope(&d);
            let sig = d.inv_length();
            let xh = 10.0 / sig * s.max(1.0);
            let ph = 10.0 * sig * (1.0 + d.gamma.abs() / (sig * sig)) * (1.0 / s).max(1.0) * 3.0;
            let xs: Vec<f64> = (0..=400).map(|i| -xh + 2.0 * xh * i as f64 / 400.0).collect();
            let ps: Vec<f64> = (0..=400).map(|i| -ph + 2.0 * ph * i as f64 / 400.0).collect();
            let g = PhaseSpaceGrid::from_fn(&xs, &ps, FRAC_PI_4, 0.0, |x, p| wigner_mn(&d, FRAC_PI_4, 0, 0, Branch::Minus, x, p, 0.0).unwrap()).unwrap();
            let axis = principal_axis_slope(&g);
            assert!((axis.abs() - s).abs() <= 0.02 * s, "({a},{b}): axis {axis} vs {s}");
            assert!(axis < 0.0, "({a},{b}): the major axis has negative dx/dp for gamma < 0");
        }
        let d = derive_quantities(&ModelParams::new(1.0, -0.5f64.sqrt(), -0.5f64.sqrt())).unwrap();
        assert_eq!(stretch_slope(&d), f64::INFINITY);
        let xs: Vec<f64> = (0..=200).map(|i| -12.0 + 0.12 * i as f64).collect();
        let g = PhaseSpaceGrid::from_fn(&xs, &xs, FRAC_PI_4, 0.0, |x, p| wigner_mn(&d, FRAC_PI_4, 0, 0, Branch::Minus, x, p, 0.0).unwrap()).unwrap();
        assert!(principal_axis_slope(&g).is_infinite());
    }
}
