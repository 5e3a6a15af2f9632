//! Discrete and continuum eigenfunctions of `H(θ)` and `H_c(θ)`.

use crate::error::{CsmError, Result};
use crate::model::{theta_domain, Branch, DerivedQuantities};
use crate::special::{gamma, hermite_functions, integrate_line, parabolic_cylinder_d, Quadrature, QuadraturePolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

/// Which member of a bi-orthogonal pair a function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// The undressed function `φ` of the scaled oscillator.
    Plain,
    /// Eigenfunction `φ̃` of `H(θ)`.
    Tilde,
    /// Eigenfunction `ψ̄` of `H_c(θ)`.
    Bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenstateId {
    pub n: usize,
    pub branch: Branch,
    pub side: Side,
}

impl EigenstateId {
    pub fn new(n: usize, branch: Branch, side: Side) -> Self {
        Self { n, branch, side }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralKind {
    Discrete,
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralValue {
    pub value: Complex64,
    pub kind: SpectralKind,
}

/// `Υ(θ,x) = exp(−γ e^{2iθ} x² / 2b₀²)`, or its inverse.
pub fn upsilon(d: &DerivedQuantities, theta: f64, x: f64, inverse: bool) -> Complex64 {
    let s = if inverse { 1.0 } else { -1.0 };
    (s * d.gamma * Complex64::from_polar(1.0, 2.0 * theta) * x * x / (2.0 * d.b0 * d.b0)).exp()
}

/// Rotation angle `θ ± π/4` reduced into `(−π/2, π/2]`.
///
/// Using the reduced angle keeps `Re z² > 0` on the domain of the branch and
/// fixes the sign of the normalization so that `∫ φₙ φₙ dx = +1` on both
/// branches.
pub fn rotation_angle(theta: f64, branch: Branch) -> f64 {
    let a = theta + branch.sign() * FRAC_PI_4;
    let r = (a + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if r <= -FRAC_PI_2 { r + PI } else { r }
}

/// Real part of the quadratic exponent coefficient, `Re e^{2i(θ±π/4)}`.
/// Positive exactly where the branch is square integrable.
pub fn decay_sign(theta: f64, branch: Branch) -> f64 {
    (2.0 * (theta + branch.sign() * FRAC_PI_4)).cos()
}

/// Half-width in `x` beyond which `|φₘ φₙ|` for `m, n ≤ n_max` is below `1e−18`.
pub fn eigen_half_width(d: &DerivedQuantities, theta: f64, n_max: usize, branch: Branch) -> f64 {
    let c = decay_sign(theta, branch).max(1e-6);
    ((2.0 * n_max as f64 + 1.0).sqrt() + 6.5) / (d.inv_length() * c.sqrt())
}

/// `φₙ^±(θ,x)` for all `n ≤ n_max`.
pub fn phi_all(d: &DerivedQuantities, theta: f64, n_max: usize, branch: Branch, x: Complex64) -> Result<Vec<Complex64>> {
    d.require_inverted()?;
    let a = rotation_angle(theta, branch);
    let z = Complex64::from_polar(d.inv_length(), a) * x;
    let norm = Complex64::from_polar(d.inv_length().sqrt(), a / 2.0);
    Ok(hermite_functions(n_max, z)?.into_iter().map(|h| norm * h).collect())
}

/// `φₙ^±(θ,x) = 𝒩ₙ e^{−z²/2} Hₙ(z)`, `z = e^{i(θ±π/4)} |σ| x / b₀`.
pub fn phi_n(d: &DerivedQuantities, theta: f64, n: usize, branch: Branch, x: f64) -> Result<Complex64> {
    Ok(*phi_all(d, theta, n, branch, Complex64::new(x, 0.0))?.last().unwrap())
}

fn dress(d: &DerivedQuantities, theta: f64, side: Side, x: f64, phi: Complex64) -> Complex64 {
    match side {
        Side::Plain => phi,
        Side::Tilde => upsilon(d, theta, x, true) * phi,
        Side::Bar => upsilon(d, -theta, x, false) * phi.conj(),
    }
}

pub fn eigenfunction(id: EigenstateId, d: &DerivedQuantities, theta: f64, x: f64) -> Result<Complex64> {
    let phi = phi_n(d, theta, id.n, id.branch, x)?;
    Ok(dress(d, theta, id.side, x, phi))
}

/// `Eₙ^± = ±iħ|Ω|(n+½)`; the Bar side carries the conjugate.
pub fn eigenvalue(id: EigenstateId, d: &DerivedQuantities) -> SpectralValue {
    let e = Complex64::new(0.0, id.branch.sign() * d.hbar * d.kappa() * (id.n as f64 + 0.5));
    SpectralValue { value: if id.side == Side::Bar { e.conj() } else { e }, kind: SpectralKind::Discrete }
}

/// Gram matrix `G[m][n] = ∫ (ψ̄ₘ)* φ̃ₙ dx` for `m, n < size`.
pub fn biorthogonality_matrix(
    d: &DerivedQuantities,
    theta: f64,
    size: usize,
    branch: Branch,
    policy: &QuadraturePolicy,
) -> Result<Vec<Vec<Complex64>>> {
    if size == 0 {
        return Ok(Vec::new());
    }
    let quads = biorthogonality_quadratures(d, theta, size, branch, policy)?;
    Ok(quads.into_iter().map(|row| row.into_iter().map(|q| q.value).collect()).collect())
}

/// As [`biorthogonality_matrix`] but keeps the quadrature error estimates.
pub fn biorthogonality_quadratures(
    d: &DerivedQuantities,
    theta: f64,
    size: usize,
    branch: Branch,
    policy: &QuadraturePolicy,
) -> Result<Vec<Vec<Quadrature>>> {
    if !theta_domain(branch, theta) {
        return Err(CsmError::InvalidInput(format!("theta = {theta} outside the domain of the {branch:?} branch")));
    }
    d.require_inverted()?;
    let pol = policy.with_half_width(policy.half_width.max(eigen_half_width(d, theta, size - 1, branch)));
    let mut out = vec![Vec::with_capacity(size); size];
    for (m, row) in out.iter_mut().enumerate() {
        for n in 0..size {
            let q = integrate_line(
                |x| {
                    // conj(Υ(−θ))·Υ⁻¹(θ) is formed in the exponent: the factors
                    // separately over/underflow far out when θ is near the domain edge.
                    let ln_dress = (-d.gamma * Complex64::from_polar(1.0, -2.0 * theta)).conj() + d.gamma * Complex64::from_polar(1.0, 2.0 * theta);
                    let dress = (ln_dress * x * x / (2.0 * d.b0 * d.b0)).exp();
                    let pm = phi_n(d, theta, m, branch, x).unwrap_or_default();
                    let pn = phi_n(d, theta, n, branch, x).unwrap_or_default();
                    dress * pm * pn
                },
                &pol,
            )?;
            row.push(q);
        }
    }
    Ok(out)
}

/// Apply `H(θ)` to a function given on a uniform stencil around `x`
/// (five-point differences, step `h`).
pub fn apply_h_theta<F: Fn(f64) -> Complex64>(d: &DerivedQuantities, omega: f64, theta: f64, f: F, x: f64, h: f64) -> Complex64 {
    let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    let e2 = Complex64::from_polar(1.0, 2.0 * theta);
    let hb = d.hbar;
    0.5 * hb * (omega + d.alpha + d.beta) * e2 * x * x / (d.b0 * d.b0) * f0 - hb * hb / (2.0 * d.m) / e2 * d2
        + 0.5 * hb * (d.alpha - d.beta) * (2.0 * x * d1 + f0)
}

/// Continuum eigenfunction `Γ(ν+1) D_{−ν−1}(∓√(−2i) e^{iθ} |σ| x / b₀)` with
/// `ν = −(iE e^{2iθ}/ħ|Ω| + ½)`. Unnormalized.
///
/// `sign = Plus` selects the upper sign (argument with the minus sign).
pub fn continuum_eigenfunction(d: &DerivedQuantities, theta: f64, energy: f64, sign: Branch, x: f64) -> Result<Complex64> {
    d.require_inverted()?;
    let i = Complex64::new(0.0, 1.0);
    let nu = -(i * energy * Complex64::from_polar(1.0, 2.0 * theta) / (d.hbar * d.kappa()) + 0.5);
    let root = Complex64::from_polar(SQRT_2, -FRAC_PI_4);
    let arg = -sign.sign() * root * Complex64::from_polar(d.inv_length(), theta) * x;
    Ok(gamma(nu + 1.0) * parabolic_cylinder_d(-nu - 1.0, arg)?)
}

/// Dressed continuum functions: Tilde `Υ⁻¹(θ) φ_E(θ)`, Bar `Υ(−θ) φ_E(−θ)`.
pub fn continuum_dressed(d: &DerivedQuantities, theta: f64, energy: f64, sign: Branch, side: Side, x: f64) -> Result<Complex64> {
    match side {
        Side::Plain => continuum_eigenfunction(d, theta, energy, sign, x),
        Side::Tilde => Ok(upsilon(d, theta, x, true) * continuum_eigenfunction(d, theta, energy, sign, x)?),
        Side::Bar => Ok(upsilon(d, -theta, x, false) * continuum_eigenfunction(d, -theta, energy, sign, x)?),
    }
}

/// `E(θ) = e^{−2iθ}E` on the Tilde side, `e^{2iθ}E` on the Bar side.
pub fn continuum_eigenvalue(theta: f64, energy: f64, side: Side) -> SpectralValue {
    let s = if side == Side::Bar { 1.0 } else { -1.0 };
    SpectralValue { value: Complex64::from_polar(energy, 2.0 * s * theta), kind: SpectralKind::Continuum }
}
