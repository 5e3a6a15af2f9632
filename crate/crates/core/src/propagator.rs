//! Response-function kernels, initial-condition scaling, time evolution by
//! quadrature, closed-form eigenstate evolution and bi-orthogonal expansions.

use crate::eigen::{eigenfunction, phi_all, upsilon, EigenstateId, Side};
use crate::error::{CsmError, Result};
use crate::model::{theta_domain, Branch, DerivedQuantities};
use crate::special::{integrate_line, integrate_samples, Quadrature, QuadraturePolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSide {
    Tilde,
    Bar,
}

/// A sampled complex function on a strictly increasing 1-D grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexField {
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
    pub theta: f64,
    pub time: f64,
    pub side: FieldSide,
}

impl ComplexField {
    pub fn new(x: Vec<f64>, values: Vec<Complex64>, theta: f64, time: f64, side: FieldSide) -> Result<Self> {
        let f = Self { x, values, theta, time, side };
        f.validate()?;
        Ok(f)
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(x: &[f64], theta: f64, time: f64, side: FieldSide, f: F) -> Self {
        Self { x: x.to_vec(), values: x.iter().map(|&x| f(x)).collect(), theta, time, side }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.values.len() {
            return Err(CsmError::InvalidInput("grid and values differ in length".into()));
        }
        if self.x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CsmError::InvalidInput("grid must be strictly increasing".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(CsmError::InvalidInput("field contains non-finite samples".into()));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: Complex64, other: &ComplexField, b: Complex64) -> Result<ComplexField> {
        if self.x != other.x {
            return Err(CsmError::InvalidInput("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(u, v)| a * u + b * v).collect();
        Ok(ComplexField { values, ..self.clone() })
    }
}

pub fn uniform_grid(xmin: f64, xmax: f64, points: usize) -> Result<Vec<f64>> {
    if points < 3 || !(xmax > xmin) || !xmin.is_finite() || !xmax.is_finite() {
        return Err(CsmError::InvalidInput(format!("bad grid [{xmin}, {xmax}] with {points} points")));
    }
    let h = (xmax - xmin) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { xmax } else { xmin + i as f64 * h }).collect())
}

/// 2001 points on `[−L, L]`, `L = 12·max(1, e^{|Ω|t}) b₀/|σ|`.
pub fn default_grid(d: &DerivedQuantities, t: f64) -> Vec<f64> {
    let l = 12.0 * (d.kappa() * t).exp().max(1.0) / d.inv_length();
    uniform_grid(-l, l, 2001).expect("valid default grid")
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(CsmError::TimeNonPositive(t));
    }
    Ok(())
}

/// Logarithm of `K(θ,x,x′;t)` (inverted-oscillator form).
fn ln_kernel(d: &DerivedQuantities, theta: f64, x: f64, xp: f64, t: f64) -> Complex64 {
    let kt = d.kappa() * t;
    let (c, s) = (kt.cosh(), kt.sinh());
    let sig = d.inv_length();
    let pre = Complex64::new((sig / (2.0 * PI * s).sqrt()).ln(), theta - FRAC_PI_4);
    let quad = Complex64::new(0.0, sig * sig / (2.0 * s)) * Complex64::from_polar(1.0, 2.0 * theta) * ((x * x + xp * xp) * c - 2.0 * x * xp);
    pre + quad
}

fn ln_gamma_factor(d: &DerivedQuantities, theta: f64, x: f64, xp: f64) -> Complex64 {
    d.gamma * Complex64::from_polar(1.0, 2.0 * theta) * (x * x - xp * xp) / (2.0 * d.b0 * d.b0)
}

/// `K(θ,x,x′;t) = e^{i(θ−π/4)}|σ|/(b₀√(2π sinh|Ω|t)) · exp(i|σ|²e^{2iθ}((x²+x′²)cosh|Ω|t − 2xx′)/(2b₀² sinh|Ω|t))`.
pub fn kernel_k(d: &DerivedQuantities, theta: f64, x: f64, xp: f64, t: f64) -> Result<Complex64> {
    check_time(t)?;
    d.require_inverted()?;
    Ok(ln_kernel(d, theta, x, xp, t).exp())
}

/// `Γ(θ,x,x′) = exp(γ e^{2iθ}(x² − x′²)/2b₀²)`.
pub fn gamma_factor(d: &DerivedQuantities, theta: f64, x: f64, xp: f64) -> Complex64 {
    ln_gamma_factor(d, theta, x, xp).exp()
}

fn ln_kernel_dressed(d: &DerivedQuantities, theta: f64, x: f64, xp: f64, t: f64, side: FieldSide) -> Complex64 {
    match side {
        FieldSide::Tilde => ln_gamma_factor(d, theta, x, xp) + ln_kernel(d, theta, x, xp, t),
        FieldSide::Bar => -ln_gamma_factor(d, -theta, x, xp) + ln_kernel(d, -theta, x, xp, t),
    }
}

/// Tilde: `Γ(θ)K(θ)`; Bar: `Γ(−θ)⁻¹K(−θ)`.
pub fn kernel_dressed(d: &DerivedQuantities, theta: f64, x: f64, xp: f64, t: f64, side: FieldSide) -> Result<Complex64> {
    check_time(t)?;
    d.require_inverted()?;
    Ok(ln_kernel_dressed(d, theta, x, xp, t, side).exp())
}

/// Real part of the coefficient of `x′²` in the dressed kernel exponent.
/// Positive means the kernel grows along the integration line.
pub fn kernel_growth(d: &DerivedQuantities, theta: f64, t: f64, side: FieldSide) -> f64 {
    let kt = d.kappa() * t;
    let th = if side == FieldSide::Tilde { theta } else { -theta };
    let sig = d.inv_length();
    let k = Complex64::new(0.0, sig * sig * kt.cosh() / (2.0 * kt.sinh())) * Complex64::from_polar(1.0, 2.0 * th);
    let g = d.gamma * Complex64::from_polar(1.0, 2.0 * th) / (2.0 * d.b0 * d.b0);
    match side {
        FieldSide::Tilde => (k - g).re,
        FieldSide::Bar => (k + g).re,
    }
}

/// Scale an analytic initial function `f(w)`:
/// Tilde `Υ⁻¹(θ,x) e^{iθ/2} f(e^{iθ}x)`, Bar `Υ(−θ,x) conj(e^{iθ/2} f(e^{iθ}x))`.
///
/// The Bar side is the Schwarz reflection of the Tilde side; for `f` real on
/// the real axis it equals `Υ(−θ,x) e^{−iθ/2} f(e^{−iθ}x)`.
pub fn scale_initial_condition<F: Fn(Complex64) -> Complex64>(
    f: F,
    d: &DerivedQuantities,
    theta: f64,
    side: FieldSide,
    x: &[f64],
) -> ComplexField {
    let jac = Complex64::from_polar(1.0, theta / 2.0);
    let rot = Complex64::from_polar(1.0, theta);
    ComplexField::from_fn(x, theta, 0.0, side, |x| {
        let v = jac * f(rot * x);
        match side {
            FieldSide::Tilde => upsilon(d, theta, x, true) * v,
            FieldSide::Bar => upsilon(d, -theta, x, false) * v.conj(),
        }
    })
}

/// Evolve several fields sharing grid, angle, side and start time by `t`.
/// Returns the evolved fields and the per-field error estimate (difference
/// from the sum over every other sample plus the end-point contribution).
pub fn evolve_quadrature_many(fields: &[ComplexField], d: &DerivedQuantities, t: f64) -> Result<Vec<(ComplexField, f64)>> {
    check_time(t)?;
    d.require_inverted()?;
    let first = match fields.first() {
        Some(f) => f,
        None => return Ok(Vec::new()),
    };
    for f in fields {
        f.validate()?;
        if f.x != first.x || f.theta != first.theta || f.side != first.side {
            return Err(CsmError::InvalidInput("fields must share grid, angle and side".into()));
        }
    }
    let (theta, side, x) = (first.theta, first.side, &first.x);
    if kernel_growth(d, theta, t, side) > 0.0 {
        return Err(CsmError::OutOfScope(format!(
            "the {side:?} kernel grows along the real line at theta = {theta}; use the closed forms"
        )));
    }
    let n = x.len();
    let nf = fields.len();
    // Trapezoid weights on the full grid and on every other sample.
    let mut w_fine = vec![0.0; n];
    let mut w_coarse = vec![0.0; n];
    for j in 0..n - 1 {
        let h = x[j + 1] - x[j];
        w_fine[j] += 0.5 * h;
        w_fine[j + 1] += 0.5 * h;
    }
    let mut idx: Vec<usize> = (0..n).step_by(2).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    for w in idx.windows(2) {
        let h = x[w[1]] - x[w[0]];
        w_coarse[w[0]] += 0.5 * h;
        w_coarse[w[1]] += 0.5 * h;
    }
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; nf];
    let mut err = vec![vec![0.0f64; n]; nf];
    let mut fine = vec![Complex64::new(0.0, 0.0); nf];
    let mut coarse = vec![Complex64::new(0.0, 0.0); nf];
    for (i, &xi) in x.iter().enumerate() {
        fine.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        coarse.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        let mut edge = vec![0.0; nf];
        for (j, &xj) in x.iter().enumerate() {
            let k = ln_kernel_dressed(d, theta, xi, xj, t, side).exp();
            for (q, f) in fields.iter().enumerate() {
                let v = k * f.values[j];
                fine[q] += w_fine[j] * v;
                coarse[q] += w_coarse[j] * v;
                if j == 0 || j == n - 1 {
                    edge[q] += v.norm() * w_fine[j];
                }
            }
        }
        for q in 0..nf {
            out[q][i] = fine[q];
            err[q][i] = (fine[q] - coarse[q]).norm() + edge[q];
        }
    }
    Ok(out
        .into_iter()
        .zip(err)
        .zip(fields)
        .map(|((values, e), f)| {
            let e = e.into_iter().fold(0.0, f64::max);
            (ComplexField { x: f.x.clone(), values, theta, time: f.time + t, side }, e)
        })
        .collect())
}

/// `f̃(θ,x,t) = ∫ K̃(x,x′;t) f̃(θ,x′,0) dx′` on the field's own grid
/// (trapezoid rule). Fails with `ToleranceNotReached` if the estimated error
/// exceeds `max(abs_tol, rel_tol·max|f|)`.
pub fn evolve_quadrature(f0: &ComplexField, d: &DerivedQuantities, t: f64, policy: &QuadraturePolicy) -> Result<ComplexField> {
    let (field, e) = evolve_quadrature_many(std::slice::from_ref(f0), d, t)?.pop().unwrap();
    let target = policy.abs_tol.max(policy.rel_tol * field.max_abs());
    if e > target {
        return Err(CsmError::ToleranceNotReached { estimate: e, target });
    }
    Ok(field)
}

/// Evolve an analytic initial value to a single point with adaptive
/// quadrature: `∫ K̃(x,x′;t) f(x′) dx′`.
pub fn evolve_point<F: Fn(f64) -> Complex64>(
    f0: F,
    d: &DerivedQuantities,
    theta: f64,
    side: FieldSide,
    x: f64,
    t: f64,
    policy: &QuadraturePolicy,
) -> Result<Quadrature> {
    check_time(t)?;
    d.require_inverted()?;
    integrate_line(|xp| ln_kernel_dressed(d, theta, x, xp, t, side).exp() * f0(xp), policy)
}

/// Time factor multiplying `φ̃ₙ^±` (Tilde) or `ψ̄ₙ^±` (Bar) beyond the
/// zero-point factor: `e^{∓n|Ω|t}` on the Tilde side, `e^{±n|Ω|t}` on the Bar
/// side. The constant phase is 1, as established against quadrature.
pub fn eigenstate_evolution_closed(d: &DerivedQuantities, n: usize, branch: Branch, t: f64, side: FieldSide) -> Complex64 {
    let s = match side {
        FieldSide::Tilde => branch.sign(),
        FieldSide::Bar => -branch.sign(),
    };
    Complex64::new((s * n as f64 * d.kappa() * t).exp(), 0.0)
}

/// `e^{∓|Ω|t/2}` (Tilde), `e^{±|Ω|t/2}` (Bar): the `½` of `n + ½`.
pub fn zero_point_factor(d: &DerivedQuantities, branch: Branch, t: f64, side: FieldSide) -> Complex64 {
    let s = match side {
        FieldSide::Tilde => branch.sign(),
        FieldSide::Bar => -branch.sign(),
    };
    Complex64::new((0.5 * s * d.kappa() * t).exp(), 0.0)
}

/// Evolved eigenfunction from the closed form.
pub fn eigenstate_evolved(d: &DerivedQuantities, theta: f64, n: usize, branch: Branch, side: FieldSide, x: f64, t: f64) -> Result<Complex64> {
    let es = match side {
        FieldSide::Tilde => Side::Tilde,
        FieldSide::Bar => Side::Bar,
    };
    let v = eigenfunction(EigenstateId::new(n, branch, es), d, theta, x)?;
    Ok(eigenstate_evolution_closed(d, n, branch, t, side) * zero_point_factor(d, branch, t, side) * v)
}

/// Ratio of a quadrature-evolved eigenfunction to `zero_point·φ̃ₙ`, sampled
/// where `|φ̃ₙ|` exceeds `1e−3` of its peak: returns `(mean ratio, max
/// relative spread)`.
pub fn measured_evolution_ratio(evolved: &ComplexField, d: &DerivedQuantities, n: usize, branch: Branch) -> Result<(Complex64, f64)> {
    let t = evolved.time;
    let refs: Vec<Complex64> = evolved
        .x
        .iter()
        .map(|&x| eigenstate_evolved(d, evolved.theta, n, branch, evolved.side, x, t).map(|v| v / eigenstate_evolution_closed(d, n, branch, t, evolved.side)))
        .collect::<Result<_>>()?;
    let peak = refs.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let ratios: Vec<Complex64> = refs
        .iter()
        .zip(&evolved.values)
        .filter(|(r, _)| r.norm() > 1e-3 * peak)
        .map(|(r, v)| v / r)
        .collect();
    if ratios.is_empty() {
        return Err(CsmError::InvalidInput("reference function vanishes on the grid".into()));
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let spread = ratios.iter().fold(0.0f64, |m, r| m.max((r - mean).norm())) / mean.norm();
    Ok((mean, spread))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub c_plus: Vec<Complex64>,
    pub c_minus: Vec<Complex64>,
    pub n: usize,
    pub t0: f64,
}

/// `c̃ₙ^± = ∫ (ψ̄ₙ^±)* f̃ dx` for `n < size` on the branch whose domain
/// contains `θ`; the other branch is not square integrable there and its
/// list is zero.
pub fn expansion_coefficients(f0: &ComplexField, d: &DerivedQuantities, size: usize) -> Result<ExpansionCoefficients> {
    f0.validate()?;
    d.require_inverted()?;
    if f0.side != FieldSide::Tilde {
        return Err(CsmError::InvalidInput("expansion coefficients are defined for Tilde fields".into()));
    }
    let branch = domain_branch(f0.theta)?;
    let bars: Vec<Vec<Complex64>> = f0
        .x
        .iter()
        .map(|&x| {
            let phi = phi_all(d, f0.theta, size.saturating_sub(1), branch, Complex64::new(x, 0.0))?;
            Ok(phi.into_iter().map(|p| upsilon(d, -f0.theta, x, false) * p.conj()).collect())
        })
        .collect::<Result<_>>()?;
    let mut c = Vec::with_capacity(size);
    for k in 0..size {
        let integrand: Vec<Complex64> = bars.iter().zip(&f0.values).map(|(b, f)| b[k].conj() * f).collect();
        c.push(integrate_samples(&f0.x, &integrand)?.value);
    }
    let zeros = vec![Complex64::new(0.0, 0.0); size];
    let (c_plus, c_minus) = match branch {
        Branch::Plus => (c, zeros),
        Branch::Minus => (zeros, c),
    };
    Ok(ExpansionCoefficients { c_plus, c_minus, n: size, t0: f0.time })
}

fn domain_branch(theta: f64) -> Result<Branch> {
    if theta_domain(Branch::Minus, theta) {
        Ok(Branch::Minus)
    } else if theta_domain(Branch::Plus, theta) {
        Ok(Branch::Plus)
    } else {
        Err(CsmError::InvalidInput(format!("theta = {theta} lies on a branch boundary")))
    }
}

/// Split the state evolved by `t` into its retarded (`−`, decaying) and
/// advanced (`+`, growing) parts: `f^± = Σ c̃ₙ^± e^{∓(n+½)|Ω|t} φ̃ₙ^±`.
pub fn split_retarded_advanced(
    f0: &ComplexField,
    d: &DerivedQuantities,
    size: usize,
    t: f64,
    policy: &QuadraturePolicy,
) -> Result<(ComplexField, ComplexField)> {
    if size < 2 {
        return Err(CsmError::InvalidInput("truncation must keep at least two terms".into()));
    }
    let c = expansion_coefficients(f0, d, size)?;
    let (branch, coef) = if c.c_minus.iter().any(|v| v.norm() > 0.0) { (Branch::Minus, &c.c_minus) } else { (Branch::Plus, &c.c_plus) };
    let peak = coef.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let tail = coef[size - 1].norm().max(coef[size - 2].norm());
    let bound = policy.rel_tol * peak;
    if tail > bound {
        return Err(CsmError::TruncationInsufficient { tail, bound });
    }
    let factors: Vec<Complex64> = (0..size)
        .map(|k| coef[k] * eigenstate_evolution_closed(d, k, branch, t, FieldSide::Tilde) * zero_point_factor(d, branch, t, FieldSide::Tilde))
        .collect();
    let mut active = Vec::with_capacity(f0.x.len());
    for &x in &f0.x {
        let phi = phi_all(d, f0.theta, size - 1, branch, Complex64::new(x, 0.0))?;
        let s: Complex64 = phi.iter().zip(&factors).map(|(p, c)| p * c).sum();
        active.push(upsilon(d, f0.theta, x, true) * s);
    }
    let active = ComplexField { x: f0.x.clone(), values: active, theta: f0.theta, time: f0.time + t, side: FieldSide::Tilde };
    let zero = ComplexField { values: vec![Complex64::new(0.0, 0.0); f0.x.len()], ..active.clone() };
    Ok(match branch {
        Branch::Minus => (active, zero),
        Branch::Plus => (zero, active),
    })
}

/// `∫ f̄* f̃ dx` by the trapezoid rule on the shared grid.
pub fn binorm(fbar: &ComplexField, ftilde: &ComplexField) -> Result<Quadrature> {
    if fbar.x != ftilde.x || fbar.theta != ftilde.theta {
        return Err(CsmError::InvalidInput("binorm needs fields on the same grid and angle".into()));
    }
    if fbar.side != FieldSide::Bar || ftilde.side != FieldSide::Tilde {
        return Err(CsmError::InvalidInput("binorm pairs a Bar field with a Tilde field".into()));
    }
    let v: Vec<Complex64> = fbar.values.iter().zip(&ftilde.values).map(|(b, f)| b.conj() * f).collect();
    integrate_samples(&fbar.x, &v)
}
