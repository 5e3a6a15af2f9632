//! Model parameters, derived scales and region classification.

use crate::error::{CsmError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Default tolerance on `ω² − 4αβ` for exceptional-point detection.
pub const EP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub hbar: f64,
    pub b0: f64,
    pub theta: f64,
}

impl ModelParams {
    /// Couplings in units `ħ = b₀ = 1`, scaling angle `π/4`.
    pub fn new(omega: f64, alpha: f64, beta: f64) -> Self {
        Self { omega, alpha, beta, hbar: 1.0, b0: 1.0, theta: FRAC_PI_4 }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_units(mut self, hbar: f64, b0: f64) -> Self {
        self.hbar = hbar;
        self.b0 = b0;
        self
    }

    /// Parameters with `ω = 1`, `α = −1` and `β` chosen so that `|Ω| = kappa`.
    pub fn inverted_family(kappa: f64) -> Self {
        Self::new(1.0, -1.0, -(1.0 + kappa * kappa) / 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(CsmError::InvalidInput(format!("hbar must be > 0, got {}", self.hbar)));
        }
        if !(self.b0 > 0.0 && self.b0.is_finite()) {
            return Err(CsmError::InvalidInput(format!("b0 must be > 0, got {}", self.b0)));
        }
        for (name, v) in [("omega", self.omega), ("alpha", self.alpha), ("beta", self.beta), ("theta", self.theta)] {
            if !v.is_finite() {
                return Err(CsmError::InvalidInput(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub m: f64,
    pub omega_sq: f64,
    pub omega_abs: f64,
    /// Phase of `Ω`: `π/2` when `Ω² < 0`, zero otherwise.
    pub phi: f64,
    pub sigma: Complex64,
    pub sigma_abs: f64,
    pub gamma: f64,
    /// `k = mΩ²`.
    pub k: Complex64,
    pub hbar: f64,
    pub b0: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl DerivedQuantities {
    /// `|Ω|`, the decay rate of the packets.
    pub fn kappa(&self) -> f64 {
        self.omega_abs
    }

    pub fn is_inverted(&self) -> bool {
        self.m > 0.0 && self.omega_sq < 0.0
    }

    pub fn require_inverted(&self) -> Result<()> {
        if self.is_inverted() {
            Ok(())
        } else if self.m <= 0.0 {
            Err(CsmError::OutOfScope(format!("m = {} violates m > 0", self.m)))
        } else {
            Err(CsmError::OutOfScope(format!(
                "omega^2 - 4 alpha beta = {} violates omega^2 < 4 alpha beta",
                self.omega_sq
            )))
        }
    }

    /// `|σ|/b₀`, the inverse length scale of the eigenfunctions.
    pub fn inv_length(&self) -> f64 {
        self.sigma_abs / self.b0
    }
}

pub fn derive_quantities(p: &ModelParams) -> Result<DerivedQuantities> {
    p.validate()?;
    let denom = p.omega - p.alpha - p.beta;
    if denom == 0.0 {
        return Err(CsmError::DegenerateParameters);
    }
    let m = p.hbar / (denom * p.b0 * p.b0);
    let omega_sq = p.omega * p.omega - 4.0 * p.alpha * p.beta;
    let omega_abs = omega_sq.abs().sqrt();
    let phi = if omega_sq < 0.0 { FRAC_PI_2 } else { 0.0 };
    let sqrt_m_arg = if m < 0.0 { FRAC_PI_2 } else { 0.0 };
    let sigma_abs = (m.abs() * omega_abs / p.hbar).sqrt() * p.b0;
    let sigma = Complex64::from_polar(sigma_abs, phi / 2.0 + sqrt_m_arg);
    let gamma = (p.alpha - p.beta) / denom;
    Ok(DerivedQuantities {
        m,
        omega_sq,
        omega_abs,
        phi,
        sigma,
        sigma_abs,
        gamma,
        k: Complex64::new(m * omega_sq, 0.0),
        hbar: p.hbar,
        b0: p.b0,
        alpha: p.alpha,
        beta: p.beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionClass {
    InvertedOscillator,
    ExceptionalPoint,
    OutOfScope,
}

pub fn classify_region(p: &ModelParams, tol: f64) -> Result<RegionClass> {
    let d = derive_quantities(p)?;
    if d.omega_sq.abs() <= tol {
        Ok(RegionClass::ExceptionalPoint)
    } else if d.is_inverted() {
        Ok(RegionClass::InvertedOscillator)
    } else {
        Ok(RegionClass::OutOfScope)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Reduce an angle into `[0, π)`.
pub fn mod_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI { 0.0 } else { r }
}

/// Whether the eigenfunctions of `branch` are square integrable at `theta`.
pub fn theta_domain(branch: Branch, theta: f64) -> bool {
    let r = mod_pi(theta);
    match branch {
        Branch::Minus => r > 0.0 && r < FRAC_PI_2,
        Branch::Plus => r > FRAC_PI_2 && r < PI,
    }
}

/// Slope of the line along which the ground-state Wigner function is stretched.
///
/// Returns `f64::INFINITY` when `γ = 0` and `|σ|⁴ ≠ 1`.
pub fn stretch_slope(d: &DerivedQuantities) -> f64 {
    let s4 = d.sigma_abs.powi(4);
    let num = d.gamma * d.gamma + s4 - 1.0;
    if d.gamma == 0.0 {
        return if (s4 - 1.0).abs() < 1e-14 { 1.0 } else { f64::INFINITY };
    }
    let r = num / (2.0 * d.gamma);
    let root = (1.0 + r * r).sqrt();
    if r >= 0.0 { r + root } else { 1.0 / (root - r) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1b() -> ModelParams {
        ModelParams::new(1.0, -1.0, -0.5)
    }

    #[test]
    fn fig1_derived_values() {
        let d = derive_quantities(&fig1b()).unwrap();
        assert!((d.omega_sq + 1.0).abs() < 1e-15);
        assert!((d.omega_abs - 1.0).abs() < 1e-15);
        assert!((d.m - 0.4).abs() < 1e-15);
        assert!((d.gamma + 0.2).abs() < 1e-15);
        assert!((d.sigma_abs - 0.4f64.sqrt()).abs() < 1e-15);
        assert!((d.sigma.arg() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(d.phi, FRAC_PI_2);
    }

    #[test]
    fn harmonic_limit() {
        let d = derive_quantities(&ModelParams::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(d.omega_sq, 1.0);
        assert_eq!(d.m, 1.0);
        assert_eq!(d.gamma, 0.0);
    }

    #[test]
    fn degenerate_rejected() {
        let p = ModelParams::new(1.0, 0.5, 0.5);
        assert_eq!(derive_quantities(&p), Err(CsmError::DegenerateParameters));
        assert_eq!(classify_region(&p, EP_TOLERANCE), Err(CsmError::DegenerateParameters));
    }

    #[test]
    fn regions() {
        assert_eq!(classify_region(&fig1b(), EP_TOLERANCE).unwrap(), RegionClass::InvertedOscillator);
        assert_eq!(
            classify_region(&ModelParams::new(1.0, -0.5, -0.5), EP_TOLERANCE).unwrap(),
            RegionClass::ExceptionalPoint
        );
        assert_eq!(classify_region(&ModelParams::new(1.0, 0.0, 0.0), EP_TOLERANCE).unwrap(), RegionClass::OutOfScope);
    }

    #[test]
    fn domains() {
        assert!(theta_domain(Branch::Minus, FRAC_PI_4));
        assert!(!theta_domain(Branch::Plus, FRAC_PI_4));
        assert!(theta_domain(Branch::Minus, FRAC_PI_4 + PI));
        assert!(theta_domain(Branch::Plus, 3.0 * FRAC_PI_4));
        assert!(!theta_domain(Branch::Minus, 0.0));
        assert!(!theta_domain(Branch::Plus, FRAC_PI_2));
    }

    #[test]
    fn slope_limits() {
        let mut d = derive_quantities(&fig1b()).unwrap();
        d.gamma = 0.0;
        d.sigma_abs = 1.0;
        assert_eq!(stretch_slope(&d), 1.0);
        d.sigma_abs = 0.5;
        assert_eq!(stretch_slope(&d), f64::INFINITY);
        d.gamma = 1e-9;
        d.sigma_abs = 1.0;
        assert!((stretch_slope(&d) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn slope_fig1a_finite() {
        let d = derive_quantities(&ModelParams::new(1.0, -2.0, -0.25)).unwrap();
        assert!((d.gamma + 7.0 / 13.0).abs() < 1e-15);
        let s = stretch_slope(&d);
        assert!(s.is_finite() && s > 0.0);
    }

    #[test]
    fn family_has_requested_kappa() {
        for k in [0.5, 0.1, 0.01] {
            let d = derive_quantities(&ModelParams::inverted_family(k)).unwrap();
            assert!((d.omega_abs - k).abs() < 1e-12);
            assert!(d.is_inverted());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn omega_sq_roundtrip(w in -3.0f64..3.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
                prop_assume!((w - a - b).abs() > 1e-6);
                let d = derive_quantities(&ModelParams::new(w, a, b)).unwrap();
                let back = d.omega_abs * d.omega_abs * (2.0 * d.phi).cos();
                prop_assert!((back - d.omega_sq).abs() <= 1e-12 * d.omega_sq.abs().max(1e-300));
            }

            #[test]
            fn swap_symmetry(w in -3.0f64..3.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
                prop_assume!((w - a - b).abs() > 1e-6);
                let p = ModelParams::new(w, a, b);
                let q = ModelParams::new(w, b, a).with_theta(-p.theta);
                let (d1, d2) = (derive_quantities(&p).unwrap(), derive_quantities(&q).unwrap());
                prop_assert!((d1.m - d2.m).abs() <= 1e-12 * d1.m.abs());
                prop_assert!((d1.omega_sq - d2.omega_sq).abs() <= 1e-12 * d1.omega_sq.abs().max(1.0));
                prop_assert_eq!(classify_region(&p, EP_TOLERANCE).unwrap(), classify_region(&q, EP_TOLERANCE).unwrap());
            }

            #[test]
            fn branch_domains_exclusive(theta in -10.0f64..10.0) {
                let r = mod_pi(theta);
                prop_assume!(r.abs() > 1e-9 && (r - FRAC_PI_2).abs() > 1e-9 && (r - PI).abs() > 1e-9);
                prop_assert!(theta_domain(Branch::Minus, theta) ^ theta_domain(Branch::Plus, theta));
            }
        }
    }
}
