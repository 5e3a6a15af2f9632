//! Line quadrature: composite Gauss–Legendre panels with panel doubling,
//! refined trapezoid sums for closures, and trapezoid sums over sampled data.

use crate::error::{CsmError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Points per Gauss–Legendre panel.
pub const GL_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureRule {
    GaussLegendrePanels,
    TrapezoidRefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraturePolicy {
    pub rule: QuadratureRule,
    /// Integrate over `[−half_width, half_width]`.
    pub half_width: f64,
    pub panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::GaussLegendrePanels,
            half_width: 12.0,
            panels: 16,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_refinements: 4,
        }
    }
}

impl QuadraturePolicy {
    pub fn with_half_width(mut self, half_width: f64) -> Self {
        self.half_width = half_width;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }

    /// Half-width `L` with `e^{−c L²}` below `1e−18`, for an integrand whose
    /// quadratic exponent has real part `−c x²`.
    pub fn envelope_half_width(c: f64) -> f64 {
        (18.0 * std::f64::consts::LN_10 / c).sqrt()
    }

    fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0) || self.panels == 0 || !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(CsmError::InvalidInput(format!("invalid quadrature policy {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights on `[−1, 1]` by Newton iteration on `P_n`.
fn legendre_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn gl64() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(GL_ORDER))
}

/// Composite rule on `[a, b]` with `panels` equal panels; returns the sum and
/// the sum of moduli (for the rounding estimate).
fn gl_composite<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, panels: usize) -> (Complex64, f64) {
    let rule = gl64();
    let h = (b - a) / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(mid + 0.5 * h * x) * w;
            panel += v;
            abs += v.norm();
        }
        sum += panel * (0.5 * h);
    }
    (sum, abs * 0.5 * h)
}

/// `∫_{−L}^{L} f(x) dx` with `L = policy.half_width`.
pub fn integrate_line<F: Fn(f64) -> Complex64>(f: F, policy: &QuadraturePolicy) -> Result<Quadrature> {
    integrate_interval(f, -policy.half_width, policy.half_width, policy)
}

/// `∫_a^b f(x) dx`, refined until two successive levels agree.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, policy: &QuadraturePolicy) -> Result<Quadrature> {
    policy.validate()?;
    match policy.rule {
        QuadratureRule::GaussLegendrePanels => gl_refined(&f, a, b, policy),
        QuadratureRule::TrapezoidRefined => trapezoid_refined(&f, a, b, policy),
    }
}

fn gl_refined<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, policy: &QuadraturePolicy) -> Result<Quadrature> {
    let mut panels = policy.panels;
    let (mut prev, _) = gl_composite(f, a, b, panels);
    let mut evaluations = panels * GL_ORDER;
    let mut last_err = f64::INFINITY;
    for _ in 0..policy.max_refinements.max(1) {
        panels *= 2;
        let (cur, abs) = gl_composite(f, a, b, panels);
        evaluations += panels * GL_ORDER;
        let err = (cur - prev).norm() + 4.0 * f64::EPSILON * abs;
        if !cur.is_finite() {
            return Err(CsmError::ToleranceNotReached { estimate: f64::INFINITY, target: policy.abs_tol });
        }
        if err <= policy.target(cur) {
            return Ok(Quadrature { value: cur, error: err, evaluations });
        }
        prev = cur;
        last_err = err;
    }
    Err(CsmError::ToleranceNotReached { estimate: last_err, target: policy.target(prev) })
}

fn trapezoid_refined<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, policy: &QuadraturePolicy) -> Result<Quadrature> {
    let mut n = policy.panels * GL_ORDER;
    let mut h = (b - a) / n as f64;
    let mut inner = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    let ends = 0.5 * (f(a) + f(b));
    for i in 1..n {
        let v = f(a + i as f64 * h);
        inner += v;
        abs += v.norm();
    }
    let mut evaluations = n + 1;
    let mut prev = (ends + inner) * h;
    let mut last_err = f64::INFINITY;
    for _ in 0..policy.max_refinements.max(1) {
        let mut mids = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let v = f(a + (i as f64 + 0.5) * h);
            mids += v;
            abs += v.norm();
        }
        evaluations += n;
        inner += mids;
        n *= 2;
        h *= 0.5;
        let cur = (ends + inner) * h;
        let err = (cur - prev).norm() + 4.0 * f64::EPSILON * abs * h;
        if err <= policy.target(cur) {
            return Ok(Quadrature { value: cur, error: err, evaluations });
        }
        prev = cur;
        last_err = err;
    }
    Err(CsmError::ToleranceNotReached { estimate: last_err, target: policy.target(prev) })
}

/// Trapezoid sum over sampled data on a strictly increasing grid.
///
/// The error estimate is the difference from the sum over every other sample
/// plus the end-point contribution (a truncation indicator).
pub fn integrate_samples(x: &[f64], values: &[Complex64]) -> Result<Quadrature> {
    if x.len() != values.len() || x.len() < 3 {
        return Err(CsmError::InvalidInput("sample grid and values must match and hold at least 3 points".into()));
    }
    let trap = |stride: usize| {
        let mut idx: Vec<usize> = (0..x.len()).step_by(stride).collect();
        if *idx.last().unwrap() != x.len() - 1 {
            idx.push(x.len() - 1);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for w in idx.windows(2) {
            sum += 0.5 * (x[w[1]] - x[w[0]]) * (values[w[0]] + values[w[1]]);
        }
        sum
    };
    let fine = trap(1);
    let coarse = trap(2);
    let h0 = x[1] - x[0];
    let hn = x[x.len() - 1] - x[x.len() - 2];
    let tail = values[0].norm() * h0 + values[values.len() - 1].norm() * hn;
    Ok(Quadrature { value: fine, error: (fine - coarse).norm() + tail, evaluations: x.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let r = legendre_rule(GL_ORDER);
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(10)).sum();
        assert!((m - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_examples() {
        for rule in [QuadratureRule::GaussLegendrePanels, QuadratureRule::TrapezoidRefined] {
            let pol = QuadraturePolicy { rule, half_width: 10.0, ..Default::default() };
            let q = integrate_line(|x| re((-x * x).exp()), &pol).unwrap();
            assert!((q.value - PI.sqrt()).norm() < 1e-13);
            assert!((q.value - PI.sqrt()).norm() <= q.error.max(1e-15));
            let q = integrate_line(|x| re(x * (-x * x).exp()), &pol).unwrap();
            assert!(q.value.norm() < 1e-15);
            let a = Complex64::new(1.0, 1.0);
            let q = integrate_line(|x| (-a * x * x / 2.0).exp(), &pol).unwrap();
            let want = (2.0 * PI / a).sqrt();
            assert!((q.value - want).norm() < 1e-13);
            assert!((q.value - want).norm() <= q.error.max(1e-15));
        }
    }

    #[test]
    fn reports_failure() {
        let pol = QuadraturePolicy { half_width: 50.0, panels: 1, max_refinements: 1, ..Default::default() };
        let r = integrate_line(|x| Complex64::new(0.0, 200.0 * x).exp(), &pol);
        assert!(matches!(r, Err(CsmError::ToleranceNotReached { .. })));
    }

    #[test]
    fn deterministic() {
        let pol = QuadraturePolicy::default();
        let f = |x: f64| Complex64::new(0.3 * x, -x * x).exp() * (-x * x / 3.0).exp();
        let a = integrate_line(f, &pol).unwrap();
        let b = integrate_line(f, &pol).unwrap();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
    }

    #[test]
    fn samples() {
        let x: Vec<f64> = (0..=2000).map(|i| -10.0 + 0.01 * i as f64).collect();
        let v: Vec<Complex64> = x.iter().map(|&x| re((-x * x).exp())).collect();
        let q = integrate_samples(&x, &v).unwrap();
        assert!((q.value - PI.sqrt()).norm() < 1e-13);
        assert!(q.error < 1e-12);
    }

    #[test]
    fn envelope_width() {
        let l = QuadraturePolicy::envelope_half_width(0.5);
        assert!((-0.5 * l * l).exp() <= 1.0001e-18);
    }
}
