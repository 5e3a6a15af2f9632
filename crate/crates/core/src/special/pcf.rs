//! Parabolic cylinder function `D_ν(z)`.
//!
//! Three evaluation paths, tried in order:
//! 1. the confluent-hypergeometric series, accepted when its cancellation
//!    loss is small;
//! 2. Taylor integration of Weber's equation outward from the origin along
//!    the ray to `z`, accepted when the solution does not shrink along the
//!    path (i.e. we are not chasing a recessive solution);
//! 3. for the recessive sector, the large-`z` asymptotic series at a far
//!    point on the same ray followed by inward integration.
//!
//! The result is then cross-checked with `D_{ν+1} = z D_ν − ν D_{ν−1}`.

use super::gamma::rgamma;
use crate::error::{CsmError, Result};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

const Z_ENVELOPE: f64 = 20.0;
const NU_ENVELOPE: f64 = 50.0;
const MAX_LOSS: f64 = 1e4;
const RECURRENCE_TOL: f64 = 1e-8;

enum Attempt {
    Ok(Complex64),
    Rejected,
    NoConvergence,
}

/// `D_ν(z)` for `|z| ≤ 20`, `|ν| ≤ 50`.
pub fn parabolic_cylinder_d(nu: Complex64, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= Z_ENVELOPE) || !(nu.norm() <= NU_ENVELOPE) {
        return Err(CsmError::OutOfAccuracyEnvelope(format!("D_nu(z) with nu={nu}, z={z}")));
    }
    let d0 = d_raw(nu, z)?;
    let dp = d_raw(nu + 1.0, z)?;
    let dm = d_raw(nu - 1.0, z)?;
    let scale = dp.norm().max((z * d0).norm()).max((nu * dm).norm());
    let resid = (dp - z * d0 + nu * dm).norm();
    if scale > 0.0 && resid > RECURRENCE_TOL * scale {
        return Err(CsmError::OutOfAccuracyEnvelope(format!(
            "recurrence check failed for nu={nu}, z={z}: residual {resid:e}"
        )));
    }
    Ok(d0)
}

fn d_raw(nu: Complex64, z: Complex64) -> Result<Complex64> {
    let series = series(nu, z);
    if let Attempt::Ok(v) = series {
        return Ok(v);
    }
    // In the recessive sector outward integration amplifies rounding by
    // e^{Re z²/2}; skip it there once that factor is large.
    let recessive = z.arg().abs() < PI / 4.0 && (z * z).re / 2.0 > MAX_LOSS.ln();
    if !recessive {
        if let Attempt::Ok(v) = outward(nu, z) {
            return Ok(v);
        }
    }
    if z.arg().abs() < PI / 2.0 {
        if let Attempt::Ok(v) = inward(nu, z) {
            return Ok(v);
        }
    }
    match series {
        Attempt::NoConvergence => Err(CsmError::SeriesNonConvergent(format!("D_nu(z) with nu={nu}, z={z}"))),
        _ => Err(CsmError::OutOfAccuracyEnvelope(format!("no stable evaluation path for nu={nu}, z={z}"))),
    }
}

/// Kummer `M(a, b, x)`; returns the sum and the sum of term moduli.
fn kummer(a: Complex64, b: Complex64, x: Complex64) -> Option<(Complex64, f64)> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    for k in 0..2000usize {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        sum += term;
        abs_sum += term.norm();
        if term.norm() <= 1e-17 * sum.norm() && kf > x.norm() || term == Complex64::new(0.0, 0.0) {
            return Some((sum, abs_sum));
        }
    }
    None
}

fn series(nu: Complex64, z: Complex64) -> Attempt {
    let x = z * z / 2.0;
    let (m1, a1) = match kummer(-nu / 2.0, Complex64::new(0.5, 0.0), x) {
        Some(v) => v,
        None => return Attempt::NoConvergence,
    };
    let (m2, a2) = match kummer((1.0 - nu) / 2.0, Complex64::new(1.5, 0.0), x) {
        Some(v) => v,
        None => return Attempt::NoConvergence,
    };
    let c1 = PI.sqrt() * rgamma((1.0 - nu) / 2.0);
    let c2 = -(2.0 * PI).sqrt() * z * rgamma(-nu / 2.0);
    let pre = (nu * LN_2 / 2.0 - z * z / 4.0).exp();
    let value = pre * (c1 * m1 + c2 * m2);
    let scale = pre.norm() * (c1.norm() * a1 + c2.norm() * a2);
    if (value.norm() > 0.0 && scale / value.norm() <= MAX_LOSS) || scale == 0.0 {
        Attempt::Ok(value)
    } else {
        Attempt::Rejected
    }
}

/// One Taylor step of `w'' = (z²/4 − ν − ½) w` from `z0` by `h`.
fn taylor_step(nu: Complex64, z0: Complex64, w: Complex64, dw: Complex64, h: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let q0 = z0 * z0 / 4.0 - nu - 0.5;
    let q1 = z0 / 2.0;
    let mut coef = Vec::with_capacity(64);
    coef.push(w);
    coef.push(dw);
    let (mut wn, mut dwn) = (w + dw * h, dw);
    let mut hpow = h;
    let floor = 1e-18 * (w.norm() + (dw * h).norm());
    for k in 0..120usize {
        let kf = k as f64;
        let p1 = if k >= 1 { coef[k - 1] } else { zero };
        let p2 = if k >= 2 { coef[k - 2] } else { zero };
        let next = (q0 * coef[k] + q1 * p1 + 0.25 * p2) / ((kf + 2.0) * (kf + 1.0));
        coef.push(next);
        let dterm = (kf + 2.0) * next * hpow;
        hpow *= h;
        let term = next * hpow;
        wn += term;
        dwn += dterm;
        if k >= 4 && term.norm() <= floor && dterm.norm() * h.norm() <= floor {
            break;
        }
    }
    (wn, dwn)
}

fn step_length(nu: Complex64, z0: Complex64) -> f64 {
    let q = (z0 * z0 / 4.0 - nu - 0.5).norm();
    (1.0 / (1.0 + q.sqrt())).min(0.5)
}

/// Integrate along the segment from `start` to `end`; returns the end value
/// and the ratio max|w| / |w(end)| observed along the path.
fn integrate(nu: Complex64, start: Complex64, end: Complex64, w0: Complex64, dw0: Complex64) -> (Complex64, f64) {
    let total = (end - start).norm();
    if total == 0.0 {
        return (w0, 1.0);
    }
    let dir = (end - start) / total;
    let (mut w, mut dw) = (w0, dw0);
    let mut s = 0.0;
    let mut peak = w.norm();
    while s < total {
        let z0 = start + dir * s;
        let len = step_length(nu, z0).min(total - s);
        let (wn, dwn) = taylor_step(nu, z0, w, dw, dir * len);
        w = wn;
        dw = dwn;
        s += len;
        peak = peak.max(w.norm());
        if !w.is_finite() {
            return (w, f64::INFINITY);
        }
    }
    let cond = if w.norm() > 0.0 { peak / w.norm() } else { f64::INFINITY };
    (w, cond)
}

fn outward(nu: Complex64, z: Complex64) -> Attempt {
    let pow = (nu * LN_2 / 2.0).exp();
    let w0 = pow * PI.sqrt() * rgamma((1.0 - nu) / 2.0);
    let dw0 = -pow * (2.0 * PI).sqrt() * rgamma(-nu / 2.0);
    let (w, cond) = integrate(nu, Complex64::new(0.0, 0.0), z, w0, dw0);
    if cond <= MAX_LOSS {
        Attempt::Ok(w)
    } else {
        Attempt::Rejected
    }
}

/// Large-argument expansion `z^ν e^{−z²/4} Σ (−1)^s (−ν)_{2s} / (s! (2z²)^s)`.
fn asymptotic(nu: Complex64, z: Complex64) -> Option<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let two_z2 = 2.0 * z * z;
    for s in 0..200usize {
        let sf = s as f64;
        let next = -term * (-nu + 2.0 * sf) * (-nu + 2.0 * sf + 1.0) / ((sf + 1.0) * two_z2);
        if next.norm() > term.norm() && s > 0 {
            break;
        }
        sum += next;
        term = next;
        if term.norm() <= 1e-16 * sum.norm() {
            return Some((nu * z.ln() - z * z / 4.0).exp() * sum);
        }
    }
    None
}

fn inward(nu: Complex64, z: Complex64) -> Attempt {
    let r = z.norm().max(3.0 * nu.norm().sqrt() + 12.0);
    let far = Complex64::from_polar(r, z.arg());
    let (d0, d1) = match (asymptotic(nu, far), asymptotic(nu + 1.0, far)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Attempt::Rejected,
    };
    let dd = far / 2.0 * d0 - d1;
    let (w, cond) = integrate(nu, far, z, d0, dd);
    if cond <= MAX_LOSS && w.is_finite() {
        Attempt::Ok(w)
    } else {
        Attempt::Rejected
    }
}
