use crate::error::{CsmError, Result};
use num_complex::Complex64;

/// Largest polynomial degree accepted by the eigenfunction routines.
pub const N_MAX: usize = 200;

fn check_degree(n: usize) -> Result<()> {
    if n > N_MAX {
        Err(CsmError::DegreeTooLarge { n, max: N_MAX })
    } else {
        Ok(())
    }
}

/// Physicists' Hermite polynomial `Hₙ(z)` by the three-term recurrence.
///
/// Unscaled; large `n` and `|z|` overflow. Use [`hermite_function`] when the
/// Gaussian factor is wanted anyway.
pub fn hermite(n: usize, z: Complex64) -> Result<Complex64> {
    check_degree(n)?;
    let mut h0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(h0);
    }
    let mut h1 = 2.0 * z;
    for k in 1..n {
        let h2 = 2.0 * z * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    Ok(h1)
}

/// Normalized Hermite function `e^{-z²/2} Hₙ(z) / (π^{1/4} √(2ⁿ n!))`.
///
/// The recurrence runs on the normalized values, so nothing overflows for
/// `n ≤ N_MAX` wherever the result itself is representable.
pub fn hermite_function(n: usize, z: Complex64) -> Result<Complex64> {
    check_degree(n)?;
    Ok(*hermite_functions(n, z)?.last().unwrap())
}

/// All normalized Hermite functions of degree `0..=n` at `z`.
pub fn hermite_functions(n: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_degree(n)?;
    let mut out = Vec::with_capacity(n + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * z * z).exp();
    out.push(h0);
    if n == 0 {
        return Ok(out);
    }
    out.push(std::f64::consts::SQRT_2 * z * h0);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * z * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn low_orders() {
        assert_eq!(hermite(0, c(3.0, -2.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(hermite(2, c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(hermite(3, c(0.0, 1.0)).unwrap(), c(0.0, -20.0));
    }

    #[test]
    fn degree_guard() {
        assert_eq!(hermite(201, c(0.0, 0.0)), Err(CsmError::DegreeTooLarge { n: 201, max: 200 }));
        assert!(hermite_function(200, c(1.0, 0.5)).is_ok());
    }

    #[test]
    fn scaled_matches_direct() {
        let z = c(0.7, -0.3);
        for n in 0..15 {
            let direct = (-0.5 * z * z).exp() * hermite(n, z).unwrap()
                / (std::f64::consts::PI.sqrt() * 2f64.powi(n as i32) * (1..=n).map(|k| k as f64).product::<f64>()).sqrt();
            let scaled = hermite_function(n, z).unwrap();
            assert!((direct - scaled).norm() < 1e-13 * direct.norm().max(1e-300), "n={n}");
        }
    }

    #[test]
    fn high_degree_is_finite() {
        for x in [0.0, 5.0, 15.0, 19.9] {
            let v = hermite_function(200, c(x, 0.1)).unwrap();
            assert!(v.is_finite() && v.norm() < 1.0);
        }
    }

    proptest! {
        #[test]
        fn recurrence_residual(re in -3.0f64..3.0, im in -3.0f64..3.0, k in 1usize..50) {
            let z = c(re, im);
            let (a, b, cc) = (hermite(k + 1, z).unwrap(), hermite(k, z).unwrap(), hermite(k - 1, z).unwrap());
            let scale = a.norm().max((2.0 * z * b).norm()).max(2.0 * k as f64 * cc.norm()).max(1.0);
            prop_assert!((a - 2.0 * z * b + 2.0 * k as f64 * cc).norm() <= 1e-10 * scale);
        }

        #[test]
        fn parity(re in -4.0f64..4.0, im in -1.0f64..1.0, n in 0usize..30) {
            let z = c(re, im);
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((hermite_function(n, -z).unwrap() - s * hermite_function(n, z).unwrap()).norm() < 1e-12);
        }
    }
}
