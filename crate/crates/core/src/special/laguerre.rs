use super::hermite::N_MAX;
use crate::error::{CsmError, Result};
use num_complex::Complex64;

/// Generalized Laguerre polynomial `L_n^k(z)` by forward recurrence in `n`.
pub fn assoc_laguerre(n: usize, k: i64, z: Complex64) -> Result<Complex64> {
    if n > N_MAX {
        return Err(CsmError::DegreeTooLarge { n, max: N_MAX });
    }
    if n as i64 + k < 0 {
        return Err(CsmError::InvalidInput(format!("n + k must be >= 0 (n={n}, k={k})")));
    }
    let a = k as f64;
    let mut l0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(l0);
    }
    let mut l1 = 1.0 + a - z;
    for j in 1..n {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + a - z) * l1 - (jf + a) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    Ok(l1)
}
