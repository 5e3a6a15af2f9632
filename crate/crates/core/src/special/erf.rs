use crate::error::{CsmError, Result};
use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;

/// Largest `|Im z|` accepted by [`erf_complex`].
pub const ERF_IM_ENVELOPE: f64 = 30.0;

/// Error function of complex argument (Faddeeva-based evaluation).
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    if z.im.abs() > ERF_IM_ENVELOPE || z.im.is_nan() {
        return Err(CsmError::OutOfAccuracyEnvelope(format!("erf argument {z} has |Im z| > {ERF_IM_ENVELOPE}")));
    }
    if z.re.is_infinite() && z.im == 0.0 {
        return Ok(Complex64::new(z.re.signum(), 0.0));
    }
    Ok(z.erf())
}
