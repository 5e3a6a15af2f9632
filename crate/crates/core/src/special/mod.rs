//! Special functions of complex argument and the line-quadrature engine.

mod erf;
mod gamma;
mod hermite;
mod laguerre;
mod pcf;
pub mod quadrature;

pub use erf::{erf_complex, ERF_IM_ENVELOPE};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use hermite::{hermite, hermite_function, hermite_functions, N_MAX};
pub use laguerre::assoc_laguerre;
pub use pcf::parabolic_cylinder_d;
pub use quadrature::{integrate_interval, integrate_line, integrate_samples, Quadrature, QuadraturePolicy, QuadratureRule};
