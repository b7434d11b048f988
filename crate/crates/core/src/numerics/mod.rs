//! Special functions and quadrature primitives.

mod quadrature;
mod special;

pub use quadrature::{
    integrate, integrate_complex, integrate_half_line, integrate_half_line_complex, integrate_real_line,
    integrate_real_line_complex, Integral, QuadratureSpec, Transform,
};
pub use special::{erf, erfc, erfcx, gauss_m0, gauss_m1, gauss_mean};
