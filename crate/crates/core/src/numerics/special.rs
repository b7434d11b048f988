//! Error functions and the closed-form Gaussian moments on the half-line.
//!
//! `erf`/`erfc` delegate to the musl implementations in `libm`. The scaled
//! complement `erfcx(x) = e^{x²} erfc(x)` is what the closed forms actually
//! need: every normalization and mean-energy formula of the translation family
//! contains `e^{-b²/4a} / erfc(-b/2√a)`, which underflows long before the
//! ratio does.

use std::f64::consts::PI;

use crate::error::{require_positive, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// `erf(x) = 2/√π ∫₀ˣ e^{-t²} dt`.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `erfc(x) = 1 - erf(x)`, computed directly so that large positive
/// arguments do not cancel.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
///
/// Finite for all `x` above about -26.6; overflows to `+inf` below.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        // erfc(x) = 2 - erfc(-x)
        let ex2 = (x * x).exp();
        return 2.0 * ex2 - erfcx(-x);
    }
    if x < 4.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    if x > 1e8 {
        return FRAC_1_SQRT_PI / x;
    }
    FRAC_1_SQRT_PI * erfc_continued_fraction(x)
}

/// Laplace continued fraction `1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`,
/// evaluated with the modified Lentz algorithm.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// `M₀(a, b) = ∫₀^∞ e^{-aE² + bE} dE = ½√(π/a) e^{b²/4a} erfc(-b/2√a)`.
pub fn gauss_m0(a: f64, b: f64) -> Result<f64> {
    require_positive("a", a)?;
    Ok(0.5 * (PI / a).sqrt() * scaled_tail(a, b))
}

/// `M₁(a, b) = ∫₀^∞ E e^{-aE² + bE} dE = 1/(2a) + (b/2a) M₀(a, b)`.
pub fn gauss_m1(a: f64, b: f64) -> Result<f64> {
    let m0 = gauss_m0(a, b)?;
    Ok(1.0 / (2.0 * a) + b / (2.0 * a) * m0)
}

/// First moment ratio `M₁(a,b)/M₀(a,b)` evaluated without forming either
/// moment: `b/2a + 1/(√(aπ) erfcx(-b/2√a))`.
pub fn gauss_mean(a: f64, b: f64) -> Result<f64> {
    require_positive("a", a)?;
    let x = -b / (2.0 * a.sqrt());
    Ok(b / (2.0 * a) + 1.0 / ((a * PI).sqrt() * erfcx(x)))
}

/// `e^{b²/4a} erfc(-b/2√a)`, overflow-safe for b ≪ 0.
fn scaled_tail(a: f64, b: f64) -> f64 {
    let x = -b / (2.0 * a.sqrt());
    if x >= 0.0 {
        erfcx(x)
    } else {
        (x * x).exp() * erfc(x)
    }
}
