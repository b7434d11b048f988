//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array` of fixed-width records so the
//! page can plot without any JSON round trip. The plain `*_rows` functions
//! hold the logic and are what the native tests exercise.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use contspec::dilation::{self, DilationParams, WeightConvention};
use contspec::translation::{self, DerivativeForm, TranslationParams};
use contspec::{ladder, Family};
use wasm_bindgen::prelude::*;

fn family(name: &str) -> Result<Family, String> {
    name.parse().map_err(|e: contspec::Error| e.to_string())
}

/// Records of `[E, re, im, |psi|^2]` for the normalized coherent state.
pub fn kernel_rows(
    fam: &str,
    shape: f64,
    step: f64,
    s: f64,
    gamma: f64,
    e_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let err = |e: contspec::Error| e.to_string();
    if !(e_max > 0.0) || n < 2 {
        return Err("need e_max > 0 and at least two points".into());
    }
    let kernel = match family(fam)? {
        Family::Translation => TranslationParams::new(shape, s, gamma, step, 1.0)
            .and_then(|p| p.state())
            .map_err(err)?
            .kernel(),
        Family::Dilation => DilationParams::new(shape, s, gamma, step, 1.0)
            .and_then(|p| p.state())
            .map_err(err)?
            .kernel(),
    };
    Ok(contspec::linspace(0.0, e_max, n)
        .into_iter()
        .flat_map(|e| {
            let z = kernel.eval(e);
            [e, z.re, z.im, z.norm_sqr()]
        })
        .collect())
}

/// Records of `[E, d_paper, d_kernel, ratio]`: the displayed commutator, the
/// one composed from the ladder operators, and the displayed one divided by
/// its small-step normalization (which tends to 1).
pub fn commutator_rows(fam: &str, shape: f64, step: f64, e_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let err = |e: contspec::Error| e.to_string();
    if !(e_max > 0.0) || n < 2 {
        return Err("need e_max > 0 and at least two points".into());
    }
    let (op, lo) = match family(fam)? {
        Family::Translation => (
            TranslationParams::new(shape, 1.0, 0.0, step, 1.0)
                .and_then(|p| p.annihilator())
                .map_err(err)?,
            0.0,
        ),
        Family::Dilation => (
            DilationParams::new(shape, 1.0, 0.0, step, 1.0)
                .and_then(|p| p.annihilator(WeightConvention::KernelConsistent))
                .map_err(err)?,
            e_max / n as f64,
        ),
    };
    let rows = ladder::multiplier_table(&op, 1.0, &contspec::linspace(lo, e_max, n)).map_err(err)?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.energy, r.d_paper, r.d_kernel_calculus, r.ratio])
        .collect())
}

/// Records of `[s, J(s), dJ/ds]` on a log grid of `s` in `[s_min, s_max]`.
pub fn action_rows(fam: &str, shape: f64, s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let err = |e: contspec::Error| e.to_string();
    if !(s_min > 0.0 && s_max > s_min) || n < 2 {
        return Err("need 0 < s_min < s_max and at least two points".into());
    }
    let fam = family(fam)?;
    let mut out = Vec::with_capacity(3 * n);
    for s in contspec::logspace(s_min, s_max, n) {
        let (j, dj) = match fam {
            Family::Translation => (
                translation::action(s, shape).map_err(err)?,
                translation::mean_energy_derivative(s, shape, 1.0, DerivativeForm::Exact).map_err(err)?,
            ),
            Family::Dilation => (
                dilation::action(s, shape).map_err(err)?,
                dilation::action_derivative(s, shape).map_err(err)?,
            ),
        };
        out.extend([s, j, dj]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn kernel_samples(
    family: &str,
    shape: f64,
    step: f64,
    s: f64,
    gamma: f64,
    e_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    kernel_rows(family, shape, step, s, gamma, e_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn commutator_curve(family: &str, shape: f64, step: f64, e_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    commutator_rows(family, shape, step, e_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn action_curve(family: &str, shape: f64, s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    action_rows(family, shape, s_min, s_max, n).map_err(|e| JsError::new(&e))
}
