//! Ladder operators and coherent states for Hamiltonians with a purely
//! continuous spectrum `H|E⟩ = ωE|E⟩`, `E ∈ (0, ∞)`.
//!
//! Two families of annihilators are modelled as weighted affine shifts of the
//! energy label: a translation `|E⟩ ↦ C(E)|E - ε⟩` and a dilation
//! `|E⟩ ↦ C(E)|λE⟩`. Each family comes with its coherent states, their
//! normalization, the measure resolving the identity, the action variable and
//! a set of numerical checks for the Gazeau–Klauder requirements.
//!
//! Where a displayed closed form and its defining integral disagree, both are
//! kept and [`conventions`] picks one from residual evidence.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod conventions;
pub mod dilation;
mod error;
pub mod kernel;
pub mod ladder;
pub mod numerics;
pub mod translation;

pub use error::{Error, Result};
pub use num_complex::Complex64;

use serde::{Deserialize, Serialize};

/// Which coherent-state family an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Translation,
    Dilation,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Translation => "translation",
            Family::Dilation => "dilation",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "translation" => Ok(Family::Translation),
            "dilation" => Ok(Family::Dilation),
            other => Err(Error::Unsupported(format!(
                "unknown family '{other}' (expected translation or dilation)"
            ))),
        }
    }
}

/// `n` evenly spaced points on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` logarithmically spaced points on `[lo, hi]` (`lo, hi > 0`).
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}
