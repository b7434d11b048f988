//! Weighted affine shifts of the energy label and their commutators.
//!
//! A [`LadderOp`] acts on the basis as `a|E⟩ = w(E)|m(E)⟩` with
//! `m(E) = uE + v`, `u > 0`. On kernels this gives
//!
//! ```text
//! (a ψ)(E)  = (1/u) w(m⁻¹E) ψ(m⁻¹E)      zero unless m⁻¹E > 0
//! (a† ψ)(E) = w*(E) ψ(m(E))              zero unless m(E) > 0
//! ```
//!
//! and every q-commutator `a a† − q a† a` is diagonal with multiplier
//! `(1/u)[|w(m⁻¹E)|² − q|w(E)|²]`. The 1/u is the Jacobian of the
//! relabelling `⟨uE|uE′⟩ = δ(E − E′)/u`; working at the kernel level keeps it
//! explicit instead of leaving it to a discretization.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::kernel::EnergyKernel;
use crate::numerics::Transform;

pub type Weight = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Which closed-form family an operator was built from, if any. Needed to
/// evaluate the displayed commutator formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OpKind {
    Translation { alpha: f64, epsilon: f64 },
    Dilation { beta: f64, lambda: f64 },
    General,
}

#[derive(Clone)]
pub struct LadderOp {
    scale: f64,
    shift: f64,
    cutoff: f64,
    weight: Weight,
    kind: OpKind,
}

impl fmt::Debug for LadderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LadderOp")
            .field("scale", &self.scale)
            .field("shift", &self.shift)
            .field("cutoff", &self.cutoff)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl LadderOp {
    /// `m(E) = scale·E + shift`, weight forced to zero below `cutoff`.
    pub fn new<W>(scale: f64, shift: f64, cutoff: f64, weight: W) -> Result<Self>
    where
        W: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        require_positive("scale", scale)?;
        if !shift.is_finite() || !cutoff.is_finite() {
            return Err(Error::InvalidParameter {
                name: "shift/cutoff",
                value: if shift.is_finite() { cutoff } else { shift },
                constraint: "finite",
            });
        }
        Ok(Self {
            scale,
            shift,
            cutoff,
            weight: Arc::new(weight),
            kind: OpKind::General,
        })
    }

    pub(crate) fn with_kind(mut self, kind: OpKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    /// `w(E)`, zero for `E ≤ 0` and below the cutoff.
    pub fn weight(&self, e: f64) -> Complex64 {
        if e > 0.0 && e >= self.cutoff {
            (self.weight)(e)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `m(E) = uE + v`.
    pub fn map(&self, e: f64) -> f64 {
        self.scale * e + self.shift
    }

    /// `m⁻¹(E) = (E − v)/u`.
    pub fn inverse_map(&self, e: f64) -> f64 {
        (e - self.shift) / self.scale
    }

    fn map_hint(&self, hint: Transform, forward: bool) -> Transform {
        let f = |x: f64| if forward { self.map(x) } else { self.inverse_map(x) };
        let k = if forward { self.scale } else { 1.0 / self.scale };
        match hint {
            Transform::None => Transform::None,
            Transform::GaussianCentering { center, width } => Transform::GaussianCentering {
                center: f(center).max(0.0),
                width: width * k,
            },
            Transform::LogSubstitution { center, width } => {
                let moved = f(center.exp());
                if moved > 0.0 {
                    Transform::LogSubstitution {
                        center: moved.ln(),
                        width,
                    }
                } else {
                    Transform::LogSubstitution { center, width }
                }
            }
        }
    }
}

/// `(aψ)(E) = (1/u) w(m⁻¹E) ψ(m⁻¹E)`.
pub fn apply(op: &LadderOp, psi: &EnergyKernel) -> EnergyKernel {
    let a = op.clone();
    let amp = psi.amplitude();
    let (lo, hi) = psi.support();
    let lo = a.map(lo.max(a.cutoff)).max(0.0);
    let hi = a.map(hi).max(lo);
    EnergyKernel::from_parts(
        format!("a[{}]", psi.label()),
        (lo, hi),
        op.map_hint(psi.hint(), true),
        Arc::new(move |e| {
            let x = a.inverse_map(e);
            if x > 0.0 {
                a.weight(x) * amp(x) / a.scale
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    )
}

/// `(a†ψ)(E) = w*(E) ψ(m(E))`.
pub fn adjoint_apply(op: &LadderOp, psi: &EnergyKernel) -> EnergyKernel {
    let a = op.clone();
    let amp = psi.amplitude();
    let (lo, hi) = psi.support();
    let lo = a.inverse_map(lo).max(a.cutoff).max(0.0);
    let hi = a.inverse_map(hi).max(lo);
    EnergyKernel::from_parts(
        format!("a†[{}]", psi.label()),
        (lo, hi),
        op.map_hint(psi.hint(), false),
        Arc::new(move |e| {
            let y = a.map(e);
            if y > 0.0 {
                a.weight(e).conj() * amp(y)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    )
}

/// Where a diagonal multiplier came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// The displayed closed-form integrand.
    PaperFormula,
    /// Composition of [`apply`] and [`adjoint_apply`].
    KernelCalculus,
}

/// An operator diagonal in the energy basis, `ψ(E) ↦ d(E)ψ(E)`.
#[derive(Clone)]
pub struct DiagonalMultiplier {
    d: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    provenance: Provenance,
}

impl fmt::Debug for DiagonalMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagonalMultiplier")
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl DiagonalMultiplier {
    pub fn new<D>(provenance: Provenance, d: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            d: Arc::new(d),
            provenance,
        }
    }

    pub fn eval(&self, e: f64) -> f64 {
        (self.d)(e)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn apply(&self, psi: &EnergyKernel) -> EnergyKernel {
        let d = Arc::clone(&self.d);
        let amp = psi.amplitude();
        EnergyKernel::from_parts(
            format!("d[{}]", psi.label()),
            psi.support(),
            psi.hint(),
            Arc::new(move |e| amp(e) * d(e)),
        )
    }
}

/// `a a† − q a† a` as a diagonal multiplier, derived by composition:
/// `d(E) = (1/u)[|w(m⁻¹E)|²·[m⁻¹E > 0] − q|w(E)|²·[m(E) > 0]]`.
pub fn q_commutator_multiplier(op: &LadderOp, q: f64) -> Result<DiagonalMultiplier> {
    require_positive("q", q)?;
    let a = op.clone();
    Ok(DiagonalMultiplier::new(Provenance::KernelCalculus, move |e| {
        let x = a.inverse_map(e);
        let raise = if x > 0.0 { a.weight(x).norm_sqr() } else { 0.0 };
        let lower = if a.map(e) > 0.0 { a.weight(e).norm_sqr() } else { 0.0 };
        (raise - q * lower) / a.scale
    }))
}

/// The displayed commutator integrand for an operator built from one of the
/// two families:
///
/// * translation: `e^{2αEε − αε²}(e^{2αε²} − 1)` (ordinary commutator),
/// * dilation: `e^{2β lnE lnλ − β(lnλ)²}(1 − e^{2β(lnλ)²})/λ`.
///
/// The dilation display does not depend on which sign convention the weight
/// was built with; see [`crate::dilation::commutator_closed_form`] for the
/// convention-specific forms.
pub fn paper_multiplier(op: &LadderOp) -> Result<DiagonalMultiplier> {
    match op.kind {
        OpKind::Translation { alpha, epsilon } => Ok(DiagonalMultiplier::new(Provenance::PaperFormula, move |e| {
            (2.0 * alpha * e * epsilon - alpha * epsilon * epsilon).exp() * (2.0 * alpha * epsilon * epsilon).exp_m1()
        })),
        OpKind::Dilation { beta, lambda } => {
            let l = lambda.ln();
            Ok(DiagonalMultiplier::new(Provenance::PaperFormula, move |e| {
                if e <= 0.0 {
                    return f64::NAN;
                }
                let x = e.ln();
                -(2.0 * beta * x * l - beta * l * l).exp() * (2.0 * beta * l * l).exp_m1() / lambda
            }))
        }
        OpKind::General => Err(Error::Unsupported(
            "no displayed commutator formula for a general ladder operator".into(),
        )),
    }
}

/// The factor that turns the commutator into the identity in the limit of
/// vanishing deformation: `2αε²` (translation) or `−2β(lnλ)²/λ` (dilation).
pub fn limit_normalization(op: &LadderOp) -> Result<f64> {
    match op.kind {
        OpKind::Translation { alpha, epsilon } => Ok(2.0 * alpha * epsilon * epsilon),
        OpKind::Dilation { beta, lambda } => {
            let l = lambda.ln();
            Ok(-2.0 * beta * l * l / lambda)
        }
        OpKind::General => Err(Error::Unsupported(
            "limit normalization is only defined for the two families".into(),
        )),
    }
}

/// `d(E)/(2αε²)` or `λ d(E)/(−2β(lnλ)²)` for the displayed multiplier;
/// tends to one pointwise as the deformation parameter goes to zero.
pub fn commutator_limit_ratio(op: &LadderOp) -> Result<impl Fn(f64) -> f64 + Send + Sync> {
    limit_ratio_of(op, &paper_multiplier(op)?)
}

/// Same normalization applied to an arbitrary multiplier of `op`.
pub fn limit_ratio_of(op: &LadderOp, m: &DiagonalMultiplier) -> Result<impl Fn(f64) -> f64 + Send + Sync> {
    let norm = limit_normalization(op)?;
    let m = m.clone();
    Ok(move |e| m.eval(e) / norm)
}

/// One row of the multiplier export table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierRow {
    #[serde(rename = "E")]
    pub energy: f64,
    pub d_paper: f64,
    #[serde(rename = "d_kernel")]
    pub d_kernel_calculus: f64,
    pub ratio: f64,
}

/// Rows `(E, d_paper, d_kernel_calculus, ratio)` where `ratio` is the limit
/// ratio of the displayed formula and the kernel-calculus column uses `q`.
pub fn multiplier_table(op: &LadderOp, q: f64, grid: &[f64]) -> Result<Vec<MultiplierRow>> {
    let paper = paper_multiplier(op)?;
    let kernel = q_commutator_multiplier(op, q)?;
    let norm = limit_normalization(op)?;
    Ok(grid
        .iter()
        .map(|&e| {
            let d_paper = paper.eval(e);
            MultiplierRow {
                energy: e,
                d_paper,
                d_kernel_calculus: kernel.eval(e),
                ratio: d_paper / norm,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{inner, relative_sup_distance};
    use crate::numerics::QuadratureSpec;
    use approx::assert_relative_eq;

    fn one(_: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn unit_translation_is_a_pure_shift() {
        let eps = 0.5;
        let op = LadderOp::new(1.0, -eps, eps, one).unwrap();
        let psi = EnergyKernel::gaussian(2.0, 0.8, 0.3).unwrap();
        let out = apply(&op, &psi);
        for e in [0.1, 0.7, 1.5, 3.0] {
            let expected = psi.eval(e + eps);
            assert!((out.eval(e) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_dilation_is_identity_and_self_adjoint() {
        let op = LadderOp::new(1.0, 0.0, 0.0, one).unwrap();
        let psi = EnergyKernel::gaussian(1.0, 0.5, -0.4).unwrap();
        let grid = crate::linspace(0.01, 8.0, 300);
        assert_eq!(relative_sup_distance(&apply(&op, &psi), &psi, &grid), 0.0);
        assert_eq!(relative_sup_distance(&adjoint_apply(&op, &psi), &psi, &grid), 0.0);
    }

    #[test]
    fn adjoint_of_translation_is_shifted_conjugate_weight() {
        let eps = 0.3;
        let w = |e: f64| Complex64::new(e.sqrt(), 0.2 * e);
        let op = LadderOp::new(1.0, -eps, eps, w).unwrap();
        let psi = EnergyKernel::gaussian(1.5, 0.6, 0.0).unwrap();
        let out = adjoint_apply(&op, &psi);
        for e in [0.1, 0.29, 0.31, 1.0, 2.5] {
            let expected = if e >= eps {
                w(e).conj() * psi.eval(e - eps)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((out.eval(e) - expected).norm() < 1e-15, "E={e}");
        }
    }

    #[test]
    fn adjoint_contract_on_gaussian_kernels() {
        let spec = QuadratureSpec::default();
        let w = |e: f64| Complex64::from_polar((0.3 * e).exp(), 0.1 * e);
        for op in [
            LadderOp::new(1.0, -0.4, 0.4, w).unwrap(),
            LadderOp::new(0.6, 0.0, 0.0, w).unwrap(),
        ] {
            let phi = EnergyKernel::gaussian(1.2, 0.7, 0.5).unwrap();
            let psi = EnergyKernel::gaussian(2.0, 0.9, -0.3).unwrap();
            let lhs = inner(&phi, &apply(&op, &psi), &spec).unwrap();
            let rhs = inner(&adjoint_apply(&op, &phi), &psi, &spec).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn commutator_multiplier_matches_composition() {
        let w = |e: f64| Complex64::new((0.5 * e).exp(), 0.0);
        let psi = EnergyKernel::gaussian(2.0, 1.0, 0.2).unwrap();
        for (op, q) in [
            (LadderOp::new(1.0, -0.5, 0.5, w).unwrap(), 1.0),
            (LadderOp::new(0.5, 0.0, 0.0, w).unwrap(), 2.0),
            (LadderOp::new(0.8, 0.0, 0.0, w).unwrap(), 1.0),
        ] {
            let d = q_commutator_multiplier(&op, q).unwrap();
            let aad = apply(&op, &adjoint_apply(&op, &psi));
            let ada = adjoint_apply(&op, &apply(&op, &psi));
            for e in [0.2, 0.9, 1.7, 3.3] {
                let composed = aad.eval(e) - ada.eval(e) * q;
                let direct = psi.eval(e) * d.eval(e);
                assert!((composed - direct).norm() <= 1e-13 * direct.norm().max(1.0), "E={e}");
            }
        }
    }

    #[test]
    fn constant_weight_shift_on_whole_line_commutes() {
        // w ≡ c everywhere and no boundary effects: aa† = a†a away from the edge
        let op = LadderOp::new(1.0, -0.5, 0.0, |_| Complex64::new(3.0, 0.0)).unwrap();
        let d = q_commutator_multiplier(&op, 1.0).unwrap();
        for e in [0.6, 1.0, 5.0] {
            assert_eq!(d.eval(e), 0.0);
        }
    }

    #[test]
    fn identity_dilation_commutator_is_one_minus_q() {
        let w = |e: f64| Complex64::new(1.0 + e, 0.5);
        let op = LadderOp::new(1.0, 0.0, 0.0, w).unwrap();
        for q in [0.5, 1.0, 2.0] {
            let d = q_commutator_multiplier(&op, q).unwrap();
            for e in [0.3, 1.0, 4.0] {
                assert_relative_eq!(
                    d.eval(e),
                    (1.0 - q) * w(e).norm_sqr(),
                    max_relative = 1e-14,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn rejects_invalid_operators() {
        assert!(LadderOp::new(0.0, 0.0, 0.0, one).is_err());
        assert!(LadderOp::new(-1.0, 0.0, 0.0, one).is_err());
        let op = LadderOp::new(1.0, 0.0, 0.0, one).unwrap();
        assert!(q_commutator_multiplier(&op, 0.0).is_err());
        assert!(paper_multiplier(&op).is_err());
    }
}
