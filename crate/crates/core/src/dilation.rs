//! Coherent states of the dilation-type annihilator `a^λ|E⟩ = C(E,λ)|λE⟩`,
//! `0 < λ < 1`.
//!
//! The states solve `a^λ|s,γ⟩ = (1/λ) s^{ln(1/λ)} |s, γ/λ⟩` and have the
//! log-normal kernel `N(s) s^{ln E} e^{-β(ln E)²/2} e^{-iγE}`, independent of
//! λ. After `x = ln E` every integral is Gaussian, so all quadratures here run
//! under the log substitution.
//!
//! Two displayed formulas carry a sign that is inconsistent with the rest of
//! the construction: the weight `C(E,λ)` and the measure `ρ(s)`. Both signs
//! are constructible ([`WeightConvention`], [`MeasureConvention`]) and
//! [`crate::conventions`] decides between them by residuals.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, require_positive, Error, Result};
use crate::kernel::{EnergyKernel, HamiltonianSpec};
use crate::ladder::{LadderOp, OpKind};
use crate::numerics::{integrate_half_line, QuadratureSpec, Transform};
use crate::translation::ProductLimit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationParams {
    pub beta: f64,
    pub s: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub omega: f64,
}

/// Sign of the exponent in `C(E, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightConvention {
    /// `e^{β(lnE lnλ − (lnλ)²/2)}` as displayed.
    Paper,
    /// `e^{-β(lnE lnλ + (lnλ)²/2)}`, the weight for which the kernel solves
    /// the λ-class relation exactly and `C(0⁺, λ) = 0`.
    KernelConsistent,
}

/// Sign of the exponent in the displayed measure `ρ(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureConvention {
    /// `(1/sβ) e^{-(4 ln s + 1)/(4β)}` as displayed.
    Paper,
    /// `h̃(ln s)/(s N²) = (1/sβ) e^{+(4 ln s + 1)/(4β)}`.
    MomentSolution,
}

impl DilationParams {
    pub fn new(beta: f64, s: f64, gamma: f64, lambda: f64, omega: f64) -> Result<Self> {
        let p = Self {
            beta,
            s,
            gamma,
            lambda,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("beta", self.beta)?;
        require(self.s >= 0.0 && self.s.is_finite(), "s", self.s, "s >= 0")?;
        require(self.gamma.is_finite(), "gamma", self.gamma, "finite")?;
        require(
            self.lambda > 0.0 && self.lambda < 1.0,
            "lambda",
            self.lambda,
            "0 < lambda < 1",
        )?;
        require_positive("omega", self.omega)
    }

    pub fn with_s(self, s: f64) -> Self {
        Self { s, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    /// `a^λ` with weight `C(·, λ)` in the given convention.
    pub fn annihilator(&self, convention: WeightConvention) -> Result<LadderOp> {
        self.validate()?;
        let (beta, lambda) = (self.beta, self.lambda);
        Ok(LadderOp::new(lambda, 0.0, 0.0, move |e| {
            Complex64::new(coefficient(e, beta, lambda, convention).unwrap_or(0.0), 0.0)
        })?
        .with_kind(OpKind::Dilation { beta, lambda }))
    }

    pub fn state(&self) -> Result<CoherentState> {
        self.validate()?;
        let n = normalization(self.s, self.beta)?;
        Ok(CoherentState { params: *self, norm: n })
    }
}

/// `C(E, λ)` in the chosen convention; rejects `E ≤ 0`.
pub fn coefficient(e: f64, beta: f64, lambda: f64, convention: WeightConvention) -> Result<f64> {
    require_positive("E", e)?;
    Ok(log_coefficient(e.ln(), beta, lambda.ln(), convention).exp())
}

/// `ln C̃(x, λ)` with `x = ln E`, `l = ln λ`.
fn log_coefficient(x: f64, beta: f64, l: f64, convention: WeightConvention) -> f64 {
    match convention {
        WeightConvention::Paper => beta * (x * l - 0.5 * l * l),
        WeightConvention::KernelConsistent => -beta * (x * l + 0.5 * l * l),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState {
    params: DilationParams,
    norm: f64,
}

impl CoherentState {
    pub fn params(&self) -> DilationParams {
        self.params
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// Real part `K⁰(E) = N s^{ln E} e^{-β(ln E)²/2}` of the kernel.
    pub fn modulus(&self, e: f64) -> f64 {
        if e <= 0.0 {
            return 0.0;
        }
        let x = e.ln();
        let p = self.params;
        self.norm * (x * p.s.ln() - 0.5 * p.beta * x * x).exp()
    }

    pub fn eval(&self, e: f64) -> Complex64 {
        Complex64::from_polar(self.modulus(e), -self.params.gamma * e)
    }

    /// Peak and width of `K⁰` as a Gaussian in `ln E`.
    pub fn log_peak(&self) -> (f64, f64) {
        let p = self.params;
        (p.s.ln() / p.beta, 1.0 / p.beta.sqrt())
    }

    pub fn kernel(&self) -> EnergyKernel {
        let (c, w) = self.log_peak();
        let state = *self;
        EnergyKernel::from_parts(
            format!(
                "dilation(beta={}, s={}, gamma={})",
                self.params.beta, self.params.s, self.params.gamma
            ),
            ((c - 14.0 * w).exp(), (c + 14.0 * w).exp()),
            Transform::LogSubstitution { center: c, width: w },
            Arc::new(move |e| state.eval(e)),
        )
    }
}

/// `N(s) = [√(β/π) e^{-(2 ln s + 1)²/(4β)}]^{1/2}`.
pub fn normalization(s: f64, beta: f64) -> Result<f64> {
    require_positive("beta", beta)?;
    require(s >= 0.0 && s.is_finite(), "s", s, "s >= 0")?;
    if s == 0.0 {
        return Err(Error::OutOfDomain("s = 0 (degenerate state)".into()));
    }
    let q = 2.0 * s.ln() + 1.0;
    Ok(((beta / PI).sqrt() * (-q * q / (4.0 * beta)).exp()).sqrt())
}

/// `N(s)²` from `[∫₀^∞ s^{2 ln E} e^{-β(ln E)²} dE]^{-1}` by quadrature.
pub fn normalization_squared_quadrature(s: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    require_positive("s", s)?;
    require_positive("beta", beta)?;
    let l = s.ln();
    let spec = spec.with_transform(Transform::LogSubstitution {
        center: (2.0 * l + 1.0) / (2.0 * beta),
        width: (0.5 / beta).sqrt(),
    });
    let r = integrate_half_line(
        |e| {
            let x = e.ln();
            (2.0 * l * x - beta * x * x).exp()
        },
        &spec,
    )?;
    Ok(1.0 / r.value)
}

/// `h̃(u) = e^{-u²/β}/√(βπ)`.
pub fn moment_density(u: f64, beta: f64) -> f64 {
    (-u * u / beta).exp() / (beta * PI).sqrt()
}

/// Radial measure `ρ(s)` in the chosen convention.
pub fn measure_rho(s: f64, beta: f64, convention: MeasureConvention) -> Result<f64> {
    require_positive("s", s)?;
    require_positive("beta", beta)?;
    Ok(log_measure_rho(s.ln(), beta, convention).exp())
}

fn log_measure_rho(l: f64, beta: f64, convention: MeasureConvention) -> f64 {
    let q = (4.0 * l + 1.0) / (4.0 * beta);
    let sign = match convention {
        MeasureConvention::MomentSolution => 1.0,
        MeasureConvention::Paper => -1.0,
    };
    sign * q - l - beta.ln()
}

/// Relative residual of the moment identity
/// `∫₀^∞ ρ(s) N(s)² s^{2 ln E} ds = e^{β(ln E)²}` at `ln E = log_e`,
/// integrating the measure as given (no `h̃` shortcut).
pub fn moment_residual(log_e: f64, beta: f64, convention: MeasureConvention, spec: &QuadratureSpec) -> Result<f64> {
    require(log_e.is_finite(), "lnE", log_e, "finite")?;
    require_positive("beta", beta)?;
    let target = (beta * log_e * log_e).exp();
    let spec = spec.with_transform(Transform::LogSubstitution {
        center: beta * log_e,
        width: (0.5 * beta).sqrt(),
    });
    let r = integrate_half_line(
        |s| {
            // ln ρ + 2 ln N + 2 lnE ln s, combined before exponentiating
            let l = s.ln();
            let log_rho = log_measure_rho(l, beta, convention);
            let log_n2 = 0.5 * (beta / PI).ln() - (2.0 * l + 1.0).powi(2) / (4.0 * beta);
            (log_rho + log_n2 + 2.0 * log_e * l).exp()
        },
        &spec,
    )?;
    Ok((r.value - target).abs() / target)
}

/// `J(s) = e^{(ln s + 3/4)/β}`.
pub fn action(s: f64, beta: f64) -> Result<f64> {
    require_positive("s", s)?;
    require_positive("beta", beta)?;
    Ok(((s.ln() + 0.75) / beta).exp())
}

/// `dJ/ds = J(s)/(βs)`, positive for every `s > 0`.
pub fn action_derivative(s: f64, beta: f64) -> Result<f64> {
    Ok(action(s, beta)? / (beta * s))
}

/// `N² ∫₀^∞ E s^{2 ln E} e^{-β(ln E)²} dE` by quadrature.
pub fn action_quadrature(s: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let n = normalization(s, beta)?;
    let l = s.ln();
    let spec = spec.with_transform(Transform::LogSubstitution {
        center: (2.0 * l + 2.0) / (2.0 * beta),
        width: (0.5 / beta).sqrt(),
    });
    let r = integrate_half_line(
        |e| {
            let x = e.ln();
            e * (2.0 * l * x - beta * x * x).exp()
        },
        &spec,
    )?;
    Ok(n * n * r.value)
}

/// `s(J) = e^{β ln J − 3/4}`.
pub fn invert_action(j: f64, beta: f64) -> Result<f64> {
    require_positive("beta", beta)?;
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::OutOfRange { value: j, lower: 0.0 });
    }
    Ok((beta * j.ln() - 0.75).exp())
}

/// The J-labelled kernel written out directly:
/// `N(s(J)) (e^{β ln J − 3/4})^{ln E} e^{-β(ln E)²/2} e^{-iγE}`.
pub fn action_labelled_kernel(e: f64, j: f64, gamma: f64, beta: f64) -> Result<Complex64> {
    require_positive("E", e)?;
    let base = (beta * j.ln() - 0.75).exp();
    let n = normalization(invert_action(j, beta)?, beta)?;
    let x = e.ln();
    Ok(Complex64::from_polar(
        n * base.powf(x) * (-0.5 * beta * x * x).exp(),
        -gamma * e,
    ))
}

/// Sup-norm residual of `C(E/λ)K⁰(E/λ) = s^{ln(1/λ)}K⁰(E)` over `grid`,
/// relative to the sup of the right-hand side.
pub fn iteration_residual(p: &DilationParams, convention: WeightConvention, grid: &[f64]) -> Result<f64> {
    let st = p.state()?;
    let factor = p.s.powf(-p.lambda.ln());
    let mut scale = 0.0f64;
    let mut diff = 0.0f64;
    for &e in grid {
        let up = e / p.lambda;
        let lhs = coefficient(up, p.beta, p.lambda, convention)? * st.modulus(up);
        let rhs = factor * st.modulus(e);
        scale = scale.max(rhs.abs());
        diff = diff.max((lhs - rhs).abs());
    }
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Sup-norm residual of `a^λ|s,γ⟩ = (1/λ) s^{ln(1/λ)}|s, γ/λ⟩`, applying the
/// annihilator through [`crate::ladder::apply`].
pub fn lambda_class_residual(p: &DilationParams, convention: WeightConvention, grid: &[f64]) -> Result<f64> {
    let kernel = p.state()?.kernel();
    let lowered = crate::ladder::apply(&p.annihilator(convention)?, &kernel);
    let target = p
        .with_gamma(p.gamma / p.lambda)
        .state()?
        .kernel()
        .scaled(Complex64::new(p.s.powf(-p.lambda.ln()) / p.lambda, 0.0));
    Ok(crate::kernel::relative_sup_distance(&lowered, &target, grid))
}

/// `|C(E)|` as `E → 0⁺`, probed at `E = 1e-100`; should be negligible.
pub fn weight_at_origin(beta: f64, lambda: f64, convention: WeightConvention) -> f64 {
    log_coefficient((1e-100f64).ln(), beta, lambda.ln(), convention).exp()
}

/// `(1/λ)(|C(E/λ)|² − |C(E)|²)` written out for each weight convention.
///
/// * paper weight: `(1/λ) e^{2βxl − βl²}(e^{-2βl²} − 1)`,
/// * kernel-consistent weight: `(1/λ) e^{-2βxl − βl²}(e^{2βl²} − 1)`,
///
/// with `x = ln E`, `l = ln λ`. Both equal the ordinary (`q = 1`) commutator
/// of kernel calculus for the respective weight.
pub fn commutator_closed_form(e: f64, beta: f64, lambda: f64, convention: WeightConvention) -> f64 {
    if e <= 0.0 {
        return f64::NAN;
    }
    let (x, l) = (e.ln(), lambda.ln());
    match convention {
        WeightConvention::Paper => (2.0 * beta * x * l - beta * l * l).exp() * (-2.0 * beta * l * l).exp_m1() / lambda,
        WeightConvention::KernelConsistent => {
            (-2.0 * beta * x * l - beta * l * l).exp() * (2.0 * beta * l * l).exp_m1() / lambda
        }
    }
}

/// `∏_{k=1}^n C̃(−k ln λ, λ)` with `ln λ = −T/n` against `e^{βT²/2}`,
/// summed term by term in log space.
pub fn product_limit_check(
    log_e_target: f64,
    beta: f64,
    n: usize,
    convention: WeightConvention,
) -> Result<ProductLimit> {
    require(
        log_e_target >= 0.0 && log_e_target.is_finite(),
        "lnE_target",
        log_e_target,
        "lnE_target >= 0",
    )?;
    require_positive("beta", beta)?;
    require(n >= 1, "n", n as f64, "n >= 1")?;
    let l = -log_e_target / n as f64;
    let mut log_product = 0.0;
    let mut linearized = 0.0;
    for k in 1..=n {
        let x = -(k as f64) * l;
        log_product += log_coefficient(x, beta, l, convention);
        linearized += (beta * l.abs() * x).ln_1p();
    }
    let log_target = 0.5 * beta * log_e_target * log_e_target;
    Ok(ProductLimit {
        n,
        log_product,
        log_target,
        residual: (log_product - log_target).exp_m1().abs(),
        linearized_residual: (linearized - log_target).exp_m1().abs(),
    })
}

pub fn temporal_residual(p: &DilationParams, t: f64, grid: &[f64]) -> Result<f64> {
    let h = HamiltonianSpec::new(p.omega)?;
    let evolved = crate::kernel::time_evolve(&h, t, &p.state()?.kernel());
    let shifted = p.with_gamma(p.gamma + p.omega * t).state()?.kernel();
    Ok(crate::kernel::relative_sup_distance(&evolved, &shifted, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::inner;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn params(beta: f64, s: f64, gamma: f64, lambda: f64) -> DilationParams {
        DilationParams::new(beta, s, gamma, lambda, 1.0).unwrap()
    }

    #[test]
    fn conventions_agree_at_unit_energy() {
        for conv in [WeightConvention::Paper, WeightConvention::KernelConsistent] {
            let c = coefficient(1.0, 1.3, 0.4, conv).unwrap();
            assert_relative_eq!(c, (-0.5 * 1.3 * 0.4f64.ln().powi(2)).exp(), max_relative = 1e-15);
        }
    }

    #[test]
    fn coefficient_values_at_e() {
        let paper = coefficient(E, 1.0, 0.5, WeightConvention::Paper).unwrap();
        let kc = coefficient(E, 1.0, 0.5, WeightConvention::KernelConsistent).unwrap();
        assert_relative_eq!(paper, 0.393_224_852_279_702_7, max_relative = 1e-14);
        assert_relative_eq!(kc, 1.572_899_409_118_810_7, max_relative = 1e-14);
        assert!(coefficient(0.0, 1.0, 0.5, WeightConvention::Paper).is_err());
    }

    #[test]
    fn weight_at_origin_separates_conventions() {
        assert!(weight_at_origin(1.0, 0.5, WeightConvention::KernelConsistent) < 1e-50);
        assert!(weight_at_origin(1.0, 0.5, WeightConvention::Paper) > 1e50);
    }

    #[test]
    fn kernel_phase_split_and_lambda_independence() {
        let a = params(1.0, 1.0, 0.0, 0.2).state().unwrap();
        let b = params(1.0, 1.0, 0.0, 0.5).state().unwrap();
        let c = params(1.0, 1.0, 0.0, 0.9).state().unwrap();
        for e in [0.2, 1.0, 3.0] {
            assert_eq!(a.eval(e), b.eval(e));
            assert_eq!(a.eval(e), c.eval(e));
            assert_eq!(a.eval(e).im, 0.0);
        }
        let g = params(1.0, 2.0, 0.7, 0.5).state().unwrap();
        for e in [0.2, 1.0, 3.0] {
            let expected = Complex64::from_polar(g.modulus(e), -0.7 * e);
            assert_eq!(g.eval(e), expected);
        }
    }

    #[test]
    fn lambda_class_relation_holds_for_kernel_consistent_weight() {
        let p = params(1.0, 2.0, 0.7, 0.5);
        let grid = crate::logspace(1e-3, 20.0, 2000);
        assert!(lambda_class_residual(&p, WeightConvention::KernelConsistent, &grid).unwrap() < 1e-12);
        assert!(lambda_class_residual(&p, WeightConvention::Paper, &grid).unwrap() > 1e-3);
        assert!(iteration_residual(&p, WeightConvention::KernelConsistent, &grid).unwrap() < 1e-12);
    }

    #[test]
    fn inverse_e_dilation_special_case() {
        // λ = e⁻¹: a|s,γ⟩ = e s |s, eγ⟩
        let p = params(0.8, 1.7, 0.3, (-1.0f64).exp());
        let kernel = p.state().unwrap().kernel();
        let lowered = crate::ladder::apply(&p.annihilator(WeightConvention::KernelConsistent).unwrap(), &kernel);
        let target = p
            .with_gamma(E * 0.3)
            .state()
            .unwrap()
            .kernel()
            .scaled(Complex64::new(E * 1.7, 0.0));
        let grid = crate::logspace(1e-3, 20.0, 500);
        assert!(crate::kernel::relative_sup_distance(&lowered, &target, &grid) < 1e-12);
    }

    #[test]
    fn normalization_values() {
        let n = normalization((-0.5f64).exp(), 1.0).unwrap();
        assert_relative_eq!(n * n, 1.0 / PI.sqrt(), max_relative = 1e-15);
        let n = normalization(1.0, 1.0).unwrap();
        assert_relative_eq!(n * n, 0.439_391_289_467_722_4, max_relative = 1e-14);
        let spec = QuadratureSpec::default();
        let q = normalization_squared_quadrature(1.0, 1.0, &spec).unwrap();
        assert_relative_eq!(q, n * n, max_relative = 1e-9);
        assert!(normalization(0.0, 1.0).is_err());
    }

    #[test]
    fn states_are_normalized() {
        let spec = QuadratureSpec::default();
        for s in [0.5, 1.0, 2.0] {
            for beta in [0.5, 1.0, 2.0] {
                let k = params(beta, s, 0.4, 0.5).state().unwrap().kernel();
                let n2 = inner(&k, &k, &spec).unwrap().re;
                assert!((n2 - 1.0).abs() < 1e-8, "s={s} beta={beta}: {n2}");
            }
        }
    }

    #[test]
    fn measure_conventions() {
        let s = (-0.25f64).exp();
        let m = measure_rho(s, 1.0, MeasureConvention::MomentSolution).unwrap();
        assert_relative_eq!(m, 0.25f64.exp(), max_relative = 1e-15);
        let p = measure_rho(s, 1.0, MeasureConvention::Paper).unwrap();
        assert_relative_eq!(m, p, max_relative = 1e-15);
        // definition h̃(ln s)/(s N²)
        for s in [0.3, 1.0, 2.5] {
            let n = normalization(s, 0.7).unwrap();
            let def = moment_density(s.ln(), 0.7) / (s * n * n);
            let rho = measure_rho(s, 0.7, MeasureConvention::MomentSolution).unwrap();
            assert_relative_eq!(rho, def, max_relative = 1e-13);
        }
    }

    #[test]
    fn moment_identity_selects_moment_solution() {
        let spec = QuadratureSpec::default();
        for x in [-1.0, 0.0, 1.0, 2.0] {
            assert!(moment_residual(x, 1.0, MeasureConvention::MomentSolution, &spec).unwrap() < 1e-8);
            assert!(moment_residual(x, 1.0, MeasureConvention::Paper, &spec).unwrap() > 1e-2);
        }
    }

    #[test]
    fn action_values_and_inversion() {
        assert_relative_eq!(action((-0.75f64).exp(), 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(action(1.0, 1.0).unwrap(), 0.75f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(invert_action(1.0, 1.0).unwrap(), (-0.75f64).exp(), max_relative = 1e-15);
        let spec = QuadratureSpec::default();
        for beta in [0.5, 1.0, 2.0] {
            for s in [0.1, 1.0, 10.0] {
                let j = action(s, beta).unwrap();
                assert!((invert_action(j, beta).unwrap() - s).abs() <= 1e-12 * s);
                let q = action_quadrature(s, beta, &spec).unwrap();
                assert_relative_eq!(q, j, max_relative = 1e-8);
            }
            let mut last = 0.0;
            for s in crate::logspace(1e-2, 1e2, 20) {
                let j = action(s, beta).unwrap();
                assert!(j > last);
                last = j;
            }
        }
        assert!(invert_action(0.0, 1.0).is_err());
        let (s, h) = (1.3, 1e-6);
        let fd = (action(s + h, 0.8).unwrap() - action(s - h, 0.8).unwrap()) / (2.0 * h);
        assert_relative_eq!(action_derivative(s, 0.8).unwrap(), fd, max_relative = 1e-8);
    }

    #[test]
    fn action_labelled_kernel_matches_state_kernel() {
        let beta = 1.2;
        for j in [0.5, 1.0, 3.0] {
            let s = invert_action(j, beta).unwrap();
            let st = params(beta, s, 0.9, 0.5).state().unwrap();
            for e in [0.1, 0.8, 2.0, 7.0] {
                let direct = action_labelled_kernel(e, j, 0.9, beta).unwrap();
                assert!((direct - st.eval(e)).norm() <= 1e-13 * st.eval(e).norm().max(1e-300));
            }
        }
    }

    #[test]
    fn product_limit_telescopes_for_kernel_consistent_weight() {
        let empty = product_limit_check(0.0, 1.0, 5, WeightConvention::KernelConsistent).unwrap();
        assert_eq!(empty.residual, 0.0);
        for n in [10, 100, 1000] {
            let r = product_limit_check(1.5, 1.0, n, WeightConvention::KernelConsistent).unwrap();
            assert!(r.residual < 1e-12, "n={n}: {}", r.residual);
            let p = product_limit_check(1.5, 1.0, n, WeightConvention::Paper).unwrap();
            assert!(p.residual > 0.5);
        }
    }

    #[test]
    fn commutator_closed_forms_match_kernel_calculus() {
        let p = params(0.7, 1.0, 0.0, 0.4);
        for conv in [WeightConvention::Paper, WeightConvention::KernelConsistent] {
            let op = p.annihilator(conv).unwrap();
            let d = crate::ladder::q_commutator_multiplier(&op, 1.0).unwrap();
            for e in [0.05, 0.5, 1.0, 4.0] {
                let closed = commutator_closed_form(e, 0.7, 0.4, conv);
                assert_relative_eq!(d.eval(e), closed, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(DilationParams::new(1.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(DilationParams::new(1.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(DilationParams::new(-1.0, 1.0, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn time_evolution_shifts_gamma() {
        let p = DilationParams::new(1.0, 1.5, 0.2, 0.5, 0.9).unwrap();
        let grid = crate::logspace(1e-3, 20.0, 400);
        for t in [0.0, 0.5, 2.0] {
            assert!(temporal_residual(&p, t, &grid).unwrap() < 1e-14);
        }
    }
}
