//! Coherent states of the translation-type annihilator
//! `a_ε|E⟩ = C(E, ε)|E − ε⟩`, `C(E, ε) = e^{α(Eε − ε²/2)}` for `E ≥ ε`.
//!
//! The states solve `a_ε|s,γ⟩ = (s e^{-iγ})^ε |s,γ⟩` and have kernel
//! `N(s) s^E e^{-αE²/2} e^{-iγE}`, independent of ε. Every closed form here
//! reduces to the half-line Gaussian moments `M₀(α, 2 ln s)` and
//! `M₁(α, 2 ln s)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, require_positive, Error, Result};
use crate::kernel::{EnergyKernel, HamiltonianSpec};
use crate::ladder::{LadderOp, OpKind};
use crate::numerics::{
    erfc, erfcx, gauss_m0, gauss_mean, integrate_half_line, integrate_real_line, QuadratureSpec, Transform,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationParams {
    pub alpha: f64,
    pub s: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub omega: f64,
}

impl TranslationParams {
    pub fn new(alpha: f64, s: f64, gamma: f64, epsilon: f64, omega: f64) -> Result<Self> {
        let p = Self {
            alpha,
            s,
            gamma,
            epsilon,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("alpha", self.alpha)?;
        require(self.s >= 0.0 && self.s.is_finite(), "s", self.s, "s >= 0")?;
        require(self.gamma.is_finite(), "gamma", self.gamma, "finite")?;
        require_positive("epsilon", self.epsilon)?;
        require_positive("omega", self.omega)
    }

    pub fn with_s(self, s: f64) -> Self {
        Self { s, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    /// `a_ε` with weight `C(·, ε)` and the hard cutoff on `(0, ε)`.
    pub fn annihilator(&self) -> Result<LadderOp> {
        self.validate()?;
        let (alpha, epsilon) = (self.alpha, self.epsilon);
        Ok(LadderOp::new(1.0, -epsilon, epsilon, move |e| {
            Complex64::new(coefficient(e, alpha, epsilon), 0.0)
        })?
        .with_kind(OpKind::Translation { alpha, epsilon }))
    }

    /// The normalized coherent state `|s, γ⟩`. Requires `s > 0`.
    pub fn state(&self) -> Result<CoherentState> {
        self.validate()?;
        let n = normalization(self.s, self.alpha)?;
        Ok(CoherentState { params: *self, norm: n })
    }
}

/// `C(E, ε) = e^{α(Eε − ε²/2)}` for `E ≥ ε`, zero on `0 ≤ E < ε`.
pub fn coefficient(e: f64, alpha: f64, epsilon: f64) -> f64 {
    if e < epsilon {
        0.0
    } else {
        (alpha * (e * epsilon - 0.5 * epsilon * epsilon)).exp()
    }
}

/// A normalized first-kind coherent state with its cached `N(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState {
    params: TranslationParams,
    norm: f64,
}

impl CoherentState {
    pub fn params(&self) -> TranslationParams {
        self.params
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// `N s^E e^{-αE²/2} e^{-iγE}` for `E > 0`.
    pub fn eval(&self, e: f64) -> Complex64 {
        if e <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let p = self.params;
        let modulus = self.norm * (e * p.s.ln() - 0.5 * p.alpha * e * e).exp();
        Complex64::from_polar(modulus, -p.gamma * e)
    }

    /// Peak and width of `|K|` viewed as a Gaussian in `E`.
    pub fn peak(&self) -> (f64, f64) {
        let p = self.params;
        (p.s.ln() / p.alpha, 1.0 / p.alpha.sqrt())
    }

    pub fn kernel(&self) -> EnergyKernel {
        let (mu, sigma) = self.peak();
        let state = *self;
        EnergyKernel::from_parts(
            format!(
                "translation(alpha={}, s={}, gamma={})",
                self.params.alpha, self.params.s, self.params.gamma
            ),
            (0.0, mu.max(0.0) + 12.0 * sigma),
            Transform::GaussianCentering {
                center: mu.max(0.0),
                width: sigma,
            },
            Arc::new(move |e| state.eval(e)),
        )
    }
}

/// `N(s) = [∫₀^∞ e^{2E ln s − αE²} dE]^{-1/2} = M₀(α, 2 ln s)^{-1/2}`.
///
/// `s = 0` is reported as [`Error::OutOfDomain`]: the integral stays finite
/// but the state degenerates and is excluded from normalized operations.
pub fn normalization(s: f64, alpha: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    require(s >= 0.0 && s.is_finite(), "s", s, "s >= 0")?;
    if s == 0.0 {
        return Err(Error::OutOfDomain("s = 0 (degenerate state)".into()));
    }
    Ok(gauss_m0(alpha, 2.0 * s.ln())?.powf(-0.5))
}

/// `N(s)²` from the displayed error-function form
/// `2√(α/π) e^{-(ln s)²/α} [1 − erf(|ln s|/√α)]^{-1}`. Agrees with
/// [`normalization`] only for `s ≤ 1`; kept as a cross-check.
pub fn normalization_squared_abs_log_form(s: f64, alpha: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    require_positive("s", s)?;
    let l = s.ln();
    Ok(2.0 * (alpha / PI).sqrt() / erfcx(l.abs() / alpha.sqrt()))
}

/// `h̃(u) = e^{-u²/α}/√(απ)`, the log-variable density solving the moment
/// problem `∫ h̃(u) e^{2Eu} du = e^{αE²}`.
pub fn moment_density(u: f64, alpha: f64) -> f64 {
    (-u * u / alpha).exp() / (alpha * PI).sqrt()
}

/// `σ(s) = h̃(ln s)/(s N(s)²)`, the radial measure resolving the identity.
pub fn measure_sigma(s: f64, alpha: f64) -> Result<f64> {
    require_positive("s", s)?;
    require_positive("alpha", alpha)?;
    let l = s.ln();
    // h̃(l) M₀(α, 2l)/s with the e^{±l²/α} factors cancelled analytically
    Ok(erfc(-l / alpha.sqrt()) / (2.0 * alpha * s))
}

/// Relative residual of `∫ h̃(u) e^{2Eu} du = e^{αE²}` by quadrature.
pub fn moment_check(e: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    require(e >= 0.0 && e.is_finite(), "E", e, "E >= 0")?;
    require_positive("alpha", alpha)?;
    let target = (alpha * e * e).exp();
    let spec = spec.with_transform(Transform::GaussianCentering {
        center: alpha * e,
        width: (0.5 * alpha).sqrt(),
    });
    // one exponent, so the far tails give 0 rather than 0·∞
    let r = integrate_real_line(|u| (2.0 * e * u - u * u / alpha).exp() / (alpha * PI).sqrt(), &spec)?;
    Ok((r.value - target).abs() / target)
}

/// `J(s) = ⟨s,γ|H|s,γ⟩/ω = M₁/M₀ = ln s/α + 1/(√(απ) erfcx(−ln s/√α))`.
pub fn action(s: f64, alpha: f64) -> Result<f64> {
    require_positive("s", s)?;
    gauss_mean(alpha, 2.0 * s.ln())
}

/// `⟨s,γ|H|s,γ⟩ = ωJ(s)`.
pub fn mean_energy(s: f64, p: &TranslationParams) -> Result<f64> {
    p.validate()?;
    Ok(p.omega * action(s, p.alpha)?)
}

/// `ω N² ∫₀^∞ E s^{2E} e^{-αE²} dE` by quadrature, independent of the
/// closed form.
pub fn mean_energy_quadrature(s: f64, alpha: f64, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
    let n2 = normalization(s, alpha)?.powi(2);
    let l = s.ln();
    let center = (l / alpha).max(0.0);
    let spec = spec.with_transform(Transform::GaussianCentering {
        center,
        width: (0.5 / alpha).sqrt(),
    });
    let r = integrate_half_line(|e| e * (2.0 * e * l - alpha * e * e).exp(), &spec)?;
    Ok(omega * n2 * r.value)
}

/// The displayed mean-energy formula
/// `ω[√π erfc(|ln s|/√α) ln s + √α e^{-ln²s/α}]/(√π α^{3/2} erfc(|ln s|/√α))`.
/// Kept as a cross-check only.
pub fn mean_energy_display(s: f64, alpha: f64, omega: f64) -> Result<f64> {
    require_positive("s", s)?;
    require_positive("alpha", alpha)?;
    let l = s.ln();
    let x = l.abs() / alpha.sqrt();
    let ratio = 1.0 / erfcx(x); // e^{-l²/α}/erfc(x)
    Ok(omega * (PI.sqrt() * l + alpha.sqrt() * ratio) / (PI.sqrt() * alpha.powf(1.5)))
}

/// Which closed form of `dH̃/ds` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeForm {
    /// Derivative of `ωM₁/M₀`:
    /// `(ω/αs)[1 − 2 ln s·r/√(απ) − 2r²/π]`, `r = 1/erfcx(−ln s/√α)`.
    Exact,
    /// The displayed form
    /// `(ω/αs)[−2 ln s·r/√(απ) + 2r²/π + 1]`, `r = 1/erfcx(|ln s|/√α)`.
    PaperDisplay,
}

/// `dH̃/ds` in the chosen closed form.
pub fn mean_energy_derivative(s: f64, alpha: f64, omega: f64, form: DerivativeForm) -> Result<f64> {
    require_positive("s", s)?;
    require_positive("alpha", alpha)?;
    require_positive("omega", omega)?;
    let l = s.ln();
    let pre = omega / (alpha * s);
    let c = 2.0 * l / (alpha * PI).sqrt();
    Ok(match form {
        DerivativeForm::Exact => {
            let r = 1.0 / erfcx(-l / alpha.sqrt());
            pre * (1.0 - c * r - 2.0 * r * r / PI)
        }
        DerivativeForm::PaperDisplay => {
            let r = 1.0 / erfcx(l.abs() / alpha.sqrt());
            pre * (-c * r + 2.0 * r * r / PI + 1.0)
        }
    })
}

/// Checks `dH̃/ds > 0` on 200 log-spaced points of `[1e-3, 1e3]`.
pub fn certify_monotone(alpha: f64, form: DerivativeForm) -> Result<()> {
    for s in crate::logspace(1e-3, 1e3, 200) {
        let d = mean_energy_derivative(s, alpha, 1.0, form)?;
        if !(d > 0.0) {
            return Err(Error::NotMonotone {
                alpha,
                s,
                derivative: d,
            });
        }
    }
    Ok(())
}

/// Solves `J(s) = j` for `s` by bisection in `ln s`, after certifying that
/// `J` is strictly increasing for this α.
pub fn invert_action(j: f64, alpha: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::OutOfRange { value: j, lower: 0.0 });
    }
    certify_monotone(alpha, DerivativeForm::Exact)?;
    let f = |l: f64| gauss_mean(alpha, 2.0 * l).map(|v| v - j);

    // J(l) > l/α, so l = αj is an upper bracket; J(l) ≈ 1/(2|l|) for l ≪ 0.
    let mut hi = alpha * j + 1.0;
    while f(hi)? <= 0.0 {
        hi = 2.0 * hi + 1.0;
    }
    let mut lo = -(1.0 / j + 1.0);
    while f(lo)? >= 0.0 {
        lo = 2.0 * lo - 1.0;
        if lo < -1e6 {
            return Err(Error::OutOfRange { value: j, lower: 0.0 });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let l = if f(lo)?.abs() <= f(hi)?.abs() { lo } else { hi };
    Ok(l.exp())
}

/// Relative residual of the eigenvalue relation
/// `C(E+ε)K(E+ε) = (s e^{-iγ})^ε K(E)`, evaluated through [`crate::ladder::apply`],
/// as a sup over `grid` relative to `sup|K|`.
pub fn eigen_residual(p: &TranslationParams, grid: &[f64]) -> Result<f64> {
    let state = p.state()?;
    let kernel = state.kernel();
    let lowered = crate::ladder::apply(&p.annihilator()?, &kernel);
    let eigenvalue = Complex64::from_polar(p.s.powf(p.epsilon), -p.gamma * p.epsilon);
    let expected = kernel.scaled(eigenvalue);
    Ok(crate::kernel::relative_sup_distance(&lowered, &expected, grid))
}

/// Continuum-limit product at a fixed target energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductLimit {
    pub n: usize,
    /// `Σ_k ln C(kε, ε)`, summed term by term.
    pub log_product: f64,
    /// `αE²/2` (or `β(ln E)²/2` for the dilation family).
    pub log_target: f64,
    /// `|∏ C − e^{target}| / e^{target}`.
    pub residual: f64,
    /// Same residual for the first-order factors `1 + ᾱkΔE`, which is what
    /// the limit argument actually expands; it decays like `1/n`.
    pub linearized_residual: f64,
}

/// `∏_{k=1}^n C(kε, ε)` with `ε = E/n` against `e^{αE²/2}`, in log space.
pub fn product_limit_check(e_target: f64, alpha: f64, n: usize) -> Result<ProductLimit> {
    require(
        e_target >= 0.0 && e_target.is_finite(),
        "E_target",
        e_target,
        "E_target >= 0",
    )?;
    require_positive("alpha", alpha)?;
    require(n >= 1, "n", n as f64, "n >= 1")?;
    let eps = e_target / n as f64;
    let mut log_product = 0.0;
    let mut linearized = 0.0;
    for k in 1..=n {
        let ke = k as f64 * eps;
        log_product += alpha * (ke * eps - 0.5 * eps * eps);
        linearized += (alpha * eps * ke).ln_1p();
    }
    let log_target = 0.5 * alpha * e_target * e_target;
    Ok(ProductLimit {
        n,
        log_product,
        log_target,
        residual: (log_product - log_target).exp_m1().abs(),
        linearized_residual: (linearized - log_target).exp_m1().abs(),
    })
}

/// Kernel of `e^{-itH}|s,γ⟩` against that of `|s, γ+ωt⟩`, sup-norm relative.
pub fn temporal_residual(p: &TranslationParams, t: f64, grid: &[f64]) -> Result<f64> {
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

    fn params(alpha: f64, s: f64, gamma: f64) -> TranslationParams {
        TranslationParams::new(alpha, s, gamma, 0.5, 1.0).unwrap()
    }

    #[test]
    fn coefficient_values() {
        assert_relative_eq!(
            coefficient(1.0, 1.0, 0.5),
            1.454_991_414_618_201_3,
            max_relative = 1e-15
        );
        assert_eq!(coefficient(0.25, 1.0, 0.5), 0.0);
        assert_relative_eq!(coefficient(3.0, 1e-12, 0.5), 1.0, max_relative = 1e-11);
    }

    #[test]
    fn kernel_shape_and_phase() {
        let st = params(1.0, 1.0, 0.0).state().unwrap();
        for e in [0.3, 1.0, 2.0] {
            let k = st.eval(e);
            assert_eq!(k.im, 0.0);
            assert_relative_eq!(k.re, st.normalization() * (-0.5 * e * e).exp(), max_relative = 1e-15);
        }
        let a = params(1.0, 2.0, 0.0).state().unwrap();
        let b = params(1.0, 2.0, 3.3).state().unwrap();
        for e in [0.3, 1.0, 2.0] {
            assert_relative_eq!(a.eval(e).norm(), b.eval(e).norm(), max_relative = 1e-15);
        }
    }

    #[test]
    fn eigenvalue_relation_holds() {
        let p = TranslationParams::new(1.0, 2.0, 0.7, 0.3, 1.0).unwrap();
        let grid = crate::linspace(0.0, 20.0, 2001);
        assert!(eigen_residual(&p, &grid).unwrap() < 1e-12);
    }

    #[test]
    fn kernel_does_not_depend_on_epsilon() {
        let k = |eps| {
            TranslationParams::new(1.3, 1.7, 0.4, eps, 1.0)
                .unwrap()
                .state()
                .unwrap()
        };
        let (a, b, c) = (k(0.1), k(0.5), k(1.0));
        for e in crate::linspace(0.01, 10.0, 50) {
            assert_eq!(a.eval(e), b.eval(e));
            assert_eq!(a.eval(e), c.eval(e));
        }
    }

    #[test]
    fn normalization_values() {
        let n = normalization(1.0, 1.0).unwrap();
        assert_relative_eq!(n * n, 2.0 / PI.sqrt(), max_relative = 1e-14);
        let n = normalization(std::f64::consts::E, 1.0).unwrap();
        // 1 / mpmath.quad(exp(2E - E²), [0, inf])
        assert_relative_eq!(n * n, 0.225_271_242_628_657_45, max_relative = 1e-13);
        assert!(matches!(normalization(0.0, 1.0), Err(Error::OutOfDomain(_))));
        assert!(normalization(-1.0, 1.0).is_err());
    }

    #[test]
    fn abs_log_form_agrees_only_below_one() {
        for s in [0.1, 0.5, 1.0] {
            let n = normalization(s, 1.3).unwrap();
            assert_relative_eq!(
                normalization_squared_abs_log_form(s, 1.3).unwrap(),
                n * n,
                max_relative = 1e-13
            );
        }
        let n = normalization(3.0, 1.0).unwrap();
        let display = normalization_squared_abs_log_form(3.0, 1.0).unwrap();
        assert!((display / (n * n) - 1.0).abs() > 0.1);
    }

    #[test]
    fn states_are_normalized() {
        let spec = QuadratureSpec::default();
        for s in [0.5, 1.0, 2.0, std::f64::consts::E] {
            for alpha in [0.5, 1.0, 2.0] {
                let k = params(alpha, s, 0.3).state().unwrap().kernel();
                let n2 = inner(&k, &k, &spec).unwrap().re;
                assert!((n2 - 1.0).abs() < 1e-8, "s={s} alpha={alpha}: {n2}");
            }
        }
    }

    #[test]
    fn measure_values() {
        assert_relative_eq!(measure_sigma(1.0, 1.0).unwrap(), 0.5, max_relative = 1e-15);
        // definition h̃(ln s)/(s N²)
        for s in [0.2, 1.5, 4.0] {
            let n = normalization(s, 0.8).unwrap();
            let def = moment_density(s.ln(), 0.8) / (s * n * n);
            assert_relative_eq!(measure_sigma(s, 0.8).unwrap(), def, max_relative = 1e-13);
        }
        assert!(measure_sigma(1e-4, 1.0).unwrap() < 1e-10);
        assert!(measure_sigma(1e4, 1.0).unwrap() < 1e-3);
        assert!(measure_sigma(0.0, 1.0).is_err());
    }

    #[test]
    fn moment_problem_residuals() {
        let spec = QuadratureSpec::default();
        assert!(moment_check(0.0, 1.0, &spec).unwrap() < 1e-10);
        assert!(moment_check(1.0, 1.0, &spec).unwrap() < 1e-9);
        assert!(moment_check(5.0, 1.0, &spec).unwrap() < 1e-8);
    }

    #[test]
    fn mean_energy_values() {
        let p = params(1.0, 1.0, 0.0);
        assert_relative_eq!(mean_energy(1.0, &p).unwrap(), 1.0 / PI.sqrt(), max_relative = 1e-14);
        let p2 = TranslationParams { omega: 3.0, ..p };
        assert_relative_eq!(mean_energy(1.0, &p2).unwrap(), 3.0 / PI.sqrt(), max_relative = 1e-14);
        let spec = QuadratureSpec::default();
        for s in [0.3, 1.0, 2.0, 5.0] {
            for alpha in [0.5, 1.0, 2.0] {
                let p = params(alpha, s, 0.0);
                let closed = mean_energy(s, &p).unwrap();
                let quad = mean_energy_quadrature(s, alpha, 1.0, &spec).unwrap();
                assert_relative_eq!(closed, quad, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn display_mean_energy_is_off_by_sqrt_alpha() {
        for s in [0.2, 0.5, 1.0] {
            for alpha in [0.5, 1.0, 2.0] {
                let j = action(s, alpha).unwrap();
                let display = mean_energy_display(s, alpha, 1.0).unwrap();
                assert_relative_eq!(display * alpha.sqrt(), j, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn derivative_forms() {
        // the displayed form at ln s = 0 gives ω(1 + 2/π)
        let paper = mean_energy_derivative(1.0, 1.0, 1.0, DerivativeForm::PaperDisplay).unwrap();
        assert_relative_eq!(paper, 1.0 + 2.0 / PI, max_relative = 1e-15);
        // the derivative of M₁/M₀ gives ω(1 − 2/π)
        let exact = mean_energy_derivative(1.0, 1.0, 1.0, DerivativeForm::Exact).unwrap();
        assert_relative_eq!(exact, 1.0 - 2.0 / PI, max_relative = 1e-15);
    }

    #[test]
    fn exact_derivative_matches_finite_differences() {
        let h = 1e-5;
        for alpha in [0.5, 1.0, 2.0] {
            for s in [0.3, 1.0, 3.0] {
                let fd = (action(s + h, alpha).unwrap() - action(s - h, alpha).unwrap()) / (2.0 * h);
                let exact = mean_energy_derivative(s, alpha, 1.0, DerivativeForm::Exact).unwrap();
                assert!(
                    ((exact - fd) / exact).abs() < 1e-6,
                    "alpha={alpha} s={s}: {exact} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn action_is_monotone() {
        for alpha in [0.25, 1.0, 4.0] {
            certify_monotone(alpha, DerivativeForm::Exact).unwrap();
        }
        for s in crate::logspace(0.1, 10.0, 30) {
            assert!(mean_energy_derivative(s, 1.0, 1.0, DerivativeForm::Exact).unwrap() > 0.0);
        }
    }

    #[test]
    fn action_inversion_round_trips() {
        let j1 = action(1.0, 1.0).unwrap();
        assert!((invert_action(j1, 1.0).unwrap() - 1.0).abs() < 1e-9);
        for s in [0.5, 2.0] {
            let j = action(s, 1.0).unwrap();
            assert!((invert_action(j, 1.0).unwrap() - s).abs() < 1e-8);
        }
        for j in [0.6, 1.0, 2.0, 5.0] {
            let s = invert_action(j, 1.0).unwrap();
            assert!((action(s, 1.0).unwrap() - j).abs() < 1e-9);
        }
        assert!(matches!(invert_action(0.0, 1.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(invert_action(-2.0, 1.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn continuum_product_telescopes() {
        let empty = product_limit_check(0.0, 1.0, 10).unwrap();
        assert_eq!(empty.residual, 0.0);
        let mut last = f64::INFINITY;
        for n in [10, 100, 1000] {
            let r = product_limit_check(2.0, 1.0, n).unwrap();
            assert!(r.residual < 1e-12, "n={n}: {}", r.residual);
            assert!(r.linearized_residual < last);
            last = r.linearized_residual;
        }
    }

    #[test]
    fn time_evolution_shifts_gamma() {
        let p = TranslationParams::new(1.0, 1.5, 0.2, 0.5, 1.3).unwrap();
        let grid = crate::linspace(0.0, 20.0, 401);
        for t in [0.0, 0.5, 2.0] {
            assert!(temporal_residual(&p, t, &grid).unwrap() < 1e-14);
        }
    }
}
