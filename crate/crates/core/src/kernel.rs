//! States of the continuous Hilbert space as complex kernels `ψ(E)` over
//! `E ∈ (0, ∞)`, in the Dirac-normalized basis `⟨E|E′⟩ = δ(E − E′)`.
//!
//! Kernels are closures rather than sampled arrays; quadrature picks its own
//! nodes. Sampled tables exist only for export.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::numerics::{integrate_complex, QuadratureSpec, Transform};

pub type Amplitude = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// An immutable state kernel `E ↦ ψ(E)`.
///
/// `support` bounds the region where the amplitude is numerically
/// significant; inner products integrate over the intersection of supports.
/// `hint` is the substitution that makes the kernel's quadrature well
/// conditioned, used whenever the caller's spec does not override it.
#[derive(Clone)]
pub struct EnergyKernel {
    amplitude: Amplitude,
    support: (f64, f64),
    hint: Transform,
    label: String,
}

impl fmt::Debug for EnergyKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnergyKernel")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("hint", &self.hint)
            .finish_non_exhaustive()
    }
}

impl EnergyKernel {
    /// Builds a kernel and checks, by quadrature over `support`, that it is
    /// finite and square-integrable.
    pub fn new<F>(label: impl Into<String>, support: (f64, f64), hint: Transform, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let (lo, hi) = support;
        if !(lo >= 0.0 && lo <= hi) || hi.is_nan() {
            return Err(Error::OutOfDomain(format!("support ({lo}, {hi})")));
        }
        let kernel = Self::from_parts(label, support, hint, Arc::new(f));
        let n2 = kernel.norm_squared(&QuadratureSpec::default())?;
        if !n2.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "kernel '{}' is not square-integrable",
                kernel.label
            )));
        }
        Ok(kernel)
    }

    /// Builds a kernel without the square-integrability check. Used for
    /// kernels derived from already-validated ones.
    pub fn from_parts(label: impl Into<String>, support: (f64, f64), hint: Transform, amplitude: Amplitude) -> Self {
        Self {
            amplitude,
            support,
            hint,
            label: label.into(),
        }
    }

    pub fn zero() -> Self {
        Self::from_parts(
            "zero",
            (0.0, 0.0),
            Transform::None,
            Arc::new(|_| Complex64::new(0.0, 0.0)),
        )
    }

    /// Normalized Gaussian wave packet `A e^{-(E-center)²/(2 width²)} e^{-i k E}`
    /// restricted to `E > 0`; `A` fixes the half-line norm to one.
    pub fn gaussian(center: f64, width: f64, wavenumber: f64) -> Result<Self> {
        require_positive("width", width)?;
        if !center.is_finite() {
            return Err(Error::InvalidParameter {
                name: "center",
                value: center,
                constraint: "finite",
            });
        }
        // ∫₀^∞ e^{-(E-c)²/w²} dE = (w√π/2) erfc(-c/w)
        let mass = 0.5 * width * std::f64::consts::PI.sqrt() * crate::numerics::erfc(-center / width);
        let amp = 1.0 / mass.sqrt();
        let hi = center.max(0.0) + 12.0 * width;
        Ok(Self::from_parts(
            format!("gaussian(c={center}, w={width}, k={wavenumber})"),
            (0.0, hi),
            Transform::GaussianCentering {
                center: center.max(0.0),
                width,
            },
            Arc::new(move |e| {
                let z = (e - center) / width;
                Complex64::from_polar(amp * (-0.5 * z * z).exp(), -wavenumber * e)
            }),
        ))
    }

    /// Amplitude at `E`; identically zero for `E ≤ 0`.
    pub fn eval(&self, e: f64) -> Complex64 {
        if e > 0.0 {
            (self.amplitude)(e)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn hint(&self) -> Transform {
        self.hint
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn amplitude(&self) -> Amplitude {
        Arc::clone(&self.amplitude)
    }

    /// Pointwise `c·ψ`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let amp = self.amplitude();
        Self::from_parts(
            format!("({c})*{}", self.label),
            self.support,
            self.hint,
            Arc::new(move |e| c * amp(e)),
        )
    }

    /// Pointwise `self − other`, supported on the union of both supports.
    pub fn minus(&self, other: &EnergyKernel) -> Self {
        let (a, b) = (self.amplitude(), other.amplitude());
        let support = (self.support.0.min(other.support.0), self.support.1.max(other.support.1));
        Self::from_parts(
            format!("{} - {}", self.label, other.label),
            support,
            self.hint,
            Arc::new(move |e| a(e) - b(e)),
        )
    }

    pub fn norm_squared(&self, spec: &QuadratureSpec) -> Result<f64> {
        Ok(inner(self, self, spec)?.re.max(0.0))
    }

    /// Samples `(E, Re ψ, Im ψ)` on the given energy grid.
    pub fn sample(&self, grid: &[f64]) -> Vec<KernelSample> {
        grid.iter()
            .map(|&e| {
                let v = self.eval(e);
                KernelSample {
                    energy: e,
                    re: v.re,
                    im: v.im,
                }
            })
            .collect()
    }
}

/// One exported row of a sampled kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSample {
    #[serde(rename = "E")]
    pub energy: f64,
    pub re: f64,
    pub im: f64,
}

/// `H|E⟩ = ωE|E⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianSpec {
    omega: f64,
}

impl HamiltonianSpec {
    pub fn new(omega: f64) -> Result<Self> {
        require_positive("omega", omega)?;
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// `⟨φ|ψ⟩ = ∫ φ*(E) ψ(E) dE` over the intersection of the two supports.
///
/// The quadrature substitution is taken from `spec` unless it is
/// [`Transform::None`], in which case `phi`'s own hint is used.
pub fn inner(phi: &EnergyKernel, psi: &EnergyKernel, spec: &QuadratureSpec) -> Result<Complex64> {
    let lo = phi.support.0.max(psi.support.0).max(0.0);
    let hi = phi.support.1.min(psi.support.1);
    if !(lo < hi) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut spec = *spec;
    if spec.transform == Transform::None {
        spec.transform = phi.hint;
    }
    let (a, b) = (phi.amplitude(), psi.amplitude());
    let r = integrate_complex(
        move |e| {
            if e > 0.0 {
                a(e).conj() * b(e)
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        lo,
        hi,
        &spec,
    )?;
    Ok(r.value)
}

/// `‖ψ‖ = √⟨ψ|ψ⟩`.
pub fn norm(psi: &EnergyKernel, spec: &QuadratureSpec) -> Result<f64> {
    Ok(psi.norm_squared(spec)?.sqrt())
}

/// `(Hψ)(E) = ωEψ(E)`.
pub fn apply_hamiltonian(h: &HamiltonianSpec, psi: &EnergyKernel) -> EnergyKernel {
    let omega = h.omega;
    let amp = psi.amplitude();
    EnergyKernel::from_parts(
        format!("H[{}]", psi.label),
        psi.support,
        psi.hint,
        Arc::new(move |e| amp(e) * (omega * e)),
    )
}

/// `(e^{-itH}ψ)(E) = e^{-iωtE}ψ(E)`.
pub fn time_evolve(h: &HamiltonianSpec, t: f64, psi: &EnergyKernel) -> EnergyKernel {
    let omega = h.omega;
    let amp = psi.amplitude();
    EnergyKernel::from_parts(
        format!("exp(-i{t}H)[{}]", psi.label),
        psi.support,
        psi.hint,
        Arc::new(move |e| amp(e) * Complex64::from_polar(1.0, -omega * t * e)),
    )
}

/// `⟨ψ|H|ψ⟩` by quadrature.
pub fn expectation_energy(h: &HamiltonianSpec, psi: &EnergyKernel, spec: &QuadratureSpec) -> Result<f64> {
    Ok(inner(psi, &apply_hamiltonian(h, psi), spec)?.re)
}

/// `sup_E |φ(E) − ψ(E)|` over a grid, relative to `sup_E |ψ(E)|`.
pub fn relative_sup_distance(phi: &EnergyKernel, psi: &EnergyKernel, grid: &[f64]) -> f64 {
    let mut scale = 0.0f64;
    let mut diff = 0.0f64;
    for &e in grid {
        let (a, b) = (phi.eval(e), psi.eval(e));
        scale = scale.max(b.norm());
        diff = diff.max((a - b).norm());
    }
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn normalized_gaussian_has_unit_norm() {
        let psi = EnergyKernel::gaussian(2.0, 0.7, 1.3).unwrap();
        assert!((inner(&psi, &psi, &spec()).unwrap().re - 1.0).abs() < 1e-8);
        let psi = EnergyKernel::gaussian(-0.5, 1.0, 0.0).unwrap();
        assert!((norm(&psi, &spec()).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_kernel_has_zero_norm() {
        assert_eq!(norm(&EnergyKernel::zero(), &spec()).unwrap(), 0.0);
    }

    #[test]
    fn norm_is_homogeneous() {
        let psi = EnergyKernel::gaussian(1.0, 0.5, 0.2).unwrap();
        let n = norm(&psi, &spec()).unwrap();
        let n2 = norm(&psi.scaled(Complex64::new(2.0, 0.0)), &spec()).unwrap();
        assert!((n2 - 2.0 * n).abs() < 1e-10);
    }

    #[test]
    fn disjoint_supports_are_orthogonal() {
        let a = EnergyKernel::new("a", (0.0, 1.0), Transform::None, |_| Complex64::new(1.0, 0.0)).unwrap();
        let b = EnergyKernel::new("b", (2.0, 3.0), Transform::None, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(inner(&a, &b, &spec()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn inner_is_conjugate_symmetric() {
        let a = EnergyKernel::gaussian(1.5, 0.6, 0.4).unwrap();
        let b = EnergyKernel::gaussian(2.0, 0.9, -1.1).unwrap();
        let ab = inner(&a, &b, &spec()).unwrap();
        let ba = inner(&b, &a, &spec()).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-10);
    }

    #[test]
    fn hamiltonian_multiplies_by_omega_e() {
        let psi = EnergyKernel::new("g", (0.0, 40.0), Transform::None, |e| {
            Complex64::new((-0.5 * e * e).exp(), 0.0)
        })
        .unwrap();
        let h = HamiltonianSpec::new(1.0).unwrap();
        let hpsi = apply_hamiltonian(&h, &psi);
        for e in [0.1, 1.0, 2.5] {
            assert_relative_eq!(hpsi.eval(e).re, e * (-0.5 * e * e).exp(), max_relative = 1e-15);
        }
        let h2 = HamiltonianSpec::new(2.0).unwrap();
        let e1 = expectation_energy(&h, &psi, &spec()).unwrap();
        let e2 = expectation_energy(&h2, &psi, &spec()).unwrap();
        assert_relative_eq!(e2, 2.0 * e1, max_relative = 1e-12);
    }

    #[test]
    fn time_evolution_is_unitary_and_composes() {
        let psi = EnergyKernel::gaussian(3.0, 1.0, 0.3).unwrap();
        let h = HamiltonianSpec::new(1.7).unwrap();
        let same = time_evolve(&h, 0.0, &psi);
        for e in [0.5, 2.0, 4.0] {
            assert_eq!(same.eval(e), psi.eval(e));
        }
        let n0 = norm(&psi, &spec()).unwrap();
        let n1 = norm(&time_evolve(&h, 2.3, &psi), &spec()).unwrap();
        assert!((n0 - n1).abs() < 1e-10);

        let two_step = time_evolve(&h, 0.4, &time_evolve(&h, 1.1, &psi));
        let one_step = time_evolve(&h, 1.5, &psi);
        let grid = crate::linspace(0.01, 10.0, 200);
        assert!(relative_sup_distance(&two_step, &one_step, &grid) < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(HamiltonianSpec::new(0.0).is_err());
        assert!(EnergyKernel::gaussian(1.0, -1.0, 0.0).is_err());
        assert!(EnergyKernel::new("bad", (2.0, 1.0), Transform::None, |_| Complex64::new(1.0, 0.0)).is_err());
    }
}
