//! Globally adaptive Gauss–Kronrod (10/21) quadrature on (possibly infinite)
//! intervals, with the two substitutions the coherent-state integrands need.
//!
//! The integrand is first rewritten in a substituted variable `x`
//! (`E = c + w·x` or `E = e^{c + w·x}`), the `x` range is split at the origin
//! so that the peak sits on a panel boundary, and infinite panels are mapped
//! onto `[0, 1)` with `x = a ± t/(1-t)`. Real and imaginary parts share the
//! same nodes and subdivision; each carries its own QUADPACK error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Change of variables applied before adaptive subdivision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    #[default]
    None,
    /// `E = exp(center + width·x)`; for integrands Gaussian in `ln E`.
    LogSubstitution { center: f64, width: f64 },
    /// `E = center + width·x`; for integrands Gaussian in `E`.
    GaussianCentering { center: f64, width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            transform: Transform::None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidSpec(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidSpec(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidSpec("max_subdivisions must be >= 1".into()));
        }
        match self.transform {
            Transform::None => Ok(()),
            Transform::LogSubstitution { center, width } | Transform::GaussianCentering { center, width } => {
                if center.is_finite() && width.is_finite() && width > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "transform needs finite center and width > 0, got ({center}, {width})"
                    )))
                }
            }
        }
    }
}

/// Result of a quadrature together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// `∫₀^∞ f(E) dE`.
pub fn integrate_half_line<F>(f: F, spec: &QuadratureSpec) -> Result<Integral<f64>>
where
    F: Fn(f64) -> f64,
{
    integrate(f, 0.0, f64::INFINITY, spec)
}

/// `∫_{-∞}^{∞} f(u) du`. Log substitution is rejected here, the variable
/// is not restricted to the positive axis.
pub fn integrate_real_line<F>(f: F, spec: &QuadratureSpec) -> Result<Integral<f64>>
where
    F: Fn(f64) -> f64,
{
    integrate(f, f64::NEG_INFINITY, f64::INFINITY, spec)
}

pub fn integrate_half_line_complex<F>(f: F, spec: &QuadratureSpec) -> Result<Integral<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    integrate_complex(f, 0.0, f64::INFINITY, spec)
}

pub fn integrate_real_line_complex<F>(f: F, spec: &QuadratureSpec) -> Result<Integral<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    integrate_complex(f, f64::NEG_INFINITY, f64::INFINITY, spec)
}

/// `∫_lo^hi f`, where either bound may be infinite.
pub fn integrate<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Integral<f64>>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_complex(|x| Complex64::new(f(x), 0.0), lo, hi, spec)?;
    Ok(Integral {
        value: r.value.re,
        error: r.error,
        evaluations: r.evaluations,
    })
}

pub fn integrate_complex<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Integral<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::InvalidSpec("integration bounds must not be NaN".into()));
    }
    if lo >= hi {
        return Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }

    // Substituted integrand g(x) = f(φ(x)) φ'(x) on [xlo, xhi].
    let (xlo, xhi, g): (f64, f64, Box<dyn Fn(f64) -> Complex64 + '_>) = match spec.transform {
        Transform::None => (lo, hi, Box::new(&f)),
        Transform::GaussianCentering { center, width } => (
            (lo - center) / width,
            (hi - center) / width,
            Box::new(move |x| f(center + width * x) * width),
        ),
        Transform::LogSubstitution { center, width } => {
            if lo < 0.0 {
                return Err(Error::InvalidSpec(
                    "log substitution requires a range inside [0, inf)".into(),
                ));
            }
            let ulo = if lo == 0.0 {
                f64::NEG_INFINITY
            } else {
                (lo.ln() - center) / width
            };
            let uhi = if hi.is_infinite() {
                f64::INFINITY
            } else {
                (hi.ln() - center) / width
            };
            (
                ulo,
                uhi,
                Box::new(move |x| {
                    let e = (center + width * x).exp();
                    if e == 0.0 || e.is_infinite() {
                        Complex64::new(0.0, 0.0)
                    } else {
                        f(e) * (e * width)
                    }
                }),
            )
        }
    };

    let mut panels = Vec::with_capacity(2);
    let split = if spec.transform == Transform::None {
        None
    } else {
        Some(0.0)
    };
    match split {
        Some(s) if xlo < s && s < xhi => {
            panels.push(Panel::new(xlo, s));
            panels.push(Panel::new(s, xhi));
        }
        _ => panels.push(Panel::new(xlo, xhi)),
    }

    adaptive(&*g, &panels, spec)
}

/// A piece of the substituted range, possibly unbounded on one side.
#[derive(Debug, Clone, Copy)]
enum Panel {
    Finite(f64, f64),
    /// `[a, ∞)` via `x = a + t/(1-t)`.
    Upper(f64),
    /// `(-∞, b]` via `x = b - t/(1-t)`.
    Lower(f64),
    /// `(-∞, ∞)` via `x = t/(1-t²)` on `(-1, 1)`.
    Whole,
}

impl Panel {
    fn new(a: f64, b: f64) -> Self {
        match (a.is_infinite(), b.is_infinite()) {
            (false, false) => Panel::Finite(a, b),
            (false, true) => Panel::Upper(a),
            (true, false) => Panel::Lower(b),
            (true, true) => Panel::Whole,
        }
    }

    fn domain(&self) -> (f64, f64) {
        match *self {
            Panel::Finite(a, b) => (a, b),
            Panel::Upper(_) | Panel::Lower(_) => (0.0, 1.0),
            Panel::Whole => (-1.0, 1.0),
        }
    }

    /// Returns `(x, dx/dt)`.
    fn map(&self, t: f64) -> (f64, f64) {
        match *self {
            Panel::Finite(..) => (t, 1.0),
            Panel::Upper(a) => {
                let r = 1.0 / (1.0 - t);
                (a + t * r, r * r)
            }
            Panel::Lower(b) => {
                let r = 1.0 / (1.0 - t);
                (b - t * r, r * r)
            }
            Panel::Whole => {
                let d = 1.0 / (1.0 - t * t);
                (t * d, (1.0 + t * t) * d * d)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    panel: usize,
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    splittable: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // unsplittable segments sink to the bottom of the heap
        self.splittable
            .cmp(&other.splittable)
            .then(self.error.total_cmp(&other.error))
    }
}

fn adaptive(g: &dyn Fn(f64) -> Complex64, panels: &[Panel], spec: &QuadratureSpec) -> Result<Integral<Complex64>> {
    let mut evaluations = 0usize;
    let mut eval_segment = |panel: usize, a: f64, b: f64| -> Result<Segment> {
        let p = panels[panel];
        let h = |t: f64| -> Result<Complex64> {
            let (x, jac) = p.map(t);
            let v = if jac.is_infinite() {
                Complex64::new(0.0, 0.0)
            } else {
                g(x) * jac
            };
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else if !x.is_finite() {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Err(Error::NonFiniteIntegrand { at: x })
            }
        };
        let (value, error) = gauss_kronrod_21(h, a, b)?;
        evaluations += 21;
        let mid = 0.5 * (a + b);
        let splittable = (b - a) > 1e-13 * (1.0 + mid.abs());
        Ok(Segment {
            panel,
            a,
            b,
            value,
            error,
            splittable,
        })
    };

    let mut heap = BinaryHeap::new();
    for (i, p) in panels.iter().enumerate() {
        let (a, b) = p.domain();
        heap.push(eval_segment(i, a, b)?);
    }

    loop {
        let (total, err) = heap
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| (v + s.value, e + s.error));
        let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
        if err <= tol {
            return Ok(Integral {
                value: total,
                error: err,
                evaluations,
            });
        }
        let worst = *heap.peek().expect("at least one segment");
        if heap.len() >= spec.max_subdivisions || !worst.splittable {
            return Err(Error::NonConvergence {
                subdivisions: heap.len(),
                estimate: err,
                tolerance: tol,
            });
        }
        heap.pop();
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(eval_segment(worst.panel, worst.a, mid)?);
        heap.push(eval_segment(worst.panel, mid, worst.b)?);
    }
}

// Gauss–Kronrod 10/21 abscissae and weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn gauss_kronrod_21<H>(h: H, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    H: Fn(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    let fc = h(center)?;
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut res_k = fc * WGK[10];
    for k in 0..10 {
        let dx = half * XGK[k];
        let f1 = h(center - dx)?;
        let f2 = h(center + dx)?;
        fv1[k] = f1;
        fv2[k] = f2;
        res_k += (f1 + f2) * WGK[k];
        if k % 2 == 1 {
            res_g += (f1 + f2) * WG[k / 2];
        }
    }

    let component_error = |part: fn(&Complex64) -> f64| -> f64 {
        let rk = part(&res_k);
        let mean = 0.5 * rk;
        let mut res_abs = WGK[10] * part(&fc).abs();
        let mut res_asc = WGK[10] * (part(&fc) - mean).abs();
        for k in 0..10 {
            let (f1, f2) = (part(&fv1[k]), part(&fv2[k]));
            res_abs += WGK[k] * (f1.abs() + f2.abs());
            res_asc += WGK[k] * ((f1 - mean).abs() + (f2 - mean).abs());
        }
        let err = ((rk - part(&res_g)) * half).abs();
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs())
    };
    let err_re = component_error(|z| z.re);
    let err_im = component_error(|z| z.im);

    Ok((res_k * half, err_re.hypot(err_im)))
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}
