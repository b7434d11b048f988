//! Run configuration: a JSON file, overridden field by field by flags.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use contspec::conventions::ConventionMode;
use contspec::Family;
use serde::Deserialize;

/// A configuration problem; always maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<contspec::Error> for ConfigError {
    fn from(e: contspec::Error) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Paper,
    Kernel,
    Auto,
}

impl From<Convention> for ConventionMode {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Paper => ConventionMode::Paper,
            Convention::Kernel => ConventionMode::Kernel,
            Convention::Auto => ConventionMode::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    Translation,
    Dilation,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Translation => Family::Translation,
            FamilyArg::Dilation => Family::Dilation,
        }
    }
}

/// A list of values written as `1.5`, `0.5,1,2`, `lo:hi:n` (linear) or
/// `log:lo:hi:n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Values(pub Vec<f64>);

impl std::str::FromStr for Values {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let number = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number"));
        let count = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{s}' is not a point count"))
        };
        let parts: Vec<&str> = text.split(':').collect();
        let values = match parts.as_slice() {
            ["log", lo, hi, n] => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                if !(lo > 0.0 && hi > 0.0) {
                    return Err(format!("log range needs positive bounds, got {lo}:{hi}"));
                }
                contspec::logspace(lo, hi, count(n)?)
            }
            [lo, hi, n] => contspec::linspace(number(lo)?, number(hi)?, count(n)?),
            [single] => single.split(',').map(number).collect::<Result<_, _>>()?,
            _ => return Err(format!("cannot read '{text}' as a value list")),
        };
        if values.is_empty() {
            return Err(format!("'{text}' gives an empty list"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("'{text}' contains a non-finite value"));
        }
        Ok(Values(values))
    }
}

impl<'de> Deserialize<'de> for Values {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            List(Vec<f64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Values(vec![x])),
            Raw::List(v) if !v.is_empty() => Ok(Values(v)),
            Raw::List(_) => Err(serde::de::Error::custom("empty value list")),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Flags shared by every subcommand. Every field is optional so that a
/// config file can supply it.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,

    /// Translation shape parameter α (a list for `scan`).
    #[arg(long)]
    pub alpha: Option<Values>,

    /// Dilation shape parameter β (a list for `scan`).
    #[arg(long)]
    pub beta: Option<Values>,

    /// Dilation factor λ, 0 < λ < 1.
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Translation step ε > 0.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Label s (a list for `verify` and `scan`).
    #[arg(long = "s")]
    pub s: Option<Values>,

    #[arg(long)]
    pub gamma: Option<f64>,

    #[arg(long)]
    pub omega: Option<f64>,

    /// Energy grid (`kernel`, `commutator`) or probe grid (`verify`, `moments`).
    #[arg(long)]
    pub grid: Option<Values>,

    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long, value_enum)]
    pub convention: Option<Convention>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for `scan` (0 = one per core).
    #[arg(long)]
    pub jobs: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl RunArgs {
    /// Reads the config file named by `--config`, if any, and lays the
    /// flags over it.
    pub fn resolve(self) -> Result<Resolved, ConfigError> {
        let mut base = match &self.config {
            Some(path) => read_config(path)?,
            None => RunArgs::default(),
        };
        let top = self;
        overlay!(base, top; family, alpha, beta, lambda, epsilon, s, gamma, omega, grid, tol, convention, format, out, jobs);
        Resolved::from_args(base)
    }
}

fn read_config(path: &Path) -> Result<RunArgs, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))
}

/// Fully resolved settings with defaults filled in.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub family: Family,
    /// α or β values.
    pub shape: Vec<f64>,
    /// ε or λ.
    pub step: f64,
    pub s: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub omega: f64,
    pub grid: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub convention: ConventionMode,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl Resolved {
    fn from_args(a: RunArgs) -> Result<Self, ConfigError> {
        let family: Family = a.family.map(Into::into).unwrap_or(match (&a.alpha, &a.beta) {
            (None, Some(_)) => Family::Dilation,
            _ => Family::Translation,
        });
        let (shape, foreign, step, foreign_step) = match family {
            Family::Translation => (a.alpha, a.beta.is_some(), a.epsilon.unwrap_or(0.5), a.lambda.is_some()),
            Family::Dilation => (a.beta, a.alpha.is_some(), a.lambda.unwrap_or(0.5), a.epsilon.is_some()),
        };
        if foreign || foreign_step {
            let which = match family {
                Family::Translation => "--beta/--lambda",
                Family::Dilation => "--alpha/--epsilon",
            };
            return Err(ConfigError(format!("{which} do not apply to the {family} family")));
        }
        let shape = shape.map(|v| v.0).unwrap_or_else(|| vec![1.0]);
        let (shape_name, step_name) = match family {
            Family::Translation => ("alpha", "epsilon"),
            Family::Dilation => ("beta", "lambda"),
        };
        for &v in &shape {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError(format!(
                    "invalid {shape_name} = {v}: {shape_name} must be > 0"
                )));
            }
        }
        match family {
            Family::Translation if !(step > 0.0 && step.is_finite()) => {
                return Err(ConfigError(format!(
                    "invalid {step_name} = {step}: epsilon must be > 0"
                )));
            }
            Family::Dilation if !(step > 0.0 && step < 1.0) => {
                return Err(ConfigError(format!(
                    "invalid {step_name} = {step}: lambda must satisfy 0 < lambda < 1"
                )));
            }
            _ => {}
        }
        let omega = a.omega.unwrap_or(1.0);
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(ConfigError(format!("invalid omega = {omega}: omega must be > 0")));
        }
        if a.gamma.is_some_and(|g| !g.is_finite()) {
            return Err(ConfigError("gamma must be finite".into()));
        }
        if let Some(tol) = a.tol {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(ConfigError(format!("invalid tol = {tol}: tol must be in (0, 1)")));
            }
        }
        if let Some(s) = &a.s {
            if let Some(bad) = s.0.iter().find(|&&v| v.is_nan() || v <= 0.0) {
                return Err(ConfigError(format!("invalid s = {bad}: s must be > 0")));
            }
        }
        Ok(Self {
            family,
            shape,
            step,
            s: a.s.map(|v| v.0),
            gamma: a.gamma,
            omega,
            grid: a.grid.map(|v| v.0),
            tol: a.tol,
            convention: a.convention.map(Into::into).unwrap_or_default(),
            format: a.format.unwrap_or(Format::Json),
            out: a.out,
            jobs: a.jobs.unwrap_or(0),
        })
    }

    /// The single shape value for commands that take one.
    pub fn single_shape(&self) -> Result<f64, ConfigError> {
        single(&self.shape, self.shape_name())
    }

    pub fn single_s(&self, default: f64) -> Result<f64, ConfigError> {
        match &self.s {
            Some(v) => single(v, "s"),
            None => Ok(default),
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self.family {
            Family::Translation => "alpha",
            Family::Dilation => "beta",
        }
    }

    pub fn quadrature(&self) -> contspec::numerics::QuadratureSpec {
        let spec = contspec::numerics::QuadratureSpec::default();
        match self.tol {
            Some(tol) => spec.with_tolerances(tol, (tol * 1e-2).min(spec.abs_tol)),
            None => spec,
        }
    }
}

fn single(values: &[f64], name: &str) -> Result<f64, ConfigError> {
    match values {
        [v] => Ok(*v),
        _ => Err(ConfigError(format!(
            "this command takes a single {name}, got {} values",
            values.len()
        ))),
    }
}
