//! The five subcommands. Each returns the rendered document and whether its
//! checks passed; nothing here touches the process exit code.

use std::collections::BTreeMap;

use contspec::axioms::{run_axiom_suite, SuiteConfig};
use contspec::conventions::{adjudicate, ConventionRecord};
use contspec::dilation::{self, DilationParams};
use contspec::kernel::KernelSample;
use contspec::ladder::{self, LadderOp, MultiplierRow};
use contspec::translation::{self, TranslationParams};
use contspec::{Error, Family};
use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, Format, Resolved};

/// Upper bound on the number of points `scan` accepts.
pub const MAX_SCAN_POINTS: usize = 100_000;

/// Bound on moment residuals reported by `moments`.
const MOMENT_THRESHOLD: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameters (exit 2).
    Config(String),
    /// A computation failed (exit 1).
    Failure(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::InvalidSpec(_)
            | Error::OutOfDomain(_)
            | Error::OutOfRange { .. }
            | Error::Unsupported(_) => CliError::Config(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Failure(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn render<T: Serialize, R: Serialize>(cfg: &Resolved, doc: &T, rows: &[R]) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => Ok(json(doc)),
        Format::Csv => csv(rows),
    }
}

fn params(cfg: &Resolved, shape: f64, s: f64, gamma: f64) -> BTreeMap<&'static str, f64> {
    let step = match cfg.family {
        Family::Translation => "epsilon",
        Family::Dilation => "lambda",
    };
    BTreeMap::from([
        (cfg.shape_name(), shape),
        (step, cfg.step),
        ("s", s),
        ("gamma", gamma),
        ("omega", cfg.omega),
    ])
}

fn conventions(cfg: &Resolved) -> Result<ConventionRecord, CliError> {
    let record = adjudicate(cfg.convention, &cfg.quadrature())?;
    for (name, entry) in &record.entries {
        debug!(
            "convention {name}: selected {} (decisive: {})",
            entry.selected, entry.decisive
        );
    }
    Ok(record)
}

fn annihilator(cfg: &Resolved, shape: f64, record: &ConventionRecord) -> Result<LadderOp, CliError> {
    Ok(match cfg.family {
        Family::Translation => TranslationParams::new(shape, 1.0, 0.0, cfg.step, cfg.omega)?.annihilator()?,
        Family::Dilation => DilationParams::new(shape, 1.0, 0.0, cfg.step, cfg.omega)?.annihilator(record.weight())?,
    })
}

#[derive(Serialize)]
struct VerdictRow<'a> {
    check: &'a str,
    pass: bool,
    worst: f64,
    threshold: f64,
    count: usize,
}

pub fn verify(cfg: &Resolved) -> Result<Outcome, CliError> {
    let mut suite = SuiteConfig::default_for(cfg.family);
    suite.shape = cfg.single_shape()?;
    suite.step = cfg.step;
    suite.omega = cfg.omega;
    if let Some(g) = cfg.gamma {
        suite.gamma = g;
    }
    if let Some(s) = &cfg.s {
        suite.s_values = s.clone();
    }
    if let Some(grid) = &cfg.grid {
        suite.probes = grid.clone();
    }
    suite.quadrature = cfg.quadrature();
    suite.convention = cfg.convention;
    info!("running {} suite, {} = {}", cfg.family, cfg.shape_name(), suite.shape);

    let report = run_axiom_suite(&suite)?;
    for (name, v) in &report.verdict {
        info!(
            "{name}: {} (worst {:e}, threshold {:e})",
            if v.pass { "pass" } else { "FAIL" },
            v.worst,
            v.threshold
        );
    }
    for (name, e) in &report.errors {
        log::warn!("{name} errored: {e}");
    }
    let body = match cfg.format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Csv => {
            let rows: Vec<VerdictRow> = report
                .verdict
                .iter()
                .map(|(k, v)| VerdictRow {
                    check: k,
                    pass: v.pass,
                    worst: v.worst,
                    threshold: v.threshold,
                    count: v.count,
                })
                .collect();
            csv(&rows)?
        }
    };
    Ok(Outcome {
        body,
        passed: report.passed(),
    })
}

#[derive(Serialize)]
struct KernelDoc<'a> {
    family: Family,
    params: BTreeMap<&'static str, f64>,
    samples: &'a [KernelSample],
}

pub fn kernel(cfg: &Resolved) -> Result<Outcome, CliError> {
    let shape = cfg.single_shape()?;
    let s = cfg.single_s(1.0)?;
    let gamma = cfg.gamma.unwrap_or(0.0);
    let (k, default_grid) = match cfg.family {
        Family::Translation => (
            TranslationParams::new(shape, s, gamma, cfg.step, cfg.omega)?
                .state()?
                .kernel(),
            contspec::linspace(0.0, 10.0, 201),
        ),
        Family::Dilation => (
            DilationParams::new(shape, s, gamma, cfg.step, cfg.omega)?
                .state()?
                .kernel(),
            contspec::logspace(1e-3, 20.0, 201),
        ),
    };
    let grid = cfg.grid.clone().unwrap_or(default_grid);
    if grid.iter().any(|&e| e < 0.0) {
        return Err(CliError::Config("energy grid must be >= 0".into()));
    }
    let samples = k.sample(&grid);
    let doc = KernelDoc {
        family: cfg.family,
        params: params(cfg, shape, s, gamma),
        samples: &samples,
    };
    Ok(Outcome {
        body: render(cfg, &doc, &samples)?,
        passed: true,
    })
}

#[derive(Serialize)]
struct CommutatorDoc<'a> {
    family: Family,
    params: BTreeMap<&'static str, f64>,
    weight_convention: &'a str,
    limit_normalization: f64,
    rows: &'a [MultiplierRow],
}

pub fn commutator(cfg: &Resolved) -> Result<Outcome, CliError> {
    let shape = cfg.single_shape()?;
    let record = conventions(cfg)?;
    let op = annihilator(cfg, shape, &record)?;
    let grid = cfg.grid.clone().unwrap_or_else(|| match cfg.family {
        Family::Translation => contspec::linspace(0.0, 10.0, 101),
        Family::Dilation => contspec::linspace(0.1, 10.0, 100),
    });
    if cfg.family == Family::Dilation && grid.iter().any(|&e| e <= 0.0) {
        return Err(CliError::Config("dilation energy grid must be > 0".into()));
    }
    let rows = ladder::multiplier_table(&op, 1.0, &grid)?;
    let weight = record.selected("dilation_weight").unwrap_or("kernel");
    let mut p = params(cfg, shape, 1.0, 0.0);
    p.remove("s");
    p.remove("gamma");
    let doc = CommutatorDoc {
        family: cfg.family,
        params: p,
        weight_convention: weight,
        limit_normalization: ladder::limit_normalization(&op)?,
        rows: &rows,
    };
    Ok(Outcome {
        body: render(cfg, &doc, &rows)?,
        passed: true,
    })
}

#[derive(Serialize)]
struct MomentRow {
    probe: f64,
    target: f64,
    residual: f64,
}

#[derive(Serialize)]
struct MomentDoc<'a> {
    family: Family,
    shape: f64,
    /// `E` for translation, `ln E` for dilation.
    probe_variable: &'static str,
    measure: &'a str,
    threshold: f64,
    rows: &'a [MomentRow],
}

pub fn moments(cfg: &Resolved) -> Result<Outcome, CliError> {
    let shape = cfg.single_shape()?;
    let spec = cfg.quadrature();
    let record = conventions(cfg)?;
    let (probes, variable) = match cfg.family {
        Family::Translation => (cfg.grid.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0, 5.0]), "E"),
        Family::Dilation => (cfg.grid.clone().unwrap_or_else(|| vec![-1.0, 0.0, 1.0, 2.0]), "lnE"),
    };
    let rows = probes
        .iter()
        .map(|&p| {
            let (target, residual) = match cfg.family {
                Family::Translation => ((shape * p * p).exp(), translation::moment_check(p, shape, &spec)?),
                Family::Dilation => (
                    (shape * p * p).exp(),
                    dilation::moment_residual(p, shape, record.measure(), &spec)?,
                ),
            };
            Ok(MomentRow {
                probe: p,
                target,
                residual,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let passed = rows.iter().all(|r| r.residual < MOMENT_THRESHOLD);
    let measure = match cfg.family {
        Family::Translation => "sigma(s) = erfc(-ln s/sqrt(alpha))/(2 alpha s)",
        Family::Dilation => record.selected("dilation_measure").unwrap_or("kernel"),
    };
    let doc = MomentDoc {
        family: cfg.family,
        shape,
        probe_variable: variable,
        measure,
        threshold: MOMENT_THRESHOLD,
        rows: &rows,
    };
    Ok(Outcome {
        body: render(cfg, &doc, &rows)?,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
struct ScanRow {
    shape: f64,
    s: f64,
    action: Option<f64>,
    action_derivative: Option<f64>,
    norm_residual: Option<f64>,
    eigen_residual: Option<f64>,
    round_trip: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Certificate {
    shape: f64,
    monotone: bool,
    detail: String,
}

#[derive(Serialize)]
struct ScanDoc<'a> {
    family: Family,
    shape_parameter: &'static str,
    points: usize,
    failed_points: usize,
    conventions: &'a ConventionRecord,
    monotonicity: &'a [Certificate],
    rows: &'a [ScanRow],
}

struct PointValues {
    action: f64,
    derivative: f64,
    norm_residual: f64,
    eigen_residual: f64,
    round_trip: f64,
}

fn scan_point(cfg: &Resolved, record: &ConventionRecord, shape: f64, s: f64) -> contspec::Result<PointValues> {
    let spec = cfg.quadrature();
    let gamma = cfg.gamma.unwrap_or(0.0);
    match cfg.family {
        Family::Translation => {
            let p = TranslationParams::new(shape, s, gamma, cfg.step, cfg.omega)?;
            let j = translation::action(s, shape)?;
            Ok(PointValues {
                action: j,
                derivative: translation::mean_energy_derivative(s, shape, 1.0, record.derivative())?,
                norm_residual: (p.state()?.kernel().norm_squared(&spec)? - 1.0).abs(),
                eigen_residual: translation::eigen_residual(&p, &contspec::linspace(0.0, 20.0, 401))?,
                round_trip: (translation::invert_action(j, shape)? - s).abs() / s,
            })
        }
        Family::Dilation => {
            let p = DilationParams::new(shape, s, gamma, cfg.step, cfg.omega)?;
            let j = dilation::action(s, shape)?;
            Ok(PointValues {
                action: j,
                derivative: dilation::action_derivative(s, shape)?,
                norm_residual: (p.state()?.kernel().norm_squared(&spec)? - 1.0).abs(),
                eigen_residual: dilation::lambda_class_residual(
                    &p,
                    record.weight(),
                    &contspec::logspace(1e-3, 20.0, 401),
                )?,
                round_trip: (dilation::invert_action(j, shape)? - s).abs() / s,
            })
        }
    }
}

fn certify(cfg: &Resolved, record: &ConventionRecord, shape: f64) -> Certificate {
    let result = match cfg.family {
        Family::Translation => translation::certify_monotone(shape, record.derivative()),
        Family::Dilation => contspec::logspace(1e-3, 1e3, 200).into_iter().try_for_each(|s| {
            let d = dilation::action_derivative(s, shape)?;
            if d > 0.0 {
                Ok(())
            } else {
                Err(Error::NotMonotone {
                    alpha: shape,
                    s,
                    derivative: d,
                })
            }
        }),
    };
    match result {
        Ok(()) => Certificate {
            shape,
            monotone: true,
            detail: "dJ/ds > 0 at 200 log-spaced s in [1e-3, 1e3]".into(),
        },
        Err(e) => Certificate {
            shape,
            monotone: false,
            detail: e.to_string(),
        },
    }
}

pub fn scan(cfg: &Resolved) -> Result<Outcome, CliError> {
    let s_values = cfg.s.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
    let shapes = cfg.shape.clone();
    let points: Vec<(f64, f64)> = shapes
        .iter()
        .flat_map(|&a| s_values.iter().map(move |&s| (a, s)))
        .collect();
    if points.len() > MAX_SCAN_POINTS {
        return Err(CliError::Config(format!(
            "scan grid has {} points, more than the limit of {MAX_SCAN_POINTS}",
            points.len()
        )));
    }
    let record = conventions(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    info!(
        "scanning {} points on {} threads",
        points.len(),
        pool.current_num_threads()
    );

    // par_iter + collect keeps grid order regardless of scheduling
    let rows: Vec<ScanRow> = pool.install(|| {
        points
            .par_iter()
            .map(|&(shape, s)| match scan_point(cfg, &record, shape, s) {
                Ok(v) => ScanRow {
                    shape,
                    s,
                    action: Some(v.action),
                    action_derivative: Some(v.derivative),
                    norm_residual: Some(v.norm_residual),
                    eigen_residual: Some(v.eigen_residual),
                    round_trip: Some(v.round_trip),
                    error: None,
                },
                Err(e) => ScanRow {
                    shape,
                    s,
                    action: None,
                    action_derivative: None,
                    norm_residual: None,
                    eigen_residual: None,
                    round_trip: None,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    });
    let certificates: Vec<Certificate> =
        pool.install(|| shapes.par_iter().map(|&a| certify(cfg, &record, a)).collect());
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let doc = ScanDoc {
        family: cfg.family,
        shape_parameter: cfg.shape_name(),
        points: rows.len(),
        failed_points: failed,
        conventions: &record,
        monotonicity: &certificates,
        rows: &rows,
    };
    Ok(Outcome {
        body: render(cfg, &doc, &rows)?,
        passed: true,
    })
}
