//! Library half of the `epscope` command-line tool: a serializable run
//! configuration, deterministic renderers for CSV and JSON, and the
//! dispatcher that turns a configuration into an output document.
//!
//! Output is byte-identical across runs and worker counts: rows are computed
//! into an index-ordered buffer (parallel workers write disjoint slices) and
//! serialized by a single writer. Floating-point cells print with Rust's
//! shortest round-trip formatting, so every value re-parses to the same bits.


use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use epscope::counting::{n_eps_open, n_solutions, w_polynomial, w_roots, SystemShape};
use epscope::eplocator::{locate_ep_numeric, prototype_ep_records, PrototypeSelfEnergy};
use epscope::expansion::puiseux_coefficients_prototype;
use epscope::model::{finite_chain_matrix, ModelParams, RiemannSheet, Sign};
use epscope::qpt::{correlation, observables, CriticalSide};
use epscope::spectrum::{eigenvalues, spectral_pair, thresholds, SpectralPair};
use epscope::topology::{encircle_loops, winding_period, ContourSpec, Permutation};

/// Errors of the front end, mapped onto exit codes by `main`.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, grids, or option combinations (exit 2).
    Config(String),
    /// The computation itself failed (exit 3).
    Numeric(epscope::Error),
    /// Output could not be written (exit 1).
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(err) => write!(f, "numeric failure: {err}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl From<epscope::Error> for CliError {
    fn from(err: epscope::Error) -> Self {
        CliError::Numeric(err)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    /// Machine-readable error record for stderr.
    pub fn record(&self) -> String {
        let (kind, detail) = match self {
            CliError::Config(msg) => ("config", msg.clone()),
            CliError::Numeric(err) => ("numeric", err.to_string()),
            CliError::Io(err) => ("io", err.to_string()),
        };
        format!(
            "{{\"error\":{{\"kind\":\"{kind}\",\"detail\":{}}}}}",
            serde_json::to_string(&detail).expect("string encodes")
        )
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Inclusive grid min:max:count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn parse(text: &str) -> CliResult<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = |msg: &str| CliError::Config(format!("grid '{text}': {msg}"));
        let grid = match parts.as_slice() {
            [single] => {
                let v: f64 = single.parse().map_err(|_| bad("not a number"))?;
                Grid {
                    min: v,
                    max: v,
                    count: 1,
                }
            }
            [min, max, count] => Grid {
                min: min.parse().map_err(|_| bad("bad min"))?,
                max: max.parse().map_err(|_| bad("bad max"))?,
                count: count.parse().map_err(|_| bad("bad count"))?,
            },
            _ => return Err(bad("expected value or min:max:count")),
        };
        if !(grid.min.is_finite() && grid.max.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if grid.count < 1 {
            return Err(bad("count must be at least 1"));
        }
        if grid.min > grid.max {
            return Err(bad("min must not exceed max"));
        }
        Ok(grid)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Sign {
    fn from(side: SideArg) -> Sign {
        match side {
            SideArg::Plus => Sign::Plus,
            SideArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SheetArg {
    First,
    Second,
}

impl From<SheetArg> for RiemannSheet {
    fn from(sheet: SheetArg) -> RiemannSheet {
        match sheet {
            SheetArg::First => RiemannSheet::First,
            SheetArg::Second => RiemannSheet::Second,
        }
    }
}

/// One fully resolved run. JSON outputs embed this block, so any emitted
/// document can be re-run as a fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum RunConfig {
    Spectrum {
        g: f64,
        eps_d: Grid,
        format: OutputFormat,
    },
    Ep {
        g: f64,
        newton: bool,
        format: OutputFormat,
    },
    Puiseux {
        g: f64,
        side: SideArg,
        order: usize,
        format: OutputFormat,
    },
    Winding {
        g: f64,
        eps_d: f64,
        center_re: f64,
        center_im: f64,
        radius: f64,
        sheet: SheetArg,
        points: usize,
        format: OutputFormat,
    },
    Encircle {
        g: f64,
        delta: f64,
        steps: usize,
        loops: usize,
        format: OutputFormat,
    },
    Count {
        nd: u32,
        nc: u32,
        format: OutputFormat,
    },
    Wroots {
        eps_d: f64,
        g: f64,
        f: f64,
        format: OutputFormat,
    },
    Correlation {
        g: f64,
        eps_d: f64,
        x_max: u32,
        format: OutputFormat,
    },
    Qpt {
        g: f64,
        eps_d: Grid,
        format: OutputFormat,
    },
    Oracle {
        g: f64,
        eps_d: f64,
        sizes: Vec<usize>,
        format: OutputFormat,
    },
}

impl RunConfig {
    pub fn format(&self) -> OutputFormat {
        match self {
            RunConfig::Spectrum { format, .. }
            | RunConfig::Ep { format, .. }
            | RunConfig::Puiseux { format, .. }
            | RunConfig::Winding { format, .. }
            | RunConfig::Encircle { format, .. }
            | RunConfig::Count { format, .. }
            | RunConfig::Wroots { format, .. }
            | RunConfig::Correlation { format, .. }
            | RunConfig::Qpt { format, .. }
            | RunConfig::Oracle { format, .. } => *format,
        }
    }
}

/// A rendered table: header plus string cells, already in output order.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json_rows(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row.iter())
                    .map(|(col, cell)| (col.to_string(), cell_to_json(cell)))
                    .collect();
                serde_json::Value::Object(object)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn cell_to_json(cell: &str) -> serde_json::Value {
    if cell.is_empty() {
        serde_json::Value::Null
    } else if let Ok(n) = cell.parse::<i64>() {
        serde_json::Value::Number(n.into())
    } else if let Ok(x) = cell.parse::<f64>() {
        serde_json::Number::from_f64(x)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    } else {
        serde_json::Value::String(cell.to_string())
    }
}

fn fmt_f64(x: f64) -> String {
    // shortest round-trip representation; negative zero folds to zero
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Worker cap: EPSCOPE_THREADS when set, otherwise the available
/// parallelism.
pub fn worker_cap() -> CliResult<usize> {
    match std::env::var("EPSCOPE_THREADS") {
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Config(format!(
                "EPSCOPE_THREADS must be a positive integer, got '{raw}'"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

/// Order-preserving parallel map over a slice, capped at `workers` threads.
fn parallel_map<T, U, F>(items: &[T], workers: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let n = items.len();
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 || n < 2 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<U>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (items_chunk, out_chunk) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(|| {
                for (item, slot) in items_chunk.iter().zip(out_chunk.iter_mut()) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    out.into_iter().map(|slot| slot.expect("filled")).collect()
}

/// Execute a configuration and render its output document.
pub fn run(config: &RunConfig) -> CliResult<String> {
    let workers = worker_cap()?;
    let table = match config {
        RunConfig::Spectrum { g, eps_d, .. } => spectrum_table(*g, eps_d, workers),
        RunConfig::Ep { g, newton, .. } => ep_table(*g, *newton)?,
        RunConfig::Puiseux { g, side, order, .. } => puiseux_table(*g, *side, *order)?,
        RunConfig::Winding {
            g,
            eps_d,
            center_re,
            center_im,
            radius,
            sheet,
            points,
            ..
        } => winding_table(*g, *eps_d, *center_re, *center_im, *radius, *sheet, *points)?,
        RunConfig::Encircle {
            g,
            delta,
            steps,
            loops,
            ..
        } => encircle_table(*g, *delta, *steps, *loops)?,
        RunConfig::Count { nd, nc, .. } => count_table(*nd, *nc)?,
        RunConfig::Wroots { eps_d, g, f, .. } => wroots_table(*eps_d, *g, *f)?,
        RunConfig::Correlation { g, eps_d, x_max, .. } => correlation_table(*g, *eps_d, *x_max)?,
        RunConfig::Qpt { g, eps_d, .. } => qpt_table(*g, eps_d, workers)?,
        RunConfig::Oracle { g, eps_d, sizes, .. } => oracle_table(*g, *eps_d, sizes, workers)?,
    };
    Ok(match config.format() {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => {
            let document = serde_json::json!({
                "config": config,
                "rows": table.to_json_rows(),
            });
            let mut text =
                serde_json::to_string_pretty(&document).expect("document serializes");
            text.push('\n');
            text
        }
    })
}

fn pair_cells(pair: &SpectralPair) -> Vec<String> {
    vec![
        fmt_f64(pair.minus.z.re),
        fmt_f64(pair.minus.z.im),
        fmt_f64(pair.plus.z.re),
        fmt_f64(pair.plus.z.im),
        fmt_f64(pair.minus.k.re),
        fmt_f64(pair.minus.k.im),
        fmt_f64(pair.plus.k.re),
        fmt_f64(pair.plus.k.im),
        pair.minus.label.as_str().to_string(),
        pair.plus.label.as_str().to_string(),
        String::new(),
    ]
}

fn spectrum_table(g: f64, grid: &Grid, workers: usize) -> Table {
    let points = grid.points();
    let rows = parallel_map(&points, workers, |&eps_d| {
        let mut cells = vec![fmt_f64(eps_d)];
        match spectral_pair(&ModelParams::new(eps_d, g)) {
            Ok(pair) => cells.extend(pair_cells(&pair)),
            Err(err) => {
                cells.extend(std::iter::repeat_n(String::new(), 10));
                cells.push(err.to_string());
            }
        }
        cells
    });
    Table {
        columns: vec![
            "eps_d",
            "re_z_minus",
            "im_z_minus",
            "re_z_plus",
            "im_z_plus",
            "re_k_minus",
            "im_k_minus",
            "re_k_plus",
            "im_k_plus",
            "label_minus",
            "label_plus",
            "flag",
        ],
        rows,
    }
}

fn ep_table(g: f64, newton: bool) -> CliResult<Table> {
    let (plus, minus) = prototype_ep_records(g)?;
    let mut rows = Vec::new();
    for (side, record) in [("plus", &plus), ("minus", &minus)] {
        rows.push(vec![
            "closed-form".to_string(),
            side.to_string(),
            fmt_f64(record.eps_bar.re),
            fmt_f64(record.eps_bar.im),
            fmt_f64(record.z_center.re),
            fmt_f64(record.z_center.im),
            record.period.to_string(),
            sign_str(record.sign_q).to_string(),
            record.factor.to_string(),
        ]);
    }
    if newton {
        let sigma = PrototypeSelfEnergy { g };
        for (side, guess) in [("plus", 1.5), ("minus", -1.5)] {
            let record = locate_ep_numeric(
                &sigma,
                RiemannSheet::Second,
                Complex64::new(guess, 0.0),
                1e-12,
                100,
            )?;
            rows.push(vec![
                "newton".to_string(),
                side.to_string(),
                fmt_f64(record.eps_bar.re),
                fmt_f64(record.eps_bar.im),
                fmt_f64(record.z_center.re),
                fmt_f64(record.z_center.im),
                record.period.to_string(),
                sign_str(record.sign_q).to_string(),
                record.factor.to_string(),
            ]);
        }
    }
    Ok(Table {
        columns: vec![
            "method",
            "side",
            "eps_bar_re",
            "eps_bar_im",
            "z_center_re",
            "z_center_im",
            "period",
            "sign_q",
            "factor",
        ],
        rows,
    })
}

fn sign_str(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

fn puiseux_table(g: f64, side: SideArg, order: usize) -> CliResult<Table> {
    let series = puiseux_coefficients_prototype(side.into(), g, order)?;
    let rows = series
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, beta)| {
            vec![
                (i + 1).to_string(),
                fmt_f64(beta.re),
                fmt_f64(beta.im),
                fmt_f64(series.z_center.re),
                fmt_f64(series.ep.eps_bar.re),
                series.period.to_string(),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec!["l", "beta_re", "beta_im", "z_center", "eps_bar", "period"],
        rows,
    })
}

#[allow(clippy::too_many_arguments)]
fn winding_table(
    g: f64,
    eps_d: f64,
    center_re: f64,
    center_im: f64,
    radius: f64,
    sheet: SheetArg,
    points: usize,
    ) -> CliResult<Table> {
    let params = ModelParams::new(eps_d, g);
    let contour =
        ContourSpec::new(Complex64::new(center_re, center_im), radius, sheet.into())
            .with_points(points);
    let (p, residual) = winding_period(&contour, &params)?;
    Ok(Table {
        columns: vec![
            "p",
            "residual",
            "center_re",
            "center_im",
            "radius",
            "sheet",
            "points",
        ],
        rows: vec![vec![
            p.to_string(),
            fmt_f64(residual),
            fmt_f64(center_re),
            fmt_f64(center_im),
            fmt_f64(radius),
            match sheet {
                SheetArg::First => "first".to_string(),
                SheetArg::Second => "second".to_string(),
            },
            points.to_string(),
        ]],
    })
}

fn encircle_table(g: f64, delta: f64, steps: usize, loops: usize) -> CliResult<Table> {
    let permutation = encircle_loops(Sign::Plus, g, delta, steps, loops)?;
    let single = encircle_loops(Sign::Plus, g, delta, steps, 1)?;
    Ok(Table {
        columns: vec!["permutation", "loops_to_identity", "loops", "steps", "delta"],
        rows: vec![vec![
            match permutation {
                Permutation::Swap => "swap".to_string(),
                Permutation::Identity => "identity".to_string(),
            },
            single.order().to_string(),
            loops.to_string(),
            steps.to_string(),
            fmt_f64(delta),
        ]],
    })
}

fn count_table(nd: u32, nc: u32) -> CliResult<Table> {
    let shape = SystemShape::new(nd, nc)?;
    Ok(Table {
        columns: vec!["n_d", "n_c", "n_solutions", "n_eps"],
        rows: vec![vec![
            nd.to_string(),
            nc.to_string(),
            n_solutions(shape).to_string(),
            n_eps_open(shape).to_string(),
        ]],
    })
}

fn wroots_table(eps_d: f64, g: f64, f: f64) -> CliResult<Table> {
    let params = ModelParams::with_f(Complex64::new(eps_d, 0.0), g, f);
    let poly = w_polynomial(&params);
    let degree = poly.degree();
    let roots = w_roots(&poly.coefficients)?;
    let rows = roots
        .iter()
        .map(|root| {
            vec![
                fmt_f64(root.w.re),
                fmt_f64(root.w.im),
                fmt_f64(root.z.re),
                fmt_f64(root.z.im),
                degree.to_string(),
                poly.trimmed.to_string(),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec!["w_re", "w_im", "z_re", "z_im", "degree", "trimmed"],
        rows,
    })
}

fn correlation_table(g: f64, eps_d: f64, x_max: u32) -> CliResult<Table> {
    let params = ModelParams::new(eps_d, g);
    let rows = (0..=x_max)
        .map(|x| {
            let value = correlation(x, &params)?;
            Ok(vec![
                x.to_string(),
                fmt_f64(value.re),
                fmt_f64(value.im),
                fmt_f64(value.norm()),
                fmt_f64(value.arg()),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        columns: vec!["x", "re_c", "im_c", "modulus", "phase"],
        rows,
    })
}

fn qpt_table(g: f64, grid: &Grid, workers: usize) -> CliResult<Table> {
    let points = grid.points();
    let rows = parallel_map(&points, workers, |&eps_d| {
        let mut cells = vec![fmt_f64(eps_d)];
        match observables(&ModelParams::new(eps_d, g)) {
            Ok(obs) => {
                cells.push(fmt_f64(obs.gamma));
                cells.push(obs.gap.map(fmt_f64).unwrap_or_default());
                cells.push(obs.xi_inverse.map(fmt_f64).unwrap_or_default());
                cells.push(obs.xi_inverse.map(fmt_f64).unwrap_or_default());
                cells.push(
                    match obs.side {
                        CriticalSide::Critical => "critical",
                        CriticalSide::NonCritical => "non-critical",
                        CriticalSide::AtEp => "at-ep",
                    }
                    .to_string(),
                );
                cells.push(String::new());
            }
            Err(err) => {
                cells.extend(std::iter::repeat_n(String::new(), 5));
                cells.push(err.to_string());
            }
        }
        cells
    });
    Ok(Table {
        columns: vec!["eps_d", "gamma", "gap", "phi_res", "xi_inv", "side", "flag"],
        rows,
    })
}

fn oracle_table(g: f64, eps_d: f64, sizes: &[usize], workers: usize) -> CliResult<Table> {
    if sizes.is_empty() {
        return Err(CliError::Config("oracle needs at least one size".into()));
    }
    let params = ModelParams::new(eps_d, g);
    let (closed_form, _) = eigenvalues(&params)?;
    let tops = parallel_map(sizes, workers, |&n| {
        finite_chain_matrix(n, &params).map(|chain| chain.top_eigenvalue())
    });
    let mut rows = Vec::with_capacity(sizes.len());
    for (&n, top) in sizes.iter().zip(tops) {
        let top = top?;
        rows.push(vec![
            n.to_string(),
            fmt_f64(top),
            fmt_f64(closed_form.re),
            fmt_f64((top - closed_form.re).abs()),
        ]);
    }
    Ok(Table {
        columns: vec!["n_sites", "top_eigenvalue", "closed_form", "abs_error"],
        rows,
    })
}

/// Thresholds summary used by the CLI help epilog and tests.
pub fn describe_thresholds(g: f64) -> String {
    let t = thresholds(g);
    format!(
        "eps_delta = ±{}, eps_bar = ±{}{}",
        fmt_f64(t.eps_delta_plus),
        fmt_f64(if t.eps_bar_real {
            t.eps_bar_plus.re
        } else {
            t.eps_bar_plus.im
        }),
        if t.eps_bar_real { "" } else { "i" }
    )
}
