//! Command-line pipelines over `fxrp-core`.
//!
//! Every subcommand builds its artifacts in memory first and only then writes
//! them, together with a JSON manifest recording inputs, their SHA-256
//! digests and every resolved parameter. If any write fails, files already
//! written by the run are removed again.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use chrono::{Days, NaiveDate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use fxrp_core::autoreg::{self, fit_trend_ar, SIMULATION_START};
use fxrp_core::recurrence::{self, recurrence_plot, RecurrencePlot, ThresholdMode};
use fxrp_core::render::{self, Colormap, RenderOptions};
use fxrp_core::series::{self, format_sig17, DEFAULT_DATE_FORMAT};
use fxrp_core::stats;
use fxrp_core::texture::{detect_transitions, TransitionParams};
use fxrp_core::{ArModel64, EmbeddingConfig, GapMode, GapPolicy, TimeSeries64};

#[derive(Debug, Parser)]
#[command(name = "fxrp", version, about = "Recurrence plots, AR forecasts and texture transitions for dated series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binary recurrence plot (PNG) and 0/1 text grid.
    Rp(RpArgs),
    /// Distance-colored recurrence plot (PNG).
    Distplot(DistplotArgs),
    /// Two binary recurrence plots overlaid in one image.
    Overlay(OverlayArgs),
    /// Fit an AR(p) model and forecast.
    Ar(ArArgs),
    /// Fit a polynomial trend, optionally with AR residuals, and forecast.
    Trend(TrendArgs),
    /// Detect texture transitions.
    Transitions(TransitionsArgs),
    /// Simulate a series from an AR model JSON file.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GapModeArg {
    ForwardFill,
    Drop,
    Error,
}

impl From<GapModeArg> for GapMode {
    fn from(m: GapModeArg) -> Self {
        match m {
            GapModeArg::ForwardFill => GapMode::ForwardFill,
            GapModeArg::Drop => GapMode::Drop,
            GapModeArg::Error => GapMode::Error,
        }
    }
}

/// How a series CSV is read and regularized.
#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value = "date")]
    pub date_column: String,
    /// Defaults to the first column that is not the date column.
    #[arg(long)]
    pub value_column: Option<String>,
    /// chrono format string for the date column.
    #[arg(long, default_value = DEFAULT_DATE_FORMAT)]
    pub date_format: String,
    #[arg(long, value_enum, default_value = "forward-fill")]
    pub gap_policy: GapModeArg,
    #[arg(long, default_value_t = 7)]
    pub max_gap_days: u32,
    /// Keep observations on or after this date.
    #[arg(long)]
    pub start: Option<NaiveDate>,
    /// Keep observations on or before this date.
    #[arg(long)]
    pub end: Option<NaiveDate>,
}

#[derive(Debug, Clone, Args)]
pub struct EmbeddingArgs {
    #[arg(long = "embedding-dimension", default_value_t = 1)]
    pub dimension: usize,
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RpArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// PNG path; defaults to `<input stem>.rp.png` beside the input.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Text grid path; defaults to the PNG path with a `.txt` extension.
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    /// Sliding window for a local threshold; 0 uses the whole-series threshold.
    #[arg(long, default_value_t = 0)]
    pub local_threshold_window: usize,
    #[arg(long, default_value_t = 1)]
    pub cell_pixels: u32,
}

#[derive(Debug, Clone, Args)]
pub struct DistplotArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the distance matrix as CSV.
    #[arg(long)]
    pub distances_out: Option<PathBuf>,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    /// `vra` or `gray`.
    #[arg(long, default_value = "vra")]
    pub colormap: String,
    #[arg(long, default_value_t = 1)]
    pub cell_pixels: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OverlayArgs {
    #[arg(long)]
    pub input_a: PathBuf,
    #[arg(long)]
    pub input_b: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    #[arg(long, default_value_t = 0)]
    pub local_threshold_window: usize,
    /// Restrict both series to their common date range before comparing lengths.
    #[arg(long)]
    pub clip_to_common_range: bool,
    #[arg(long, default_value_t = 1)]
    pub cell_pixels: u32,
}

#[derive(Debug, Clone, Args)]
pub struct ArArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub order: usize,
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,
    /// Model JSON path; defaults to `<input stem>.ar.json`.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Forecast CSV path; defaults to `<input stem>.forecast.csv`.
    #[arg(long)]
    pub forecast_out: Option<PathBuf>,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrendArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Fit AR(p) on the detrended residuals.
    #[arg(long)]
    pub ar_order: Option<usize>,
    /// Forecast steps; 0 skips the forecast.
    #[arg(long, default_value_t = 0)]
    pub horizon: usize,
    /// JSON path; defaults to `<input stem>.trend.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Forecast CSV path; defaults to `<input stem>.trend-forecast.csv`.
    #[arg(long)]
    pub forecast_out: Option<PathBuf>,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TransitionsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Report JSON path; defaults to `<input stem>.transitions.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    pub window: usize,
    #[arg(long, default_value_t = 0.5)]
    pub score_threshold: f64,
    /// Defaults to the window.
    #[arg(long)]
    pub min_separation: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub local_threshold_window: usize,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// AR model JSON: `{"c": .., "rho": [..], "p": .., "noise_std": ..}`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, short = 'n')]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated starting values, one per lag; defaults to zeros.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub initial: Option<Vec<f64>>,
    #[arg(long, default_value_t = SIMULATION_START)]
    pub start_date: NaiveDate,
}

/// Files a run produced and text meant for stdout.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub written: Vec<PathBuf>,
    pub stdout: String,
}

struct Input {
    path: PathBuf,
    text: String,
}

impl Input {
    fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Ok(Self {
            path: path.to_path_buf(),
            text,
        })
    }

    fn manifest_entry(&self) -> Value {
        json!({
            "path": self.path.display().to_string(),
            "sha256": sha256_hex(self.text.as_bytes()),
            "bytes": self.text.len(),
        })
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Artifacts of one run, not yet on disk.
struct Plan {
    subcommand: &'static str,
    inputs: Vec<Value>,
    parameters: Value,
    summary: Value,
    artifacts: Vec<(PathBuf, Vec<u8>)>,
    stdout: String,
}

impl Plan {
    fn new(subcommand: &'static str) -> Self {
        Self {
            subcommand,
            inputs: Vec::new(),
            parameters: json!({}),
            summary: json!({}),
            artifacts: Vec::new(),
            stdout: String::new(),
        }
    }

    fn add(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.artifacts.push((path, bytes));
    }

    fn manifest(&self) -> Value {
        let outputs: Vec<Value> = self
            .artifacts
            .iter()
            .map(|(p, b)| json!({"path": p.display().to_string(), "sha256": sha256_hex(b)}))
            .collect();
        json!({
            "tool": "fxrp",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "summary": self.summary,
            "outputs": outputs,
        })
    }

    /// Writes every artifact plus `<first artifact>.manifest.json`.
    fn commit(mut self) -> Result<RunOutcome> {
        let primary = self
            .artifacts
            .first()
            .map(|(p, _)| p.clone())
            .ok_or_else(|| anyhow!("run produced no artifacts"))?;
        let mut manifest = serde_json::to_vec_pretty(&self.manifest())?;
        manifest.push(b'\n');
        self.artifacts.push((manifest_path(&primary), manifest));

        let mut written = Vec::new();
        for (path, bytes) in &self.artifacts {
            if let Err(e) = fs::write(path, bytes) {
                for done in &written {
                    let _ = fs::remove_file(done);
                }
                return Err(e).with_context(|| format!("cannot write {}", path.display()));
            }
            written.push(path.clone());
        }
        Ok(RunOutcome {
            written,
            stdout: self.stdout,
        })
    }
}

pub fn manifest_path(artifact: &Path) -> PathBuf {
    let mut name = artifact.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    artifact.with_file_name(name)
}

/// `<dir of input>/<input stem><suffix>`.
fn beside(input: &Path, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    input.with_file_name(format!("{stem}{suffix}"))
}

impl SeriesArgs {
    fn policy(&self) -> Result<GapPolicy> {
        Ok(GapPolicy::new(self.gap_policy.into(), self.max_gap_days)?)
    }

    fn load(&self, input: &Input) -> Result<TimeSeries64> {
        let value_column = match &self.value_column {
            Some(c) => c.clone(),
            None => series::csv_headers(&input.text)?
                .into_iter()
                .find(|h| *h != self.date_column)
                .ok_or_else(|| anyhow!("{}: no value column besides {:?}", input.path.display(), self.date_column))?,
        };
        let raw: TimeSeries64 =
            series::parse_csv(&input.text, &self.date_column, &value_column, &self.date_format)
                .with_context(|| format!("reading {}", input.path.display()))?;
        let mut s = series::regularize(&raw, &self.policy()?)
            .with_context(|| format!("regularizing {}", input.path.display()))?;
        if self.start.is_some() || self.end.is_some() {
            let start = self.start.unwrap_or(s.start_date());
            let end = self.end.unwrap_or(s.end_date());
            s = series::slice_by_date(&s, start, end)?;
        }
        Ok(s)
    }

    fn manifest(&self, loaded: &TimeSeries64) -> Value {
        json!({
            "date_column": self.date_column,
            "value_column": loaded.label(),
            "date_format": self.date_format,
            "gap_policy": {"mode": GapMode::from(self.gap_policy), "max_gap_days": self.max_gap_days},
            "start": self.start,
            "end": self.end,
        })
    }
}

impl EmbeddingArgs {
    fn config(&self) -> Result<EmbeddingConfig> {
        Ok(EmbeddingConfig::new(self.dimension, self.delay)?)
    }
}

fn threshold_manifest(mode: ThresholdMode) -> Value {
    match mode {
        ThresholdMode::Global => json!({"mode": "global"}),
        ThresholdMode::Local { window } => json!({"mode": "local", "window": window}),
    }
}

fn series_summary(s: &TimeSeries64) -> Value {
    json!({
        "observations": s.len(),
        "first_date": s.start_date(),
        "last_date": s.end_date(),
    })
}

fn plot_summary(s: &TimeSeries64, plot: &RecurrencePlot<f64>) -> Value {
    json!({
        "series": series_summary(s),
        "matrix_size": plot.matrix.size(),
        "threshold": plot.matrix.threshold_used(),
        "recurrence_rate": recurrence::recurrence_rate(&plot.matrix),
    })
}

fn render_options(cell_pixels: u32) -> RenderOptions {
    RenderOptions {
        cell_pixels,
        ..RenderOptions::default()
    }
}

fn options_manifest(o: &RenderOptions) -> Value {
    json!({
        "cell_pixels": o.cell_pixels,
        "colormap": {"name": o.colormap.name, "anchors": o.colormap.anchors()},
        "foreground": o.foreground,
        "background": o.background,
        "color_a": o.color_a,
        "color_b": o.color_b,
        "color_both": o.color_both,
        "max_pixels": o.max_pixels,
        "origin": "bottom-left",
    })
}

fn plan_rp(args: &RpArgs) -> Result<Plan> {
    let input = Input::read(&args.input)?;
    let s = args.series.load(&input)?;
    let config = args.embedding.config()?;
    let mode = ThresholdMode::from_window(args.local_threshold_window);
    let plot = recurrence_plot(&s, config, mode)?;
    let options = render_options(args.cell_pixels);
    let png = render::render_binary(&plot.matrix, &options)?.encode_png()?;

    let out = args.out.clone().unwrap_or_else(|| beside(&args.input, ".rp.png"));
    let grid = args.grid_out.clone().unwrap_or_else(|| out.with_extension("txt"));
    let mut plan = Plan::new("rp");
    plan.inputs.push(input.manifest_entry());
    plan.parameters = json!({
        "series": args.series.manifest(&s),
        "embedding": config,
        "threshold": threshold_manifest(mode),
        "render": options_manifest(&options),
    });
    plan.summary = plot_summary(&s, &plot);
    plan.add(out, png);
    plan.add(grid, plot.matrix.to_text_grid().into_bytes());
    Ok(plan)
}

fn plan_distplot(args: &DistplotArgs) -> Result<Plan> {
    let input = Input::read(&args.input)?;
    let s = args.series.load(&input)?;
    let config = args.embedding.config()?;
    let states = recurrence::embed(&s, config)?;
    let distances = recurrence::distance_matrix(&states);
    let options = RenderOptions {
        colormap: Colormap::named(&args.colormap)?,
        ..render_options(args.cell_pixels)
    };
    let png = render::render_distance(&distances, &options)?.encode_png()?;

    let mut plan = Plan::new("distplot");
    plan.inputs.push(input.manifest_entry());
    plan.parameters = json!({
        "series": args.series.manifest(&s),
        "embedding": config,
        "normalization": "per-matrix maximum",
        "render": options_manifest(&options),
    });
    plan.summary = json!({
        "series": series_summary(&s),
        "matrix_size": distances.size(),
        "max_distance": distances.max(),
    });
    plan.add(args.out.clone().unwrap_or_else(|| beside(&args.input, ".dist.png")), png);
    if let Some(path) = &args.distances_out {
        plan.add(path.clone(), distances.to_csv().into_bytes());
    }
    Ok(plan)
}

fn plan_overlay(args: &OverlayArgs) -> Result<Plan> {
    let input_a = Input::read(&args.input_a)?;
    let input_b = Input::read(&args.input_b)?;
    let mut a = args.series.load(&input_a)?;
    let mut b = args.series.load(&input_b)?;
    if args.clip_to_common_range {
        let start = a.start_date().max(b.start_date());
        let end = a.end_date().min(b.end_date());
        a = series::slice_by_date(&a, start, end).context("clipping series A to the common range")?;
        b = series::slice_by_date(&b, start, end).context("clipping series B to the common range")?;
    }
    if a.len() != b.len() {
        let err = fxrp_core::Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        };
        bail!("{err} (regularized lengths differ; pass --clip-to-common-range to intersect the date ranges)");
    }
    let config = args.embedding.config()?;
    let mode = ThresholdMode::from_window(args.local_threshold_window);
    let plot_a = recurrence_plot(&a, config, mode)?;
    let plot_b = recurrence_plot(&b, config, mode)?;
    let ov = recurrence::overlay(&plot_a.matrix, &plot_b.matrix)?;
    let options = render_options(args.cell_pixels);
    let png = render::render_overlay(&ov, &options)?.encode_png()?;

    let mut plan = Plan::new("overlay");
    plan.inputs.push(input_a.manifest_entry());
    plan.inputs.push(input_b.manifest_entry());
    plan.parameters = json!({
        "series_a": args.series.manifest(&a),
        "series_b": args.series.manifest(&b),
        "embedding": config,
        "threshold": threshold_manifest(mode),
        "clip_to_common_range": args.clip_to_common_range,
        "render": options_manifest(&options),
    });
    plan.summary = json!({"a": plot_summary(&a, &plot_a), "b": plot_summary(&b, &plot_b)});
    plan.add(args.out.clone().unwrap_or_else(|| beside(&args.input_a, ".overlay.png")), png);
    Ok(plan)
}

/// `step,date,value` rows continuing daily after `last`.
fn forecast_csv(last: NaiveDate, predictions: &[f64]) -> Vec<u8> {
    let mut out = String::from("step,date,value\n");
    for (k, v) in predictions.iter().enumerate() {
        let date = last + Days::new(k as u64 + 1);
        out.push_str(&format!("{},{},{}\n", k + 1, date.format(DEFAULT_DATE_FORMAT), format_sig17(*v)));
    }
    out.into_bytes()
}

fn model_json(m: &ArModel64) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(m)?;
    v.push(b'\n');
    Ok(v)
}

fn plan_ar(args: &ArArgs) -> Result<Plan> {
    let input = Input::read(&args.input)?;
    let s = args.series.load(&input)?;
    let model = autoreg::fit_ar(&s, args.order)?;
    let fc = autoreg::forecast(&model, s.values(), args.horizon)?;

    let mut plan = Plan::new("ar");
    plan.inputs.push(input.manifest_entry());
    plan.parameters = json!({
        "series": args.series.manifest(&s),
        "order": args.order,
        "horizon": args.horizon,
        "estimator": "conditional least squares",
        "forecast_noise": "zero (point forecast)",
    });
    plan.summary = json!({
        "series": series_summary(&s),
        "stationary": model.is_stationary(),
        "noise_std": model.noise_std,
        "is_iterated": fc.is_iterated,
    });
    if !model.is_stationary() {
        plan.stdout.push_str("warning: fitted AR model is not stationary\n");
    }
    plan.add(args.model_out.clone().unwrap_or_else(|| beside(&args.input, ".ar.json")), model_json(&model)?);
    plan.add(
        args.forecast_out.clone().unwrap_or_else(|| beside(&args.input, ".forecast.csv")),
        forecast_csv(s.end_date(), &fc.predictions),
    );
    Ok(plan)
}

fn plan_trend(args: &TrendArgs) -> Result<Plan> {
    let input = Input::read(&args.input)?;
    let s = args.series.load(&input)?;
    let mut plan = Plan::new("trend");
    plan.inputs.push(input.manifest_entry());
    plan.parameters = json!({
        "series": args.series.manifest(&s),
        "degree": args.degree,
        "ar_order": args.ar_order,
        "horizon": args.horizon,
        "regressor": "observation index",
    });

    let n = s.len() as i64;
    let (report, predictions) = match args.ar_order {
        Some(p) => {
            let fit = fit_trend_ar(&s, args.degree, p)?;
            let predictions = if args.horizon > 0 {
                Some(fit.forecast(args.horizon)?.predictions)
            } else {
                None
            };
            plan.summary = json!({"series": series_summary(&s), "ar_stationary": fit.ar.is_stationary()});
            (json!({"trend": fit.trend, "ar": fit.ar, "forecast": predictions}), predictions)
        }
        None => {
            let trend = stats::fit_trend(&s, args.degree)?;
            let predictions = (args.horizon > 0)
                .then(|| (0..args.horizon as i64).map(|k| trend.evaluate(n + k)).collect::<Vec<_>>());
            plan.summary = json!({"series": series_summary(&s)});
            (json!({"trend": trend, "forecast": predictions}), predictions)
        }
    };
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    plan.add(args.out.clone().unwrap_or_else(|| beside(&args.input, ".trend.json")), bytes);
    if let Some(pred) = predictions {
        plan.add(
            args.forecast_out.clone().unwrap_or_else(|| beside(&args.input, ".trend-forecast.csv")),
            forecast_csv(s.end_date(), &pred),
        );
    }
    Ok(plan)
}

fn plan_transitions(args: &TransitionsArgs) -> Result<Plan> {
    let input = Input::read(&args.input)?;
    let s = args.series.load(&input)?;
    let config = args.embedding.config()?;
    let mode = ThresholdMode::from_window(args.local_threshold_window);
    let plot = recurrence_plot(&s, config, mode)?;
    let params = TransitionParams {
        window: args.window,
        score_threshold: args.score_threshold,
        min_separation: args.min_separation.unwrap_or(args.window),
    };
    let report = detect_transitions(&plot.matrix, &plot.dates, params)?;

    let mut plan = Plan::new("transitions");
    plan.inputs.push(input.manifest_entry());
    plan.parameters = json!({
        "series": args.series.manifest(&s),
        "embedding": config,
        "threshold": threshold_manifest(mode),
        "detector": params,
    });
    plan.summary = plot_summary(&s, &plot);
    plan.stdout = report.to_table();
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    plan.add(args.out.clone().unwrap_or_else(|| beside(&args.input, ".transitions.json")), bytes);
    Ok(plan)
}

fn plan_simulate(args: &SimulateArgs) -> Result<Plan> {
    let input = Input::read(&args.model)?;
    let model: ArModel64 = serde_json::from_str(&input.text)
        .with_context(|| format!("parsing model {}", input.path.display()))?;
    let initial = args.initial.clone().unwrap_or_else(|| vec![0.0; model.order()]);
    let simulated = autoreg::simulate(&model, args.length, args.seed, &initial)?;
    let s = TimeSeries64::from_values(args.start_date, simulated.values().to_vec(), "value")?;

    let mut plan = Plan::new("simulate");
    plan.inputs.push(input.manifest_entry());
    plan.parameters = json!({
        "model": model,
        "length": args.length,
        "seed": args.seed,
        "initial": initial,
        "start_date": args.start_date,
        "rng": "ChaCha8, standard normal scaled by noise_std",
    });
    plan.summary = json!({"series": series_summary(&s)});
    plan.add(args.out.clone(), s.to_csv().into_bytes());
    Ok(plan)
}

/// Runs one subcommand end to end.
pub fn run(cli: &Cli) -> Result<RunOutcome> {
    let plan = match &cli.command {
        Command::Rp(a) => plan_rp(a),
        Command::Distplot(a) => plan_distplot(a),
        Command::Overlay(a) => plan_overlay(a),
        Command::Ar(a) => plan_ar(a),
        Command::Trend(a) => plan_trend(a),
        Command::Transitions(a) => plan_transitions(a),
        Command::Simulate(a) => plan_simulate(a),
    }?;
    plan.commit()
}

/// One-line diagnostic for a failed run.
pub fn diagnostic(err: &anyhow::Error) -> String {
    format!("error: {err:#}").replace('\n', " ")
}
