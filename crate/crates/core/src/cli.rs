//! Command-line front end: configuration, dispatch, and CSV/JSON/SVG output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance;
use crate::airy::{ai_integral_complement, ai_pair, leading_profile_w};
use crate::asymptotics::LeadingTerm;
use crate::initial_data::DataDescriptor;
use crate::solver::{eval_grid, QuadratureConfig, SolutionSample, SplitConfig};
use crate::verify::{estimate_next_order, ConvergenceReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_SELFTEST_FAILED: u8 = 1;
pub const EXIT_INVALID_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_PARTIAL: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Ai, Ai', F and W on the x grid.
    Airy,
    /// The convolution solution on the (x, t) grid.
    Solve,
    /// The leading large-time term over the x grid read as η.
    Asym,
    /// Residual decay fit along the t grid.
    Converge,
    /// The acceptance suite.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self, name: &str) -> Result<(), String> {
        if self.count == 0 {
            return Err(format!("{name}: count must be at least 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(format!(
                "{name}: need finite min <= max, got [{}, {}]",
                self.min, self.max
            ));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(format!(
                "{name}: log spacing needs min > 0, got {}",
                self.min
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        let mut v: Vec<f64> = (0..self.count)
            .map(|i| {
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * s,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * s).exp(),
                }
            })
            .collect();
        v[self.count - 1] = self.max;
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub xs: Axis,
    pub ts: Axis,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            xs: Axis::linear(-10.0, 10.0, 41),
            ts: Axis {
                min: 1e2,
                max: 1e4,
                count: 5,
                spacing: Spacing::Log,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSpec {
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_samples: usize,
}

impl Default for ConvergeSpec {
    fn default() -> Self {
        Self {
            eta_min: -2.0,
            eta_max: 2.0,
            eta_samples: crate::verify::DEFAULT_ETA_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_data() -> DataDescriptor {
    DataDescriptor::builtin("atan", Vec::new())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_data")]
    pub f: DataDescriptor,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub converge: ConvergeSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            f: default_data(),
            grid: Grid::default(),
            quadrature: QuadratureConfig::default(),
            split: SplitConfig::default(),
            converge: ConvergeSpec::default(),
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("cannot parse config: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), String> {
        self.grid.xs.validate("xs")?;
        self.grid.ts.validate("ts")?;
        if matches!(
            self.command,
            Command::Solve | Command::Asym | Command::Converge
        ) && self.grid.ts.min <= 0.0
        {
            return Err(format!(
                "ts: t values must be positive, got min {}",
                self.grid.ts.min
            ));
        }
        let c = &self.converge;
        if !(c.eta_min.is_finite() && c.eta_max.is_finite()) || c.eta_min >= c.eta_max {
            return Err(format!(
                "converge: need eta_min < eta_max, got [{}, {}]",
                c.eta_min, c.eta_max
            ));
        }
        if c.eta_samples == 0 {
            return Err("converge: eta_samples must be at least 1".into());
        }
        self.split.validate().map_err(|e| e.to_string())?;
        self.quadrature.validate().map_err(|e| e.to_string())?;
        self.f.build().map(|_| ()).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kdv-airy",
    version,
    about = "Linearized KdV solutions through the Airy convolution"
)]
pub struct Cli {
    /// Command to run; may also come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON run configuration; flags given alongside override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Builtin initial data.
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub xn: Option<usize>,
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub tn: Option<usize>,
    /// Log-spaced t grid.
    #[arg(long)]
    pub tlog: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    pub dump_config: bool,
}

impl Cli {
    /// Merges the config file (if any) with the inline flags.
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let mut cfg = RunConfig::from_json(&text)?;
                if let Some(cmd) = self.command {
                    cfg.command = cmd;
                }
                cfg
            }
            None => RunConfig::new(
                self.command
                    .ok_or("a command is required (airy, solve, asym, converge, selftest)")?,
            ),
        };
        if let Some(name) = &self.f {
            cfg.f = DataDescriptor::builtin(name, Vec::new());
        }
        if let Some(p) = self.p {
            cfg.split.p = p;
        }
        let xs = &mut cfg.grid.xs;
        xs.min = self.xmin.unwrap_or(xs.min);
        xs.max = self.xmax.unwrap_or(xs.max);
        xs.count = self.xn.unwrap_or(xs.count);
        let ts = &mut cfg.grid.ts;
        ts.min = self.tmin.unwrap_or(ts.min);
        ts.max = self.tmax.unwrap_or(ts.max);
        ts.count = self.tn.unwrap_or(ts.count);
        if self.tlog {
            ts.spacing = Spacing::Log;
        } else if self.tmin.is_some() || self.tmax.is_some() || self.tn.is_some() {
            ts.spacing = Spacing::Linear;
        }
        if let Some(tol) = self.tol {
            cfg.quadrature.abs_tol = tol;
            cfg.quadrature.rel_tol = tol;
        }
        if let Some(path) = &self.out {
            cfg.output.path = Some(path.clone());
        }
        if let Some(format) = self.format {
            cfg.output.format = format;
        }
        Ok(cfg)
    }
}

/// Why a run did not finish cleanly; each maps to an exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Partial(Vec<String>),
    Selftest,
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_INVALID_CONFIG,
            Failure::Numerical(_) => EXIT_NUMERICAL,
            Failure::Partial(_) => EXIT_PARTIAL,
            Failure::Selftest => EXIT_SELFTEST_FAILED,
        }
    }
}

fn numeric(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|v| numeric(*v)))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// A static single-series line chart.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 60.0;
    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let range = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = range(&mut finite.iter().map(|p| p.0));
    let (y0, y1) = range(&mut finite.iter().map(|p| p.1));
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<polyline points="{M},{} {M},{} {},{}" fill="none" stroke="black"/>"#,
        M,
        H - M,
        W - M,
        H - M
    );
    for (v, anchor, x, y) in [
        (x0, "start", M, H - M + 16.0),
        (x1, "end", W - M, H - M + 16.0),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#,
            fmt_tick(v)
        );
    }
    for (v, y) in [(y0, H - M), (y1, M + 4.0)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
            M - 4.0,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    let coords: Vec<String> = finite
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        coords.join(" ")
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// What a command produced: the main artifact plus optional extra files.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub main: String,
    pub extra: Vec<(PathBuf, String)>,
}

impl Artifacts {
    fn single(main: String) -> Self {
        Self {
            main,
            extra: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct AiryRow {
    x: f64,
    ai: f64,
    ai_prime: f64,
    f: f64,
    w: f64,
}

fn run_airy(cfg: &RunConfig) -> Result<Artifacts, Failure> {
    let airy = &cfg.quadrature.airy;
    let mut rows = Vec::new();
    for x in cfg.grid.xs.values() {
        let cell = || -> crate::Result<AiryRow> {
            let (ai, ai_prime) = ai_pair(x, airy)?;
            let f = ai_integral_complement(x, airy)?;
            Ok(AiryRow {
                x,
                ai,
                ai_prime,
                f,
                w: 0.5 - f,
            })
        };
        rows.push(cell().map_err(|e| Failure::Numerical(format!("x = {x}: {e}")))?);
    }
    Ok(Artifacts::single(match cfg.output.format {
        Format::Csv => csv_table(
            &["x", "ai", "ai_prime", "f", "w"],
            &rows
                .iter()
                .map(|r| vec![r.x, r.ai, r.ai_prime, r.f, r.w])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(&rows),
        Format::Svg => line_chart(
            "Ai(x)",
            "x",
            "Ai",
            &rows.iter().map(|r| (r.x, r.ai)).collect::<Vec<_>>(),
        ),
    }))
}

#[derive(Serialize)]
struct FailedCell {
    x: f64,
    t: f64,
    error: String,
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    samples: &'a [SolutionSample],
    failures: &'a [FailedCell],
}

const SAMPLE_COLUMNS: [&str; 7] = [
    "x",
    "t",
    "eta",
    "u",
    "u_leading",
    "residual",
    "error_estimate",
];

fn sample_row(s: &SolutionSample) -> Vec<f64> {
    vec![
        s.x,
        s.t,
        s.eta,
        s.u,
        s.u_leading,
        s.residual,
        s.error_estimate,
    ]
}

fn build_data(cfg: &RunConfig) -> Result<crate::initial_data::PowerTailFunction, Failure> {
    cfg.f.build().map_err(|e| Failure::Config(e.to_string()))
}

/// Returns the artifacts together with any failed cells.
fn run_solve(cfg: &RunConfig) -> Result<(Artifacts, Vec<String>), Failure> {
    let f = build_data(cfg)?;
    let cells = eval_grid(
        &f,
        &cfg.grid.xs.values(),
        &cfg.grid.ts.values(),
        &cfg.split,
        &cfg.quadrature,
    )
    .map_err(|e| Failure::Config(e.to_string()))?;
    let mut samples = Vec::new();
    let mut failures = Vec::new();
    for cell in cells {
        match cell.outcome {
            Ok(s) => samples.push(s),
            Err(e) => failures.push(FailedCell {
                x: cell.x,
                t: cell.t,
                error: e.to_string(),
            }),
        }
    }
    let failed: Vec<String> = failures
        .iter()
        .map(|c| format!("(x = {}, t = {}): {}", c.x, c.t, c.error))
        .collect();
    if samples.is_empty() {
        return Err(Failure::Numerical(format!(
            "every cell failed, first {}",
            failed.first().map(String::as_str).unwrap_or("(empty grid)")
        )));
    }
    let main = match cfg.output.format {
        Format::Csv => csv_table(
            &SAMPLE_COLUMNS,
            &samples.iter().map(sample_row).collect::<Vec<_>>(),
        ),
        Format::Json => json(&SolveOutput {
            samples: &samples,
            failures: &failures,
        }),
        Format::Svg => {
            let t = samples[0].t;
            line_chart(
                &format!("u(x, t = {})", fmt_tick(t)),
                "x",
                "u",
                &samples
                    .iter()
                    .filter(|s| s.t == t)
                    .map(|s| (s.x, s.u))
                    .collect::<Vec<_>>(),
            )
        }
    };
    Ok((Artifacts::single(main), failed))
}

#[derive(Serialize)]
struct AsymRow {
    eta: f64,
    w: f64,
    u_leading: f64,
}

fn run_asym(cfg: &RunConfig) -> Result<Artifacts, Failure> {
    let f = build_data(cfg)?;
    let lt = LeadingTerm::of(&f).map_err(|e| Failure::Config(e.to_string()))?;
    let airy = &cfg.quadrature.airy;
    let mut rows = Vec::new();
    for eta in cfg.grid.xs.values() {
        let row = || -> crate::Result<AsymRow> {
            Ok(AsymRow {
                eta,
                w: leading_profile_w(eta, airy)?,
                u_leading: lt.at_eta(eta, airy)?,
            })
        };
        rows.push(row().map_err(|e| Failure::Numerical(format!("eta = {eta}: {e}")))?);
    }
    Ok(Artifacts::single(match cfg.output.format {
        Format::Csv => csv_table(
            &["eta", "w", "u_leading"],
            &rows
                .iter()
                .map(|r| vec![r.eta, r.w, r.u_leading])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(&rows),
        Format::Svg => line_chart(
            &format!("leading term, f = {}", f.label()),
            "eta",
            "u_leading",
            &rows
                .iter()
                .map(|r| (r.eta, r.u_leading))
                .collect::<Vec<_>>(),
        ),
    }))
}

fn convergence_chart(report: &ConvergenceReport) -> String {
    let points: Vec<(f64, f64)> = report
        .t_ladder
        .iter()
        .zip(&report.residual_sup)
        .map(|(t, r)| (t.log10(), r.log10()))
        .collect();
    line_chart(
        &format!("residual decay, slope {:.4}", report.fitted_slope),
        "log10 t",
        "log10 sup |u - leading|",
        &points,
    )
}

fn run_converge(cfg: &RunConfig) -> Result<Artifacts, Failure> {
    let f = build_data(cfg)?;
    let c = &cfg.converge;
    let report = estimate_next_order(
        &f,
        &cfg.grid.ts.values(),
        (c.eta_min, c.eta_max),
        c.eta_samples,
        &cfg.split,
        &cfg.quadrature,
    )
    .map_err(|e| match e {
        crate::Error::InvalidConfig(m) => Failure::Config(m),
        other => Failure::Numerical(other.to_string()),
    })?;
    let svg = convergence_chart(&report);
    Ok(match cfg.output.format {
        Format::Json => Artifacts {
            main: json(&report),
            extra: cfg
                .output
                .path
                .as_ref()
                .map(|p| vec![(p.with_extension("svg"), svg)])
                .unwrap_or_default(),
        },
        Format::Csv => Artifacts::single(csv_table(
            &["t", "residual_sup"],
            &report
                .t_ladder
                .iter()
                .zip(&report.residual_sup)
                .map(|(t, r)| vec![*t, *r])
                .collect::<Vec<_>>(),
        )),
        Format::Svg => Artifacts::single(svg),
    })
}

fn run_selftest(cfg: &RunConfig) -> (Artifacts, bool) {
    let outcomes = acceptance::run_all();
    let passed = outcomes.iter().all(|o| o.passed);
    let main = match cfg.output.format {
        Format::Json => json(&outcomes),
        _ => acceptance::render(&outcomes),
    };
    (Artifacts::single(main), passed)
}

fn write_artifact(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Config(format!("cannot write to stdout: {e}"))),
    }
}

/// Runs a validated configuration and writes its artifacts.
pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    cfg.validate().map_err(Failure::Config)?;
    let mut failure = None;
    let artifacts = match cfg.command {
        Command::Airy => run_airy(cfg)?,
        Command::Solve => {
            let (a, failed) = run_solve(cfg)?;
            if !failed.is_empty() {
                failure = Some(Failure::Partial(failed));
            }
            a
        }
        Command::Asym => run_asym(cfg)?,
        Command::Converge => run_converge(cfg)?,
        Command::Selftest => {
            let (a, passed) = run_selftest(cfg);
            if !passed {
                failure = Some(Failure::Selftest);
            }
            a
        }
    };
    write_artifact(cfg.output.path.as_deref(), &artifacts.main)?;
    for (path, text) in &artifacts.extra {
        write_artifact(Some(path), text)?;
    }
    failure.map_or(Ok(()), Err)
}

/// Parses `args`, runs, reports on stderr, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID_CONFIG
            } else {
                EXIT_OK
            };
        }
    };
    let cfg = match cli.resolve() {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID_CONFIG;
        }
    };
    if cli.dump_config {
        println!("{}", cfg.to_json());
        return EXIT_OK;
    }
    match run(&cfg) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            match &failure {
                Failure::Config(m) => eprintln!("invalid configuration: {m}"),
                Failure::Numerical(m) => eprintln!("numerical failure: {m}"),
                Failure::Partial(cells) => {
                    eprintln!("{} grid cells failed:", cells.len());
                    for c in cells {
                        eprintln!("  {c}");
                    }
                }
                Failure::Selftest => eprintln!("selftest: some criteria failed"),
            }
            failure.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        assert_eq!(Axis::linear(-1.0, 1.0, 3).values(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(Axis::linear(2.0, 2.0, 1).values(), vec![2.0]);
        let log = Axis {
            min: 1.0,
            max: 100.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let v = log.values();
        assert!((v[1] - 10.0).abs() < 1e-12 && (v[2] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn axis_rejects_bad_specs() {
        assert!(Axis::linear(0.0, 1.0, 0).validate("xs").is_err());
        assert!(Axis::linear(1.0, 0.0, 2).validate("xs").is_err());
        let log = Axis {
            min: 0.0,
            max: 1.0,
            count: 2,
            spacing: Spacing::Log,
        };
        assert!(log.validate("ts").is_err());
    }

    #[test]
    fn config_defaults_fill_in() {
        let cfg = RunConfig::from_json(r#"{"command": "solve"}"#).unwrap();
        assert_eq!(cfg, RunConfig::new(Command::Solve));
        assert!(RunConfig::from_json(r#"{"command": "solve", "bogus": 1}"#).is_err());
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::try_parse_from([
            "kdv-airy", "solve", "--f", "step", "--p", "0.5", "--xmin", "-3", "--xn", "7",
            "--tmin", "1", "--tmax", "10", "--tn", "2", "--tol", "1e-10",
        ])
        .unwrap();
        let cfg = cli.resolve().unwrap();
        assert_eq!(cfg.f, DataDescriptor::builtin("step", vec![]));
        assert_eq!(cfg.split.p, 0.5);
        assert_eq!(cfg.grid.xs.min, -3.0);
        assert_eq!(cfg.grid.xs.count, 7);
        assert_eq!(cfg.grid.ts.values(), vec![1.0, 10.0]);
        assert_eq!(cfg.quadrature.abs_tol, 1e-10);
    }

    #[test]
    fn validation_catches_bad_split_and_times() {
        let mut cfg = RunConfig::new(Command::Solve);
        cfg.split.p = 1.2;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::new(Command::Solve);
        cfg.grid.ts = Axis::linear(-1.0, 1.0, 3);
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::new(Command::Airy);
        cfg.f = DataDescriptor::builtin("nope", vec![]);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn csv_is_lossless() {
        let v = std::f64::consts::PI / 7.0;
        let text = csv_table(&["a"], &[vec![v]]);
        let back: f64 = text.lines().nth(1).unwrap().parse().unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn chart_has_one_series() {
        let svg = line_chart("t", "x", "y", &[(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN)]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke=\"steelblue\"").count(), 1);
        assert!(svg.contains("60.00,340.00 580.00,60.00"));
    }
}
