//! Command line front-end.
//!
//! Every subcommand writes its tables and a `manifest.txt` into `--out-dir`.
//! The manifest holds the resolved configuration, including a canonical
//! `args` line that reproduces the run.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    ck_residual, compare_densities, convergence_study, parameter_sweep, FitMetrics, DEFAULT_CK_MESH,
    DEFAULT_ERRBAR_MULTIPLE,
};
use crate::error::{Error, ErrorKind, Result};
use crate::integrator::{centered_grid, decade_half_span, pdf_curve, SamplingConfig, Scheme, DEFAULT_GRID_POINTS};
use crate::io::{self, render_table, Manifest};
use crate::market::{build_histogram, load_price_sheet, log_returns, Centering, HistogramConfig, SheetOptions};
use crate::model::ModelParams;
use crate::presets::{market_preset, MarketPreset};
use crate::sampling::{GeneratorKind, DEFAULT_REPLICAS};

pub const DEFAULT_SLICES: usize = 11;
pub const DEFAULT_DECADES: f64 = 4.0;

#[derive(Debug, Parser)]
#[command(name = "pathdensity", version, about = "Path-integral densities of log-returns")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for tables and the manifest.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of the final log-return on a grid.
    Pdf {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Histogram of log-returns from a price sheet.
    Hist(HistArgs),
    /// Densities for several slice counts and their pairwise distances.
    Converge {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Slice counts to compare.
        #[arg(long, value_delimiter = ',', default_values_t = [9, 12, 15])]
        dims: Vec<usize>,
    },
    /// Direct density against the composition of two shorter ones.
    Ck {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Fraction of the horizon covered by the first leg.
        #[arg(long, default_value_t = 0.5)]
        split: f64,
        /// Intermediate log-price nodes.
        #[arg(long, default_value_t = DEFAULT_CK_MESH)]
        mesh: usize,
    },
    /// Scores a density table against a histogram table.
    Compare {
        #[arg(long)]
        hist: PathBuf,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ERRBAR_MULTIPLE)]
        errbar_multiple: f64,
    },
    /// Fits a grid of (gamma, p, sigma) to a histogram table.
    Sweep {
        #[arg(long)]
        hist: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        gammas: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ps: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        sigmas: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = DEFAULT_SLICES)]
        slices: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, default_value_t = DEFAULT_ERRBAR_MULTIPLE)]
        errbar_multiple: f64,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Start from a named market fit; explicit flags override it.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, conflicts_with = "beta")]
    pub sigma: Option<f64>,
    /// Scale `1 / (2 sigma^p)` instead of sigma.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long = "T", default_value_t = 1.0)]
    pub horizon: f64,
    /// Time slices; the integral has one fewer intermediate price.
    #[arg(long, default_value_t = DEFAULT_SLICES)]
    pub slices: usize,
    /// Free-form name of the time unit, stored in the manifest.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Total log-return width of the grid; by default the density falls
    /// `--decades` orders of magnitude at the ends.
    #[arg(long)]
    pub span: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DECADES)]
    pub decades: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Grid center; `rate * T` by default.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Sobol,
    Cmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Radial,
    Box,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points per replica.
    #[arg(long, default_value_t = crate::integrator::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_REPLICAS)]
    pub replicas: usize,
    #[arg(long, value_enum, default_value_t = SamplerArg::Sobol)]
    pub sampler: SamplerArg,
    #[arg(long, value_enum, default_value_t = SchemeArg::Radial)]
    pub scheme: SchemeArg,
    /// Box half-width for `--scheme box`.
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Upper bound on the default box half-width.
    #[arg(long)]
    pub clip: Option<f64>,
}

#[derive(Debug, Args)]
pub struct HistArgs {
    /// Price sheet: timestamp and price per line.
    #[arg(long)]
    pub file: PathBuf,
    /// Bin count and range from a named market fit.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub range: Option<f64>,
    #[arg(long, default_value = "zero")]
    pub center: Centering,
    /// Sampling period in seconds; the median spacing by default.
    #[arg(long)]
    pub interval: Option<i64>,
    #[arg(long)]
    pub delimiter: Option<char>,
}

impl SamplingArgs {
    fn config(&self) -> Result<SamplingConfig> {
        if self.points == 0 {
            return Err(Error::InvalidParameter("--points must be positive".into()));
        }
        let sampler = match self.sampler {
            SamplerArg::Sobol => {
                if self.replicas < 2 {
                    return Err(Error::InvalidParameter("--replicas must be at least 2".into()));
                }
                GeneratorKind::SobolShifted
            }
            SamplerArg::Cmc => GeneratorKind::CrudeMc,
        };
        let scheme = match self.scheme {
            SchemeArg::Radial => Scheme::Radial,
            SchemeArg::Box => Scheme::Box {
                half_width: self.half_width,
                clip: self.clip,
            },
        };
        Ok(SamplingConfig {
            points: self.points,
            replicas: self.replicas,
            seed: self.seed,
            sampler,
            scheme,
        })
    }

    fn record(&self, m: &mut Manifest, args: &mut Vec<String>) {
        m.set("seed", self.seed)
            .set("points", self.points)
            .set("replicas", self.replicas)
            .set("sampler", self.sampler.name())
            .set("scheme", self.scheme.name());
        args.extend([
            format!("--seed {}", self.seed),
            format!("--points {}", self.points),
            format!("--replicas {}", self.replicas),
            format!("--sampler {}", self.sampler.name()),
            format!("--scheme {}", self.scheme.name()),
        ]);
        if let Some(w) = self.half_width {
            m.set("half_width", w);
            args.push(format!("--half-width {w}"));
        }
        if let Some(c) = self.clip {
            m.set("clip", c);
            args.push(format!("--clip {c}"));
        }
    }
}

impl SamplerArg {
    fn name(self) -> &'static str {
        match self {
            Self::Sobol => "sobol",
            Self::Cmc => "cmc",
        }
    }
}

impl SchemeArg {
    fn name(self) -> &'static str {
        match self {
            Self::Radial => "radial",
            Self::Box => "box",
        }
    }
}

struct Resolved {
    params: ModelParams,
    preset: Option<&'static MarketPreset>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<Resolved> {
        let preset = self.preset.as_deref().map(market_preset).transpose()?;
        let need = |v: Option<f64>, from: Option<f64>, flag: &str| {
            v.or(from)
                .ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required without --preset")))
        };
        let gamma = need(self.gamma, preset.map(|m| m.gamma), "gamma")?;
        let p = need(self.p, preset.map(|m| m.p), "p")?;
        let rate = self.rate.or(preset.map(|m| m.rate)).unwrap_or(0.0);
        let params = match (self.sigma, self.beta) {
            (_, Some(beta)) => ModelParams::from_beta(gamma, p, beta, rate, self.horizon, self.slices)?,
            (sigma, None) => {
                let sigma = need(sigma, preset.map(|m| m.sigma), "sigma")?;
                ModelParams::new(gamma, p, sigma, rate, self.horizon, self.slices)?
            }
        };
        Ok(Resolved { params, preset })
    }

    fn record(&self, r: &Resolved, m: &mut Manifest, args: &mut Vec<String>) {
        let prm = &r.params;
        m.set("gamma", prm.gamma())
            .set("p", prm.p())
            .set("sigma", prm.sigma())
            .set("beta", prm.beta())
            .set("rate", prm.rate())
            .set("T", prm.horizon())
            .set("slices", prm.slices());
        args.extend([
            format!("--gamma {}", prm.gamma()),
            format!("--p {}", prm.p()),
            format!("--sigma {}", prm.sigma()),
            format!("--rate {}", prm.rate()),
            format!("--T {}", prm.horizon()),
            format!("--slices {}", prm.slices()),
        ]);
        let label = self.label.as_deref().or(r.preset.map(|p| p.label));
        if let Some(label) = label {
            m.set("label", label);
            args.push(format!("--label {label}"));
        }
        if let Some(p) = r.preset {
            m.set("preset", p.name);
        }
    }
}

impl GridArgs {
    fn resolve(&self, r: &Resolved, sampling: &SamplingConfig) -> Result<(Vec<f64>, f64, f64)> {
        let prm = &r.params;
        let center = self.center.unwrap_or(prm.rate() * prm.horizon());
        let span = match self.span.or(r.preset.map(|p| p.span)) {
            Some(s) => s,
            None => 2.0 * decade_half_span(prm, self.decades, sampling)?,
        };
        Ok((centered_grid(span, self.grid_points, center)?, span, center))
    }

    fn record(&self, span: f64, center: f64, m: &mut Manifest, args: &mut Vec<String>) {
        m.set("span", span)
            .set("grid_points", self.grid_points)
            .set("center", center);
        args.extend([
            format!("--span {span}"),
            format!("--grid-points {}", self.grid_points),
            format!("--center {center}"),
        ]);
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 configuration, 2 numerical, 3 I/O.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Config => 1,
        ErrorKind::Numeric => 2,
        ErrorKind::Io => 3,
    }
}

/// Runs a parsed command on the requested number of threads and returns the
/// `key=value` summary it printed to the manifest.
pub fn execute(cli: &Cli) -> Result<String> {
    match cli.threads {
        Some(0) => Err(Error::InvalidParameter("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {n} threads: {e}")))?
            .install(|| dispatch(&cli.command, &cli.out_dir)),
        None => dispatch(&cli.command, &cli.out_dir),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn header(command: &str) -> Manifest {
    let mut m = Manifest::new();
    m.set("command", command).set("version", env!("CARGO_PKG_VERSION"));
    m
}

fn finish(out_dir: &Path, mut m: Manifest, args: Vec<String>, summary: Manifest) -> Result<String> {
    m.set("args", args.join(" "));
    for (k, v) in summary.entries() {
        m.set(k, v);
    }
    io::write_file(out_dir, "manifest.txt", &m.render())?;
    Ok(summary.render())
}

fn fit_summary(s: &mut Manifest, f: &FitMetrics) {
    s.float("log_rmse", f.log_rmse)
        .float("within_errbar", f.within)
        .float("within_errbar_central", f.within_central)
        .float("within_errbar_outer", f.within_outer)
        .float("chi2", f.chi2)
        .set("bins", f.bins)
        .set("bins_used", f.bins_used);
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn dispatch(command: &Command, out_dir: &Path) -> Result<String> {
    match command {
        Command::Pdf { model, grid, sampling } => {
            let r = model.resolve()?;
            let cfg = sampling.config()?;
            let (g, span, center) = grid.resolve(&r, &cfg)?;
            let curve = pdf_curve(0.0, &g, &r.params, &cfg)?;
            warn_all(&curve.warnings);
            io::write_file(out_dir, "curve.tsv", &io::curve_table(&curve))?;

            let mut m = header("pdf");
            let mut args = vec!["pdf".to_string()];
            model.record(&r, &mut m, &mut args);
            grid.record(span, center, &mut m, &mut args);
            sampling.record(&mut m, &mut args);
            let mut s = Manifest::new();
            let (x_peak, f_peak) = curve.peak();
            s.float("peak_log_return", x_peak)
                .float("peak_density", f_peak)
                .float("raw_mass", curve.meta.raw_mass)
                .float("outside_mass", curve.meta.outside_mass)
                .float(
                    "max_relative_stderr",
                    curve
                        .stderr
                        .iter()
                        .zip(&curve.density)
                        .map(|(e, d)| e / d)
                        .fold(0.0, f64::max),
                );
            finish(out_dir, m, args, s)
        }
        Command::Hist(h) => {
            let preset = h.preset.as_deref().map(market_preset).transpose()?;
            let bins = h
                .bins
                .or(preset.map(|p| p.bins))
                .ok_or_else(|| Error::InvalidParameter("--bins is required without --preset".into()))?;
            let range = h
                .range
                .or(preset.map(|p| p.span))
                .ok_or_else(|| Error::InvalidParameter("--range is required without --preset".into()))?;
            let series = load_price_sheet(
                open(&h.file)?,
                SheetOptions {
                    delimiter: h.delimiter,
                    interval: h.interval,
                },
            )?;
            let returns = log_returns(&series, h.stride)?;
            let hist = build_histogram(
                &returns.values,
                &HistogramConfig {
                    bins,
                    range,
                    centering: h.center,
                },
            )?;
            io::write_file(out_dir, "histogram.tsv", &io::histogram_table(&hist))?;

            let mut m = header("hist");
            let center = match h.center {
                Centering::Zero => "zero",
                Centering::Mean => "mean",
            };
            m.set("file", h.file.display())
                .set("stride", h.stride)
                .set("bins", bins)
                .set("range", range)
                .set("center", center)
                .set("interval", series.interval());
            let mut args = vec![
                "hist".to_string(),
                format!("--file {}", h.file.display()),
                format!("--stride {}", h.stride),
                format!("--bins {bins}"),
                format!("--range {range}"),
                format!("--center {center}"),
                format!("--interval {}", series.interval()),
            ];
            if let Some(d) = h.delimiter {
                m.set("delimiter", format!("{d:?}"));
                args.push(format!("--delimiter {d:?}"));
            }
            let mut s = Manifest::new();
            s.set("prices", series.len())
                .set("sample_count", hist.sample_count)
                .set("skipped_gaps", returns.skipped_gaps)
                .set("out_of_range", hist.out_of_range);
            finish(out_dir, m, args, s)
        }
        Command::Converge {
            model,
            grid,
            sampling,
            dims,
        } => {
            let r = model.resolve()?;
            let cfg = sampling.config()?;
            let first = dims
                .first()
                .ok_or_else(|| Error::InvalidParameter("--dims is empty".into()))?;
            let base = Resolved {
                params: r.params.with_slices(*first)?,
                preset: r.preset,
            };
            let (g, span, center) = grid.resolve(&base, &cfg)?;
            let report = convergence_study(&r.params, dims, &g, &cfg)?;
            for c in &report.curves {
                warn_all(&c.warnings);
            }

            let mut header_cols = vec!["log_return".to_string()];
            let mut cols: Vec<&[f64]> = vec![&g];
            for (d, c) in dims.iter().zip(&report.curves) {
                header_cols.push(format!("density_{d}"));
                header_cols.push(format!("stderr_{d}"));
                cols.push(&c.density);
                cols.push(&c.stderr);
            }
            let names: Vec<&str> = header_cols.iter().map(String::as_str).collect();
            io::write_file(out_dir, "curves.tsv", &render_table(&names, &cols))?;

            let mut metrics = String::from("dims_a\tdims_b\tabsolute\trelative\tsup_relative\n");
            for i in 0..dims.len() {
                for j in i + 1..dims.len() {
                    let e = report.pairwise[i][j];
                    metrics.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        dims[i],
                        dims[j],
                        io::cell(e.absolute),
                        io::cell(e.relative),
                        io::cell(e.sup_relative)
                    ));
                }
            }
            io::write_file(out_dir, "metrics.tsv", &metrics)?;

            let mut m = header("converge");
            let mut args = vec!["converge".to_string()];
            model.record(&r, &mut m, &mut args);
            let list: Vec<String> = dims.iter().map(usize::to_string).collect();
            m.set("dims", list.join(","));
            args.push(format!("--dims {}", list.join(",")));
            grid.record(span, center, &mut m, &mut args);
            sampling.record(&mut m, &mut args);
            let mut s = Manifest::new();
            for (a, b, e) in report.successive() {
                s.float(&format!("relative_{a}_{b}"), e.relative);
            }
            s.float("max_endpoint_relative_stderr", report.max_endpoint_relative_stderr());
            finish(out_dir, m, args, s)
        }
        Command::Ck {
            model,
            grid,
            sampling,
            split,
            mesh,
        } => {
            let r = model.resolve()?;
            let cfg = sampling.config()?;
            let (g, span, center) = grid.resolve(&r, &cfg)?;
            let report = ck_residual(&r.params, *split, &g, *mesh, &cfg)?;
            warn_all(&report.direct.warnings);
            warn_all(&report.warnings);
            io::write_file(
                out_dir,
                "ck.tsv",
                &render_table(
                    &[
                        "log_return",
                        "direct",
                        "direct_stderr",
                        "composed",
                        "composed_stderr",
                        "residual",
                        "z",
                    ],
                    &[
                        &g,
                        &report.direct.density,
                        &report.direct.stderr,
                        &report.composed,
                        &report.composed_stderr,
                        &report.residual,
                        &report.z,
                    ],
                ),
            )?;

            let mut m = header("ck");
            let mut args = vec!["ck".to_string()];
            model.record(&r, &mut m, &mut args);
            m.set("split", split).set("mesh", mesh);
            args.push(format!("--split {split}"));
            args.push(format!("--mesh {mesh}"));
            grid.record(span, center, &mut m, &mut args);
            sampling.record(&mut m, &mut args);
            let mut s = Manifest::new();
            s.set("first_leg_slices", report.split.0)
                .set("second_leg_slices", report.split.1)
                .float("max_residual", report.max_residual)
                .float("mean_residual", report.mean_residual)
                .float("max_z", report.max_z)
                .float("composed_mass", report.composed_mass);
            finish(out_dir, m, args, s)
        }
        Command::Compare {
            hist,
            curve,
            errbar_multiple,
        } => {
            let h = io::read_histogram(open(hist)?)?;
            let c = io::read_curve(open(curve)?)?;
            let fit = compare_densities(&h, &c.grid, &c.density, *errbar_multiple)?;
            let model: Vec<f64> = h
                .bin_centers
                .iter()
                .map(|&x| {
                    crate::integrator::interpolate_density(
                        &c.grid,
                        &c.density,
                        x.clamp(c.grid[0], c.grid[c.grid.len() - 1]),
                    )
                    .unwrap_or(0.0)
                })
                .collect();
            io::write_file(
                out_dir,
                "compare.tsv",
                &render_table(
                    &["bin_center", "data", "errbar", "model"],
                    &[&h.bin_centers, &h.density, &h.errbar, &model],
                ),
            )?;
            let mut m = header("compare");
            m.set("hist", hist.display())
                .set("curve", curve.display())
                .set("errbar_multiple", errbar_multiple);
            let args = vec![
                "compare".to_string(),
                format!("--hist {}", hist.display()),
                format!("--curve {}", curve.display()),
                format!("--errbar-multiple {errbar_multiple}"),
            ];
            let mut s = Manifest::new();
            fit_summary(&mut s, &fit);
            finish(out_dir, m, args, s)
        }
        Command::Sweep {
            hist,
            gammas,
            ps,
            sigmas,
            rate,
            horizon,
            slices,
            grid_points,
            errbar_multiple,
            sampling,
        } => {
            let h = io::read_histogram(open(hist)?)?;
            let cfg = sampling.config()?;
            let template = ModelParams::new(1.0, 2.0, 1.0, *rate, *horizon, *slices)?;
            let mut triples = Vec::new();
            for &g in gammas {
                for &p in ps {
                    for &s in sigmas {
                        triples.push((g, p, s));
                    }
                }
            }
            let rows = parameter_sweep(&h, &triples, &template, *grid_points, &cfg, *errbar_multiple)?;
            let mut table = String::from("gamma\tp\tsigma\tlog_rmse\twithin_errbar\tchi2\n");
            for row in &rows {
                table.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    row.gamma,
                    row.p,
                    row.sigma,
                    io::cell(row.metrics.log_rmse),
                    io::cell(row.metrics.within),
                    io::cell(row.metrics.chi2)
                ));
            }
            io::write_file(out_dir, "sweep.tsv", &table)?;

            let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            let mut m = header("sweep");
            m.set("hist", hist.display())
                .set("gammas", list(gammas))
                .set("ps", list(ps))
                .set("sigmas", list(sigmas))
                .set("rate", rate)
                .set("T", horizon)
                .set("slices", slices)
                .set("grid_points", grid_points)
                .set("errbar_multiple", errbar_multiple);
            let mut args = vec![
                "sweep".to_string(),
                format!("--hist {}", hist.display()),
                format!("--gammas {}", list(gammas)),
                format!("--ps {}", list(ps)),
                format!("--sigmas {}", list(sigmas)),
                format!("--rate {rate}"),
                format!("--T {horizon}"),
                format!("--slices {slices}"),
                format!("--grid-points {grid_points}"),
                format!("--errbar-multiple {errbar_multiple}"),
            ];
            sampling.record(&mut m, &mut args);
            let best = &rows[0];
            let mut s = Manifest::new();
            s.set("rows", rows.len())
                .set("best_gamma", best.gamma)
                .set("best_p", best.p)
                .set("best_sigma", best.sigma);
            fit_summary(&mut s, &best.metrics);
            finish(out_dir, m, args, s)
        }
    }
}
