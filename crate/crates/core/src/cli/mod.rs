//! Command-line front end.
//!
//! Exit status: 0 ok, 1 verification failure, 2 configuration error,
//! 3 divergence under `--strict`.

pub mod config;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::dynamic::{self, classify_monotonicity, DynamicKind};
use crate::error::{Error, Result};
use crate::interval::{self, WindowRow};
use crate::measures;
use crate::order::{self, HarnessConfig};
use crate::repro::{self, ShapeFamily};

pub use config::{Command, GridConfig, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cuminfo", version, about = "Cumulative entropy and inaccuracy measures for lifetime distributions")]
pub struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file (a directory for `reproduce`); standard output otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed of randomized sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exit with status 3 when any value diverges.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Option<Cmd>,
}

#[derive(Debug, Args, Default)]
pub struct Pair {
    /// Distribution name from the config, or a spec such as `weibull:1,2`.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// One static measure as a JSON object.
    Measure {
        #[arg(long)]
        measure: Option<String>,
        #[command(flatten)]
        pair: Pair,
    },
    /// A dynamic measure over a time grid as CSV; the monotonicity verdict
    /// goes to standard error.
    Curve {
        /// dcre, dcri, dcpe or dcpi.
        #[arg(long)]
        measure: Option<String>,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Inaccuracy ratios of exp(1) against a Weibull or gamma shape sweep.
    Sweep {
        /// weibull or gamma.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        step: Option<f64>,
        /// Exclusive upper end of the shape range.
        #[arg(long)]
        end: Option<f64>,
    },
    /// A window measure over `t1` for a fixed `t2` as CSV.
    Windows {
        #[arg(long)]
        measure: Option<String>,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t2: Option<f64>,
        #[arg(long)]
        t1_from: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run registry entries on canonical and random bindings; one JSON
    /// report per line.
    Verify {
        /// Entry ids, or `all`.
        ids: Vec<String>,
        /// Random trials per entry and seed.
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated seeds; defaults to `--seed`, then 1.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
    /// Recompute a worked example or figure.
    Reproduce {
        /// example1, example2.1, example3.1, fig1, fig2 or fig3.
        id: Option<String>,
    },
}

impl Cli {
    /// The flags as a configuration layer.
    fn layer(self) -> RunConfig {
        let mut c = RunConfig {
            out: self.out,
            seed: self.seed,
            strict: self.strict,
            tol: self.tol,
            ..Default::default()
        };
        let pair = |c: &mut RunConfig, p: Pair| {
            c.x = p.x;
            c.y = p.y;
        };
        match self.command {
            None => {}
            Some(Cmd::Measure { measure, pair: p }) => {
                c.command = Some(Command::Measure);
                c.measure = measure;
                pair(&mut c, p);
            }
            Some(Cmd::Curve { measure, pair: p, from, to, n }) => {
                c.command = Some(Command::Curve);
                c.measure = measure;
                pair(&mut c, p);
                c.grid = GridConfig { from, to, n, points: None };
            }
            Some(Cmd::Sweep { family, step, end }) => {
                c.command = Some(Command::Sweep);
                c.family = family;
                c.step = step;
                c.end = end;
            }
            Some(Cmd::Windows { measure, pair: p, t2, t1_from, n }) => {
                c.command = Some(Command::Windows);
                c.measure = measure;
                pair(&mut c, p);
                c.t2 = t2;
                c.t1_from = t1_from;
                c.windows = n;
            }
            Some(Cmd::Verify { ids, trials, seeds }) => {
                c.command = Some(Command::Verify);
                c.ids = ids;
                c.trials = trials;
                c.seeds = seeds;
            }
            Some(Cmd::Reproduce { id }) => {
                c.command = Some(Command::Reproduce);
                c.example = id;
            }
        }
        c
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    let base = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = base.merge(cli.layer());
    execute(&cfg)
}

/// Run a fully merged configuration.
pub fn execute(cfg: &RunConfig) -> Result<i32> {
    let command = cfg
        .command
        .ok_or_else(|| Error::Config("no command given on the command line or in the config".into()))?;
    let quad = cfg.quadrature()?;
    cfg.check_out(command == Command::Reproduce)?;
    match command {
        Command::Measure => cmd_measure(cfg, &quad),
        Command::Curve => cmd_curve(cfg, &quad),
        Command::Sweep => cmd_sweep(cfg, &quad),
        Command::Windows => cmd_windows(cfg, &quad),
        Command::Verify => cmd_verify(cfg, &quad),
        Command::Reproduce => cmd_reproduce(cfg, &quad),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn strict_status(cfg: &RunConfig, diverged: bool) -> i32 {
    if cfg.strict && diverged {
        EXIT_DIVERGED
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct MeasureOutput<'a> {
    measure: &'a str,
    value: Option<f64>,
    error_estimate: Option<f64>,
    diverged: bool,
}

fn cmd_measure(cfg: &RunConfig, quad: &crate::QuadratureConfig) -> Result<i32> {
    let name = cfg.require_measure()?;
    if !measures::MEASURE_NAMES.contains(&name) {
        return Err(Error::Config(format!(
            "unknown measure `{name}` ({})",
            measures::MEASURE_NAMES.join(", ")
        )));
    }
    let x = cfg.require_x()?;
    let y = cfg.y_if(measures::is_binary(name))?;
    let m = measures::compute(name, &x, y.as_ref(), quad)?;
    let out = MeasureOutput {
        measure: name,
        value: m.finite(),
        error_estimate: Some(m.error()).filter(|e| e.is_finite()),
        diverged: m.diverged(),
    };
    emit(cfg, &format!("{}\n", serde_json::to_string(&out)?))?;
    Ok(strict_status(cfg, m.diverged()))
}

fn cmd_curve(cfg: &RunConfig, quad: &crate::QuadratureConfig) -> Result<i32> {
    let kind: DynamicKind = cfg.require_measure()?.parse()?;
    let x = cfg.require_x()?;
    let y = cfg.y_if(kind.is_binary())?;
    let g = &cfg.grid;
    let n = g.n.unwrap_or(64);
    let grid = match (&g.points, g.from, g.to) {
        (Some(p), _, _) => p.clone(),
        (None, Some(a), Some(b)) => {
            if !(b > a) || n < 2 {
                return Err(Error::Config(format!("bad grid: from {a}, to {b}, n {n}")));
            }
            crate::grid::uniform(a, b, n)
        }
        (None, None, None) => kind.default_grid(&x, y.as_ref(), n)?,
        _ => return Err(Error::Config("a grid needs both --from and --to".into())),
    };
    let curve = dynamic::curve(kind, &x, y.as_ref(), &grid, quad)?;
    emit(cfg, &curve.to_csv())?;
    match classify_monotonicity(&curve) {
        Ok(v) => eprintln!("{}", serde_json::to_string(&v)?),
        Err(e) => eprintln!("monotonicity: {e}"),
    }
    Ok(strict_status(cfg, !curve.diverged_at.is_empty()))
}

fn cmd_sweep(cfg: &RunConfig, quad: &crate::QuadratureConfig) -> Result<i32> {
    let family: ShapeFamily = cfg.family.as_deref().unwrap_or("weibull").parse()?;
    let rs = repro::shape_grid(cfg.step.unwrap_or(0.2), cfg.end.unwrap_or(3.0))?;
    let rows = repro::ratio_sweep(family, &rs, quad)?;
    emit(cfg, &repro::ratio_csv(&rows))?;
    Ok(strict_status(cfg, rows.iter().any(|r| r.diverged())))
}

fn cmd_windows(cfg: &RunConfig, quad: &crate::QuadratureConfig) -> Result<i32> {
    let name = cfg.require_measure()?;
    if !interval::WINDOW_MEASURES.contains(&name) {
        return Err(Error::Config(format!(
            "unknown window measure `{name}` ({})",
            interval::WINDOW_MEASURES.join(", ")
        )));
    }
    let x = cfg.require_x()?;
    let y = cfg.y_if(!matches!(name, "icre" | "icpe"))?;
    let t2 = cfg.t2.ok_or_else(|| Error::Config("missing --t2".into()))?;
    let lo = cfg.t1_from.unwrap_or_else(|| {
        std::iter::once(&x)
            .chain(y.as_ref())
            .map(|d| d.support().lo)
            .fold(f64::NEG_INFINITY, f64::max)
    });
    if !(t2 > lo) {
        return Err(Error::Config(format!("t2 = {t2} must exceed the lowest t1 = {lo}")));
    }
    let rows: Vec<WindowRow> = interval::t1_grid(lo, t2, cfg.windows.unwrap_or(32))
        .into_iter()
        .map(|t1| {
            let m = interval::window_measure(name, &x, y.as_ref(), t1, t2, quad)?;
            Ok(WindowRow {
                t1,
                t2,
                measure: name.to_string(),
                value: m.value,
                diverged: m.diverged(),
            })
        })
        .collect::<Result<_>>()?;
    emit(cfg, &interval::windows_csv(&rows))?;
    Ok(strict_status(cfg, rows.iter().any(|r| r.diverged)))
}

fn cmd_verify(cfg: &RunConfig, quad: &crate::QuadratureConfig) -> Result<i32> {
    let ids: Vec<&str> = cfg.ids.iter().map(String::as_str).collect();
    let seeds = if cfg.seeds.is_empty() { vec![cfg.seed.unwrap_or(1)] } else { cfg.seeds.clone() };
    let h = HarnessConfig { quad: *quad, ..Default::default() };
    let v = order::verify(&ids, cfg.trials.unwrap_or(100), &seeds, &h)?;
    let mut text = String::new();
    for r in &v.reports {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    emit(cfg, &text)?;
    let count = |s: crate::Status| v.reports.iter().filter(|r| r.status == s).count();
    eprintln!(
        "verify: {} reports, {} pass, {} fail, {} error, {} precondition failed; {} counted failures",
        v.reports.len(),
        count(crate::Status::Pass),
        count(crate::Status::Fail),
        count(crate::Status::Error),
        count(crate::Status::PreconditionFailed),
        v.counted_failures
    );
    Ok(if v.ok() { EXIT_OK } else { EXIT_FAILURE })
}

fn write_file(dir: &Path, name: &str, text: &str, files: &mut Vec<String>) -> Result<()> {
    let p = dir.join(name);
    std::fs::write(&p, text)?;
    files.push(p.display().to_string());
    Ok(())
}

fn cmd_reproduce(cfg: &RunConfig, quad: &crate::QuadratureConfig) -> Result<i32> {
    let id = cfg
        .example
        .as_deref()
        .ok_or_else(|| Error::Config(format!("reproduce needs an id ({})", repro::EXAMPLE_IDS.join(", "))))?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut files = Vec::new();
    let mut diverged = false;
    let report = match id.to_ascii_lowercase().as_str() {
        "example1" => {
            let e = repro::example1(quad)?;
            let v = serde_json::to_value(&e)?;
            write_file(&dir, "example1.json", &format!("{}\n", serde_json::to_string_pretty(&v)?), &mut files)?;
            v
        }
        "example2.1" | "fig2" => {
            let e = repro::example21(quad)?;
            diverged = !e.curve.curve.diverged_at.is_empty();
            let name = if id == "fig2" { "fig2.csv" } else { "example2.1.csv" };
            write_file(&dir, name, &e.curve.curve.to_csv(), &mut files)?;
            json!({"verdict": e.curve.verdict, "points": e.points})
        }
        "example3.1" | "fig3" => {
            let e = repro::example31(quad)?;
            diverged = !e.late.curve.diverged_at.is_empty() || !e.early.curve.diverged_at.is_empty();
            let stem = if id == "fig3" { "fig3" } else { "example3.1" };
            write_file(&dir, &format!("{stem}.csv"), &e.late.curve.to_csv(), &mut files)?;
            write_file(&dir, &format!("{stem}_early.csv"), &e.early.curve.to_csv(), &mut files)?;
            json!({"verdict": e.late.verdict, "early_verdict": e.early.verdict, "points": e.points})
        }
        "fig1" => {
            let rs = repro::shape_grid(0.2, 3.0)?;
            let mut verdicts = serde_json::Map::new();
            for fam in [ShapeFamily::Weibull, ShapeFamily::Gamma] {
                let rows = repro::ratio_sweep(fam, &rs, quad)?;
                diverged |= rows.iter().any(|r| r.diverged());
                write_file(&dir, &format!("fig1_{}.csv", fam.name()), &repro::ratio_csv(&rows), &mut files)?;
                verdicts.insert(fam.name().into(), json!(ratio_signs(&rows)));
            }
            json!({"sign_changes": verdicts})
        }
        other => {
            return Err(Error::Config(format!(
                "unknown example `{other}` ({})",
                repro::EXAMPLE_IDS.join(", ")
            )))
        }
    };
    let out = json!({"example": id, "files": files, "report": report});
    println!("{}", serde_json::to_string(&out)?);
    Ok(strict_status(cfg, diverged))
}

/// Per column: whether consecutive finite differences change sign.
fn ratio_signs(rows: &[repro::RatioRow]) -> serde_json::Value {
    let names = ["crir_xy", "cpir_xy", "crir_yx", "cpir_yx"];
    let mut m = serde_json::Map::new();
    for (k, name) in names.iter().enumerate() {
        let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.columns()[k].map(|v| (r.r, v))).collect();
        let verdict = dynamic::classify_points(&pts).map(|v| v.classification.to_string());
        m.insert((*name).into(), json!(verdict.unwrap_or_else(|e| e.to_string())));
    }
    serde_json::Value::Object(m)
}
