//! JSON run configuration, merged with command-line flags (flags win).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dist::{DistSpec, Distribution};
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Measure,
    Curve,
    Sweep,
    Windows,
    Verify,
    Reproduce,
}

/// Time grid of a curve: `n` points, uniform on `[from, to]` when both ends
/// are given, the measure's default grid otherwise.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub n: Option<usize>,
    /// Explicit points; overrides the other fields.
    pub points: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// Named specs; `x` and `y` may name one of these or hold a spec.
    pub distributions: BTreeMap<String, DistSpec>,
    pub measure: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub grid: GridConfig,
    /// Window sweeps: fixed upper end, lowest `t1`, number of `t1` values.
    pub t2: Option<f64>,
    pub t1_from: Option<f64>,
    pub windows: Option<usize>,
    /// Ratio sweep: `weibull` or `gamma`, shape step and exclusive end.
    pub family: Option<String>,
    pub step: Option<f64>,
    pub end: Option<f64>,
    pub ids: Vec<String>,
    pub trials: Option<usize>,
    pub seeds: Vec<u64>,
    pub example: Option<String>,
    pub quadrature: Option<QuadratureConfig>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub strict: bool,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
    }

    /// Overlay `over` on `self`: set fields of `over` replace ours.
    pub fn merge(self, over: RunConfig) -> RunConfig {
        let mut distributions = self.distributions;
        distributions.extend(over.distributions);
        RunConfig {
            command: over.command.or(self.command),
            distributions,
            measure: over.measure.or(self.measure),
            x: over.x.or(self.x),
            y: over.y.or(self.y),
            grid: GridConfig {
                from: over.grid.from.or(self.grid.from),
                to: over.grid.to.or(self.grid.to),
                n: over.grid.n.or(self.grid.n),
                points: over.grid.points.or(self.grid.points),
            },
            t2: over.t2.or(self.t2),
            t1_from: over.t1_from.or(self.t1_from),
            windows: over.windows.or(self.windows),
            family: over.family.or(self.family),
            step: over.step.or(self.step),
            end: over.end.or(self.end),
            ids: if over.ids.is_empty() { self.ids } else { over.ids },
            trials: over.trials.or(self.trials),
            seeds: if over.seeds.is_empty() { self.seeds } else { over.seeds },
            example: over.example.or(self.example),
            quadrature: over.quadrature.or(self.quadrature),
            out: over.out.or(self.out),
            seed: over.seed.or(self.seed),
            strict: over.strict || self.strict,
            tol: over.tol.or(self.tol),
        }
    }

    /// Quadrature policy with `tol` applied as the relative tolerance.
    pub fn quadrature(&self) -> Result<QuadratureConfig> {
        let mut q = self.quadrature.unwrap_or_default();
        if let Some(t) = self.tol {
            q.rel_tol = t;
        }
        q.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(q)
    }

    /// Resolve a name from `distributions`, else parse it as a spec.
    pub fn distribution(&self, name: &str) -> Result<Distribution> {
        let spec = match self.distributions.get(name) {
            Some(s) => s.clone(),
            None => DistSpec::parse(name)?,
        };
        spec.build()
    }

    pub fn require_x(&self) -> Result<Distribution> {
        let name = self.x.as_deref().ok_or_else(|| Error::Config("missing --x".into()))?;
        self.distribution(name)
    }

    pub fn y_if(&self, needed: bool) -> Result<Option<Distribution>> {
        match (&self.y, needed) {
            (Some(name), _) => self.distribution(name).map(Some),
            (None, true) => Err(Error::Config("missing --y".into())),
            (None, false) => Ok(None),
        }
    }

    pub fn require_measure(&self) -> Result<&str> {
        self.measure.as_deref().ok_or_else(|| Error::Config("missing --measure".into()))
    }

    /// Check that the output location can be written before computing;
    /// `is_dir` outputs are created.
    pub fn check_out(&self, is_dir: bool) -> Result<()> {
        let Some(p) = &self.out else { return Ok(()) };
        if is_dir {
            return std::fs::create_dir_all(p).map_err(|e| Error::Config(format!("cannot create {}: {e}", p.display())));
        }
        match p.parent() {
            Some(d) if !d.as_os_str().is_empty() && !d.is_dir() => {
                Err(Error::Config(format!("output directory {} does not exist", d.display())))
            }
            _ if p.is_dir() => Err(Error::Config(format!("output path {} is a directory", p.display()))),
            _ => Ok(()),
        }
    }
}
