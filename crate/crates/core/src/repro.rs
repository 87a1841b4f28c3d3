//! Worked examples and figure data: the exponential/Erlang(2) pair with equal
//! Kerridge inaccuracies, the ratio sweep against Weibull and gamma shapes,
//! and the piecewise residual/past pairs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalogue;
use crate::dist::{Distribution, Parametric};
use crate::dynamic::{self, classify_monotonicity, DynamicKind, DynamicMeasureCurve, MonotonicityVerdict};
use crate::error::{Error, Result};
use crate::measures::{cpi, cpir, cri, crir, kerridge_inaccuracy};
use crate::quad::{find_root, QuadratureConfig, EULER_GAMMA};
use crate::report::sig9;

/// Tolerance for comparisons against printed values.
pub const PRINTED_TOL: f64 = 2e-3;

pub const EXAMPLE_IDS: [&str; 6] = ["example1", "example2.1", "example3.1", "fig1", "fig2", "fig3"];

/// `γ + λ − 2 ln λ − 2/λ`, zero where the two Kerridge inaccuracies agree.
pub fn kerridge_balance(lambda: f64) -> f64 {
    EULER_GAMMA + lambda - 2.0 * lambda.ln() - 2.0 / lambda
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub computed: f64,
    pub printed: f64,
    pub deviation: f64,
    pub within_tolerance: bool,
}

impl Comparison {
    fn new(quantity: &str, computed: f64, printed: f64) -> Self {
        let deviation = computed - printed;
        Self {
            quantity: quantity.into(),
            computed,
            printed,
            deviation,
            within_tolerance: deviation.abs() <= PRINTED_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example1 {
    pub lambda: f64,
    pub residual: f64,
    pub kerridge_xy: f64,
    pub kerridge_yx: f64,
    pub cri_xy: f64,
    pub cri_yx: f64,
    /// `3/λ²`, the closed form of `cri(Y, X)`.
    pub cri_yx_closed: f64,
    pub cpi_xy: f64,
    pub cpi_yx: f64,
    pub comparisons: Vec<Comparison>,
}

fn value(m: crate::measures::MeasureValue) -> Result<f64> {
    m.finite().ok_or_else(|| Error::Undefined(format!("{} diverged", m.name)))
}

/// Solve for `λ` on `[1, 3]` and evaluate X = exp(1) against Y = Erlang(2, λ).
pub fn example1(cfg: &QuadratureConfig) -> Result<Example1> {
    let lambda = find_root(kerridge_balance, 1.0, 3.0, 1e-14)?;
    let x = Parametric::exponential(1.0)?;
    let y = Parametric::erlang(2.0, lambda)?;
    let kerridge_xy = value(kerridge_inaccuracy(&x, &y, cfg)?)?;
    let kerridge_yx = value(kerridge_inaccuracy(&y, &x, cfg)?)?;
    let cri_xy = value(cri(&x, &y, cfg)?)?;
    let cri_yx = value(cri(&y, &x, cfg)?)?;
    let cpi_xy = value(cpi(&x, &y, cfg)?)?;
    let cpi_yx = value(cpi(&y, &x, cfg)?)?;
    let comparisons = vec![
        Comparison::new("lambda", lambda, 0.624182),
        Comparison::new("cri_xy", cri_xy, 0.809178),
        Comparison::new("cri_yx", cri_yx, 1.13724),
        Comparison::new("cpi_xy", cpi_xy, 0.955988),
        Comparison::new("cpi_yx", cpi_yx, 0.458129),
    ];
    Ok(Example1 {
        lambda,
        residual: kerridge_balance(lambda),
        kerridge_xy,
        kerridge_yx,
        cri_xy,
        cri_yx,
        cri_yx_closed: 3.0 / (lambda * lambda),
        cpi_xy,
        cpi_yx,
        comparisons,
    })
}

/// Shape family of `Y` in the ratio sweep, scale 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeFamily {
    Weibull,
    Gamma,
}

impl ShapeFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Weibull => "weibull",
            Self::Gamma => "gamma",
        }
    }

    pub fn build(self, r: f64) -> Result<Distribution> {
        match self {
            Self::Weibull => Parametric::weibull(1.0, r),
            Self::Gamma => Parametric::gamma(1.0, r),
        }
    }
}

impl std::str::FromStr for ShapeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weibull" => Ok(Self::Weibull),
            "gamma" => Ok(Self::Gamma),
            other => Err(Error::Config(format!("unknown sweep family `{other}` (weibull, gamma)"))),
        }
    }
}

/// One row of the ratio sweep; `None` marks a diverged cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub r: f64,
    pub crir_xy: Option<f64>,
    pub cpir_xy: Option<f64>,
    pub crir_yx: Option<f64>,
    pub cpir_yx: Option<f64>,
}

impl RatioRow {
    pub fn columns(&self) -> [Option<f64>; 4] {
        [self.crir_xy, self.cpir_xy, self.crir_yx, self.cpir_yx]
    }

    pub fn diverged(&self) -> bool {
        self.columns().iter().any(Option::is_none)
    }
}

pub const RATIO_HEADER: &str = "r,crir_xy,cpir_xy,crir_yx,cpir_yx,diverged";

/// `r = step, 2·step, …` strictly below `end`, computed as `i·step` to avoid
/// accumulated drift.
pub fn shape_grid(step: f64, end: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && end > step) {
        return Err(Error::Config(format!("bad sweep range: step {step}, end {end}")));
    }
    let n = ((end / step) - 1e-9).floor() as usize;
    Ok((1..=n).map(|i| i as f64 * step).collect())
}

/// CRIR and CPIR of X = exp(1) against `family(1, r)` in both orders.
pub fn ratio_sweep(family: ShapeFamily, rs: &[f64], cfg: &QuadratureConfig) -> Result<Vec<RatioRow>> {
    let x = Parametric::exponential(1.0)?;
    rs.par_iter()
        .map(|&r| {
            let y = family.build(r)?;
            let f = |m: crate::measures::MeasureValue| m.finite();
            Ok(RatioRow {
                r,
                crir_xy: f(crir(&x, &y, cfg)?),
                cpir_xy: f(cpir(&x, &y, cfg)?),
                crir_yx: f(crir(&y, &x, cfg)?),
                cpir_yx: f(cpir(&y, &x, cfg)?),
            })
        })
        .collect()
}

pub fn ratio_csv(rows: &[RatioRow]) -> String {
    let mut out = format!("{RATIO_HEADER}\n");
    for row in rows {
        let cells: Vec<String> = row.columns().iter().map(|c| c.map(sig9).unwrap_or_default()).collect();
        out.push_str(&format!("{},{},{}\n", sig9(row.r), cells.join(","), row.diverged()));
    }
    out
}

/// `n` midpoints of equal cells of `(a, b)`.
pub fn open_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub curve: DynamicMeasureCurve,
    pub verdict: MonotonicityVerdict,
}

fn curve_report(kind: DynamicKind, x: &Distribution, y: &Distribution, grid: &[f64], cfg: &QuadratureConfig) -> Result<CurveReport> {
    let curve = dynamic::curve(kind, x, Some(y), grid, cfg)?;
    let verdict = classify_monotonicity(&curve)?;
    Ok(CurveReport { curve, verdict })
}

/// DCRI of the piecewise residual pair on 64 points of `(3, 4)`.
pub fn residual_pair_curve(cfg: &QuadratureConfig) -> Result<CurveReport> {
    let (x, y) = catalogue::residual_pair()?;
    curve_report(DynamicKind::Dcri, &x, &y, &open_grid(3.0, 4.0, 64), cfg)
}

/// DCPI of the piecewise past pair on 64 points of `(a, b)`.
pub fn past_pair_curve(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<CurveReport> {
    let (x, y) = catalogue::past_pair()?;
    curve_report(DynamicKind::Dcpi, &x, &y, &open_grid(a, b, 64), cfg)
}

/// A computed value next to the printed formula at one time point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCheck {
    pub t: f64,
    pub computed: f64,
    pub printed: f64,
    pub deviation: f64,
}

fn point_checks(kind: DynamicKind, x: &Distribution, y: &Distribution, ts: &[f64], printed: fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<Vec<PointCheck>> {
    ts.iter()
        .map(|&t| {
            let computed = value(kind.eval(x, Some(y), t, cfg)?)?;
            let p = printed(t);
            Ok(PointCheck { t, computed, printed: p, deviation: computed - p })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example21 {
    pub curve: CurveReport,
    pub points: Vec<PointCheck>,
}

/// The residual pair: the (3, 4) curve and the printed closed form at
/// points before, inside and after that interval.
pub fn example21(cfg: &QuadratureConfig) -> Result<Example21> {
    let (x, y) = catalogue::residual_pair()?;
    let ts = [1.0, 2.0, 3.0, 3.25, 3.5, 3.75, 4.0, 4.5, 6.0];
    Ok(Example21 {
        curve: residual_pair_curve(cfg)?,
        points: point_checks(DynamicKind::Dcri, &x, &y, &ts, catalogue::residual_pair_printed_dcri, cfg)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example31 {
    pub late: CurveReport,
    pub early: CurveReport,
    pub points: Vec<PointCheck>,
}

/// The past pair: curves on (2, 5) and (0, 2) plus the printed integral.
pub fn example31(cfg: &QuadratureConfig) -> Result<Example31> {
    let (x, y) = catalogue::past_pair()?;
    let ts = [2.0, 2.5, 3.0, 4.0, 5.0];
    Ok(Example31 {
        late: past_pair_curve(2.0, 5.0, cfg)?,
        early: past_pair_curve(0.0, 2.0, cfg)?,
        points: point_checks(DynamicKind::Dcpi, &x, &y, &ts, catalogue::past_pair_printed_dcpi, cfg)?,
    })
}
