//! Residual and past (dynamic) versions of the cumulative measures, their
//! derivatives and curves, and the identities that relate them.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{
    affine, hazard_rate, integrate_range_with, mean_inactivity_time, mean_residual_life, reversed_hazard_rate,
    truncated_mean, Distribution,
};
use crate::error::{invalid, Error, Result};
use crate::grid::{self, with_breakpoints};
use crate::measures::{points_in, settle, MeasureValue};
use crate::order::{certify_order_on, OrderRelation};
use crate::quad::{neg_p_lnq, IntegralResult, QuadratureConfig};
use crate::report::{sig9, PropositionReport, Relation, Status};

/// Pointwise tolerance for model and symmetry preconditions.
pub const MODEL_TOL: f64 = 1e-9;
/// Band inside which a step counts as flat.
pub const FLAT_BAND: f64 = 1e-9;
pub const DEFAULT_CURVE_POINTS: usize = 64;

/// `−∫_t^∞ (F̄/F̄(t)) ln(Ḡ/Ḡ(t))`, with `X = Y` giving the residual entropy.
fn residual(name: &str, x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (lfx, lgy) = (x.ln_survival(t), y.ln_survival(t));
    for (d, l) in [(x, lfx), (y, lgy)] {
        if l == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("{name}: survival of {} vanishes at t = {t}", d.label())));
        }
    }
    let (sx, sy) = (x.support(), y.support());
    if sx.hi > sy.hi {
        return Ok(MeasureValue::new(name, &[x, y], IntegralResult::diverged(0.0)));
    }
    // below lo_Y both Ḡ(u) and Ḡ(t) are 1
    let a = t.max(sy.lo);
    let b = sx.hi;
    let cond = |u: f64| (x.ln_survival(u) - lfx).min(0.0).exp();
    let r = integrate_range_with(
        |u| neg_p_lnq(cond(u), (y.ln_survival(u) - lgy).min(0.0)),
        a,
        b,
        &points_in(&[x, y], a, b),
        Some(&cond),
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new(name, &[x, y], settle(r)?))
}

/// `−∫_0^t (F/F(t)) ln(G/G(t))`, with `X = Y` giving the past entropy.
fn past(name: &str, x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (lfx, lgy) = (x.ln_cdf(t), y.ln_cdf(t));
    for (d, l) in [(x, lfx), (y, lgy)] {
        if l == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("{name}: cdf of {} vanishes at t = {t}", d.label())));
        }
    }
    let (sx, sy) = (x.support(), y.support());
    if sx.lo < sy.lo {
        return Ok(MeasureValue::new(name, &[x, y], IntegralResult::diverged(0.0)));
    }
    // above hi_Y both G(u) and G(t) are 1
    let a = sx.lo;
    let b = t.min(sy.hi);
    let r = integrate_range_with(
        |u| neg_p_lnq((x.ln_cdf(u) - lfx).min(0.0).exp(), (y.ln_cdf(u) - lgy).min(0.0)),
        a,
        b,
        &points_in(&[x, y], a, b),
        None,
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new(name, &[x, y], settle(r)?))
}

/// Dynamic cumulative residual entropy `ε(X; t)`.
pub fn dcre(x: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    residual("dcre", x, x, t, cfg)
}

/// Dynamic cumulative residual inaccuracy `𝒞H_{X,Y}(t)`.
pub fn dcri(x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    residual("dcri", x, y, t, cfg)
}

/// Dynamic cumulative past entropy `ε̄(X; t)`.
pub fn dcpe(x: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    past("dcpe", x, x, t, cfg)
}

/// Dynamic cumulative past inaccuracy `𝒞H̄_{X,Y}(t)`.
pub fn dcpi(x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    past("dcpi", x, y, t, cfg)
}

fn finite(m: &MeasureValue) -> Result<f64> {
    m.finite()
        .ok_or_else(|| Error::Undefined(format!("{} diverges for {}", m.name, m.inputs.join(", "))))
}

/// `d/dt 𝒞H_{X,Y}(t) = λ_F(t)·𝒞H_{X,Y}(t) − λ_G(t)·δ_F(t)`.
///
/// Fails where either hazard is undefined (breakpoints, outside supports).
pub fn dcri_derivative(x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let lf = hazard_rate(x, t)?;
    let lg = hazard_rate(y, t)?;
    let h = finite(&dcri(x, y, t, cfg)?)?;
    let mrl = mean_residual_life(x, t, cfg)?;
    if mrl.diverged {
        return Err(Error::Undefined(format!("mean residual life of {} is infinite", x.label())));
    }
    Ok(lf * h - lg * mrl.value)
}

/// `d/dt 𝒞H̄_{X,Y}(t) = φ_G(t)·m_F(t) − φ_F(t)·𝒞H̄_{X,Y}(t)`.
pub fn dcpi_derivative(x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let pf = reversed_hazard_rate(x, t)?;
    let pg = reversed_hazard_rate(y, t)?;
    let h = finite(&dcpi(x, y, t, cfg)?)?;
    let m = mean_inactivity_time(x, t, cfg)?;
    Ok(pg * m - pf * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DynamicKind {
    Dcre,
    Dcri,
    Dcpe,
    Dcpi,
}

impl DynamicKind {
    pub const ALL: [DynamicKind; 4] = [Self::Dcre, Self::Dcri, Self::Dcpe, Self::Dcpi];

    pub fn name(self) -> &'static str {
        match self {
            Self::Dcre => "dcre",
            Self::Dcri => "dcri",
            Self::Dcpe => "dcpe",
            Self::Dcpi => "dcpi",
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, Self::Dcri | Self::Dcpi)
    }

    pub fn is_residual(self) -> bool {
        matches!(self, Self::Dcre | Self::Dcri)
    }

    /// Evaluate at `t`; `y` is ignored by the entropies and required by the
    /// inaccuracies.
    pub fn eval(self, x: &Distribution, y: Option<&Distribution>, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
        let need_y = || y.ok_or_else(|| Error::Config(format!("{} needs a second distribution", self.name())));
        match self {
            Self::Dcre => dcre(x, t, cfg),
            Self::Dcri => dcri(x, need_y()?, t, cfg),
            Self::Dcpe => dcpe(x, t, cfg),
            Self::Dcpi => dcpi(x, need_y()?, t, cfg),
        }
    }

    /// Default evaluation grid: `n` points over the range where the measure
    /// is defined, geometric toward an unbounded end, uniform otherwise,
    /// straddling every breakpoint.
    pub fn default_grid(self, x: &Distribution, y: Option<&Distribution>, n: usize) -> Result<Vec<f64>> {
        if n < 2 {
            return Err(invalid("n", "grid needs at least 2 points"));
        }
        let ds: Vec<&Distribution> = std::iter::once(x).chain(y.filter(|_| self.is_binary())).collect();
        let lo = ds.iter().map(|d| d.support().lo).fold(f64::NEG_INFINITY, f64::max);
        let hi_sup = ds.iter().map(|d| d.support().hi).fold(f64::INFINITY, f64::min);
        let hi = if hi_sup.is_finite() { hi_sup } else { grid::effective_upper(&ds, 1e-6) };
        if !(hi > lo) {
            return Err(Error::Domain(format!("{}: supports do not overlap", self.name())));
        }
        let pts = if !hi_sup.is_finite() {
            let mut p = if self.is_residual() { vec![lo] } else { vec![] };
            let m = if self.is_residual() { n - 1 } else { n };
            p.extend(grid::geometric(lo, hi, 1e-3 * (hi - lo), m));
            p
        } else {
            let u = grid::uniform(lo, hi, n + 1);
            // residual forms need F̄(t) > 0, past forms F(t) > 0
            if self.is_residual() {
                u[..n].to_vec()
            } else {
                u[1..].to_vec()
            }
        };
        let bps: Vec<f64> = ds.iter().flat_map(|d| d.breakpoints()).collect();
        Ok(with_breakpoints(pts, &bps, lo, hi))
    }
}

impl fmt::Display for DynamicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DynamicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown dynamic measure `{s}` (dcre, dcri, dcpe, dcpi)")))
    }
}

/// A dynamic measure sampled on a grid. Diverged points carry `NaN` in
/// `values` and are listed in `diverged_at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicMeasureCurve {
    pub measure: String,
    pub inputs: Vec<String>,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub diverged_at: Vec<f64>,
}

impl DynamicMeasureCurve {
    /// `t,value,diverged` rows, 9 significant digits, diverged values blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value,diverged\n");
        for (t, v) in self.t_grid.iter().zip(&self.values) {
            let div = !v.is_finite();
            out.push_str(&format!("{},{},{}\n", sig9(*t), if div { String::new() } else { sig9(*v) }, div));
        }
        out
    }

    /// `(t, value)` pairs with a finite value.
    pub fn finite_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t_grid
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.is_finite())
            .map(|(t, v)| (*t, *v))
    }
}

/// Evaluate a dynamic measure over `grid`, points in parallel.
pub fn curve(
    kind: DynamicKind,
    x: &Distribution,
    y: Option<&Distribution>,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<DynamicMeasureCurve> {
    let vals: Vec<MeasureValue> = grid
        .par_iter()
        .map(|&t| kind.eval(x, y, t, cfg))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = vals.iter().map(|m| m.finite().unwrap_or(f64::NAN)).collect();
    let diverged_at = grid
        .iter()
        .zip(&vals)
        .filter(|(_, m)| m.diverged())
        .map(|(t, _)| *t)
        .collect();
    Ok(DynamicMeasureCurve {
        measure: kind.name().to_string(),
        inputs: std::iter::once(x)
            .chain(y.filter(|_| kind.is_binary()))
            .map(|d| d.label())
            .collect(),
        t_grid: grid.to_vec(),
        values,
        diverged_at,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    #[serde(rename = "increasing")]
    Increasing,
    #[serde(rename = "decreasing")]
    Decreasing,
    #[serde(rename = "non-monotone")]
    NonMonotone,
    #[serde(rename = "constant")]
    Constant,
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Increasing => "increasing",
            Self::Decreasing => "decreasing",
            Self::NonMonotone => "non-monotone",
            Self::Constant => "constant",
        })
    }
}

/// Steps are nonstrict: "increasing" allows flat stretches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub classification: Monotonicity,
    /// For a non-monotone curve: a rising step `(t_i, t_{i+1})` and a
    /// falling one.
    pub witness_points: Vec<(f64, f64)>,
}

/// Classify the finite part of a curve, treating steps within ±1e-9 as flat.
pub fn classify_monotonicity(curve: &DynamicMeasureCurve) -> Result<MonotonicityVerdict> {
    let pts: Vec<(f64, f64)> = curve.finite_points().collect();
    classify_points(&pts)
}

/// [`classify_monotonicity`] on raw `(t, value)` pairs.
pub fn classify_points(pts: &[(f64, f64)]) -> Result<MonotonicityVerdict> {
    if pts.len() < 8 {
        return Err(Error::Domain(format!(
            "monotonicity needs at least 8 finite points, got {}",
            pts.len()
        )));
    }
    let mut rise = None;
    let mut fall = None;
    for w in pts.windows(2) {
        let d = w[1].1 - w[0].1;
        if d > FLAT_BAND && rise.is_none() {
            rise = Some((w[0].0, w[1].0));
        } else if d < -FLAT_BAND && fall.is_none() {
            fall = Some((w[0].0, w[1].0));
        }
    }
    let (classification, witness_points) = match (rise, fall) {
        (None, None) => (Monotonicity::Constant, vec![]),
        (Some(_), None) => (Monotonicity::Increasing, vec![]),
        (None, Some(_)) => (Monotonicity::Decreasing, vec![]),
        (Some(r), Some(f)) => (Monotonicity::NonMonotone, vec![r, f]),
    };
    Ok(MonotonicityVerdict {
        classification,
        witness_points,
    })
}

fn report_tol(a: &MeasureValue, b: &MeasureValue) -> f64 {
    1e-6_f64.max(10.0 * (a.error() + b.error()))
}

fn labels(ds: &[&Distribution]) -> Vec<String> {
    ds.iter().map(|d| d.label()).collect()
}

/// Largest pointwise `|lhs(t) − rhs(t)|` over `grid`.
fn model_gap(grid: &[f64], lhs: impl Fn(f64) -> f64, rhs: impl Fn(f64) -> f64) -> f64 {
    grid.iter().map(|&t| (lhs(t) - rhs(t)).abs()).fold(0.0, f64::max)
}

struct Worst {
    t: f64,
    lhs: MeasureValue,
    rhs: MeasureValue,
    gap: f64,
    alt_gap: f64,
}

/// Shared driver of the power-model identities: `k·lhs(t) = rhs(t)` on the
/// grid, also tracking the reading `lhs(t) = k·rhs(t)`.
#[allow(clippy::too_many_arguments)]
fn power_identity(
    id: &str,
    part: &str,
    x: &Distribution,
    y: &Distribution,
    k: f64,
    grid: &[f64],
    lhs: impl Fn(f64) -> Result<MeasureValue> + Sync,
    rhs: impl Fn(f64) -> Result<MeasureValue> + Sync,
) -> Result<PropositionReport> {
    let inputs = {
        let mut v = labels(&[x, y]);
        v.push(format!("k={k}"));
        v
    };
    let rows: Vec<(f64, MeasureValue, MeasureValue)> = grid
        .par_iter()
        .map(|&t| Ok((t, lhs(t)?, rhs(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: Option<Worst> = None;
    let mut tol = 1e-6_f64;
    let mut alt_worst = 0f64;
    for (t, l, r) in rows {
        if l.diverged() || r.diverged() {
            if l.diverged() != r.diverged() {
                return Ok(PropositionReport::skipped(
                    id,
                    part,
                    inputs,
                    Status::Fail,
                    format!("only one side diverges at t = {t}"),
                ));
            }
            continue;
        }
        tol = tol.max(report_tol(&l, &r) * k.max(1.0));
        let gap = (k * l.value - r.value).abs();
        let alt_gap = (l.value - k * r.value).abs();
        alt_worst = alt_worst.max(alt_gap);
        if worst.as_ref().map_or(true, |w| gap > w.gap) {
            worst = Some(Worst { t, lhs: l, rhs: r, gap, alt_gap });
        }
    }
    let Some(w) = worst else {
        return Ok(PropositionReport::skipped(id, part, inputs, Status::Error, "no finite grid point"));
    };
    let _ = w.alt_gap;
    Ok(PropositionReport::check(id, part, inputs, k * w.lhs.value, Relation::Eq, w.rhs.value, tol).with_note(format!(
        "worst t = {}; reading with the factor on the other side deviates by up to {}",
        sig9(w.t),
        sig9(alt_worst)
    )))
}

/// Under `F̄ = Ḡ^α`: `α·𝒞H_{X,Y}(t) = ε(X; t)`, checked on `grid`.
///
/// The model is checked pointwise first; a gap above 1e-9 yields a
/// precondition report.
pub fn proportional_hazards_identity(
    x: &Distribution,
    y: &Distribution,
    alpha: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<PropositionReport> {
    let id = "dyn-ph";
    let gap = model_gap(grid, |t| x.survival(t), |t| y.survival(t).powf(alpha));
    if gap > MODEL_TOL {
        return Ok(PropositionReport::skipped(
            id,
            "alpha*dcri=dcre",
            labels(&[x, y]),
            Status::PreconditionFailed,
            format!("F̄ = Ḡ^α violated by {}", sig9(gap)),
        ));
    }
    power_identity(id, "alpha*dcri=dcre", x, y, alpha, grid, |t| dcri(x, y, t, cfg), |t| dcre(x, t, cfg))
}

/// Under `F = G^θ`: `θ·𝒞H̄_{X,Y}(t) = ε̄(X; t)`, checked on `grid`.
pub fn proportional_reversed_hazards_identity(
    x: &Distribution,
    y: &Distribution,
    theta: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<PropositionReport> {
    let id = "dyn-prh";
    let gap = model_gap(grid, |t| x.cdf(t), |t| y.cdf(t).powf(theta));
    if gap > MODEL_TOL {
        return Ok(PropositionReport::skipped(
            id,
            "theta*dcpi=dcpe",
            labels(&[x, y]),
            Status::PreconditionFailed,
            format!("F = G^θ violated by {}", sig9(gap)),
        ));
    }
    power_identity(id, "theta*dcpi=dcpe", x, y, theta, grid, |t| dcpi(x, y, t, cfg), |t| dcpe(x, t, cfg))
}

fn pair_report(id: &str, part: &str, inputs: Vec<String>, lhs: Result<MeasureValue>, rhs: Result<MeasureValue>, k: f64) -> PropositionReport {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if !l.diverged() && !r.diverged() => {
            let tol = report_tol(&l, &r) * k.abs().max(1.0);
            PropositionReport::check(id, part, inputs, l.value, Relation::Eq, k * r.value, tol)
        }
        (Ok(l), Ok(r)) if l.diverged() && r.diverged() => {
            PropositionReport::skipped(id, part, inputs, Status::Pass, "both sides diverge")
        }
        (Ok(_), Ok(_)) => PropositionReport::skipped(id, part, inputs, Status::Fail, "only one side diverges"),
        (Err(e), _) | (_, Err(e)) => PropositionReport::skipped(id, part, inputs, Status::Error, e.to_string()),
    }
}

/// `𝒞H_{aX+b, aY+b}(t) = a·𝒞H_{X,Y}((t−b)/a)` and the same for the past
/// inaccuracy, for `a > 0` and `0 ≤ b < t`.
pub fn linear_transform_identity(
    x: &Distribution,
    y: &Distribution,
    a: f64,
    b: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<PropositionReport>> {
    let id = "dyn-linear";
    let mut inputs = labels(&[x, y]);
    inputs.extend([format!("a={a}"), format!("b={b}"), format!("t={t}")]);
    if !(a > 0.0 && b >= 0.0 && b < t) {
        return Ok(vec![PropositionReport::skipped(
            id,
            "dcri",
            inputs,
            Status::PreconditionFailed,
            "requires a > 0 and 0 <= b < t",
        )]);
    }
    let (ax, ay) = (affine(x, a, b)?, affine(y, a, b)?);
    let s = (t - b) / a;
    Ok(vec![
        pair_report(id, "dcri", inputs.clone(), dcri(&ax, &ay, t, cfg), dcri(x, y, s, cfg), a),
        pair_report(id, "dcpi", inputs, dcpi(&ax, &ay, t, cfg), dcpi(x, y, s, cfg), a),
    ])
}

/// For `X`, `Y` symmetric on `[0, b]` (`F(u) = F̄(b−u)`):
/// `𝒞H̄_{X,Y}(t) = 𝒞H_{X,Y}(b−t)`.
pub fn symmetric_identity(
    x: &Distribution,
    y: &Distribution,
    b: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<PropositionReport> {
    let id = "dyn-symmetric";
    let mut inputs = labels(&[x, y]);
    inputs.extend([format!("b={b}"), format!("t={t}")]);
    if !(b > 0.0 && t > 0.0 && t < b) {
        return Ok(PropositionReport::skipped(id, "dcpi", inputs, Status::PreconditionFailed, "requires 0 < t < b"));
    }
    let g = grid::uniform(0.0, b, 65);
    let gap = model_gap(&g, |u| x.cdf(u), |u| x.survival(b - u))
        .max(model_gap(&g, |u| y.cdf(u), |u| y.survival(b - u)));
    if gap > MODEL_TOL {
        return Ok(PropositionReport::skipped(
            id,
            "dcpi",
            inputs,
            Status::PreconditionFailed,
            format!("not symmetric about b/2 (gap {})", sig9(gap)),
        ));
    }
    Ok(pair_report(id, "dcpi", inputs, dcpi(x, y, t, cfg), dcri(x, y, b - t, cfg), 1.0))
}

/// `τ⁽²⁾_F(z, t) = −∫_z^t ln(F(u)/F(t)) du` for `z ≤ t`.
///
/// Diverges when `F` vanishes on part of `(z, t)`.
pub fn tau2(x: &Distribution, z: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if z > t {
        return Err(Error::Domain(format!("tau2 needs z <= t, got z = {z}, t = {t}")));
    }
    let lft = x.ln_cdf(t);
    if lft == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("cdf of {} vanishes at t = {t}", x.label())));
    }
    if z == t {
        return Ok(IntegralResult::zero());
    }
    if z < x.support().lo {
        return Ok(IntegralResult::diverged(0.0));
    }
    let b = t.min(x.support().hi.max(z));
    let r = integrate_range_with(
        |u| -(x.ln_cdf(u) - lft).min(0.0),
        z,
        b,
        &points_in(&[x], z, b),
        None,
        x.scale_hint(),
        cfg,
    );
    settle(r)
}

/// `E[τ⁽²⁾_F(Y, t) | Y ≤ t] = ∫ g(u)/G(t)·τ⁽²⁾_F(u, t) du`, with `F` from
/// `x` and `g` from `y`. Equals `𝒞H̄_{Y,X}(t)`.
pub fn dcpi_as_conditional_expectation(
    x: &Distribution,
    y: &Distribution,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    let name = "dcpi_expectation";
    y.require_density("conditional expectation form")?;
    let gt = y.cdf(t);
    if !(gt > 0.0) {
        return Err(Error::Domain(format!("cdf of {} vanishes at t = {t}", y.label())));
    }
    let sy = y.support();
    if sy.lo < x.support().lo {
        return Ok(MeasureValue::new(name, &[y, x], IntegralResult::diverged(0.0)));
    }
    let a = sy.lo;
    let b = t.min(sy.hi);
    let worst_inner = Cell::new(0.0_f64);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let r = integrate_range_with(
        |u| {
            let g = y.density(u).unwrap_or(0.0);
            if g == 0.0 {
                return 0.0;
            }
            match tau2(x, u, t, cfg) {
                Ok(v) if v.diverged => f64::INFINITY,
                Ok(v) => {
                    worst_inner.set(worst_inner.get().max(v.error_estimate));
                    g / gt * v.value
                }
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            }
        },
        a,
        b,
        &points_in(&[x, y], a, b),
        None,
        y.scale_hint(),
        cfg,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = settle(r)?;
    let r = if r.diverged {
        r
    } else {
        IntegralResult {
            error_estimate: r.error_estimate + worst_inner.get(),
            ..r
        }
    };
    Ok(MeasureValue::new(name, &[y, x], r))
}

/// The `Z_t` representation under `X ≤rh Y`:
///
/// `f_Z(z) = [F(z)/F(t) − G(z)/G(t)] / (μ_Y(t) − μ_X(t))` on `(0, t)`, with
/// `μ(t) = E[· | · ≤ t]`, is a density, and
/// `𝒞H̄_{Y,X}(t) = ε̄(X; t) + E[∂τ⁽²⁾_F(Z, t)/∂z]·(μ_Y(t) − μ_X(t))`
/// where `∂τ⁽²⁾_F(z, t)/∂z = ln(F(z)/F(t))`.
///
/// Returns a normalization report and an identity report.
pub fn zt_identity(x: &Distribution, y: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<Vec<PropositionReport>> {
    let id = "dyn-zt";
    let mut inputs = labels(&[x, y]);
    inputs.push(format!("t={t}"));
    let pre = |note: String| {
        Ok(vec![PropositionReport::skipped(id, "identity", inputs.clone(), Status::PreconditionFailed, note)])
    };
    let lo = x.support().lo.max(y.support().lo);
    if !(t > lo) {
        return pre(format!("t = {t} lies below both supports"));
    }
    let g: Vec<f64> = grid::uniform(lo, t, 65).into_iter().skip(1).collect();
    let cert = certify_order_on(x, y, OrderRelation::Rh, &g)?;
    if !cert.x_le_y() {
        return pre(format!("X <=rh Y not certified on (0, t] (direction {:?})", cert.direction));
    }
    let (mx, my) = (truncated_mean(x, t, cfg)?, truncated_mean(y, t, cfg)?);
    let dmu = my - mx;
    if !(dmu > 1e-12) {
        return pre(format!("mu_Y(t) - mu_X(t) = {} leaves Z_t undefined", sig9(dmu)));
    }
    let (lft, lgt) = (x.ln_cdf(t), y.ln_cdf(t));
    let fz = |z: f64| {
        let fx = (x.ln_cdf(z) - lft).min(0.0).exp();
        let gy = (y.ln_cdf(z) - lgt).min(0.0).exp();
        (fx - gy) / dmu
    };
    let a = x.support().lo.min(y.support().lo);
    let b = t;
    let pts = points_in(&[x, y], a, b);
    let norm = integrate_range_with(fz, a, b, &pts, None, x.scale_hint(), cfg)?;
    let slope = settle(integrate_range_with(
        |z| {
            let w = fz(z);
            if w == 0.0 {
                0.0
            } else {
                w * (x.ln_cdf(z) - lft).min(0.0)
            }
        },
        a,
        b,
        &pts,
        None,
        x.scale_hint(),
        cfg,
    ))?;
    let norm_report = PropositionReport::check(
        id,
        "normalization",
        inputs.clone(),
        norm.value,
        Relation::Eq,
        1.0,
        1e-6_f64.max(10.0 * norm.error_estimate),
    );
    let lhs = dcpi(y, x, t, cfg)?;
    let base = dcpe(x, t, cfg)?;
    if lhs.diverged() || base.diverged() || slope.diverged {
        return Ok(vec![
            norm_report,
            PropositionReport::skipped(id, "identity", inputs, Status::Error, "a term diverges"),
        ]);
    }
    let rhs = base.value + slope.value * dmu;
    let tol = 1e-6_f64.max(10.0 * (lhs.error() + base.error() + slope.error_estimate * dmu));
    Ok(vec![
        norm_report,
        PropositionReport::check(id, "identity", inputs, lhs.value, Relation::Eq, rhs, tol),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{proportional_hazards, proportional_reversed_hazards, Parametric};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn exp(r: f64) -> Distribution {
        Parametric::exponential(r).unwrap()
    }

    fn example_21() -> (Distribution, Distribution) {
        crate::catalogue::residual_pair().unwrap()
    }

    fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * f(a + h * i as f64)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn exponential_pair_closed_form() {
        // 𝒞H = λ₂/λ₁² for every t
        let (x, y) = (exp(2.0), exp(1.0));
        for t in [0.0, 0.5, 3.0, 40.0] {
            let v = dcri(&x, &y, t, &cfg()).unwrap().value;
            assert!((v - 0.25).abs() < 1e-9, "t={t}: {v}");
        }
        assert!((dcre(&exp(0.5), 7.0, &cfg()).unwrap().value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_closed_forms() {
        let u = Parametric::uniform(0.0, 3.0).unwrap();
        for t in [0.3, 1.0, 2.9] {
            assert!((dcre(&u, t, &cfg()).unwrap().value - (3.0 - t) / 4.0).abs() < 1e-9);
            assert!((dcpe(&u, t, &cfg()).unwrap().value - t / 4.0).abs() < 1e-9);
        }
        assert!(matches!(dcre(&u, 3.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(dcpe(&u, 0.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn small_t_limit_matches_static() {
        let (x, y) = (Parametric::weibull(1.0, 2.0).unwrap(), Parametric::gamma(1.0, 2.0).unwrap());
        let s = crate::measures::cri(&x, &y, &cfg()).unwrap().value;
        let d = dcri(&x, &y, 1e-6, &cfg()).unwrap().value;
        assert!((s - d).abs() < 1e-5, "{s} vs {d}");
    }

    #[test]
    fn example_21_values() {
        let (x, y) = example_21();
        let late = dcri(&x, &y, 5.0, &cfg()).unwrap().value;
        assert!((late - 0.5).abs() < 1e-9, "{late}");
        let early = dcri(&x, &y, 2.0, &cfg()).unwrap().value;
        // trapezoid oracle on the raw definition, F̄(2) = Ḡ(2) = 1
        let oracle = trapezoid(|u| neg_p_lnq(x.survival(u), y.ln_survival(u)), 3.0, 60.0, 400_000);
        assert!((early - oracle).abs() < 1e-6, "{early} vs {oracle}");
        assert!((early - 0.351_501_5).abs() < 1e-6, "{early}");
    }

    #[test]
    fn support_mismatch_diverges() {
        let x = exp(1.0);
        let y = Parametric::uniform(0.0, 5.0).unwrap();
        assert!(dcri(&x, &y, 1.0, &cfg()).unwrap().diverged());
        let late = Parametric::uniform(1.0, 5.0).unwrap();
        assert!(dcpi(&x, &late, 2.0, &cfg()).unwrap().diverged());
    }

    #[test]
    fn derivatives_match_differences() {
        let (x, y) = (Parametric::weibull(1.0, 2.0).unwrap(), Parametric::gamma(1.5, 2.0).unwrap());
        for t in [0.4, 1.0, 1.7] {
            let h = 1e-4 * t;
            let fd = |k: DynamicKind| {
                (k.eval(&x, Some(&y), t + h, &cfg()).unwrap().value - k.eval(&x, Some(&y), t - h, &cfg()).unwrap().value)
                    / (2.0 * h)
            };
            let a = dcri_derivative(&x, &y, t, &cfg()).unwrap();
            let f = fd(DynamicKind::Dcri);
            assert!((a - f).abs() <= 1e-4 * a.abs().max(f.abs()) + 1e-7, "dcri t={t}: {a} vs {f}");
            let a = dcpi_derivative(&x, &y, t, &cfg()).unwrap();
            let f = fd(DynamicKind::Dcpi);
            assert!((a - f).abs() <= 1e-4 * a.abs().max(f.abs()) + 1e-7, "dcpi t={t}: {a} vs {f}");
        }
    }

    #[test]
    fn derivative_fails_at_breakpoint() {
        let (x, y) = example_21();
        assert!(dcri_derivative(&x, &y, 4.0, &cfg()).is_err());
    }

    #[test]
    fn curve_and_classification() {
        let (x, y) = (exp(2.0), exp(1.0));
        let g = DynamicKind::Dcri.default_grid(&x, Some(&y), 16).unwrap();
        let c = curve(DynamicKind::Dcri, &x, Some(&y), &g, &cfg()).unwrap();
        assert_eq!(classify_monotonicity(&c).unwrap().classification, Monotonicity::Constant);
        assert!(c.to_csv().starts_with("t,value,diverged\n0,0.25,false\n"), "{}", c.to_csv());

        let u = Parametric::uniform(0.0, 1.0).unwrap();
        let g = DynamicKind::Dcpe.default_grid(&u, None, 16).unwrap();
        let c = curve(DynamicKind::Dcpe, &u, None, &g, &cfg()).unwrap();
        assert_eq!(classify_monotonicity(&c).unwrap().classification, Monotonicity::Increasing);

        let bumpy: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, ((i as f64) - 4.0).powi(2))).collect();
        let v = classify_points(&bumpy).unwrap();
        assert_eq!(v.classification, Monotonicity::NonMonotone);
        assert_eq!(v.witness_points.len(), 2);
        assert!(classify_points(&bumpy[..5]).is_err());
    }

    #[test]
    fn diverged_points_blank_in_csv() {
        let x = exp(1.0);
        let y = Parametric::uniform(0.0, 5.0).unwrap();
        let c = curve(DynamicKind::Dcri, &x, Some(&y), &[0.5, 1.0], &cfg()).unwrap();
        assert_eq!(c.diverged_at, vec![0.5, 1.0]);
        assert!(c.to_csv().contains("0.5,,true"));
    }

    #[test]
    fn breakpoints_straddled() {
        let (x, y) = example_21();
        let g = DynamicKind::Dcri.default_grid(&x, Some(&y), 64).unwrap();
        assert!(g.iter().any(|t| (t - (4.0 - 1e-9)).abs() < 1e-15));
        assert!(g.iter().any(|t| (t - (4.0 + 1e-9)).abs() < 1e-15));
    }

    #[test]
    fn power_model_identities() {
        let g = exp(1.0);
        let x = proportional_hazards(&g, 2.5).unwrap();
        let grid = grid::uniform(0.1, 3.0, 8);
        let r = proportional_hazards_identity(&x, &g, 2.5, &grid, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let w = Parametric::weibull(1.0, 2.0).unwrap();
        let x = proportional_reversed_hazards(&w, 3.0).unwrap();
        let r = proportional_reversed_hazards_identity(&x, &w, 3.0, &grid, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = proportional_reversed_hazards_identity(&w, &w, 3.0, &grid, &cfg()).unwrap();
        assert_eq!(r.status, Status::PreconditionFailed);
    }

    #[test]
    fn linear_and_symmetric() {
        let (x, y) = (Parametric::weibull(1.0, 2.0).unwrap(), Parametric::gamma(1.0, 2.0).unwrap());
        for r in linear_transform_identity(&x, &y, 2.0, 0.5, 1.5, &cfg()).unwrap() {
            assert!(r.passed, "{r:?}");
        }
        let u = Parametric::uniform(0.0, 2.0).unwrap();
        let s = Parametric::smoothstep(0.0, 2.0).unwrap();
        let r = symmetric_identity(&u, &s, 2.0, 0.7, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = symmetric_identity(&x, &y, 2.0, 0.7, &cfg()).unwrap();
        assert_eq!(r.status, Status::PreconditionFailed);
    }

    #[test]
    fn tau2_uniform() {
        let u = Parametric::uniform(0.0, 1.0).unwrap();
        let (x, t) = (0.2_f64, 0.7_f64);
        let want = t - x + x * (x / t).ln();
        assert!((tau2(&u, x, t, &cfg()).unwrap().value - want).abs() < 1e-10);
        assert!((tau2(&u, 0.0, t, &cfg()).unwrap().value - t).abs() < 1e-9);
        assert!(tau2(&Parametric::uniform(0.5, 1.0).unwrap(), 0.2, 0.7, &cfg()).unwrap().diverged);
    }

    #[test]
    fn conditional_expectation_route() {
        let (x, y) = (Parametric::weibull(1.0, 2.0).unwrap(), Parametric::gamma(1.0, 2.0).unwrap());
        let t = 1.3;
        let e = dcpi_as_conditional_expectation(&x, &y, t, &cfg()).unwrap().value;
        let d = dcpi(&y, &x, t, &cfg()).unwrap().value;
        assert!((e - d).abs() < 1e-7, "{e} vs {d}");
    }

    #[test]
    fn zt_representation() {
        // F = G^θ with θ > 1 gives φ_F = θφ_G ≥ φ_G, so take Y = PRH(X-base, θ)
        let g = Parametric::weibull(1.0, 1.5).unwrap();
        let y = proportional_reversed_hazards(&g, 2.0).unwrap();
        let reports = zt_identity(&g, &y, 1.2, &cfg()).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert!(r.passed && r.status == Status::Pass, "{r:?}");
        }
        let back = zt_identity(&y, &g, 1.2, &cfg()).unwrap();
        assert_eq!(back[0].status, Status::PreconditionFailed);
    }
}
