//! Registry of the bounds, ordering implications and identities, each with
//! a numerical check.
//!
//! Core entries carry the inequality and ordering results (corollaries are
//! folded into the result they follow from). Identity entries check the
//! exact identities, remark entries the interval past bullets, and
//! exploratory entries statements that are reported without being presumed
//! true.

use serde::{Deserialize, Serialize};

use crate::dist::{
    general_conditional_mean, hazard_rate, mean_inactivity_time, mean_residual_life, mixture, proportional_hazards,
    proportional_reversed_hazards, reversed_hazard_rate, DistSpec, Distribution, Parametric,
};
use crate::dynamic::{
    dcpe, dcpi, dcpi_as_conditional_expectation, dcre, dcri, linear_transform_identity,
    proportional_hazards_identity, proportional_reversed_hazards_identity, symmetric_identity, zt_identity,
};
use crate::error::{Error, Result};
use crate::grid::{self, GridSpec};
use crate::interval::{
    gfr, icpe, icpi, icre, icri, icri_partial_t1, interval_inaccuracy, monotone_transform_bounds, t1_grid,
    window_mass, MonotoneTransform,
};
use crate::measures::{cpe, cpi, cre, cri, MeasureValue};
use crate::quad::QuadratureConfig;
use crate::report::{sig9, PropositionReport, Relation, Status};

use super::{certify_ageing, certify_order_on, AgeingClass, OrderRelation};

/// Default slack for inequality checks.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Mixing weights for the mixture corollaries.
pub const MIXTURE_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];
/// Slack for monotonicity scans.
pub const SCAN_TOL: f64 = 1e-9;
/// Points in a monotonicity scan.
pub const SCAN_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryClass {
    Core,
    Identity,
    Remark,
    /// Reported, never counted as a failure.
    Exploratory,
}

/// What a randomized sweep draws for an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// Exponential, Weibull and gamma lifetimes.
    Lifetimes,
    /// Distributions on `[0, b]`.
    Bounded,
    /// Lifetimes plus a window `(t1, t2)`.
    Windows,
    /// `x = PH(y, α)`, `params = [α]`.
    PowerHazards,
    /// `x = PRH(y, θ)`, `params = [θ]`.
    PowerReversed,
    /// Lifetimes plus `params = [a, b]`.
    Affine,
    /// Pairs symmetric about `b/2`, `params = [b]`.
    Symmetric,
}

/// Distributions and parameters a check runs on.
#[derive(Debug, Clone)]
pub struct Bindings {
    pub x: Distribution,
    pub y: Distribution,
    pub z: Option<Distribution>,
    /// Times for the dynamic checks; derived from the supports when absent.
    pub t_grid: Option<Vec<f64>>,
    /// Window for the interval checks; derived when absent.
    pub window: Option<(f64, f64)>,
    /// Entry-specific parameters (`α`, `θ`, `[a, b]`, `b`, `c`).
    pub params: Vec<f64>,
}

impl Bindings {
    pub fn pair(x: Distribution, y: Distribution) -> Self {
        Self {
            x,
            y,
            z: None,
            t_grid: None,
            window: None,
            params: Vec::new(),
        }
    }

    pub fn triple(x: Distribution, y: Distribution, z: Distribution) -> Self {
        Self {
            z: Some(z),
            ..Self::pair(x, y)
        }
    }

    pub fn with_window(mut self, t1: f64, t2: f64) -> Self {
        self.window = Some((t1, t2));
        self
    }

    pub fn with_times(mut self, ts: Vec<f64>) -> Self {
        self.t_grid = Some(ts);
        self
    }

    pub fn with_params(mut self, p: &[f64]) -> Self {
        self.params = p.to_vec();
        self
    }

    pub fn labels(&self) -> Vec<String> {
        let mut v = vec![format!("X={}", self.x.label()), format!("Y={}", self.y.label())];
        if let Some(z) = &self.z {
            v.push(format!("Z={}", z.label()));
        }
        if let Some((a, b)) = self.window {
            v.push(format!("window=({a}, {b})"));
        }
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            v.push(format!("params=[{}]", p.join(", ")));
        }
        v
    }
}

/// Harness settings.
#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub quad: QuadratureConfig,
    /// Floor of the inequality slack; the slack also covers ten times the
    /// combined quadrature error of both sides.
    pub tol: f64,
    /// Times per dynamic check.
    pub time_points: usize,
    pub order_grid: GridSpec,
    pub ageing_grid: GridSpec,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            tol: DEFAULT_TOL,
            time_points: 8,
            order_grid: GridSpec::default(),
            ageing_grid: GridSpec::with_n(64),
        }
    }
}

type Check = fn(&Ctx) -> Vec<PropositionReport>;

#[derive(Debug, Clone, Copy)]
pub struct RegistryEntry {
    pub id: &'static str,
    pub statement: &'static str,
    /// Number of distributions involved (2 or 3).
    pub arity: usize,
    pub class: EntryClass,
    pub domain: Domain,
    /// Preconditions involve an order or an ageing class.
    pub ordered: bool,
    check: Check,
    canonical: fn() -> Result<Bindings>,
}

impl RegistryEntry {
    /// Every part of the check, one report per part.
    pub fn run_parts(&self, b: &Bindings, h: &HarnessConfig) -> Vec<PropositionReport> {
        if self.arity == 3 && b.z.is_none() {
            return vec![PropositionReport::skipped(
                self.id,
                "bindings",
                b.labels(),
                Status::Error,
                "needs a third distribution z",
            )];
        }
        let ctx = Ctx { b, h, id: self.id };
        let mut out = (self.check)(&ctx);
        for r in &mut out {
            r.proposition_id = self.id.to_string();
        }
        out
    }

    /// The worst part: errors, then failures, then the tightest pass.
    pub fn run(&self, b: &Bindings, h: &HarnessConfig) -> PropositionReport {
        worst(self.run_parts(b, h)).expect("every check emits a report")
    }

    /// Fixed bindings used by `verify` next to the randomized sweep.
    pub fn canonical_bindings(&self) -> Result<Bindings> {
        (self.canonical)()
    }

    /// Counted towards the exit status.
    pub fn counts(&self) -> bool {
        self.class != EntryClass::Exploratory
    }
}

/// Rank reports: errors, then failures, then passes by remaining slack,
/// then precondition failures.
pub fn worst(reports: Vec<PropositionReport>) -> Option<PropositionReport> {
    fn key(r: &PropositionReport) -> (u8, f64) {
        let s = match r.status {
            Status::Error => 0,
            Status::Fail => 1,
            Status::Pass => 2,
            Status::PreconditionFailed => 3,
        };
        let slack = r.margin + r.tolerance;
        (s, if slack.is_nan() { f64::INFINITY } else { slack })
    }
    reports
        .into_iter()
        .min_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal))
}

/// Look up an entry.
pub fn entry(id: &str) -> Result<&'static RegistryEntry> {
    REGISTRY
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownProposition(id.to_string()))
}

pub fn registry() -> &'static [RegistryEntry] {
    &REGISTRY
}

/// Run one entry on `bindings` and return its worst part.
pub fn run_proposition(id: &str, bindings: &Bindings, cfg: &HarnessConfig) -> Result<PropositionReport> {
    Ok(entry(id)?.run(bindings, cfg))
}

// ---------------------------------------------------------------------------
// evaluation helpers

/// A value with its error estimate.
#[derive(Debug, Clone, Copy)]
struct Q {
    v: f64,
    e: f64,
}

impl Q {
    fn exact(v: f64) -> Self {
        Self { v, e: 0.0 }
    }

    fn of(m: MeasureValue) -> Result<Self> {
        if m.diverged() || !m.value.is_finite() {
            return Err(Error::Undefined(format!("{} diverges", m.name)));
        }
        Ok(Self { v: m.value, e: m.error() })
    }

    fn max(self, o: Self) -> Self {
        if self.v >= o.v {
            self
        } else {
            o
        }
    }

    fn min(self, o: Self) -> Self {
        if self.v <= o.v {
            self
        } else {
            o
        }
    }

    /// `a·ln(a/b)`.
    fn xlnratio(a: Self, b: Self) -> Self {
        let l = (a.v / b.v).ln();
        Self {
            v: a.v * l,
            e: (l.abs() + 1.0) * a.e + (a.v / b.v) * b.e,
        }
    }
}

impl std::ops::Add for Q {
    type Output = Q;
    fn add(self, o: Q) -> Q {
        Q {
            v: self.v + o.v,
            e: self.e + o.e,
        }
    }
}

impl std::ops::Sub for Q {
    type Output = Q;
    fn sub(self, o: Q) -> Q {
        Q {
            v: self.v - o.v,
            e: self.e + o.e,
        }
    }
}

fn mq(r: Result<MeasureValue>) -> Result<Q> {
    Q::of(r?)
}

fn mean(d: &Distribution) -> Result<Q> {
    let r = d.mean_result();
    if r.diverged || !r.value.is_finite() {
        return Err(Error::Precondition(format!("E({}) is infinite", d.label())));
    }
    Ok(Q {
        v: r.value,
        e: r.error_estimate,
    })
}

fn mrl(d: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<Q> {
    let r = mean_residual_life(d, t, cfg)?;
    if r.diverged {
        return Err(Error::Undefined(format!("mean residual life of {} diverges", d.label())));
    }
    Ok(Q {
        v: r.value,
        e: r.error_estimate,
    })
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// `(t2·S(t2) − t1·S(t1)) / ΔF` with `S` the survival (`past = false`) or
/// the cdf (`past = true`); `t2 = ∞` contributes nothing.
fn boundary(d: &Distribution, t1: f64, t2: f64, past: bool) -> f64 {
    let s = |t: f64| if past { d.cdf(t) } else { d.survival(t) };
    let top = if t2.is_finite() { t2 * s(t2) } else { 0.0 };
    (top - t1 * s(t1)) / window_mass(d, t1, t2)
}

struct Ctx<'a> {
    b: &'a Bindings,
    h: &'a HarnessConfig,
    id: &'static str,
}

impl Ctx<'_> {
    fn cfg(&self) -> &QuadratureConfig {
        &self.h.quad
    }

    fn x(&self) -> &Distribution {
        &self.b.x
    }

    fn y(&self) -> &Distribution {
        &self.b.y
    }

    fn z(&self) -> &Distribution {
        self.b.z.as_ref().expect("arity checked before dispatch")
    }

    fn param(&self, i: usize, default: f64) -> f64 {
        self.b.params.get(i).copied().unwrap_or(default)
    }

    fn check(&self, part: &str, l: Q, rel: Relation, r: Q) -> Result<PropositionReport> {
        let tol = self.h.tol.max(10.0 * (l.e + r.e));
        Ok(PropositionReport::check(self.id, part, self.b.labels(), l.v, rel, r.v, tol))
    }

    /// Run one part; unmet assumptions become precondition reports.
    fn part(&self, part: &str, f: impl FnOnce() -> Result<PropositionReport>) -> PropositionReport {
        match f() {
            Ok(r) => r,
            Err(e) => {
                let status = match e {
                    Error::Precondition(_)
                    | Error::Undefined(_)
                    | Error::Domain(_)
                    | Error::EmptyWindow { .. }
                    | Error::Capability { .. } => Status::PreconditionFailed,
                    _ => Status::Error,
                };
                PropositionReport::skipped(self.id, part, self.b.labels(), status, e.to_string())
            }
        }
    }

    /// Run a part at each point and keep the worst.
    fn over<T: Copy>(
        &self,
        part: &str,
        pts: &[T],
        show: impl Fn(T) -> String,
        f: impl Fn(T) -> Result<PropositionReport>,
    ) -> PropositionReport {
        let all: Vec<PropositionReport> = pts
            .iter()
            .map(|&p| {
                let r = self.part(part, || f(p));
                let note = if r.note.is_empty() {
                    show(p)
                } else {
                    format!("{}; {}", show(p), r.note)
                };
                r.with_note(note)
            })
            .collect();
        worst(all).unwrap_or_else(|| {
            PropositionReport::skipped(self.id, part, self.b.labels(), Status::PreconditionFailed, "empty grid")
        })
    }

    fn over_t(&self, part: &str, ts: &[f64], f: impl Fn(f64) -> Result<PropositionReport>) -> PropositionReport {
        self.over(part, ts, |t| format!("t={}", sig9(t)), f)
    }

    fn over_p(&self, part: &str, f: impl Fn(f64) -> Result<PropositionReport>) -> PropositionReport {
        self.over(part, &MIXTURE_WEIGHTS, |p| format!("p={p}"), f)
    }

    fn over_w(&self, part: &str, ws: &[(f64, f64)], f: impl Fn((f64, f64)) -> Result<PropositionReport>) -> PropositionReport {
        self.over(part, ws, |(a, b)| format!("window=({}, {})", sig9(a), sig9(b)), f)
    }

    /// Certified on a grid spanning every bound distribution, since the
    /// measures integrate over all of them.
    fn le(&self, a: &Distribution, b: &Distribution, rel: OrderRelation) -> Result<bool> {
        let ds: Vec<&Distribution> = [Some(&self.b.x), Some(&self.b.y), self.b.z.as_ref()].into_iter().flatten().collect();
        let pts = self.h.order_grid.points(&ds)?;
        Ok(certify_order_on(a, b, rel, &pts)?.x_le_y())
    }

    /// Require `a ≤ b` in `rel`.
    fn need(&self, a: &Distribution, b: &Distribution, rel: OrderRelation) -> Result<()> {
        if self.le(a, b, rel)? {
            Ok(())
        } else {
            Err(precondition(format!(
                "{} <={rel:?} {} not certified",
                a.label(),
                b.label()
            )))
        }
    }

    fn need_class(&self, d: &Distribution, class: AgeingClass) -> Result<()> {
        let c = certify_ageing(d, class, &self.h.ageing_grid, self.cfg())?;
        if c.holds() {
            Ok(())
        } else {
            Err(precondition(format!(
                "{} is not {class:?} on the grid (violation {})",
                d.label(),
                sig9(c.max_violation)
            )))
        }
    }

    /// Triangle conditions: `a ≤ b` and `c ≤ b`, or `b ≤ a` and `b ≤ c`.
    fn need_triangle(&self, a: &Distribution, b: &Distribution, c: &Distribution, rel: OrderRelation) -> Result<()> {
        let first = self.le(a, b, rel)? && self.le(c, b, rel)?;
        if first || (self.le(b, a, rel)? && self.le(b, c, rel)?) {
            Ok(())
        } else {
            Err(precondition(format!("neither triangle condition certified in {rel:?}")))
        }
    }

    /// Times inside every support; residual checks stop before the
    /// earliest upper end, past checks run up to the latest one.
    fn times(&self, ds: &[&Distribution], residual: bool) -> Vec<f64> {
        if let Some(g) = &self.b.t_grid {
            return g.clone();
        }
        let lo = ds.iter().map(|d| d.support().lo).fold(0.0, f64::max);
        let reach = |d: &Distribution| {
            let s = d.support();
            if s.hi.is_finite() {
                s.hi
            } else {
                grid::effective_upper(&[d], 1e-6)
            }
        };
        let ends = ds.iter().map(|d| reach(d));
        let hi = if residual {
            ends.fold(f64::INFINITY, f64::min)
        } else {
            ends.fold(0.0, f64::max)
        };
        let n = self.h.time_points.max(1);
        (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
    }

    /// The bound window, or three windows scaled to the pair.
    fn windows(&self) -> Vec<(f64, f64)> {
        if let Some(w) = self.b.window {
            return vec![w];
        }
        let (lo, s) = self.window_frame();
        vec![(lo + 0.2 * s, lo + 1.5 * s), (lo + 0.5 * s, lo + 3.0 * s), (lo + s, lo + 2.0 * s)]
    }

    fn window_frame(&self) -> (f64, f64) {
        let (x, y) = (self.x(), self.y());
        let lo = x.support().lo.max(y.support().lo).max(0.0);
        (lo, x.scale_hint().min(y.scale_hint()))
    }

    fn fixed_t2(&self) -> f64 {
        match self.b.window {
            Some((_, t2)) => t2,
            None => {
                let (lo, s) = self.window_frame();
                lo + 2.0 * s
            }
        }
    }
}

// ---------------------------------------------------------------------------
// cumulative residual inaccuracy

fn p21i(c: &Ctx) -> Vec<PropositionReport> {
    vec![c.part("i", || {
        let (x, y, cfg) = (c.x(), c.y(), c.cfg());
        let (ex, ey) = (mean(x)?, mean(y)?);
        let lhs = mq(cri(x, y, cfg))?;
        let rhs = mq(cre(x, cfg))? + Q::xlnratio(ex, ey);
        c.check("i", lhs, Relation::Ge, rhs)
    })]
}

fn p21ii(c: &Ctx) -> Vec<PropositionReport> {
    vec![c.part("ii", || {
        let (x, y, cfg) = (c.x(), c.y(), c.cfg());
        let lhs = mq(cri(x, y, cfg))?;
        let rhs = mq(cre(x, cfg))? + mean(x)? - mean(y)?;
        c.check("ii", lhs, Relation::Ge, rhs)
    })]
}

fn p22i(c: &Ctx) -> Vec<PropositionReport> {
    vec![c.part("i", || {
        let (x, y, cfg) = (c.x(), c.y(), c.cfg());
        c.need(x, y, OrderRelation::St)?;
        let rhs = mq(cre(x, cfg))?.min(mq(cre(y, cfg))?);
        c.check("i", mq(cri(x, y, cfg))?, Relation::Le, rhs)
    })]
}

fn p22ii(c: &Ctx) -> Vec<PropositionReport> {
    vec![c.part("ii", || {
        let (x, y, cfg) = (c.x(), c.y(), c.cfg());
        c.need(y, x, OrderRelation::St)?;
        let rhs = mq(cre(x, cfg))?.max(mq(cre(y, cfg))?);
        c.check("ii", mq(cri(x, y, cfg))?, Relation::Ge, rhs)
    })]
}

fn p23(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, z, cfg) = (c.x(), c.y(), c.z(), c.cfg());
    vec![
        c.part("i", || {
            c.need(y, z, OrderRelation::St)?;
            c.check("i", mq(cri(x, y, cfg))?, Relation::Ge, mq(cri(x, z, cfg))?)
        }),
        c.part("ii", || {
            c.need(x, y, OrderRelation::St)?;
            c.check("ii", mq(cri(x, z, cfg))?, Relation::Le, mq(cri(y, z, cfg))?)
        }),
    ]
}

/// `CH_{Y,X} ≥ max(CH_{Y,Z}, CH_{Z,X})` with a static or dynamic measure.
fn chain(
    c: &Ctx,
    part: &str,
    x: &Distribution,
    y: &Distribution,
    z: &Distribution,
    m: impl Fn(&Distribution, &Distribution) -> Result<MeasureValue>,
) -> Result<PropositionReport> {
    let lhs = mq(m(y, x))?;
    let rhs = mq(m(y, z))?.max(mq(m(z, x))?);
    c.check(part, lhs, Relation::Ge, rhs)
}

fn mix(x: &Distribution, y: &Distribution, p: f64) -> Result<Distribution> {
    mixture(&[(p, x.clone()), (1.0 - p, y.clone())])
}

fn t21(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, z, cfg) = (c.x(), c.y(), c.z(), c.cfg());
    vec![
        c.part("chain", || {
            c.need(x, z, OrderRelation::St)?;
            c.need(z, y, OrderRelation::St)?;
            chain(c, "chain", x, y, z, |a, b| cri(a, b, cfg))
        }),
        c.over_p("mixture", |p| {
            c.need(x, y, OrderRelation::St)?;
            chain(c, "mixture", x, y, &mix(x, y, p)?, |a, b| cri(a, b, cfg))
        }),
    ]
}

fn triangle_sum(
    c: &Ctx,
    part: &str,
    extra: Q,
    m: impl Fn(&Distribution, &Distribution) -> Result<MeasureValue>,
) -> Result<PropositionReport> {
    let (x, y, z) = (c.x(), c.y(), c.z());
    let lhs = mq(m(x, y))? + mq(m(y, z))?;
    c.check(part, lhs, Relation::Ge, extra + mq(m(x, z))?)
}

fn t22(c: &Ctx) -> Vec<PropositionReport> {
    let cfg = c.cfg();
    vec![c.part("triangle", || {
        c.need_triangle(c.x(), c.y(), c.z(), OrderRelation::St)?;
        triangle_sum(c, "triangle", Q::exact(0.0), |a, b| cri(a, b, cfg))
    })]
}

fn t22_strong(c: &Ctx) -> Vec<PropositionReport> {
    let cfg = c.cfg();
    vec![c.part("strong", || {
        c.need_triangle(c.x(), c.y(), c.z(), OrderRelation::St)?;
        let ey = mq(cre(c.y(), cfg))?;
        triangle_sum(c, "strong", ey, |a, b| cri(a, b, cfg))
    })]
}

fn p24(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ts = c.times(&[x, y], true);
    let ageing = c.need_class(x, AgeingClass::Nwue).and_then(|_| c.need_class(y, AgeingClass::Nbue));
    vec![
        c.over_t("i", &ts, |t| {
            let lhs = mq(dcri(x, y, t, cfg))?;
            let rhs = mq(dcre(x, t, cfg))? + Q::xlnratio(mrl(x, t, cfg)?, mrl(y, t, cfg)?);
            c.check("i", lhs, Relation::Ge, rhs)
        }),
        match &ageing {
            Err(e) => c.part("ii", || Err(precondition(e.to_string()))),
            Ok(()) => c.over_t("ii", &ts, |t| {
                let lhs = mq(dcri(x, y, t, cfg))?;
                let rhs = mq(dcre(x, t, cfg))? + mean(x)? - mean(y)?;
                c.check("ii", lhs, Relation::Ge, rhs)
            }),
        },
    ]
}

fn p25(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ageing = c.need_class(x, AgeingClass::Nwu).and_then(|_| c.need_class(y, AgeingClass::Nbu));
    if let Err(e) = ageing {
        return vec![c.part("gap", || Err(precondition(e.to_string())))];
    }
    let ts = c.times(&[x, y], true);
    vec![c.part("gap", || {
        let (whole, ent) = (mq(cri(x, y, cfg))?, mq(cre(x, cfg))?);
        Ok(c.over_t("gap", &ts, |t| {
            let lhs = whole - mq(dcri(x, y, t, cfg))?;
            let rhs = ent - mq(dcre(x, t, cfg))?;
            c.check("gap", lhs, Relation::Le, rhs)
        }))
    })]
}

fn p26(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ts = c.times(&[x, y], true);
    let hr = |a, b| c.need(a, b, OrderRelation::Hr);
    vec![
        c.part("i", || {
            hr(x, y)?;
            Ok(c.over_t("i", &ts, |t| {
                let rhs = mq(dcre(x, t, cfg))?.min(mq(dcre(y, t, cfg))?);
                c.check("i", mq(dcri(x, y, t, cfg))?, Relation::Le, rhs)
            }))
        }),
        c.part("ii", || {
            hr(y, x)?;
            Ok(c.over_t("ii", &ts, |t| {
                let rhs = mq(dcre(x, t, cfg))?.max(mq(dcre(y, t, cfg))?);
                c.check("ii", mq(dcri(x, y, t, cfg))?, Relation::Ge, rhs)
            }))
        }),
    ]
}

fn p27(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, z, cfg) = (c.x(), c.y(), c.z(), c.cfg());
    let ts = c.times(&[x, y, z], true);
    vec![
        c.part("i", || {
            c.need(y, z, OrderRelation::Hr)?;
            Ok(c.over_t("i", &ts, |t| {
                c.check("i", mq(dcri(x, y, t, cfg))?, Relation::Ge, mq(dcri(x, z, t, cfg))?)
            }))
        }),
        c.part("ii", || {
            c.need(x, y, OrderRelation::Hr)?;
            Ok(c.over_t("ii", &ts, |t| {
                c.check("ii", mq(dcri(x, z, t, cfg))?, Relation::Le, mq(dcri(y, z, t, cfg))?)
            }))
        }),
    ]
}

fn t24(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, z, cfg) = (c.x(), c.y(), c.z(), c.cfg());
    vec![
        c.part("chain", || {
            c.need(x, z, OrderRelation::Hr)?;
            c.need(z, y, OrderRelation::Hr)?;
            Ok(c.over_t("chain", &c.times(&[x, y, z], true), |t| {
                chain(c, "chain", x, y, z, |a, b| dcri(a, b, t, cfg))
            }))
        }),
        c.part("mixture", || {
            c.need(x, y, OrderRelation::Hr)?;
            let ts = c.times(&[x, y], true);
            Ok(c.over_p("mixture", |p| {
                let m = mix(x, y, p)?;
                Ok(c.over_t("mixture", &ts, |t| chain(c, "mixture", x, y, &m, |a, b| dcri(a, b, t, cfg))))
            }))
        }),
    ]
}

fn t25(c: &Ctx) -> Vec<PropositionReport> {
    let cfg = c.cfg();
    vec![c.part("triangle", || {
        c.need_triangle(c.x(), c.y(), c.z(), OrderRelation::Hr)?;
        Ok(c.over_t("triangle", &c.times(&[c.x(), c.y(), c.z()], true), |t| {
            triangle_sum(c, "triangle", Q::exact(0.0), |a, b| dcri(a, b, t, cfg))
        }))
    })]
}

// ---------------------------------------------------------------------------
// cumulative past inaccuracy

/// Common upper end `b` of bounded supports starting at or above 0.
fn bounded_end(ds: &[&Distribution]) -> Result<f64> {
    let mut b = 0f64;
    for d in ds {
        let s = d.support();
        if !(s.lo >= 0.0 && s.hi.is_finite()) {
            return Err(precondition(format!("{} is not supported on a finite [0, b]", d.label())));
        }
        b = b.max(s.hi);
    }
    Ok(b)
}

fn p31(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let st = |a, b| c.need(a, b, OrderRelation::St);
    vec![
        c.part("i", || {
            let b = Q::exact(bounded_end(&[x, y])?);
            let rhs = mq(cpe(x, cfg))? + Q::xlnratio(b - mean(x)?, b - mean(y)?);
            c.check("i", mq(cpi(x, y, cfg))?, Relation::Ge, rhs)
        }),
        c.part("ii", || {
            bounded_end(&[x, y])?;
            let rhs = mq(cpe(x, cfg))? + mean(y)? - mean(x)?;
            c.check("ii", mq(cpi(x, y, cfg))?, Relation::Ge, rhs)
        }),
        c.part("iii", || {
            bounded_end(&[x, y])?;
            st(x, y)?;
            let rhs = mq(cpe(x, cfg))?.max(mq(cpe(y, cfg))?);
            c.check("iii", mq(cpi(x, y, cfg))?, Relation::Ge, rhs)
        }),
        c.part("iv", || {
            bounded_end(&[x, y])?;
            st(y, x)?;
            let rhs = mq(cpe(x, cfg))?.min(mq(cpe(y, cfg))?);
            c.check("iv", mq(cpi(x, y, cfg))?, Relation::Le, rhs)
        }),
    ]
}

fn p32(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, z, cfg) = (c.x(), c.y(), c.z(), c.cfg());
    let bounded = || bounded_end(&[x, y, z]).map(|_| ());
    vec![
        c.part("i", || {
            bounded()?;
            c.need(z, y, OrderRelation::St)?;
            c.check("i", mq(cpi(x, y, cfg))?, Relation::Ge, mq(cpi(x, z, cfg))?)
        }),
        c.part("ii", || {
            bounded()?;
            c.need(y, x, OrderRelation::St)?;
            c.check("ii", mq(cpi(x, z, cfg))?, Relation::Le, mq(cpi(y, z, cfg))?)
        }),
        c.part("iii", || {
            bounded()?;
            c.need(z, x, OrderRelation::St)?;
            c.need(y, z, OrderRelation::St)?;
            chain(c, "iii", x, y, z, |a, b| cpi(a, b, cfg))
        }),
        c.over_p("mixture", |p| {
            bounded()?;
            c.need(y, x, OrderRelation::St)?;
            chain(c, "mixture", x, y, &mix(x, y, p)?, |a, b| cpi(a, b, cfg))
        }),
    ]
}

fn t31(c: &Ctx) -> Vec<PropositionReport> {
    let cfg = c.cfg();
    vec![c.part("triangle", || {
        bounded_end(&[c.x(), c.y(), c.z()])?;
        c.need_triangle(c.x(), c.y(), c.z(), OrderRelation::St)?;
        triangle_sum(c, "triangle", Q::exact(0.0), |a, b| cpi(a, b, cfg))
    })]
}

fn p34(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ts = c.times(&[x, y], false);
    let rh = |a, b| c.need(a, b, OrderRelation::Rh);
    let mit = |d: &Distribution, t: f64| mean_inactivity_time(d, t, cfg).map(Q::exact);
    vec![
        c.over_t("i", &ts, |t| {
            let rhs = mq(dcpe(x, t, cfg))? + Q::xlnratio(mit(x, t)?, mit(y, t)?);
            c.check("i", mq(dcpi(x, y, t, cfg))?, Relation::Ge, rhs)
        }),
        c.over_t("ii", &ts, |t| {
            let rhs = mq(dcpe(x, t, cfg))? + mit(x, t)? - mit(y, t)?;
            c.check("ii", mq(dcpi(x, y, t, cfg))?, Relation::Ge, rhs)
        }),
        c.part("iii", || {
            rh(y, x)?;
            Ok(c.over_t("iii", &ts, |t| {
                let rhs = mq(dcpe(x, t, cfg))?.min(mq(dcpe(y, t, cfg))?);
                c.check("iii", mq(dcpi(x, y, t, cfg))?, Relation::Le, rhs)
            }))
        }),
        c.part("iv", || {
            rh(x, y)?;
            Ok(c.over_t("iv", &ts, |t| {
                let rhs = mq(dcpe(x, t, cfg))?.max(mq(dcpe(y, t, cfg))?);
                c.check("iv", mq(dcpi(x, y, t, cfg))?, Relation::Ge, rhs)
            }))
        }),
    ]
}

fn p35(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, z, cfg) = (c.x(), c.y(), c.z(), c.cfg());
    let ts = c.times(&[x, y, z], false);
    vec![
        c.part("i", || {
            c.need(z, y, OrderRelation::Rh)?;
            Ok(c.over_t("i", &ts, |t| {
                c.check("i", mq(dcpi(x, y, t, cfg))?, Relation::Ge, mq(dcpi(x, z, t, cfg))?)
            }))
        }),
        c.part("ii", || {
            c.need(y, x, OrderRelation::Rh)?;
            Ok(c.over_t("ii", &ts, |t| {
                c.check("ii", mq(dcpi(x, z, t, cfg))?, Relation::Le, mq(dcpi(y, z, t, cfg))?)
            }))
        }),
        c.part("iii", || {
            c.need(z, x, OrderRelation::Rh)?;
            c.need(y, z, OrderRelation::Rh)?;
            Ok(c.over_t("iii", &ts, |t| chain(c, "iii", x, y, z, |a, b| dcpi(a, b, t, cfg))))
        }),
    ]
}

fn p36(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    vec![c.part("mixture", || {
        c.need(y, x, OrderRelation::Rh)?;
        let ts = c.times(&[x, y], false);
        Ok(c.over_p("mixture", |p| {
            let m = mix(x, y, p)?;
            Ok(c.over_t("mixture", &ts, |t| chain(c, "mixture", x, y, &m, |a, b| dcpi(a, b, t, cfg))))
        }))
    })]
}

/// Run a report-producing helper at each time and keep the worst per part.
fn per_part(
    c: &Ctx,
    parts: &[&str],
    ts: &[f64],
    f: impl Fn(f64) -> Result<Vec<PropositionReport>>,
) -> Vec<PropositionReport> {
    let mut by_part: Vec<Vec<PropositionReport>> = vec![Vec::new(); parts.len()];
    for &t in ts {
        let reports = match f(t) {
            Ok(v) => v,
            Err(e) => {
                let r = c.part(parts[0], || Err(e));
                parts.iter().map(|p| PropositionReport { part: p.to_string(), ..r.clone() }).collect()
            }
        };
        for r in reports {
            if let Some(i) = parts.iter().position(|p| *p == r.part) {
                let note = if r.note.is_empty() {
                    format!("t={}", sig9(t))
                } else {
                    format!("t={}; {}", sig9(t), r.note)
                };
                by_part[i].push(r.with_note(note));
            }
        }
    }
    by_part.into_iter().filter_map(worst).collect()
}

fn t34(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ts = c.times(&[x, y], false);
    per_part(c, &["normalization", "identity"], &ts, |t| zt_identity(x, y, t, cfg))
}

fn t35(c: &Ctx) -> Vec<PropositionReport> {
    let cfg = c.cfg();
    vec![c.part("triangle", || {
        c.need_triangle(c.x(), c.y(), c.z(), OrderRelation::Rh)?;
        Ok(c.over_t("triangle", &c.times(&[c.x(), c.y(), c.z()], false), |t| {
            triangle_sum(c, "triangle", Q::exact(0.0), |a, b| dcpi(a, b, t, cfg))
        }))
    })]
}

// ---------------------------------------------------------------------------
// windows

fn finite_window((_, t2): (f64, f64)) -> Result<()> {
    if t2.is_finite() {
        Ok(())
    } else {
        Err(precondition("needs a finite t2"))
    }
}

/// Fractions of a window for the monotonicity scans, increasing in `(0, 1]`:
/// a uniform grid plus a geometric cluster toward 0, where the measure
/// tends to its zero limit and may rise or fall faster than the uniform
/// spacing resolves.
fn scan_fractions() -> Vec<f64> {
    let n = SCAN_POINTS as f64;
    let mut f: Vec<f64> = grid::geometric(0.0, 1.0 / n, 1e-6, 12);
    f.extend((2..=SCAN_POINTS).map(|k| k as f64 / n));
    f
}

fn t41(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    vec![c.part("scan", || {
        let t2 = c.fixed_t2();
        finite_window((0.0, t2))?;
        let (lo, _) = c.window_frame();
        let vals: Vec<f64> = scan_fractions()
            .into_iter()
            .rev()
            .map(|f| t2 - f * (t2 - lo))
            .filter_map(|t1| icri(x, y, t1, t2, cfg).ok().and_then(|m| m.finite()))
            .collect();
        if vals.len() < 2 {
            return Err(precondition("fewer than two finite grid values"));
        }
        let step = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        Ok(
            PropositionReport::check(c.id, "scan", c.b.labels(), step, Relation::Le, 0.0, SCAN_TOL)
                .with_note(format!("smallest step in t1 at t2 = {}", sig9(t2))),
        )
    })]
}

/// Windows sharing `t2` for the derivative checks, plus the bound window.
fn t1_windows(c: &Ctx) -> Vec<(f64, f64)> {
    let t2 = c.fixed_t2();
    let (lo, _) = c.window_frame();
    let mut ws: Vec<(f64, f64)> = t1_grid(lo, t2, 8).into_iter().skip(1).map(|t1| (t1, t2)).collect();
    ws.extend(c.windows());
    ws
}

fn t42(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ws = t1_windows(c);
    vec![
        c.over_w("i", &ws, |(t1, t2)| {
            finite_window((t1, t2))?;
            let g = (gfr(x, t1, t2)?, gfr(y, t1, t2)?);
            let (lf, lg) = (hazard_rate(x, t1)?, hazard_rate(y, t1)?);
            let rhs = (t1 - t2) * g.0.h1 / lf * (g.1.h1 / lg).ln();
            c.check("i", mq(icri(x, y, t1, t2, cfg))?, Relation::Ge, Q::exact(rhs))
        }),
        c.over_w("ii", &ws, |(t1, t2)| {
            finite_window((t1, t2))?;
            let d = icri_partial_t1(x, y, t1, t2, cfg)?;
            if d.finite_difference > 0.0 {
                return Err(precondition(format!(
                    "ICRI increases in t1 here (slope {})",
                    sig9(d.finite_difference)
                )));
            }
            let g = (gfr(x, t1, t2)?, gfr(y, t1, t2)?);
            let (lf, lg) = (hazard_rate(x, t1)?, hazard_rate(y, t1)?);
            let bracket = general_conditional_mean(x, t1, t2, cfg)? + boundary(x, t1, t2, false);
            let rhs = g.1.h1 / g.0.h1 * bracket - (g.1.h1 / lg).ln() / lf;
            c.check("ii", mq(icri(x, y, t1, t2, cfg))?, Relation::Le, Q::exact(rhs))
        }),
    ]
}

/// `Some(true)` for a nondecreasing rate, `Some(false)` for nonincreasing,
/// `None` otherwise; a constant rate counts as both and reports `want`.
fn rate_trend(d: &Distribution, pts: &[f64], rate: fn(&Distribution, f64) -> Result<f64>, want: bool) -> Option<bool> {
    let vals: Vec<f64> = pts.iter().filter_map(|&t| rate(d, t).ok()).filter(|v| v.is_finite()).collect();
    let slack = |a: f64, b: f64| super::ORDER_TOL * 1f64.max(a.abs()).max(b.abs());
    let up = vals.windows(2).all(|w| w[1] >= w[0] - slack(w[0], w[1]));
    let down = vals.windows(2).all(|w| w[1] <= w[0] + slack(w[0], w[1]));
    match (up, down) {
        (true, true) => Some(want),
        (true, false) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

fn t42_iii(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let pts = match GridSpec::with_n(64).points(&[x, y]) {
        Ok(p) => p,
        Err(e) => return vec![c.part("iii", || Err(e))],
    };
    let mut out = Vec::new();
    for (part, inc, rel) in [("ifr", true, Relation::Ge), ("dfr", false, Relation::Le)] {
        let trend = (rate_trend(x, &pts, hazard_rate, inc), rate_trend(y, &pts, hazard_rate, inc));
        out.push(c.part(part, || {
            if trend != (Some(inc), Some(inc)) {
                return Err(precondition(format!("hazard rates are not both {}", if inc { "increasing" } else { "decreasing" })));
            }
            Ok(c.over_w(part, &c.windows(), |(t1, t2)| {
                let h = mq(interval_inaccuracy(x, y, t1, t2, cfg))?;
                let rhs = Q {
                    v: (h.v + hazard_rate(y, t1)?.ln()) / hazard_rate(x, t1)?,
                    e: h.e / hazard_rate(x, t1)?,
                };
                c.check(part, mq(icri(x, y, t1, t2, cfg))?, rel, rhs)
            }))
        }));
    }
    out
}

fn t45(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    vec![c.over_w("bound", &c.windows(), |(t1, t2)| {
        let rhs = mq(icre(x, t1, t2, cfg))?
            + Q::exact(
                general_conditional_mean(x, t1, t2, cfg)? - general_conditional_mean(y, t1, t2, cfg)?
                    + boundary(x, t1, t2, false)
                    - boundary(y, t1, t2, false),
            );
        c.check("bound", mq(icri(x, y, t1, t2, cfg))?, Relation::Ge, rhs)
    })]
}

/// `∂ICPI/∂t2` by central difference.
fn icpi_slope_t2(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let h = 1e-5 * t2.abs().max(1.0);
    let near = x.breakpoints().into_iter().chain(y.breakpoints()).any(|b| (b - t2).abs() < 2.0 * h);
    if near {
        return Err(Error::Domain(format!("breakpoint within the difference step of t2 = {t2}")));
    }
    let at = |t: f64| -> Result<f64> {
        icpi(x, y, t1, t, cfg)?
            .finite()
            .ok_or_else(|| Error::Undefined("ICPI diverges".into()))
    };
    Ok((at(t2 + h)? - at(t2 - h)?) / (2.0 * h))
}

/// The right side of the increasing-in-`t2` criterion for ICPI.
fn icpi_t2_bound(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (gx, gy) = (gfr(x, t1, t2)?, gfr(y, t1, t2)?);
    let (pf, pg) = (reversed_hazard_rate(x, t2)?, reversed_hazard_rate(y, t2)?);
    let bracket = boundary(x, t1, t2, true) - general_conditional_mean(x, t1, t2, cfg)?;
    Ok((gy.h2 / gx.h2 * bracket - (gy.h2 / pg).ln() / pf, gx.h2))
}

fn r41(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ws = c.windows();
    vec![
        c.part("scan", || {
            let (lo, s) = c.window_frame();
            let (t1, t2) = match c.b.window {
                Some(w) => w,
                None => (lo + 0.5 * s, lo + 3.0 * s),
            };
            finite_window((t1, t2))?;
            let vals: Vec<f64> = scan_fractions()
                .into_iter()
                .map(|f| t1 + f * (t2 - t1))
                .filter_map(|t| icpi(x, y, t1, t, cfg).ok().and_then(|m| m.finite()))
                .collect();
            if vals.len() < 2 {
                return Err(precondition("fewer than two finite grid values"));
            }
            let step = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
            Ok(
                PropositionReport::check(c.id, "scan", c.b.labels(), step, Relation::Ge, 0.0, SCAN_TOL)
                    .with_note(format!("largest step in t2 at t1 = {}", sig9(t1))),
            )
        }),
        c.over_w("lower", &ws, |(t1, t2)| {
            finite_window((t1, t2))?;
            let (gx, gy) = (gfr(x, t1, t2)?, gfr(y, t1, t2)?);
            let (pf, pg) = (reversed_hazard_rate(x, t2)?, reversed_hazard_rate(y, t2)?);
            let rhs = (t1 - t2) * gx.h2 / pf * (gy.h2 / pg).ln();
            c.check("lower", mq(icpi(x, y, t1, t2, cfg))?, Relation::Ge, Q::exact(rhs))
        }),
        c.over_w("slope", &ws, |(t1, t2)| {
            finite_window((t1, t2))?;
            let v = mq(icpi(x, y, t1, t2, cfg))?;
            let (bound, h2) = icpi_t2_bound(x, y, t1, t2, cfg)?;
            let closed = h2 * (bound - v.v);
            let fd = icpi_slope_t2(x, y, t1, t2, cfg)?;
            let tol = 1e-4 * closed.abs().max(fd.abs()) + 1e-7;
            Ok(PropositionReport::check(c.id, "slope", c.b.labels(), fd, Relation::Eq, closed, tol)
                .with_note("increasing in t2 iff ICPI is below the bound; checked through the slope it encodes"))
        }),
        c.over_w("entropy", &ws, |(t1, t2)| {
            finite_window((t1, t2))?;
            let rhs = mq(icpe(x, t1, t2, cfg))?
                + Q::exact(
                    general_conditional_mean(y, t1, t2, cfg)? - general_conditional_mean(x, t1, t2, cfg)?
                        + boundary(x, t1, t2, true)
                        - boundary(y, t1, t2, true),
                );
            c.check("entropy", mq(icpi(x, y, t1, t2, cfg))?, Relation::Ge, rhs)
        }),
    ]
}

fn r41_rh(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    vec![c.part("rh-decreasing", || {
        let pts = GridSpec::with_n(64).points(&[x, y])?;
        let dec = (
            rate_trend(x, &pts, reversed_hazard_rate, false),
            rate_trend(y, &pts, reversed_hazard_rate, false),
        );
        if dec != (Some(false), Some(false)) {
            return Err(precondition("reversed hazard rates are not both decreasing"));
        }
        Ok(c.over_w("rh-decreasing", &c.windows(), |(t1, t2)| {
            finite_window((t1, t2))?;
            let h = mq(interval_inaccuracy(x, y, t1, t2, cfg))?;
            let pf = reversed_hazard_rate(x, t2)?;
            let rhs = Q {
                v: (h.v + reversed_hazard_rate(y, t2)?.ln()) / pf,
                e: h.e / pf,
            };
            c.check("rh-decreasing", mq(icpi(x, y, t1, t2, cfg))?, Relation::Ge, rhs)
        }))
    })]
}

fn t46(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let k = c.param(0, 0.25);
    let mut out = Vec::new();
    for (t1, t2) in c.windows() {
        if !t2.is_finite() {
            out.push(c.part("bounds", || Err(precondition("needs a finite t2"))));
            continue;
        }
        let probe = MonotoneTransform::quadratic(k, 1.0);
        let u2 = (probe.inverse)(t2);
        let phi = MonotoneTransform::quadratic(k, u2);
        match monotone_transform_bounds(x, y, &phi, t1, t2, cfg) {
            Ok(v) => out.extend(v),
            Err(e) => out.push(c.part("bounds", || Err(e))),
        }
        let (sx, sy) = (x.support(), y.support());
        if sx.hi.is_finite() && sy.hi.is_finite() {
            let top = sx.hi.max(sy.hi);
            let phi = MonotoneTransform::reflection(top, 1.0);
            let (a, b) = (top - t2, top - t1);
            if a >= 0.0 {
                match monotone_transform_bounds(x, y, &phi, a, b, cfg) {
                    Ok(v) => out.extend(v.into_iter().map(|mut r| {
                        r.part = format!("decreasing-{}", r.part);
                        r
                    })),
                    Err(e) => out.push(c.part("decreasing-bounds", || Err(e))),
                }
            }
        }
    }
    let mut parts: Vec<String> = out.iter().map(|r| r.part.clone()).collect();
    parts.sort();
    parts.dedup();
    parts
        .into_iter()
        .filter_map(|p| worst(out.iter().filter(|r| r.part == p).cloned().collect()))
        .collect()
}

// ---------------------------------------------------------------------------
// identities

fn p28(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let alpha = c.param(0, 2.0);
    let ts = c.times(&[x, y], true);
    vec![c.part("alpha*dcri=dcre", || proportional_hazards_identity(x, y, alpha, &ts, cfg))]
}

fn p37(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let theta = c.param(0, 2.0);
    let ts = c.times(&[x, y], false);
    vec![c.part("theta*dcpi=dcpe", || proportional_reversed_hazards_identity(x, y, theta, &ts, cfg))]
}

fn linear(c: &Ctx, part: &str) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let (a, b) = (c.param(0, 2.0), c.param(1, 0.5));
    let ts: Vec<f64> = c.times(&[x, y], part == "dcri").into_iter().map(|s| b + a * s).collect();
    vec![c.over_t(part, &ts, |t| {
        let v = linear_transform_identity(x, y, a, b, t, cfg)?;
        Ok(worst(v.into_iter().filter(|r| r.part == part).collect()).expect("both parts reported"))
    })]
}

fn t23(c: &Ctx) -> Vec<PropositionReport> {
    linear(c, "dcri")
}

fn t32(c: &Ctx) -> Vec<PropositionReport> {
    linear(c, "dcpi")
}

fn t33(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let b = c.param(0, bounded_end(&[x, y]).unwrap_or(1.0));
    let n = c.h.time_points.max(1);
    let ts: Vec<f64> = (0..n).map(|i| b * (i as f64 + 0.5) / n as f64).collect();
    vec![c.over_t("dcpi", &ts, |t| symmetric_identity(x, y, b, t, cfg))]
}

fn p33(c: &Ctx) -> Vec<PropositionReport> {
    let (x, y, cfg) = (c.x(), c.y(), c.cfg());
    let ts = c.times(&[x, y], false);
    vec![c.over_t("expectation", &ts, |t| {
        let lhs = mq(dcpi(y, x, t, cfg))?;
        let rhs = mq(dcpi_as_conditional_expectation(x, y, t, cfg))?;
        c.check("expectation", lhs, Relation::Eq, rhs)
    })]
}

// ---------------------------------------------------------------------------
// canonical bindings

fn exp(rate: f64) -> Result<Distribution> {
    Parametric::exponential(rate)
}

fn weibull(scale: f64, shape: f64) -> Result<Distribution> {
    Parametric::weibull(scale, shape)
}

/// `F(x) = (x/c)^k` on `[0, c]`.
pub fn power_cdf(c: f64, k: f64) -> Result<Distribution> {
    DistSpec::parse(&format!(
        r#"{{"piecewise_cdf": {{"breakpoints": [{c}], "segments": [{{"power": {{"coef": {}, "exp": {k}}}}}, {{"constant": 1}}]}}}}"#,
        c.powf(-k)
    ))?
    .build()
}

fn exp_pair() -> Result<Bindings> {
    Ok(Bindings::pair(exp(2.0)?, exp(1.0)?))
}

fn exp_pair_rev() -> Result<Bindings> {
    Ok(Bindings::pair(exp(1.0)?, exp(2.0)?))
}

fn weibull_exp() -> Result<Bindings> {
    Ok(Bindings::pair(weibull(1.0, 2.0)?, exp(1.0)?))
}

fn exp_chain() -> Result<Bindings> {
    Ok(Bindings::triple(exp(3.0)?, exp(1.0)?, exp(2.0)?))
}

fn exp_rates_321() -> Result<Bindings> {
    Ok(Bindings::triple(exp(3.0)?, exp(2.0)?, exp(1.0)?))
}

fn exp_triangle() -> Result<Bindings> {
    Ok(Bindings::triple(exp(2.0)?, exp(1.0)?, exp(2.0)?))
}

fn ageing_pair() -> Result<Bindings> {
    Ok(Bindings::pair(weibull(1.0, 0.5)?, weibull(1.0, 2.0)?))
}

fn hr_triple() -> Result<Bindings> {
    Ok(Bindings::triple(weibull(1.0, 2.0)?, exp(2.0)?, exp(1.0)?))
}

fn power_pair() -> Result<Bindings> {
    Ok(Bindings::pair(power_cdf(1.0, 1.0)?, power_cdf(1.0, 2.0)?))
}

fn power_chain() -> Result<Bindings> {
    Ok(Bindings::triple(power_cdf(1.0, 3.0)?, power_cdf(1.0, 1.0)?, power_cdf(1.0, 2.0)?))
}

fn power_triangle() -> Result<Bindings> {
    Ok(Bindings::triple(power_cdf(1.0, 1.0)?, power_cdf(1.0, 3.0)?, power_cdf(1.0, 2.0)?))
}

fn rh_chain() -> Result<Bindings> {
    Ok(Bindings::triple(exp(1.0)?, exp(3.0)?, exp(2.0)?))
}

fn window_pair() -> Result<Bindings> {
    Ok(Bindings::pair(weibull(1.0, 2.0)?, exp(1.0)?).with_window(0.5, 2.0))
}

/// A narrow window, where the sandwich's sign condition holds.
fn sandwich_pair() -> Result<Bindings> {
    Ok(Bindings::pair(weibull(1.0, 2.0)?, exp(1.0)?).with_window(0.5, 0.8))
}

fn window_pair_rev() -> Result<Bindings> {
    Ok(Bindings::pair(exp(1.0)?, weibull(1.0, 2.0)?).with_window(0.5, 2.0))
}

fn ifr_pair() -> Result<Bindings> {
    Ok(Bindings::pair(weibull(1.0, 2.0)?, weibull(1.0, 1.5)?).with_window(0.5, 2.0))
}

fn ph_pair() -> Result<Bindings> {
    let y = weibull(1.0, 1.5)?;
    Ok(Bindings::pair(proportional_hazards(&y, 2.0)?, y).with_params(&[2.0]))
}

fn prh_pair() -> Result<Bindings> {
    let y = weibull(1.0, 1.5)?;
    Ok(Bindings::pair(proportional_reversed_hazards(&y, 2.0)?, y).with_params(&[2.0]))
}

fn affine_pair() -> Result<Bindings> {
    Ok(Bindings::pair(weibull(1.0, 2.0)?, exp(1.0)?).with_params(&[2.0, 0.5]))
}

fn symmetric_pair() -> Result<Bindings> {
    Ok(Bindings::pair(Parametric::uniform(0.0, 2.0)?, Parametric::smoothstep(0.0, 2.0)?).with_params(&[2.0]))
}

fn tau_pair() -> Result<Bindings> {
    Ok(Bindings::pair(exp(1.0)?, weibull(1.0, 2.0)?))
}

// ---------------------------------------------------------------------------

macro_rules! e {
    ($id:expr, $class:ident, $domain:ident, $arity:expr, $ordered:expr, $check:expr, $canon:expr, $stmt:expr) => {
        RegistryEntry {
            id: $id,
            statement: $stmt,
            arity: $arity,
            class: EntryClass::$class,
            domain: Domain::$domain,
            ordered: $ordered,
            check: $check,
            canonical: $canon,
        }
    };
}

static REGISTRY: [RegistryEntry; 35] = [
    e!("P2.1i", Core, Lifetimes, 2, false, p21i, weibull_exp,
        "CH(X,Y) >= CRE(X) + E(X) ln(E(X)/E(Y))"),
    e!("P2.1ii", Core, Lifetimes, 2, false, p21ii, weibull_exp,
        "CH(X,Y) >= CRE(X) + E(X) - E(Y)"),
    e!("P2.2i", Core, Lifetimes, 2, true, p22i, exp_pair,
        "X <=st Y implies CH(X,Y) <= min(CRE(X), CRE(Y))"),
    e!("P2.2ii", Core, Lifetimes, 2, true, p22ii, exp_pair_rev,
        "X >=st Y implies CH(X,Y) >= max(CRE(X), CRE(Y))"),
    e!("P2.3", Core, Lifetimes, 3, true, p23, exp_rates_321,
        "Y <=st Z implies CH(X,Y) >= CH(X,Z); X <=st Y implies CH(X,Z) <= CH(Y,Z)"),
    e!("T2.1", Core, Lifetimes, 3, true, t21, exp_chain,
        "X <=st Z <=st Y implies CH(Y,X) >= max(CH(Y,Z), CH(Z,X)); also for Z a mixture of X <=st Y"),
    e!("T2.2", Core, Lifetimes, 3, true, t22, exp_triangle,
        "under either triangle condition in st, CH(X,Y) + CH(Y,Z) >= CH(X,Z)"),
    e!("P2.4", Core, Lifetimes, 2, true, p24, ageing_pair,
        "CH(X,Y;t) >= CRE(X;t) + mrl_X ln(mrl_X/mrl_Y); X NWUE, Y NBUE implies CH(X,Y;t) >= CRE(X;t) + E(X) - E(Y)"),
    e!("P2.5", Core, Lifetimes, 2, true, p25, ageing_pair,
        "X NWU, Y NBU implies CH(X,Y) - CH(X,Y;t) <= CRE(X) - CRE(X;t)"),
    e!("P2.6", Core, Lifetimes, 2, true, p26, exp_pair,
        "X <=hr Y implies CH(X,Y;t) <= min of residual CREs; X >=hr Y implies >= max"),
    e!("P2.7", Core, Lifetimes, 3, true, p27, hr_triple,
        "Y <=hr Z implies CH(X,Y;t) >= CH(X,Z;t); X <=hr Y implies CH(X,Z;t) <= CH(Y,Z;t)"),
    e!("T2.4", Core, Lifetimes, 3, true, t24, exp_chain,
        "X <=hr Z <=hr Y implies CH(Y,X;t) >= max(CH(Y,Z;t), CH(Z,X;t)); also for Z a mixture of X <=hr Y"),
    e!("T2.5", Core, Lifetimes, 3, true, t25, exp_triangle,
        "under either triangle condition in hr, CH(X,Y;t) + CH(Y,Z;t) >= CH(X,Z;t)"),
    e!("P3.1", Core, Bounded, 2, true, p31, power_pair,
        "on [0,b]: CPI >= CPE(X) + (b-E(X)) ln((b-E(X))/(b-E(Y))), CPI >= CPE(X) + E(Y) - E(X), st bounds"),
    e!("P3.2", Core, Bounded, 3, true, p32, power_chain,
        "on [0,b]: st monotonicity of CPI in each argument, the chain bound and its mixture form"),
    e!("T3.1", Core, Bounded, 3, true, t31, power_triangle,
        "on [0,b], under either triangle condition in st, CPI(X,Y) + CPI(Y,Z) >= CPI(X,Z)"),
    e!("P3.4", Core, Lifetimes, 2, true, p34, exp_pair,
        "CPI(X,Y;t) >= CPE(X;t) + m_F ln(m_F/m_G) and >= CPE(X;t) + m_F - m_G; rh bounds by past CPEs"),
    e!("P3.5", Core, Lifetimes, 3, true, p35, rh_chain,
        "rh monotonicity of CPI(.,.;t) in each argument and the rh chain bound"),
    e!("P3.6", Core, Lifetimes, 2, true, p36, exp_pair_rev,
        "X >=rh Y implies CPI(Y,X;t) >= max(CPI(Y,Z;t), CPI(Z,X;t)) for Z a mixture"),
    e!("T3.4", Core, Lifetimes, 2, true, t34, exp_pair,
        "X <=rh Y: CPI(Y,X;t) = CPE(X;t) + E[ln(F(Z_t)/F(t))](mu_Y(t) - mu_X(t))"),
    e!("T3.5", Core, Lifetimes, 3, true, t35, exp_triangle,
        "under either triangle condition in rh, CPI(X,Y;t) + CPI(Y,Z;t) >= CPI(X,Z;t)"),
    e!("T4.1", Core, Windows, 2, false, t41, window_pair,
        "ICRI is not increasing in t1 for fixed t2"),
    e!("T4.2", Core, Windows, 2, false, t42, window_pair,
        "ICRI lower bound through the general failure rates, and the upper bound where ICRI decreases in t1"),
    e!("T4.5", Core, Windows, 2, false, t45, window_pair,
        "ICRI >= ICRE + m_X - m_Y + boundary terms"),
    e!("T4.6", Core, Windows, 2, false, t46, sandwich_pair,
        "sandwich of ICRI under a monotone map with a <= |phi'| <= b, and the scale identity"),
    e!("R4.1", Remark, Windows, 2, false, r41, window_pair_rev,
        "ICPI is not decreasing in t2; its lower bound; the increasing-in-t2 criterion; the ICPE relation"),
    e!("P2.8", Identity, PowerHazards, 2, false, p28, ph_pair,
        "proportional hazards: alpha CH(X,Y;t) = CRE(X;t)"),
    e!("T2.3", Identity, Affine, 2, false, t23, affine_pair,
        "CH(aX+b, aY+b; t) = a CH(X,Y; (t-b)/a)"),
    e!("P3.3", Identity, Lifetimes, 2, false, p33, tau_pair,
        "CPI(Y,X;t) = E[tau(Y,t) | Y <= t]"),
    e!("T3.2", Identity, Affine, 2, false, t32, affine_pair,
        "CPI(aX+b, aY+b; t) = a CPI(X,Y; (t-b)/a)"),
    e!("T3.3", Identity, Symmetric, 2, false, t33, symmetric_pair,
        "symmetric about b/2: CPI(X,Y;t) = CH(X,Y;b-t)"),
    e!("P3.7", Identity, PowerReversed, 2, false, p37, prh_pair,
        "proportional reversed hazards: theta CPI(X,Y;t) = CPE(X;t)"),
    e!("T2.2-strong", Exploratory, Lifetimes, 3, true, t22_strong, exp_triangle,
        "under either triangle condition in st, CH(X,Y) + CH(Y,Z) >= CRE(Y) + CH(X,Z)"),
    e!("T4.2iii", Exploratory, Windows, 2, false, t42_iii, ifr_pair,
        "IFR (DFR) pair implies ICRI >= (<=) (H(t1,t2) + ln lambda_G(t1)) / lambda_F(t1)"),
    e!("R4.1-rh", Exploratory, Windows, 2, false, r41_rh, window_pair_rev,
        "decreasing reversed hazards imply ICPI >= (H(t1,t2) + ln phi_G(t2)) / phi_F(t2)"),
];
