//! Static information measures: Shannon entropy, Kerridge inaccuracy, the
//! cumulative residual/past entropies and inaccuracies, KL divergence and
//! the inaccuracy ratios.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::dist::{equilibrium, integrate_range, joint_points, Distribution};
use crate::error::{Error, Result};
use crate::quad::{neg_p_lnq, IntegralResult, QuadratureConfig};
use crate::report::{PropositionReport, Relation};

/// A computed measure. `value` mirrors `result.value`; check
/// `result.diverged` before using it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub name: String,
    pub inputs: Vec<String>,
    pub value: f64,
    pub result: IntegralResult,
}

impl MeasureValue {
    pub fn new(name: &str, inputs: &[&Distribution], result: IntegralResult) -> Self {
        Self {
            name: name.to_string(),
            inputs: inputs.iter().map(|d| d.label()).collect(),
            value: result.value,
            result,
        }
    }

    pub fn diverged(&self) -> bool {
        self.result.diverged
    }

    /// Value when finite.
    pub fn finite(&self) -> Option<f64> {
        self.result.finite()
    }

    pub fn error(&self) -> f64 {
        self.result.error_estimate
    }
}

/// Map integrand blow-ups (`p > 0` against `q = 0`) to a divergence flag.
pub(crate) fn settle(r: Result<IntegralResult>) -> Result<IntegralResult> {
    match r {
        Ok(r) if !r.diverged && !r.value.is_finite() => Ok(IntegralResult::diverged(0.0)),
        Ok(r) => Ok(r),
        Err(Error::NonFinite { value, .. }) if value.is_infinite() => Ok(IntegralResult::diverged(0.0)),
        Err(e) => Err(e),
    }
}

pub(crate) fn points_in(ds: &[&Distribution], a: f64, b: f64) -> Vec<f64> {
    joint_points(ds).into_iter().filter(|p| *p > a && *p < b).collect()
}

/// `−∫ f ln f`.
pub fn shannon_entropy(x: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    x.require_density("shannon entropy")?;
    let s = x.support();
    let r = integrate_range(
        |t| {
            let f = x.density(t).unwrap_or(0.0);
            if f == 0.0 {
                0.0
            } else {
                -f * x.ln_density(t).unwrap_or(f64::NAN)
            }
        },
        s.lo,
        s.hi,
        &points_in(&[x], s.lo, s.hi),
        Some(x),
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new("shannon", &[x], settle(r)?))
}

/// Kerridge inaccuracy `−∫ f ln g`.
pub fn kerridge_inaccuracy(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    x.require_density("kerridge inaccuracy")?;
    y.require_density("kerridge inaccuracy")?;
    let (sx, sy) = (x.support(), y.support());
    if sx.lo < sy.lo || sx.hi > sy.hi {
        return Ok(MeasureValue::new("kerridge", &[x, y], IntegralResult::diverged(0.0)));
    }
    let r = integrate_range(
        |t| {
            let f = x.density(t).unwrap_or(0.0);
            if f == 0.0 {
                0.0
            } else {
                -f * y.ln_density(t).unwrap_or(f64::NAN)
            }
        },
        sx.lo,
        sx.hi,
        &points_in(&[x, y], sx.lo, sx.hi),
        Some(x),
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new("kerridge", &[x, y], settle(r)?))
}

/// Kullback–Leibler divergence `∫ f ln(f/g)` (nonnegative convention).
pub fn kl_divergence(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    x.require_density("kl divergence")?;
    y.require_density("kl divergence")?;
    let (sx, sy) = (x.support(), y.support());
    if sx.lo < sy.lo || sx.hi > sy.hi {
        return Ok(MeasureValue::new("kl", &[x, y], IntegralResult::diverged(0.0)));
    }
    let r = integrate_range(
        |t| {
            let f = x.density(t).unwrap_or(0.0);
            if f == 0.0 {
                0.0
            } else {
                f * (x.ln_density(t).unwrap_or(f64::NAN) - y.ln_density(t).unwrap_or(f64::NAN))
            }
        },
        sx.lo,
        sx.hi,
        &points_in(&[x, y], sx.lo, sx.hi),
        Some(x),
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new("kl", &[x, y], settle(r)?))
}

/// Cumulative residual entropy `ε(X) = −∫ F̄ ln F̄`.
pub fn cre(x: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let s = x.support();
    let r = integrate_range(
        |t| neg_p_lnq(x.survival(t), x.ln_survival(t)),
        s.lo,
        s.hi,
        &points_in(&[x], s.lo, s.hi),
        Some(x),
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new("cre", &[x], settle(r)?))
}

/// Cumulative past entropy `ε̄(X) = −∫ F ln F`.
pub fn cpe(x: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let s = x.support();
    let r = integrate_range(
        |t| neg_p_lnq(x.cdf(t), x.ln_cdf(t)),
        s.lo,
        s.hi,
        &points_in(&[x], s.lo, s.hi),
        None,
        x.scale_hint(),
        cfg,
    );
    // −F ln F ~ F̄ in the tail: the survival envelope applies
    let r = match r {
        Ok(r) if !s.hi.is_finite() && (r.diverged || !r.converged) => integrate_range(
            |t| neg_p_lnq(x.cdf(t), x.ln_cdf(t)),
            s.lo,
            s.hi,
            &points_in(&[x], s.lo, s.hi),
            Some(x),
            x.scale_hint(),
            cfg,
        ),
        other => other,
    };
    Ok(MeasureValue::new("cpe", &[x], settle(r)?))
}

/// Cumulative residual inaccuracy `−∫ F̄ ln Ḡ`.
pub fn cri(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (sx, sy) = (x.support(), y.support());
    if sx.hi > sy.hi {
        // Ḡ = 0 where F̄ > 0
        return Ok(MeasureValue::new("cri", &[x, y], IntegralResult::diverged(0.0)));
    }
    let a = sy.lo;
    let b = sx.hi;
    let r = integrate_range(
        |t| neg_p_lnq(x.survival(t), y.ln_survival(t)),
        a,
        b,
        &points_in(&[x, y], a, b),
        Some(x),
        x.scale_hint(),
        cfg,
    );
    Ok(MeasureValue::new("cri", &[x, y], settle(r)?))
}

/// Cumulative past inaccuracy `−∫ F ln G`.
pub fn cpi(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (sx, sy) = (x.support(), y.support());
    if sx.lo < sy.lo {
        // G = 0 where F > 0
        return Ok(MeasureValue::new("cpi", &[x, y], IntegralResult::diverged(0.0)));
    }
    let a = sx.lo;
    let b = sy.hi;
    let r = integrate_range(
        |t| neg_p_lnq(x.cdf(t), y.ln_cdf(t)),
        a,
        b,
        &points_in(&[x, y], a, b),
        Some(y),
        y.scale_hint().max(x.scale_hint()),
        cfg,
    );
    Ok(MeasureValue::new("cpi", &[x, y], settle(r)?))
}

fn ratio(name: &str, x: &Distribution, y: &Distribution, num: MeasureValue, den: MeasureValue) -> Result<MeasureValue> {
    let d = den
        .finite()
        .filter(|d| *d != 0.0)
        .ok_or_else(|| Error::Undefined(format!("{name}: denominator is zero or divergent for {}", x.label())))?;
    if num.diverged() {
        return Ok(MeasureValue::new(name, &[x, y], IntegralResult::diverged(0.0)));
    }
    let v = num.value / d;
    let err = v.abs() * (num.error() / num.value.abs().max(f64::MIN_POSITIVE) + den.error() / d.abs());
    let r = IntegralResult {
        value: v,
        error_estimate: err,
        converged: num.result.converged && den.result.converged,
        diverged: false,
    };
    Ok(MeasureValue::new(name, &[x, y], r))
}

/// `CRI(X, Y) / ε(X)`.
pub fn crir(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    ratio("crir", x, y, cri(x, y, cfg)?, cre(x, cfg)?)
}

/// `CPI(X, Y) / ε̄(X)`.
pub fn cpir(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    ratio("cpir", x, y, cpi(x, y, cfg)?, cpe(x, cfg)?)
}

/// Measure names accepted by [`compute`].
pub const MEASURE_NAMES: [&str; 9] = ["shannon", "kerridge", "cre", "cpe", "cri", "cpi", "kl", "crir", "cpir"];

/// Whether the named measure takes a second distribution.
pub fn is_binary(name: &str) -> bool {
    matches!(name, "kerridge" | "cri" | "cpi" | "kl" | "crir" | "cpir")
}

/// Dispatch a static measure by name.
pub fn compute(name: &str, x: &Distribution, y: Option<&Distribution>, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let need_y = || y.ok_or_else(|| Error::Config(format!("measure `{name}` needs a second distribution")));
    match name {
        "shannon" => shannon_entropy(x, cfg),
        "cre" => cre(x, cfg),
        "cpe" => cpe(x, cfg),
        "kerridge" => kerridge_inaccuracy(x, need_y()?, cfg),
        "cri" => cri(x, need_y()?, cfg),
        "cpi" => cpi(x, need_y()?, cfg),
        "kl" => kl_divergence(x, need_y()?, cfg),
        "crir" => crir(x, need_y()?, cfg),
        "cpir" => cpir(x, need_y()?, cfg),
        other => Err(Error::Config(format!(
            "unknown measure `{other}` (expected one of {})",
            MEASURE_NAMES.join(", ")
        ))),
    }
}

/// Second integrals of the cumulative (reversed) hazard of `Y`:
/// `R⁽²⁾(x) = −∫_0^x ln Ḡ` and `T⁽²⁾(x) = −∫_x^∞ ln G`.
#[derive(Debug, Clone)]
pub struct CumulativeHazardTransforms {
    y: Distribution,
    cfg: QuadratureConfig,
}

pub fn cumulative_hazard_transforms(y: &Distribution, cfg: &QuadratureConfig) -> CumulativeHazardTransforms {
    CumulativeHazardTransforms { y: y.clone(), cfg: *cfg }
}

impl CumulativeHazardTransforms {
    /// Cumulative hazard `R(x) = −ln Ḡ(x)`.
    pub fn r(&self, x: f64) -> f64 {
        -self.y.ln_survival(x)
    }

    /// Cumulative reversed hazard `T(x) = −ln G(x)`.
    pub fn t(&self, x: f64) -> f64 {
        -self.y.ln_cdf(x)
    }

    pub fn r2(&self, x: f64) -> Result<IntegralResult> {
        let s = self.y.support();
        if x > s.hi {
            return Ok(IntegralResult::diverged(0.0));
        }
        let a = s.lo;
        if x <= a {
            return Ok(IntegralResult::zero());
        }
        settle(integrate_range(
            |t| -self.y.ln_survival(t),
            a,
            x,
            &points_in(&[&self.y], a, x),
            None,
            1.0,
            &self.cfg,
        ))
    }

    pub fn t2(&self, x: f64) -> Result<IntegralResult> {
        let s = self.y.support();
        if x < s.lo {
            return Ok(IntegralResult::diverged(0.0));
        }
        if x >= s.hi {
            return Ok(IntegralResult::zero());
        }
        settle(integrate_range(
            |t| -self.y.ln_cdf(t),
            x,
            s.hi,
            &points_in(&[&self.y], x, s.hi),
            Some(&self.y),
            self.y.scale_hint(),
            &self.cfg,
        ))
    }
}

/// `E[g(X)]` for a nested integrand `g` that is itself an integral result.
fn nested_expectation<G>(x: &Distribution, inner: G, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    G: Fn(f64) -> Result<IntegralResult>,
{
    x.require_density("expectation form")?;
    let s = x.support();
    let worst_inner = Cell::new(0.0_f64);
    let failure: Cell<Option<bool>> = Cell::new(None);
    let r = integrate_range(
        |t| {
            let f = x.density(t).unwrap_or(0.0);
            if f == 0.0 {
                return 0.0;
            }
            match inner(t) {
                Ok(v) if v.diverged => {
                    failure.set(Some(true));
                    f64::INFINITY
                }
                Ok(v) => {
                    worst_inner.set(worst_inner.get().max(v.error_estimate));
                    f * v.value
                }
                Err(_) => {
                    failure.set(Some(false));
                    f64::NAN
                }
            }
        },
        s.lo,
        s.hi,
        &points_in(&[x], s.lo, s.hi),
        Some(x),
        x.scale_hint(),
        cfg,
    );
    let r = settle(r)?;
    if r.diverged {
        return Ok(r);
    }
    // the density integrates to 1, so the inner errors add at most their max
    Ok(IntegralResult {
        error_estimate: r.error_estimate + worst_inner.get(),
        ..r
    })
}

/// `CRI(X, Y)` as `E[R⁽²⁾_G(X)]`.
pub fn cri_as_expectation(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    if x.support().hi > y.support().hi {
        return Ok(MeasureValue::new("cri_expectation", &[x, y], IntegralResult::diverged(0.0)));
    }
    let h = cumulative_hazard_transforms(y, cfg);
    let r = nested_expectation(x, |t| h.r2(t), cfg)?;
    Ok(MeasureValue::new("cri_expectation", &[x, y], r))
}

/// `CPI(X, Y)` as `E[T⁽²⁾_G(X)]`.
pub fn cpi_as_expectation(x: &Distribution, y: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    if x.support().lo < y.support().lo {
        return Ok(MeasureValue::new("cpi_expectation", &[x, y], IntegralResult::diverged(0.0)));
    }
    let h = cumulative_hazard_transforms(y, cfg);
    let r = nested_expectation(x, |t| h.t2(t), cfg)?;
    Ok(MeasureValue::new("cpi_expectation", &[x, y], r))
}

fn finite_or(m: &MeasureValue, what: &str) -> Result<f64> {
    m.finite()
        .ok_or_else(|| Error::Undefined(format!("{what} diverges for {}", m.inputs.join(", "))))
}

/// Equilibrium-distribution identities, evaluated by two routes each:
///
/// * `ε(X) = E(X)·(H(X_e) − ln E(X))`;
/// * with `Y`: `CRI(X, Y) = E(X)·(H(X_e, Y_e) − ln E(Y))`;
/// * with `Y`: `KL(X_e, Y_e) = ln(E(Y)/E(X)) + (CRI(X, Y) − ε(X))/E(X)`.
pub fn equilibrium_identity_check(
    x: &Distribution,
    y: Option<&Distribution>,
    cfg: &QuadratureConfig,
) -> Result<Vec<PropositionReport>> {
    let xe = equilibrium(x)?;
    let mx = x.mean().expect("equilibrium checked the mean");
    let mut inputs = vec![x.label()];
    if let Some(y) = y {
        inputs.push(y.label());
    }
    let tol_of = |a: &MeasureValue, b: &MeasureValue, scale: f64| (10.0 * scale * (a.error() + b.error())).max(1e-6);

    let eps = cre(x, cfg)?;
    let hxe = shannon_entropy(&xe, cfg)?;
    let rhs = mx * (finite_or(&hxe, "equilibrium entropy")? - mx.ln());
    let mut out = vec![PropositionReport::check(
        "equilibrium",
        "cre",
        inputs.clone(),
        finite_or(&eps, "cre")?,
        Relation::Eq,
        rhs,
        tol_of(&eps, &hxe, mx.max(1.0)),
    )];

    if let Some(y) = y {
        let ye = equilibrium(y)?;
        let my = y.mean().expect("equilibrium checked the mean");
        let c = cri(x, y, cfg)?;
        let h = kerridge_inaccuracy(&xe, &ye, cfg)?;
        let cv = finite_or(&c, "cri")?;
        out.push(PropositionReport::check(
            "equilibrium",
            "cri",
            inputs.clone(),
            cv,
            Relation::Eq,
            mx * (finite_or(&h, "equilibrium inaccuracy")? - my.ln()),
            tol_of(&c, &h, mx.max(1.0)),
        ));
        let kl = kl_divergence(&xe, &ye, cfg)?;
        let rhs = (my / mx).ln() + (cv - eps.value) / mx;
        let tol = tol_of(&kl, &c, 1.0 / mx.min(1.0)) + 10.0 * eps.error() / mx;
        out.push(
            PropositionReport::check(
                "equilibrium",
                "kl",
                inputs.clone(),
                finite_or(&kl, "equilibrium kl")?,
                Relation::Eq,
                rhs,
                tol,
            )
            .with_note("kl in the nonnegative convention"),
        );
    }
    Ok(out)
}
