//! Doubly truncated measures on a window `(t1, t2)`: interval inaccuracy,
//! the interval cumulative residual/past entropies and inaccuracies, the
//! general failure rates, and the window identities and bounds.

use std::cell::Cell;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dist::{
    general_conditional_mean, hazard_rate, integrate_range_with, monotone_map, Distribution, RealMap,
};
use crate::error::{invalid, Error, Result};
use crate::grid;
use crate::measures::{points_in, settle, MeasureValue};
use crate::quad::{neg_p_lnq, IntegralResult, QuadratureConfig};
use crate::report::{sig9, PropositionReport, Relation, Status};

/// Truncation window `(t1, t2)`; `t2` may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub t1: f64,
    pub t2: f64,
    /// `(label, F(t1) < F(t2))` for every distribution checked.
    #[serde(default)]
    pub validity: Vec<(String, bool)>,
}

impl TruncationWindow {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1.is_finite() && t1 >= 0.0) {
            return Err(invalid("t1", format!("must be finite and nonnegative, got {t1}")));
        }
        if !(t2 > t1) {
            return Err(invalid("t2", format!("must exceed t1 = {t1}, got {t2}")));
        }
        Ok(Self {
            t1,
            t2,
            validity: Vec::new(),
        })
    }

    /// Record validity for each distribution; fails on the first one whose
    /// window carries no mass.
    pub fn check(mut self, ds: &[&Distribution]) -> Result<Self> {
        self.validity = ds.iter().map(|d| (d.label(), window_mass(d, self.t1, self.t2) > 0.0)).collect();
        for (d, (_, ok)) in ds.iter().zip(&self.validity) {
            if !ok {
                return Err(Error::EmptyWindow {
                    t1: self.t1,
                    t2: self.t2,
                    dist: d.label(),
                });
            }
        }
        Ok(self)
    }
}

fn window(t1: f64, t2: f64, ds: &[&Distribution]) -> Result<TruncationWindow> {
    TruncationWindow::new(t1, t2)?.check(ds)
}

/// `F(t2) − F(t1)`, taken from whichever tail keeps precision.
pub fn window_mass(d: &Distribution, t1: f64, t2: f64) -> f64 {
    let upper = if t2.is_finite() { d.survival(t2) } else { 0.0 };
    if d.cdf(t1) > 0.5 {
        d.survival(t1) - upper
    } else {
        let c2 = if t2.is_finite() { d.cdf(t2) } else { 1.0 };
        c2 - d.cdf(t1)
    }
}

/// `t·F̄(t)` with the convention `∞·0 = 0`.
fn t_survival(d: &Distribution, t: f64) -> f64 {
    if t.is_finite() {
        t * d.survival(t)
    } else {
        0.0
    }
}

/// `∫ integrand` over `(a, b)`, using the window-conditional survival of
/// `envelope` to cut an infinite tail.
fn integrate_window<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    ds: &[&Distribution],
    envelope: &Distribution,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let l1 = envelope.ln_survival(t1);
    let env = |u: f64| (envelope.ln_survival(u) - l1).min(0.0).exp();
    settle(integrate_range_with(f, a, b, &points_in(ds, a, b), Some(&env), envelope.scale_hint(), cfg))
}

/// `H_{X,Y}(t1, t2) = −∫ f/ΔF · ln(g/ΔG)` over the window.
pub fn interval_inaccuracy(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    x.require_density("interval inaccuracy")?;
    y.require_density("interval inaccuracy")?;
    window(t1, t2, &[x, y])?;
    let (lmx, lmy) = (window_mass(x, t1, t2).ln(), window_mass(y, t1, t2).ln());
    let sx = x.support();
    let (a, b) = (t1.max(sx.lo), t2.min(sx.hi));
    let r = integrate_window(
        |u| match x.ln_density(u) {
            Some(lf) if lf > f64::NEG_INFINITY => {
                let lg = y.ln_density(u).unwrap_or(f64::NEG_INFINITY);
                neg_p_lnq((lf - lmx).exp(), lg - lmy)
            }
            _ => 0.0,
        },
        a,
        b,
        &[x, y],
        x,
        t1,
        cfg,
    )?;
    Ok(MeasureValue::new("interval_inaccuracy", &[x, y], r))
}

fn icr(name: &str, x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    window(t1, t2, &[x, y])?;
    let (lmx, lmy) = (window_mass(x, t1, t2).ln(), window_mass(y, t1, t2).ln());
    let b = t2.min(x.support().hi);
    let r = integrate_window(
        |u| neg_p_lnq((x.ln_survival(u) - lmx).exp(), y.ln_survival(u) - lmy),
        t1,
        b,
        &[x, y],
        x,
        t1,
        cfg,
    )?;
    Ok(MeasureValue::new(name, &[x, y], r))
}

fn icp(name: &str, x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    window(t1, t2, &[x, y])?;
    if !t2.is_finite() {
        return Err(invalid("t2", format!("{name} needs a finite upper end")));
    }
    let (lmx, lmy) = (window_mass(x, t1, t2).ln(), window_mass(y, t1, t2).ln());
    let a = t1.max(x.support().lo);
    let r = integrate_window(
        |u| neg_p_lnq((x.ln_cdf(u) - lmx).exp(), y.ln_cdf(u) - lmy),
        a,
        t2,
        &[x, y],
        x,
        t1,
        cfg,
    )?;
    Ok(MeasureValue::new(name, &[x, y], r))
}

/// Interval cumulative residual entropy `ε(X; t1, t2)`.
pub fn icre(x: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    icr("icre", x, x, t1, t2, cfg)
}

/// Interval cumulative past entropy `ε̄(X; t1, t2)`.
pub fn icpe(x: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    icp("icpe", x, x, t1, t2, cfg)
}

/// Interval cumulative residual inaccuracy `𝒾𝒞H_{X,Y}(t1, t2)`.
pub fn icri(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    icr("icri", x, y, t1, t2, cfg)
}

/// Interval cumulative past inaccuracy `𝒾𝒞H̄_{X,Y}(t1, t2)`.
pub fn icpi(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    icp("icpi", x, y, t1, t2, cfg)
}

/// General failure rates of `[X | t1 < X < t2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GfrPair {
    pub h1: f64,
    pub h2: f64,
}

/// `h1 = f(t1)/ΔF`, `h2 = f(t2)/ΔF` (`f(∞) = 0`).
pub fn gfr(x: &Distribution, t1: f64, t2: f64) -> Result<GfrPair> {
    x.require_density("general failure rate")?;
    window(t1, t2, &[x])?;
    let m = window_mass(x, t1, t2);
    let dens = |t: f64| if t.is_finite() { x.density_at(t) } else { Ok(0.0) };
    Ok(GfrPair {
        h1: dens(t1)? / m,
        h2: dens(t2)? / m,
    })
}

/// `Λ⁽²⁾_Y(a, b) = −∫_a^b ln Ḡ`.
pub fn lambda2(y: &Distribution, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if !(b > a) {
        return Ok(IntegralResult::zero());
    }
    let lo = a.max(y.support().lo);
    settle(integrate_range_with(|u| -y.ln_survival(u), lo, b, &points_in(&[y], lo, b), None, y.scale_hint(), cfg))
}

/// `T⁽²⁾_Y(a, b) = −∫_a^b ln G`.
pub fn t2_transform(y: &Distribution, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if !(b > a) {
        return Ok(IntegralResult::zero());
    }
    let hi = b.min(y.support().hi.max(a));
    settle(integrate_range_with(|u| -y.ln_cdf(u), a, hi, &points_in(&[y], a, hi), None, y.scale_hint(), cfg))
}

/// `(1/ΔF)·∫ f(u)·inner(u) du` over the window, with inner errors added.
fn window_expectation<G>(x: &Distribution, t1: f64, t2: f64, inner: G, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    G: Fn(f64) -> Result<IntegralResult>,
{
    let m = window_mass(x, t1, t2);
    let sx = x.support();
    let (a, b) = (t1.max(sx.lo), t2.min(sx.hi));
    let worst = Cell::new(0.0_f64);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let r = integrate_window(
        |u| {
            let f = x.density(u).unwrap_or(0.0);
            if f == 0.0 {
                return 0.0;
            }
            match inner(u) {
                Ok(v) if v.diverged => f64::INFINITY,
                Ok(v) => {
                    worst.set(worst.get().max(v.error_estimate));
                    f / m * v.value
                }
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            }
        },
        a,
        b,
        &[x],
        x,
        t1,
        cfg,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = r?;
    Ok(if r.diverged {
        r
    } else {
        IntegralResult {
            error_estimate: r.error_estimate + worst.get(),
            ..r
        }
    })
}

fn tol7(errs: &[f64]) -> f64 {
    1e-7_f64.max(10.0 * errs.iter().sum::<f64>())
}

fn inputs(ds: &[&Distribution], t1: f64, t2: f64) -> Vec<String> {
    let mut v: Vec<String> = ds.iter().map(|d| d.label()).collect();
    v.push(format!("t1={t1}"));
    v.push(format!("t2={t2}"));
    v
}

/// ICRI by its probabilistic rewrite:
/// `(F̄(t2)/ΔF)·Λ⁽²⁾_Y(t1,t2) + E[Λ⁽²⁾_Y(t1,X) | t1 ≤ X ≤ t2]
///  + ln ΔḠ·(m_X(t1,t2) + (t2F̄(t2) − t1F̄(t1))/ΔF)`.
///
/// The error estimate sums those of the integral terms.
pub fn icri_by_decomposition(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    x.require_density("ICRI decomposition")?;
    let (mx, my) = (window_mass(x, t1, t2), window_mass(y, t1, t2));
    let boundary = if t2.is_finite() && x.survival(t2) > 0.0 {
        lambda2(y, t1, t2, cfg)?.scale(x.survival(t2) / mx)
    } else {
        IntegralResult::zero()
    };
    let expect = window_expectation(x, t1, t2, |u| lambda2(y, t1, u, cfg), cfg)?;
    if boundary.diverged || expect.diverged {
        return Ok(IntegralResult::diverged(0.0));
    }
    let gcm = general_conditional_mean(x, t1, t2, cfg)?;
    let bracket = gcm + (t_survival(x, t2) - t_survival(x, t1)) / mx;
    let mut r = boundary.add(expect);
    r.value += my.ln() * bracket;
    Ok(r)
}

/// [`icri_by_decomposition`] compared with the direct integral.
pub fn icri_decomposition(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<PropositionReport> {
    let id = "icri-decomposition";
    let ins = inputs(&[x, y], t1, t2);
    let direct = icri(x, y, t1, t2, cfg)?;
    let alt = icri_by_decomposition(x, y, t1, t2, cfg)?;
    if direct.diverged() || alt.diverged {
        return Ok(PropositionReport::skipped(id, "lambda", ins, Status::Error, "a term diverges"));
    }
    let tol = tol7(&[direct.error(), alt.error_estimate]);
    Ok(PropositionReport::check(id, "lambda", ins, direct.value, Relation::Eq, alt.value, tol))
}

/// ICPI by its rewrite
/// `(F(t1)/ΔF)·T⁽²⁾_Y(t1,t2) + E[T⁽²⁾_Y(X,t2) | t1 ≤ X ≤ t2]
///  + ln ΔG·((t2F(t2) − t1F(t1))/ΔF − m_X(t1,t2))`.
///
/// The note records how far the reading with `+ m_X` lands.
pub fn icpi_decomposition(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<PropositionReport> {
    let id = "icpi-decomposition";
    x.require_density("ICPI decomposition")?;
    let ins = inputs(&[x, y], t1, t2);
    let direct = icpi(x, y, t1, t2, cfg)?;
    let (mx, my) = (window_mass(x, t1, t2), window_mass(y, t1, t2));
    let boundary = if x.cdf(t1) > 0.0 {
        t2_transform(y, t1, t2, cfg)?.scale(x.cdf(t1) / mx)
    } else {
        IntegralResult::zero()
    };
    let expect = window_expectation(x, t1, t2, |u| t2_transform(y, u, t2, cfg), cfg)?;
    if direct.diverged() || boundary.diverged || expect.diverged {
        return Ok(PropositionReport::skipped(id, "T", ins, Status::Error, "a term diverges"));
    }
    let gcm = general_conditional_mean(x, t1, t2, cfg)?;
    let ends = (t2 * x.cdf(t2) - t1 * x.cdf(t1)) / mx;
    let alt = boundary.value + expect.value + my.ln() * (ends - gcm);
    let other = boundary.value + expect.value + my.ln() * (ends + gcm);
    let tol = tol7(&[direct.error(), boundary.error_estimate, expect.error_estimate]);
    Ok(PropositionReport::check(id, "T", ins, direct.value, Relation::Eq, alt, tol).with_note(format!(
        "bracket written as m_X + (t2F(t2) - t1F(t1))/dF deviates by {}",
        sig9((direct.value - other).abs())
    )))
}

/// `∂/∂t1 𝒾𝒞H_{X,Y}(t1, t2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowDerivative {
    /// Central difference, or one-sided near a breakpoint.
    pub finite_difference: f64,
    pub one_sided: bool,
    /// Closed form `h₁ˣ[𝒾𝒞H − (h₁ʸ/h₁ˣ)(m_X + (t2F̄(t2) − t1F̄(t1))/ΔF)
    /// + ln(Ḡ(t1)/ΔḠ)/λ_F(t1)]`, when the hazards exist at `t1`.
    pub closed_form: Option<f64>,
}

/// Finite-difference derivative of ICRI in `t1`, with the closed form
/// alongside where it can be evaluated.
pub fn icri_partial_t1(x: &Distribution, y: &Distribution, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<WindowDerivative> {
    window(t1, t2, &[x, y])?;
    let h = 1e-5 * t1.abs().max(1.0);
    let near_break = points_in(&[x, y], t1 - 2.0 * h, t1 + 2.0 * h)
        .into_iter()
        .any(|p| (p - t1).abs() < 2.0 * h);
    let at = |t: f64| -> Result<f64> {
        let m = icri(x, y, t, t2, cfg)?;
        m.finite()
            .ok_or_else(|| Error::Undefined(format!("icri diverges at t1 = {t}")))
    };
    let (fd, one_sided) = if near_break || t1 - h < 0.0 {
        ((at(t1 + h)? - at(t1)?) / h, true)
    } else {
        ((at(t1 + h)? - at(t1 - h)?) / (2.0 * h), false)
    };
    let closed_form = (|| -> Result<f64> {
        let g1x = gfr(x, t1, t2)?.h1;
        let g1y = gfr(y, t1, t2)?.h1;
        let lf = hazard_rate(x, t1)?;
        let v = at(t1)?;
        let mx = window_mass(x, t1, t2);
        let bracket = general_conditional_mean(x, t1, t2, cfg)? + (t_survival(x, t2) - t_survival(x, t1)) / mx;
        let lg = y.ln_survival(t1) - window_mass(y, t1, t2).ln();
        Ok(g1x * (v - g1y / g1x * bracket + lg / lf))
    })()
    .ok();
    Ok(WindowDerivative {
        finite_difference: fd,
        one_sided,
        closed_form,
    })
}

/// A strictly monotone map with the bounds `a ≤ |φ'| ≤ b`.
#[derive(Clone)]
pub struct MonotoneTransform {
    pub name: String,
    pub forward: RealMap,
    pub inverse: RealMap,
    pub derivative: RealMap,
    pub a: f64,
    pub b: f64,
    pub increasing: bool,
}

impl std::fmt::Debug for MonotoneTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MonotoneTransform")
            .field("name", &self.name)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("increasing", &self.increasing)
            .finish()
    }
}

impl MonotoneTransform {
    /// `φ(x) = k·x`.
    pub fn scale(k: f64) -> Self {
        Self {
            name: format!("{k}x"),
            forward: Arc::new(move |x| k * x),
            inverse: Arc::new(move |y| y / k),
            derivative: Arc::new(move |_| k),
            a: k.abs(),
            b: k.abs(),
            increasing: k > 0.0,
        }
    }

    /// `φ(x) = x + c·x²` (`c > 0`) with bounds valid on `[0, hi]`.
    pub fn quadratic(c: f64, hi: f64) -> Self {
        Self {
            name: format!("x+{c}x^2"),
            forward: Arc::new(move |x| x + c * x * x),
            inverse: Arc::new(move |y| (-1.0 + (1.0 + 4.0 * c * y).sqrt()) / (2.0 * c)),
            derivative: Arc::new(move |x| 1.0 + 2.0 * c * x),
            a: 1.0,
            b: 1.0 + 2.0 * c * hi,
            increasing: true,
        }
    }

    /// `φ(x) = c − k·x` (`k > 0`), decreasing.
    pub fn reflection(c: f64, k: f64) -> Self {
        Self {
            name: format!("{c}-{k}x"),
            forward: Arc::new(move |x| c - k * x),
            inverse: Arc::new(move |y| (c - y) / k),
            derivative: Arc::new(move |_| -k),
            a: k,
            b: k,
            increasing: false,
        }
    }

    pub fn apply(&self, d: &Distribution) -> Result<Distribution> {
        let (inv, der) = (self.inverse.clone(), self.derivative.clone());
        let inv_der: RealMap = Arc::new(move |y| 1.0 / der(inv(y)));
        monotone_map(d, &self.name, self.forward.clone(), self.inverse.clone(), inv_der)
    }
}

/// Check `a ≤ |φ'| ≤ b` and the declared direction on `[lo, hi]`.
fn check_bounds(phi: &MonotoneTransform, lo: f64, hi: f64) -> std::result::Result<(), String> {
    if !(phi.a > 0.0 && phi.b >= phi.a) {
        return Err(format!("bounds need 0 < a <= b, got a = {}, b = {}", phi.a, phi.b));
    }
    for u in grid::uniform(lo, hi, 65) {
        let d = (phi.derivative)(u);
        if (d > 0.0) != phi.increasing {
            return Err(format!("phi' = {d} at {u} contradicts the declared direction"));
        }
        let m = d.abs();
        let slack = 1e-12 * phi.b;
        if m < phi.a - slack || m > phi.b + slack {
            return Err(format!("|phi'| = {m} at {u} is outside [{}, {}]", phi.a, phi.b));
        }
    }
    Ok(())
}

/// Sandwich bounds for `𝒾𝒞H_{φ(X),φ(Y)}(t1, t2)`.
///
/// With `I` the matching base measure at the preimage window (ICRI for an
/// increasing `φ`, ICPI for a decreasing one) and `k` its integrand:
///
/// * `general-lower`, `general-upper`: `a∫k⁺ − b∫k⁻ ≤ 𝒾𝒞H_φ ≤ b∫k⁺ − a∫k⁻`;
/// * `lower`, `upper`: `b·I ≤ 𝒾𝒞H_φ ≤ a·I`, which needs `k ≤ 0` on the
///   window and is reported as a precondition failure otherwise;
/// * `scale` (increasing only): `𝒾𝒞H_{bX,bY}(t1,t2) = b·𝒾𝒞H_{X,Y}(t1/b, t2/b)`.
pub fn monotone_transform_bounds(
    x: &Distribution,
    y: &Distribution,
    phi: &MonotoneTransform,
    t1: f64,
    t2: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<PropositionReport>> {
    let id = "icri-monotone";
    let mut ins = inputs(&[x, y], t1, t2);
    ins.push(format!("phi={}", phi.name));
    let (u1, u2) = if phi.increasing {
        ((phi.inverse)(t1), (phi.inverse)(t2))
    } else {
        ((phi.inverse)(t2), (phi.inverse)(t1))
    };
    if let Err(note) = check_bounds(phi, u1, u2) {
        return Ok(vec![PropositionReport::skipped(id, "bounds", ins, Status::PreconditionFailed, note)]);
    }
    let (px, py) = (phi.apply(x)?, phi.apply(y)?);
    let lhs = icri(&px, &py, t1, t2, cfg)?;
    window(u1, u2, &[x, y])?;
    let (lmx, lmy) = (window_mass(x, u1, u2).ln(), window_mass(y, u1, u2).ln());
    let k = |u: f64| {
        if phi.increasing {
            neg_p_lnq((x.ln_survival(u) - lmx).exp(), y.ln_survival(u) - lmy)
        } else {
            neg_p_lnq((x.ln_cdf(u) - lmx).exp(), y.ln_cdf(u) - lmy)
        }
    };
    let pos = integrate_window(|u| k(u).max(0.0), u1, u2, &[x, y], x, u1, cfg)?;
    let neg = integrate_window(|u| (-k(u)).max(0.0), u1, u2, &[x, y], x, u1, cfg)?;
    if lhs.diverged() || pos.diverged || neg.diverged {
        return Ok(vec![PropositionReport::skipped(id, "bounds", ins, Status::Error, "a term diverges")]);
    }
    let base = pos.value - neg.value;
    let l = lhs.value;
    let tol = 1e-6_f64.max(10.0 * phi.b * (lhs.error() + pos.error_estimate + neg.error_estimate));
    let mut out = vec![
        PropositionReport::check(id, "general-lower", ins.clone(), l, Relation::Ge, phi.a * pos.value - phi.b * neg.value, tol),
        PropositionReport::check(id, "general-upper", ins.clone(), l, Relation::Le, phi.b * pos.value - phi.a * neg.value, tol),
    ];
    let sign_ok = grid::uniform(u1, u2, 257).into_iter().all(|u| k(u) <= 1e-12);
    if sign_ok {
        out.push(PropositionReport::check(id, "lower", ins.clone(), l, Relation::Ge, phi.b * base, tol));
        out.push(PropositionReport::check(id, "upper", ins.clone(), l, Relation::Le, phi.a * base, tol));
    } else {
        let note = "integrand of the base measure changes sign or is positive on the window";
        for part in ["lower", "upper"] {
            out.push(PropositionReport::skipped(id, part, ins.clone(), Status::PreconditionFailed, note));
        }
    }
    if phi.increasing {
        let s = MonotoneTransform::scale(phi.b);
        let (sx, sy) = (s.apply(x)?, s.apply(y)?);
        let lhs = icri(&sx, &sy, t1, t2, cfg)?;
        let rhs = icri(x, y, t1 / phi.b, t2 / phi.b, cfg)?;
        if let (Some(l), Some(r)) = (lhs.finite(), rhs.finite()) {
            let tol = tol7(&[lhs.error(), phi.b * rhs.error()]);
            out.push(PropositionReport::check(id, "scale", ins, l, Relation::Eq, phi.b * r, tol));
        }
    }
    Ok(out)
}

/// Window grid: `n` values of `t1` in `[lo, t2)` for a fixed `t2`.
pub fn t1_grid(lo: f64, t2: f64, n: usize) -> Vec<f64> {
    let u = grid::uniform(lo, t2, n + 1);
    u[..n].to_vec()
}

/// One row of a window sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub t1: f64,
    pub t2: f64,
    pub measure: String,
    pub value: f64,
    pub diverged: bool,
}

pub const WINDOW_MEASURES: [&str; 5] = ["interval_inaccuracy", "icre", "icpe", "icri", "icpi"];

/// Evaluate a named window measure.
pub fn window_measure(
    name: &str,
    x: &Distribution,
    y: Option<&Distribution>,
    t1: f64,
    t2: f64,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    let need_y = || y.ok_or_else(|| Error::Config(format!("{name} needs a second distribution")));
    match name {
        "interval_inaccuracy" => interval_inaccuracy(x, need_y()?, t1, t2, cfg),
        "icre" => icre(x, t1, t2, cfg),
        "icpe" => icpe(x, t1, t2, cfg),
        "icri" => icri(x, need_y()?, t1, t2, cfg),
        "icpi" => icpi(x, need_y()?, t1, t2, cfg),
        other => Err(Error::Config(format!(
            "unknown window measure `{other}` ({})",
            WINDOW_MEASURES.join(", ")
        ))),
    }
}

/// `t1,t2,measure,value,diverged` rows with 9 significant digits.
pub fn windows_csv(rows: &[WindowRow]) -> String {
    let mut out = String::from("t1,t2,measure,value,diverged\n");
    for r in rows {
        let v = if r.diverged { String::new() } else { sig9(r.value) };
        out.push_str(&format!("{},{},{},{},{}\n", sig9(r.t1), sig9(r.t2), r.measure, v, r.diverged));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;
    use crate::dist::Parametric;
    use crate::dynamic;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn exp(r: f64) -> Distribution {
        Parametric::exponential(r).unwrap()
    }

    fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..=n)
            .map(|i| if i == 0 || i == n { 0.5 } else { 1.0 } * f(a + h * i as f64))
            .sum::<f64>()
            * h
    }

    #[test]
    fn window_validation() {
        let u = Parametric::uniform(0.0, 1.0).unwrap();
        assert!(TruncationWindow::new(2.0, 1.0).is_err());
        assert!(matches!(icre(&u, 2.0, 3.0, &cfg()), Err(Error::EmptyWindow { .. })));
        let w = TruncationWindow::new(0.2, 0.4).unwrap().check(&[&u]).unwrap();
        assert_eq!(w.validity, vec![(u.label(), true)]);
    }

    #[test]
    fn uniform_interval_entropy() {
        let u = Parametric::uniform(0.0, 1.0).unwrap();
        for (a, b) in [(0.1, 0.4), (0.0, 1.0), (0.5, 0.55)] {
            let v = interval_inaccuracy(&u, &u, a, b, &cfg()).unwrap().value;
            assert!((v - (b - a as f64).ln()).abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn untruncated_limit_is_kerridge() {
        let (x, y) = (exp(2.0), exp(1.0));
        let v = interval_inaccuracy(&x, &y, 0.0, f64::INFINITY, &cfg()).unwrap().value;
        let k = crate::measures::kerridge_inaccuracy(&x, &y, &cfg()).unwrap().value;
        assert!((v - k).abs() < 1e-9, "{v} vs {k}");
    }

    #[test]
    fn reductions_to_dynamic() {
        let e = exp(1.0);
        assert!((icre(&e, 2.0, f64::INFINITY, &cfg()).unwrap().value - 1.0).abs() < 1e-9);
        let u = Parametric::uniform(0.0, 3.0).unwrap();
        assert!((icpe(&u, 0.0, 1.2, &cfg()).unwrap().value - 0.3).abs() < 1e-9);
        let (x, y) = (exp(2.0), exp(1.0));
        assert!((icri(&x, &y, 0.7, f64::INFINITY, &cfg()).unwrap().value - 0.25).abs() < 1e-9);
        // finite T with negligible remaining survival
        let t = 0.7 + 14.0;
        assert!((icri(&x, &y, 0.7, t, &cfg()).unwrap().value - 0.25).abs() < 1e-6);
        let (s, w) = (Parametric::smoothstep(0.0, 1.0).unwrap(), Parametric::uniform(0.0, 1.0).unwrap());
        let a = icpi(&w, &s, 0.0, 0.6, &cfg()).unwrap().value;
        let b = dynamic::dcpi(&w, &s, 0.6, &cfg()).unwrap().value;
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn coincidences() {
        let w = Parametric::weibull(1.0, 2.0).unwrap();
        let a = icri(&w, &w, 0.3, 1.4, &cfg()).unwrap().value;
        let b = icre(&w, 0.3, 1.4, &cfg()).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn trapezoid_oracles() {
        let u = Parametric::uniform(0.0, 1.0).unwrap();
        let v = icre(&u, 0.25, 0.75, &cfg()).unwrap().value;
        let o = trapezoid(|x| neg_p_lnq((1.0 - x) / 0.5, ((1.0 - x) / 0.5_f64).ln()), 0.25, 0.75, 200_000);
        assert!((v - o).abs() < 1e-9, "{v} vs {o}");

        let (x, y) = catalogue::residual_pair().unwrap();
        let v = icri(&x, &y, 3.0, 4.0, &cfg()).unwrap().value;
        let (mx, my) = (x.survival(3.0) - x.survival(4.0), y.survival(3.0) - y.survival(4.0));
        let o = trapezoid(|u| neg_p_lnq(x.survival(u) / mx, (y.survival(u) / my).ln()), 3.0, 4.0, 200_000);
        assert!((v - o).abs() < 1e-8, "{v} vs {o}");

        let (x, y) = catalogue::past_pair().unwrap();
        let v = icpi(&x, &y, 0.5, 1.8, &cfg()).unwrap().value;
        let (mx, my) = (x.cdf(1.8) - x.cdf(0.5), y.cdf(1.8) - y.cdf(0.5));
        let o = trapezoid(|u| neg_p_lnq(x.cdf(u) / mx, (y.cdf(u) / my).ln()), 0.5, 1.8, 200_000);
        assert!((v - o).abs() < 1e-8, "{v} vs {o}");
    }

    #[test]
    fn gfr_values() {
        let u = Parametric::uniform(0.0, 1.0).unwrap();
        let g = gfr(&u, 0.2, 0.7).unwrap();
        assert!((g.h1 - 2.0).abs() < 1e-12 && (g.h2 - 2.0).abs() < 1e-12);
        let g = gfr(&exp(1.0), 0.0, f64::INFINITY).unwrap();
        assert_eq!((g.h1, g.h2), (1.0, 0.0));
        let g = gfr(&u, 0.5, 0.5 + 1e-9).unwrap();
        assert!(g.h1 > 1e8 && g.h1.is_finite());
        let w = Parametric::weibull(1.0, 2.0).unwrap();
        let g = gfr(&w, 0.3, 1.1).unwrap();
        assert_eq!(g.h1 * window_mass(&w, 0.3, 1.1), w.density(0.3).unwrap());
    }

    #[test]
    fn decompositions() {
        let (x, y) = (exp(2.0), exp(1.0));
        for (a, b) in [(1.0, 3.0), (0.5, f64::INFINITY)] {
            let r = icri_decomposition(&x, &y, a, b, &cfg()).unwrap();
            assert!(r.passed, "{r:?}");
        }
        let u = Parametric::uniform(0.0, 1.0).unwrap();
        assert!(icri_decomposition(&u, &u, 0.2, 0.8, &cfg()).unwrap().passed);
        let r = icpi_decomposition(&u, &u, 0.2, 0.8, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = icpi_decomposition(&x, &y, 1.0, 3.0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn partial_derivative() {
        let (x, y) = (Parametric::weibull(1.0, 2.0).unwrap(), Parametric::gamma(1.0, 2.0).unwrap());
        let d = icri_partial_t1(&x, &y, 0.6, 1.8, &cfg()).unwrap();
        let c = d.closed_form.unwrap();
        assert!(!d.one_sided);
        assert!((d.finite_difference - c).abs() < 1e-5 * c.abs().max(1.0), "{d:?}");
        let (x, y) = (exp(2.0), exp(1.0));
        let d = icri_partial_t1(&x, &y, 1.0, f64::INFINITY, &cfg()).unwrap();
        assert!(d.finite_difference.abs() < 1e-5, "{d:?}");
        let (x, y) = catalogue::residual_pair().unwrap();
        assert!(icri_partial_t1(&x, &y, 4.0, 6.0, &cfg()).unwrap().one_sided);
    }

    #[test]
    fn monotone_bounds() {
        let (x, y) = (exp(2.0), exp(1.0));
        let reps = monotone_transform_bounds(&x, &y, &MonotoneTransform::scale(2.0), 1.0, 3.0, &cfg()).unwrap();
        for r in &reps {
            assert!(r.passed, "{r:?}");
        }
        let scale = reps.iter().find(|r| r.part == "scale").unwrap();
        assert!(scale.margin.abs() < 1e-7);

        let u = Parametric::uniform(0.0, 1.0).unwrap();
        let s = Parametric::smoothstep(0.0, 1.0).unwrap();
        let q = MonotoneTransform::quadratic(0.25, 1.0);
        let reps = monotone_transform_bounds(&u, &s, &q, 0.2, 0.9, &cfg()).unwrap();
        for r in &reps {
            assert!(r.passed, "{r:?}");
        }
        let refl = MonotoneTransform::reflection(1.0, 1.0);
        for r in monotone_transform_bounds(&u, &s, &refl, 0.2, 0.7, &cfg()).unwrap() {
            assert!(r.passed, "{r:?}");
        }
        let bad = MonotoneTransform { a: 1.2, ..MonotoneTransform::quadratic(0.25, 1.0) };
        let r = monotone_transform_bounds(&u, &s, &bad, 0.2, 0.9, &cfg()).unwrap();
        assert_eq!(r[0].status, Status::PreconditionFailed);
    }

    #[test]
    fn csv_rows() {
        let rows = vec![WindowRow {
            t1: 0.5,
            t2: 2.0,
            measure: "icri".into(),
            value: f64::NAN,
            diverged: true,
        }];
        assert_eq!(windows_csv(&rows), "t1,t2,measure,value,diverged\n0.5,2,icri,,true\n");
    }
}
