//! Grid certificates for stochastic orders and ageing classes, and the
//! proposition registry built on them.

pub mod registry;
pub mod sweep;

pub use registry::{registry, run_proposition, Bindings, Domain, EntryClass, HarnessConfig, RegistryEntry};
pub use registry::entry;
pub use sweep::{randomized_sweep, verify, Verification};

use serde::{Deserialize, Serialize};

use crate::dist::{hazard_rate, mean_residual_life, reversed_hazard_rate, Distribution};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quad::QuadratureConfig;

/// Relative pointwise slack allowed before a comparison counts as a
/// violation.
pub const ORDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderRelation {
    St,
    Hr,
    Rh,
}

impl std::str::FromStr for OrderRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "st" => Ok(Self::St),
            "hr" => Ok(Self::Hr),
            "rh" => Ok(Self::Rh),
            _ => Err(Error::Config(format!("unknown order `{s}` (st, hr, rh)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "X<=Y")]
    Le,
    #[serde(rename = "X>=Y")]
    Ge,
    /// Both directions hold within tolerance.
    #[serde(rename = "equal")]
    Equal,
    #[serde(rename = "incomparable")]
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderCertificate {
    pub relation: OrderRelation,
    pub direction: Direction,
    pub grid: Vec<f64>,
    /// Largest violation of the reported direction (for `incomparable`,
    /// the smaller of the two one-sided violations).
    pub max_violation: f64,
}

impl OrderCertificate {
    pub fn x_le_y(&self) -> bool {
        matches!(self.direction, Direction::Le | Direction::Equal)
    }

    pub fn x_ge_y(&self) -> bool {
        matches!(self.direction, Direction::Ge | Direction::Equal)
    }
}

/// Per-point comparison values `(a, b)` such that `X ≤ Y` means `a ≤ b`.
fn order_pair(x: &Distribution, y: &Distribution, rel: OrderRelation, t: f64) -> Result<Option<(f64, f64)>> {
    let skip_domain = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(match rel {
        // log scale, so crossings deep in the tail are not lost to underflow
        OrderRelation::St => Some((x.ln_survival(t), y.ln_survival(t))),
        // X ≤hr Y iff λ_F ≥ λ_G
        OrderRelation::Hr => {
            let (Some(lf), Some(lg)) = (skip_domain(hazard_rate(x, t))?, skip_domain(hazard_rate(y, t))?) else {
                return Ok(None);
            };
            Some((lg, lf))
        }
        // X ≤rh Y iff φ_F ≤ φ_G
        OrderRelation::Rh => {
            let (Some(pf), Some(pg)) = (
                skip_domain(reversed_hazard_rate(x, t))?,
                skip_domain(reversed_hazard_rate(y, t))?,
            ) else {
                return Ok(None);
            };
            Some((pf, pg))
        }
    })
}

/// Relative to the larger magnitude, so tails where rates or log
/// probabilities are tiny still compare; zero when either side is
/// infinite, so `ln 0` against a finite value always counts.
fn slack(a: f64, b: f64) -> f64 {
    if a.is_finite() && b.is_finite() {
        ORDER_TOL * a.abs().max(b.abs())
    } else {
        0.0
    }
}

/// Rate orders in their ratio form: `X ≤hr Y` iff `ln Ḡ − ln F̄` is
/// nondecreasing, `X ≤rh Y` iff `ln G − ln F` is. The ratio is anchored at
/// 0 below both supports (hr) or at infinity (rh), so a crossing between
/// the anchor and the first grid point still shows. Returns the largest
/// decrease and the largest increase beyond slack.
fn ratio_violations(x: &Distribution, y: &Distribution, rel: OrderRelation, pts: &[f64]) -> Option<(f64, f64)> {
    let ln_cdf = |d: &Distribution, t: f64| {
        let s = d.survival(t);
        if s < 0.5 {
            (-s).ln_1p()
        } else {
            d.ln_cdf(t)
        }
    };
    let pair = |t: f64| match rel {
        OrderRelation::Hr => (x.ln_survival(t), y.ln_survival(t)),
        _ => (ln_cdf(x, t), ln_cdf(y, t)),
    };
    let mut ts = pts.to_vec();
    ts.sort_by(f64::total_cmp);
    let mut seq: Vec<(f64, f64)> = ts.iter().map(|&t| pair(t)).filter(|(a, b)| a.is_finite() && b.is_finite()).collect();
    match rel {
        OrderRelation::St => return None,
        OrderRelation::Hr => seq.insert(0, (0.0, 0.0)),
        OrderRelation::Rh => seq.push((0.0, 0.0)),
    }
    let (mut dec, mut inc) = (0f64, 0f64);
    for w in seq.windows(2) {
        let ((a0, b0), (a1, b1)) = (w[0], w[1]);
        let d = (b1 - a1) - (b0 - a0);
        let tol = slack(a0.abs().max(b0.abs()), a1.abs().max(b1.abs()));
        if -d > tol {
            dec = dec.max(-d);
        }
        if d > tol {
            inc = inc.max(d);
        }
    }
    Some((dec, inc))
}

/// Decide which way `X` and `Y` compare in `relation` on a grid.
///
/// Points where a hazard is undefined (outside a support, at a breakpoint)
/// are skipped; hazards at infinity compare as plain infinities.
pub fn certify_order(x: &Distribution, y: &Distribution, relation: OrderRelation, grid: &GridSpec) -> Result<OrderCertificate> {
    let pts = grid.points(&[x, y])?;
    certify_order_on(x, y, relation, &pts)
}

/// [`certify_order`] on an explicit grid.
pub fn certify_order_on(x: &Distribution, y: &Distribution, relation: OrderRelation, pts: &[f64]) -> Result<OrderCertificate> {
    let (mut viol_le, mut viol_ge) = (0f64, 0f64);
    let mut used = Vec::with_capacity(pts.len());
    for &t in pts {
        let Some((a, b)) = order_pair(x, y, relation, t)? else {
            continue;
        };
        if a == b {
            used.push(t);
            continue;
        }
        let tol = slack(a, b);
        let d = a - b;
        if d.is_nan() {
            continue;
        }
        used.push(t);
        if d > tol {
            viol_le = viol_le.max(d);
        }
        if -d > tol {
            viol_ge = viol_ge.max(-d);
        }
    }
    if let Some((le, ge)) = ratio_violations(x, y, relation, pts) {
        viol_le = viol_le.max(le);
        viol_ge = viol_ge.max(ge);
    }
    if used.is_empty() {
        return Err(Error::Domain(format!(
            "no grid point where {relation:?} order of {} and {} is defined",
            x.label(),
            y.label()
        )));
    }
    let (direction, max_violation) = match (viol_le == 0.0, viol_ge == 0.0) {
        (true, true) => (Direction::Equal, 0.0),
        (true, false) => (Direction::Le, 0.0),
        (false, true) => (Direction::Ge, 0.0),
        (false, false) => (Direction::Incomparable, viol_le.min(viol_ge)),
    };
    Ok(OrderCertificate {
        relation,
        direction,
        grid: used,
        max_violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgeingClass {
    #[serde(rename = "NBU")]
    Nbu,
    #[serde(rename = "NWU")]
    Nwu,
    #[serde(rename = "NBUE")]
    Nbue,
    #[serde(rename = "NWUE")]
    Nwue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgeingCertificate {
    /// The tested class when it holds on the grid, `None` otherwise.
    pub class: Option<AgeingClass>,
    pub tested: AgeingClass,
    /// Points `t` (for NBUE/NWUE) or the axis of the `(x, t)` product grid.
    pub grid: Vec<f64>,
    pub max_violation: f64,
}

impl AgeingCertificate {
    pub fn holds(&self) -> bool {
        self.class.is_some()
    }
}

/// Check an ageing class: NBU/NWU via `F̄(x+t)` against `F̄(x)F̄(t)` on a
/// product grid, NBUE/NWUE via `δ_F(t)` against `E(X)`.
pub fn certify_ageing(
    x: &Distribution,
    class: AgeingClass,
    grid: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<AgeingCertificate> {
    let mut max_violation = 0f64;
    let pts: Vec<f64>;
    match class {
        AgeingClass::Nbu | AgeingClass::Nwu => {
            let axis = GridSpec { n: grid.n.clamp(2, 48), ..*grid }.points(&[x])?;
            for &a in &axis {
                for &b in &axis {
                    let joint = x.survival(a + b);
                    let prod = x.survival(a) * x.survival(b);
                    let v = if class == AgeingClass::Nbu { joint - prod } else { prod - joint };
                    if v > ORDER_TOL {
                        max_violation = max_violation.max(v);
                    }
                }
            }
            pts = axis;
        }
        AgeingClass::Nbue | AgeingClass::Nwue => {
            let mu = x.mean_result();
            if mu.diverged || !mu.value.is_finite() {
                return Err(Error::Capability {
                    what: "ageing in expectation (finite mean)".into(),
                    dist: x.label(),
                });
            }
            let axis: Vec<f64> = grid.points(&[x])?.into_iter().filter(|t| x.survival(*t) > 0.0).collect();
            for &t in &axis {
                let d = mean_residual_life(x, t, cfg)?;
                if d.diverged {
                    return Err(Error::Capability {
                        what: "ageing in expectation (finite residual mean)".into(),
                        dist: x.label(),
                    });
                }
                let v = if class == AgeingClass::Nbue { d.value - mu.value } else { mu.value - d.value };
                let tol = ORDER_TOL.max(10.0 * (d.error_estimate + mu.error_estimate));
                if v > tol {
                    max_violation = max_violation.max(v);
                }
            }
            pts = axis;
        }
    }
    Ok(AgeingCertificate {
        class: (max_violation == 0.0).then_some(class),
        tested: class,
        grid: pts,
        max_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{mixture, Parametric};

    fn exp(r: f64) -> Distribution {
        Parametric::exponential(r).unwrap()
    }

    #[test]
    fn exponential_orders() {
        let g = GridSpec::with_n(64);
        let st = certify_order(&exp(2.0), &exp(1.0), OrderRelation::St, &g).unwrap();
        assert_eq!(st.direction, Direction::Le);
        // λ_F = 2 ≥ λ_G = 1 means X ≤hr Y
        let hr = certify_order(&exp(2.0), &exp(1.0), OrderRelation::Hr, &g).unwrap();
        assert_eq!(hr.direction, Direction::Le);
        let same = certify_order(&exp(2.0), &exp(2.0), OrderRelation::Rh, &g).unwrap();
        assert_eq!(same.direction, Direction::Equal);
    }

    #[test]
    fn crossing_weibulls_are_incomparable() {
        let a = Parametric::weibull(1.0, 0.5).unwrap();
        let b = Parametric::weibull(1.2, 3.0).unwrap();
        let c = certify_order(&a, &b, OrderRelation::St, &GridSpec::with_n(64)).unwrap();
        assert_eq!(c.direction, Direction::Incomparable);
        assert!(c.max_violation > 0.0);
    }

    #[test]
    fn mixture_sits_between() {
        let (x, y) = (exp(2.0), exp(1.0));
        let z = mixture(&[(0.3, x.clone()), (0.7, y.clone())]).unwrap();
        let g = GridSpec::with_n(64);
        assert!(certify_order(&x, &z, OrderRelation::St, &g).unwrap().x_le_y());
        assert!(certify_order(&z, &y, OrderRelation::St, &g).unwrap().x_le_y());
    }

    #[test]
    fn ageing_examples() {
        let g = GridSpec::with_n(32);
        let cfg = QuadratureConfig::default();
        let e = exp(1.5);
        for c in [AgeingClass::Nbu, AgeingClass::Nwu, AgeingClass::Nbue, AgeingClass::Nwue] {
            assert!(certify_ageing(&e, c, &g, &cfg).unwrap().holds(), "{c:?}");
        }
        let w2 = Parametric::weibull(1.0, 2.0).unwrap();
        assert!(certify_ageing(&w2, AgeingClass::Nbu, &g, &cfg).unwrap().holds());
        assert!(!certify_ageing(&w2, AgeingClass::Nwu, &g, &cfg).unwrap().holds());
        let w05 = Parametric::weibull(1.0, 0.5).unwrap();
        assert!(certify_ageing(&w05, AgeingClass::Nwu, &g, &cfg).unwrap().holds());
        assert!(certify_ageing(&w05, AgeingClass::Nwue, &g, &cfg).unwrap().holds());
        let p = Parametric::pareto1(1.0, 1.0).unwrap();
        assert!(certify_ageing(&p, AgeingClass::Nbue, &g, &cfg).is_err());
    }
}
