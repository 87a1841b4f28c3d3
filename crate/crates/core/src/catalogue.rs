//! Named distributions and pairs used by the worked examples, the figures
//! and the randomized harness.

use crate::dist::{Distribution, PiecewiseKind, PiecewiseSpec, Segment, DistSpec};
use crate::error::Result;

fn piecewise(kind: PiecewiseKind, breakpoints: Vec<f64>, segments: Vec<Segment>) -> DistSpec {
    let spec = PiecewiseSpec {
        breakpoints,
        segments,
        allow_jumps: false,
    };
    match kind {
        PiecewiseKind::Survival => DistSpec::PiecewiseSurvival(spec),
        PiecewiseKind::Cdf => DistSpec::PiecewiseCdf(spec),
    }
}

/// Three-piece residual pair: `F̄ = 1, e^{6−2x}, e^{2−x}` split at 3 and 4,
/// and `Ḡ = √F̄`.
pub fn residual_pair_specs() -> (DistSpec, DistSpec) {
    let x = piecewise(
        PiecewiseKind::Survival,
        vec![3.0, 4.0],
        vec![
            Segment::Constant(1.0),
            Segment::Exp(vec![(6.0, 0.0), (-2.0, 1.0)]),
            Segment::Exp(vec![(2.0, 0.0), (-1.0, 1.0)]),
        ],
    );
    let y = piecewise(
        PiecewiseKind::Survival,
        vec![3.0, 4.0],
        vec![
            Segment::Constant(1.0),
            Segment::Exp(vec![(3.0, 0.0), (-1.0, 1.0)]),
            Segment::Exp(vec![(1.0, 0.0), (-0.5, 1.0)]),
        ],
    );
    (x, y)
}

/// Past pair: `F = exp(−1/2 − 1/x)` on `(0, 1]`, `exp(−2 + x²/2)` on
/// `(1, 2]`; `G = x²/4` on `(0, 2]`.
pub fn past_pair_specs() -> (DistSpec, DistSpec) {
    let x = piecewise(
        PiecewiseKind::Cdf,
        vec![1.0, 2.0],
        vec![
            Segment::Exp(vec![(-0.5, 0.0), (-1.0, -1.0)]),
            Segment::Exp(vec![(-2.0, 0.0), (0.5, 2.0)]),
            Segment::Constant(1.0),
        ],
    );
    let y = piecewise(
        PiecewiseKind::Cdf,
        vec![2.0],
        vec![Segment::Power { coef: 0.25, exp: 2.0 }, Segment::Constant(1.0)],
    );
    (x, y)
}

/// Smooth parametric pairs on `(0, ∞)` as `(X, Y)` spec strings: finite
/// means, densities bounded at the origin.
pub const SMOOTH_PAIRS: [(&str, &str); 10] = [
    ("exponential:2", "exponential:1"),
    ("exponential:1", "exponential:3"),
    ("weibull:1,2", "exponential:1"),
    ("weibull:1,1.5", "weibull:1,2"),
    ("weibull:1,1.2", "exponential:1"),
    ("gamma:1,2", "exponential:1"),
    ("gamma:1,3", "gamma:2,2"),
    ("exponential:1", "erlang:2,2"),
    ("weibull:2,2", "gamma:1,2"),
    ("gamma:0.5,1.5", "weibull:1,1.2"),
];

pub fn smooth_pairs() -> Result<Vec<(Distribution, Distribution)>> {
    SMOOTH_PAIRS
        .iter()
        .map(|(x, y)| Ok((DistSpec::parse(x)?.build()?, DistSpec::parse(y)?.build()?)))
        .collect()
}

pub fn residual_pair() -> Result<(Distribution, Distribution)> {
    let (x, y) = residual_pair_specs();
    Ok((x.build()?, y.build()?))
}

pub fn past_pair() -> Result<(Distribution, Distribution)> {
    let (x, y) = past_pair_specs();
    Ok((x.build()?, y.build()?))
}

/// The printed closed form for the residual pair's DCRI (all three pieces).
pub fn residual_pair_printed_dcri(t: f64) -> f64 {
    if t <= 3.0 {
        (2.0 * t - 6.0).exp() / 4.0 * ((2.0 * t - 9.0) * (-2f64).exp() - (2.0 * t - 7.0))
            - (t - 5.0) / 2.0 * (t - 4.0).exp()
    } else if t < 4.0 {
        0.25 * ((2.0 * t - 9.0) * (2.0 * t - 8.0).exp() + 1.0) - (t - 5.0) / 2.0 * (t - 4.0).exp()
    } else {
        0.5
    }
}

/// The printed integral for the past pair's DCPI at `t ≥ 2`.
pub fn past_pair_printed_dcpi(t: f64) -> f64 {
    let n = 20_000;
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let first = |x: f64| if x <= 0.0 { 0.0 } else { (1.0 / t - 1.0 / x).exp() * (x / t).ln() };
    let second = |x: f64| ((x * x - t * t) / 2.0).exp() * (x / t).ln();
    -2.0 * (simpson(&first, 0.0, 1.0) + simpson(&second, 1.0, 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_pairs_build() {
        assert_eq!(smooth_pairs().unwrap().len(), SMOOTH_PAIRS.len());
    }

    #[test]
    fn pairs_build() {
        let (x, y) = residual_pair().unwrap();
        assert_eq!(x.support().lo, 3.0);
        for t in [3.5, 4.0, 6.0] {
            assert!((y.survival(t) - x.survival(t).sqrt()).abs() < 1e-15);
        }
        let (x, y) = past_pair().unwrap();
        assert_eq!(x.support().hi, 2.0);
        assert!((y.cdf(1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn printed_forms_agree_where_constant() {
        assert_eq!(residual_pair_printed_dcri(5.0), 0.5);
        // for t ≥ 2 the printed integral does not depend on t beyond the
        // common factor, so it is flat in t
        let a = past_pair_printed_dcpi(2.5);
        let b = past_pair_printed_dcpi(4.0);
        assert!(a.is_finite() && b.is_finite());
    }
}
