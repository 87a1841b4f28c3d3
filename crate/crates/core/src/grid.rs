//! Evaluation grids for curves and order certificates.

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{invalid, Result};

/// Offset used to straddle breakpoints.
pub const BREAKPOINT_OFFSET: f64 = 1e-9;

/// `n` evenly spaced points on `[a, b]`.
pub fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` points on `[a, b]` whose offsets from `a` grow geometrically,
/// starting at `first` (so `a` itself is excluded).
pub fn geometric(a: f64, b: f64, first: f64, n: usize) -> Vec<f64> {
    let span = b - a;
    let d0 = first.min(span).max(f64::MIN_POSITIVE);
    match n {
        0 => vec![],
        1 => vec![b],
        _ => (0..n)
            .map(|i| a + d0 * (span / d0).powf(i as f64 / (n - 1) as f64))
            .collect(),
    }
}

/// Where a grid should stop on an unbounded support: the first doubling of
/// the scale at which every survival function is at most `tail`.
pub fn effective_upper(ds: &[&Distribution], tail: f64) -> f64 {
    let lo = ds.iter().map(|d| d.support().lo).fold(f64::INFINITY, f64::min);
    let hi = ds.iter().map(|d| d.support().hi).fold(f64::NEG_INFINITY, f64::max);
    if hi.is_finite() {
        return hi;
    }
    let mut step = ds.iter().map(|d| d.scale_hint()).fold(0.0, f64::max).max(1e-6);
    let mut x = lo.max(0.0) + step;
    for _ in 0..200 {
        if ds.iter().all(|d| d.survival(x) <= tail) {
            return x;
        }
        step *= 2.0;
        x = lo.max(0.0) + step;
    }
    x
}

/// Add `p ± 1e-9` for every breakpoint strictly inside `(lo, hi)`, then sort.
pub fn with_breakpoints(mut pts: Vec<f64>, breakpoints: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    for &p in breakpoints {
        for q in [p - BREAKPOINT_OFFSET, p + BREAKPOINT_OFFSET] {
            if q > lo && q < hi {
                pts.push(q);
            }
        }
    }
    pts.retain(|p| p.is_finite());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Grid request: `n` points over `[lo, hi]`, each end defaulting to the
/// joint support of the distributions involved. Unbounded ranges stop where
/// every survival is at most `tail`, and are spaced geometrically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default = "default_tail")]
    pub tail: f64,
}

fn default_tail() -> f64 {
    1e-10
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: 256,
            lo: None,
            hi: None,
            tail: default_tail(),
        }
    }
}

impl GridSpec {
    pub fn with_n(n: usize) -> Self {
        Self { n, ..Self::default() }
    }

    pub fn range(n: usize, lo: f64, hi: f64) -> Self {
        Self {
            n,
            lo: Some(lo),
            hi: Some(hi),
            tail: default_tail(),
        }
    }

    /// Materialize the grid for the given distributions.
    pub fn points(&self, ds: &[&Distribution]) -> Result<Vec<f64>> {
        if self.n < 2 {
            return Err(invalid("n", "grid needs at least 2 points"));
        }
        let lo = self
            .lo
            .unwrap_or_else(|| ds.iter().map(|d| d.support().lo).fold(f64::INFINITY, f64::min));
        let sup_hi = ds.iter().map(|d| d.support().hi).fold(f64::NEG_INFINITY, f64::max);
        let unbounded = self.hi.is_none() && !sup_hi.is_finite();
        let hi = self.hi.unwrap_or_else(|| effective_upper(ds, self.tail));
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(invalid("grid", format!("empty or unbounded range [{lo}, {hi}]")));
        }
        let pts = if unbounded {
            let mut p = vec![lo];
            p.extend(geometric(lo, hi, 1e-4 * (hi - lo), self.n - 1));
            p
        } else {
            uniform(lo, hi, self.n)
        };
        let bps: Vec<f64> = ds.iter().flat_map(|d| d.breakpoints()).collect();
        Ok(with_breakpoints(pts, &bps, lo, hi))
    }
}
