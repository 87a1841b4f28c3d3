//! Seeded randomized sweeps over the registry.
//!
//! Each `(entry, trial)` pair gets its own ChaCha8 stream, so results do not
//! depend on scheduling; the output is sorted with failures first, then by
//! id and trial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{proportional_hazards, proportional_reversed_hazards, Distribution, Parametric};
use crate::error::{Error, Result};
use crate::report::{PropositionReport, Status};

use super::registry::{entry, power_cdf, registry, Bindings, Domain, HarnessConfig, RegistryEntry};

/// Exponential rate.
pub const RATE: (f64, f64) = (0.5, 3.0);
/// Weibull and gamma scale.
pub const SCALE: (f64, f64) = (0.5, 2.0);
pub const WEIBULL_SHAPE: (f64, f64) = (0.5, 3.0);
pub const GAMMA_SHAPE: (f64, f64) = (0.5, 4.0);
/// Upper end `c` of the bounded families on `[0, c]`.
pub const BOUNDED_END: (f64, f64) = (0.5, 1.0);
/// Exponent `k` of `F(x) = (x/c)^k`.
pub const POWER_EXP: (f64, f64) = (0.5, 3.0);
/// `α` and `θ` of the power models.
pub const MODEL_POWER: (f64, f64) = (0.3, 3.0);
/// Window start and width.
pub const WINDOW_START: (f64, f64) = (0.0, 1.5);
pub const WINDOW_WIDTH: (f64, f64) = (0.2, 2.5);
/// Curvature `c` of `x + c·x²`.
pub const QUADRATIC: (f64, f64) = (0.05, 0.5);

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    rng.gen_range(lo..hi)
}

/// Lifetimes from one family each; `shared` keeps one family (and, half
/// the time, one shape) so order preconditions hold often.
fn lifetimes(rng: &mut ChaCha8Rng, n: usize, shared: bool) -> Result<Vec<Distribution>> {
    let family = rng.gen_range(0..3);
    let shape_of = |f: usize, rng: &mut ChaCha8Rng| match f {
        1 => draw(rng, WEIBULL_SHAPE),
        _ => draw(rng, GAMMA_SHAPE),
    };
    let common = if shared && rng.gen_bool(0.5) {
        Some(shape_of(family, rng))
    } else {
        None
    };
    (0..n)
        .map(|_| {
            let f = if shared { family } else { rng.gen_range(0..3) };
            match f {
                0 => Parametric::exponential(draw(rng, RATE)),
                1 => {
                    let k = common.unwrap_or_else(|| shape_of(1, rng));
                    Parametric::weibull(draw(rng, SCALE), k)
                }
                _ => {
                    let k = common.unwrap_or_else(|| shape_of(2, rng));
                    Parametric::gamma(draw(rng, SCALE), k)
                }
            }
        })
        .collect()
}

/// Uniform, smoothstep and power cdfs on `[0, c]`.
fn bounded(rng: &mut ChaCha8Rng, n: usize, shared: bool) -> Result<Vec<Distribution>> {
    let family = rng.gen_range(0..3);
    (0..n)
        .map(|_| {
            let f = if shared { family } else { rng.gen_range(0..3) };
            let c = draw(rng, BOUNDED_END);
            match f {
                0 => Parametric::uniform(0.0, c),
                1 => Parametric::smoothstep(0.0, c),
                _ => power_cdf(c, draw(rng, POWER_EXP)),
            }
        })
        .collect()
}

fn bind(mut ds: Vec<Distribution>) -> Bindings {
    let z = if ds.len() > 2 { ds.pop() } else { None };
    let y = ds.pop().expect("two distributions");
    let x = ds.pop().expect("two distributions");
    Bindings {
        z,
        ..Bindings::pair(x, y)
    }
}

/// Random bindings for an entry.
pub fn draw_bindings(e: &RegistryEntry, rng: &mut ChaCha8Rng) -> Result<Bindings> {
    Ok(match e.domain {
        Domain::Lifetimes => bind(lifetimes(rng, e.arity, e.ordered)?),
        Domain::Bounded => bind(bounded(rng, e.arity, e.ordered)?),
        Domain::Windows => {
            let t1 = draw(rng, WINDOW_START);
            let t2 = t1 + draw(rng, WINDOW_WIDTH);
            let c = draw(rng, QUADRATIC);
            bind(lifetimes(rng, 2, false)?).with_window(t1, t2).with_params(&[c])
        }
        Domain::PowerHazards | Domain::PowerReversed => {
            let y = lifetimes(rng, 1, false)?.pop().expect("one distribution");
            let k = draw(rng, MODEL_POWER);
            let x = if e.domain == Domain::PowerHazards {
                proportional_hazards(&y, k)?
            } else {
                proportional_reversed_hazards(&y, k)?
            };
            Bindings::pair(x, y).with_params(&[k])
        }
        Domain::Affine => {
            let (a, b) = (draw(rng, (0.5, 2.0)), draw(rng, (0.0, 1.0)));
            bind(lifetimes(rng, 2, false)?).with_params(&[a, b])
        }
        Domain::Symmetric => {
            let c = draw(rng, (0.5, 2.0));
            let mut pick = || {
                if rng.gen_bool(0.5) {
                    Parametric::uniform(0.0, c)
                } else {
                    Parametric::smoothstep(0.0, c)
                }
            };
            let (x, y) = (pick()?, pick()?);
            Bindings::pair(x, y).with_params(&[c])
        }
    })
}

fn stream(seed: u64, index: usize, trial: usize) -> ChaCha8Rng {
    let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((index as u64) << 32) ^ trial as u64;
    ChaCha8Rng::seed_from_u64(s)
}

/// Resolve ids; `all` (or an empty list) selects the whole registry.
pub fn select(ids: &[&str]) -> Result<Vec<&'static RegistryEntry>> {
    if ids.is_empty() || ids.iter().any(|i| i.eq_ignore_ascii_case("all")) {
        return Ok(registry().iter().collect());
    }
    ids.iter().map(|i| entry(i)).collect()
}

/// Sort failures first, then by id and trial.
pub fn canonical_order(reports: &mut [PropositionReport]) {
    reports.sort_by(|a, b| {
        (!a.is_failure(), &a.proposition_id, a.trial).cmp(&(!b.is_failure(), &b.proposition_id, b.trial))
    });
}

/// Run `n_trials` random bindings of every selected entry.
pub fn randomized_sweep(ids: &[&str], n_trials: usize, seed: u64, cfg: &HarnessConfig) -> Result<Vec<PropositionReport>> {
    if n_trials == 0 {
        return Err(Error::Config("n_trials must be at least 1".into()));
    }
    let entries = select(ids)?;
    let jobs: Vec<(usize, &RegistryEntry, usize)> = entries
        .iter()
        .flat_map(|e| {
            let index = registry().iter().position(|r| r.id == e.id).expect("registry entry");
            (0..n_trials).map(move |t| (index, *e, t))
        })
        .collect();
    let mut out: Vec<PropositionReport> = jobs
        .par_iter()
        .map(|&(index, e, trial)| {
            let mut rng = stream(seed, index, trial);
            match draw_bindings(e, &mut rng) {
                Ok(b) => e.run(&b, cfg),
                Err(err) => PropositionReport::skipped(e.id, "bindings", vec![], Status::Error, err.to_string()),
            }
            .with_trial(trial)
        })
        .collect();
    canonical_order(&mut out);
    Ok(out)
}

/// Reports from a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    /// Canonical-binding parts first, then every sweep trial in canonical
    /// order. Trials of the `k`-th seed are numbered from `k·n_trials`.
    pub reports: Vec<PropositionReport>,
    /// Failures and errors of entries that count toward the outcome.
    pub counted_failures: usize,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.counted_failures == 0
    }
}

/// Canonical bindings plus a randomized sweep per seed.
pub fn verify(ids: &[&str], n_trials: usize, seeds: &[u64], cfg: &HarnessConfig) -> Result<Verification> {
    if seeds.is_empty() {
        return Err(Error::Config("verify needs at least one seed".into()));
    }
    let entries = select(ids)?;
    let mut reports: Vec<PropositionReport> = entries
        .par_iter()
        .flat_map_iter(|e| match e.canonical_bindings() {
            Ok(b) => e.run_parts(&b, cfg),
            Err(err) => vec![PropositionReport::skipped(e.id, "bindings", vec![], Status::Error, err.to_string())],
        })
        .map(|r| {
            let note = if r.note.is_empty() { "canonical".to_string() } else { format!("canonical; {}", r.note) };
            r.with_note(note)
        })
        .collect();
    canonical_order(&mut reports);
    let ids: Vec<&str> = entries.iter().map(|e| e.id).collect();
    let mut swept = Vec::new();
    for (k, &seed) in seeds.iter().enumerate() {
        let run = randomized_sweep(&ids, n_trials, seed, cfg)?;
        swept.extend(run.into_iter().map(|r| {
            let t = r.trial + k * n_trials;
            r.with_trial(t)
        }));
    }
    canonical_order(&mut swept);
    reports.extend(swept);
    let counted_failures = reports
        .iter()
        .filter(|r| r.is_failure() && entry(&r.proposition_id).map(|e| e.counts()).unwrap_or(true))
        .count();
    Ok(Verification { reports, counted_failures })
}
