//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cuminfo::catalogue;
use cuminfo::dist::{mean_residual_life, proportional_hazards, proportional_reversed_hazards, Parametric};
use cuminfo::dynamic::{
    classify_monotonicity, classify_points, curve, dcpi, dcpi_as_conditional_expectation, dcpi_derivative, dcre, dcri,
    dcri_derivative, DynamicKind, Monotonicity,
};
use cuminfo::interval::{icri, icri_by_decomposition};
use cuminfo::measures::{cpe, cpi, cre, cri, cri_as_expectation, MeasureValue};
use cuminfo::order::{registry, EntryClass};
use cuminfo::repro::{self, open_grid, ShapeFamily};
use cuminfo::QuadratureConfig;

type Outcome = Result<String, String>;

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn v(m: cuminfo::Result<MeasureValue>) -> f64 {
    let m = m.expect("measure evaluates");
    m.finite().unwrap_or_else(|| panic!("{} diverged for {:?}", m.name, m.inputs))
}

/// Collect failed checks; the criterion passes when none failed.
struct Checks {
    failed: Vec<String>,
    worst: f64,
    n: usize,
}

impl Checks {
    fn new() -> Self {
        Self { failed: vec![], worst: 0.0, n: 0 }
    }

    fn within(&mut self, what: impl Into<String>, got: f64, want: f64, tol: f64) {
        let d = (got - want).abs();
        self.n += 1;
        if d.is_finite() {
            self.worst = self.worst.max(d / tol);
        }
        if !(d <= tol) {
            self.failed.push(format!("{}: got {got}, want {want} +/- {tol:e}", what.into()));
        }
    }

    fn truth(&mut self, what: impl Into<String>, ok: bool) {
        self.n += 1;
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn finish(self) -> Outcome {
        if self.failed.is_empty() {
            Ok(format!("{} checks, worst deviation {:.3} of tolerance", self.n, self.worst))
        } else {
            Err(format!("{} of {} checks failed: {}", self.failed.len(), self.n, self.failed.join("; ")))
        }
    }
}

fn example1() -> Outcome {
    let e = repro::example1(&q()).map_err(|e| e.to_string())?;
    let mut c = Checks::new();
    c.within("f(lambda*)", e.residual, 0.0, 1e-10);
    c.within("kerridge symmetry", e.kerridge_xy, e.kerridge_yx, 1e-6);
    c.within("cri(X,Y)", e.cri_xy, 0.809178, 2e-3);
    c.within("cri(Y,X)", e.cri_yx, 1.13724, 1e-3);
    c.within("cri(Y,X) closed form", e.cri_yx, 3.0 / (e.lambda * e.lambda), 1e-6);
    c.within("cpi(X,Y)", e.cpi_xy, 0.955988, 2e-3);
    c.within("cpi(Y,X)", e.cpi_yx, 0.458129, 2e-3);
    c.finish().map(|s| format!("lambda* = {:.10}; {s}", e.lambda))
}

fn example21() -> Outcome {
    let (x, y) = catalogue::residual_pair().map_err(|e| e.to_string())?;
    let mut c = Checks::new();
    for t in [4.0, 4.5, 6.0] {
        c.within(format!("dcri({t})"), v(dcri(&x, &y, t, &q())), 0.5, 1e-6);
    }
    let cv = curve(DynamicKind::Dcri, &x, Some(&y), &open_grid(3.0, 4.0, 64), &q()).map_err(|e| e.to_string())?;
    let verdict = classify_monotonicity(&cv).map_err(|e| e.to_string())?;
    c.truth(
        format!("curve on (3, 4) classified {} (expected non-monotone)", verdict.classification),
        verdict.classification == Monotonicity::NonMonotone,
    );
    c.finish()
}

fn example31() -> Outcome {
    let (x, y) = catalogue::past_pair().map_err(|e| e.to_string())?;
    let cv = curve(DynamicKind::Dcpi, &x, Some(&y), &open_grid(2.0, 5.0, 64), &q()).map_err(|e| e.to_string())?;
    let verdict = classify_monotonicity(&cv).map_err(|e| e.to_string())?;
    let (lo, hi) = cv.finite_points().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (_, v)| (a.min(v), b.max(v)));
    let detail = format!("dcpi on (2, 5) classified {}, range [{lo:.9}, {hi:.9}]", verdict.classification);
    if verdict.classification == Monotonicity::NonMonotone {
        Ok(detail)
    } else {
        Err(format!("{detail} (expected non-monotone)"))
    }
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut c = Checks::new();
    let rel = |x: f64| 1e-8 * x.abs();
    for _ in 0..5 {
        let l = rng.gen_range(0.2..5.0);
        c.within(format!("cre(exp({l}))"), v(cre(&Parametric::exponential(l).unwrap(), &q())), 1.0 / l, rel(1.0 / l));
        let b = rng.gen_range(0.2..5.0);
        c.within(format!("cpe(uniform(0,{b}))"), v(cpe(&Parametric::uniform(0.0, b).unwrap(), &q())), b / 4.0, rel(b / 4.0));
        let (l1, l2) = (rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0));
        let want = l2 / (l1 * l1);
        let got = v(cri(&Parametric::exponential(l1).unwrap(), &Parametric::exponential(l2).unwrap(), &q()));
        c.within(format!("cri(exp({l1}), exp({l2}))"), got, want, rel(want));
        let b = rng.gen_range(0.2..5.0);
        let t = rng.gen_range(0.0..b);
        let want = (b - t) / 4.0;
        c.within(format!("dcre(uniform(0,{b}), {t})"), v(dcre(&Parametric::uniform(0.0, b).unwrap(), t, &q())), want, rel(want));
    }
    c.finish()
}

fn reductions() -> Outcome {
    let pairs = catalogue::smooth_pairs().map_err(|e| e.to_string())?;
    let mut c = Checks::new();
    let rel = |x: f64| 1e-8 * x.abs().max(1.0);
    for (x, y) in &pairs {
        let cre_x = v(cre(x, &q()));
        c.within(format!("cri({0}, {0})", x.label()), v(cri(x, x, &q())), cre_x, rel(cre_x));
        let cpe_x = v(cpe(x, &q()));
        c.within(format!("cpi({0}, {0})", x.label()), v(cpi(x, x, &q())), cpe_x, rel(cpe_x));
        let whole = v(cri(x, y, &q()));
        c.within(format!("dcri({}, {}, 1e-6)", x.label(), y.label()), v(dcri(x, y, 1e-6, &q())), whole, 1e-5);
        for t in [0.5, 1.0, 2.0] {
            let d = v(dcri(x, y, t, &q()));
            c.within(format!("icri({}, {}, ({t}, 200))", x.label(), y.label()), v(icri(x, y, t, 200.0, &q())), d, 1e-6);
        }
    }
    c.finish()
}

fn power_models() -> Outcome {
    let bases = ["exponential:1", "weibull:1,2", "gamma:1,2"];
    let mut c = Checks::new();
    let mut reversed_worst = 0f64;
    for b in bases {
        let y = cuminfo::DistSpec::parse(b).unwrap().build().unwrap();
        for k in [0.5, 2.0, 3.0] {
            let x = proportional_hazards(&y, k).unwrap();
            let grid = DynamicKind::Dcri.default_grid(&x, Some(&y), 32).unwrap();
            let worst = grid
                .iter()
                .map(|&t| (k * v(dcri(&x, &y, t, &q())) - v(dcre(&x, t, &q()))).abs())
                .fold(0.0, f64::max);
            c.within(format!("PH {b}, alpha {k}"), worst, 0.0, 1e-6);
            let x = proportional_reversed_hazards(&y, k).unwrap();
            let grid = DynamicKind::Dcpi.default_grid(&x, Some(&y), 32).unwrap();
            let mut worst = 0f64;
            for &t in &grid {
                let (l, r) = (v(dcpi(&x, &y, t, &q())), v(cuminfo::dynamic::dcpe(&x, t, &q())));
                worst = worst.max((k * l - r).abs());
                // the factor on the other side, as printed
                reversed_worst = reversed_worst.max((l - k * r).abs());
            }
            c.within(format!("PRH {b}, theta {k}"), worst, 0.0, 1e-6);
        }
    }
    c.finish()
        .map(|s| format!("{s}; factor-on-the-other-side reading deviates by up to {reversed_worst:.4}"))
}

fn derivatives() -> Outcome {
    let pairs = catalogue::smooth_pairs().map_err(|e| e.to_string())?;
    let fine = QuadratureConfig { abs_tol: 1e-14, rel_tol: 1e-13, ..QuadratureConfig::default() };
    let mut c = Checks::new();
    let ts = open_grid(0.2, 2.5, 16);
    for (x, y) in &pairs {
        for &t in &ts {
            let h = 1e-3 * t.max(1.0);
            let fd = (v(dcri(x, y, t + h, &fine)) - v(dcri(x, y, t - h, &fine))) / (2.0 * h);
            let a = dcri_derivative(x, y, t, &fine).unwrap();
            c.within(format!("dcri' {} {} t={t}", x.label(), y.label()), a, fd, 1e-4 * a.abs().max(fd.abs()) + 1e-7);
            let fd = (v(dcpi(x, y, t + h, &fine)) - v(dcpi(x, y, t - h, &fine))) / (2.0 * h);
            let a = dcpi_derivative(x, y, t, &fine).unwrap();
            c.within(format!("dcpi' {} {} t={t}", x.label(), y.label()), a, fd, 1e-4 * a.abs().max(fd.abs()) + 1e-7);
        }
    }
    // exponential pair: the derivative vanishes with the residual mean of X
    // and would be -1/2 with that of Y
    let (x, y) = (Parametric::exponential(2.0).unwrap(), Parametric::exponential(1.0).unwrap());
    let mut printed_form = 0f64;
    for &t in &ts {
        c.within(format!("dcri' exp pair t={t}"), dcri_derivative(&x, &y, t, &q()).unwrap(), 0.0, 1e-8);
        let d_y = mean_residual_life(&y, t, &q()).unwrap().value;
        printed_form = printed_form.max((2.0 * v(dcri(&x, &y, t, &q())) - d_y).abs());
    }
    c.finish()
        .map(|s| format!("{s}; with the residual mean of Y the exponential pair gives |d| = {printed_form:.4}"))
}

fn dual_routes() -> Outcome {
    let pairs = catalogue::smooth_pairs().map_err(|e| e.to_string())?;
    let mut c = Checks::new();
    for (x, y) in &pairs {
        let (a, b) = (cri(x, y, &q()).unwrap(), cri_as_expectation(x, y, &q()).unwrap());
        c.within(format!("cri expectation {} {}", x.label(), y.label()), a.value, b.value, 5.0 * (a.error() + b.error()));
        // the conditional expectation with (x, y) equals dcpi with (y, x)
        let t = 1.0;
        let (a, b) = (dcpi(y, x, t, &q()).unwrap(), dcpi_as_conditional_expectation(x, y, t, &q()).unwrap());
        c.within(format!("dcpi expectation {} {}", y.label(), x.label()), a.value, b.value, 5.0 * (a.error() + b.error()));
        let (a, b) = (icri(x, y, 0.5, 2.0, &q()).unwrap(), icri_by_decomposition(x, y, 0.5, 2.0, &q()).unwrap());
        c.within(format!("icri decomposition {} {}", x.label(), y.label()), a.value, b.value, 5.0 * (a.error() + b.error_estimate));
    }
    c.finish()
}

fn harness() -> Outcome {
    let core = registry().iter().filter(|e| e.class == EntryClass::Core).count();
    if core != 25 {
        return Err(format!("registry has {core} core entries"));
    }
    let out = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_cuminfo"))
        .args(["verify", "all", "--seeds", "1,2,3", "--trials", "100", "--out"])
        .arg(out.path())
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&status.stderr).trim().to_string();
    let secs = start.elapsed().as_secs_f64();
    if status.status.code() == Some(0) {
        Ok(format!("exit 0 in {secs:.1}s; {stderr}"))
    } else {
        let text = std::fs::read_to_string(out.path()).unwrap_or_default();
        let failing: Vec<&str> = text.lines().filter(|l| l.contains("\"status\":\"fail\"") || l.contains("\"status\":\"error\"")).take(3).collect();
        Err(format!("exit {:?}; {stderr}; first failures: {}", status.status.code(), failing.join(" | ")))
    }
}

fn divergence() -> Outcome {
    let p = Parametric::pareto1(1.0, 1.0).unwrap();
    let e = Parametric::exponential(1.0).unwrap();
    let mut c = Checks::new();
    let m = cri(&p, &e, &q()).unwrap();
    c.truth("cri(pareto1, exp(1)) flagged diverged", m.diverged() && m.finite().is_none());
    c.truth("cri(pareto1, exp(1)) carries a finite partial value", m.value.is_finite());
    let r = mean_residual_life(&p, 2.0, &q()).unwrap();
    c.truth("mean_residual_life(pareto1, 2) flagged diverged", r.diverged && r.finite().is_none());
    c.truth("mean_residual_life(pareto1, 2) carries a finite partial value", r.value.is_finite());
    let out = Command::new(env!("CARGO_BIN_EXE_cuminfo"))
        .args(["measure", "--measure", "cri", "--x", "pareto1", "--y", "exponential:1", "--strict"])
        .output()
        .map_err(|e| e.to_string())?;
    let json = String::from_utf8_lossy(&out.stdout).to_string();
    c.truth(format!("strict CLI exit {:?}", out.status.code()), out.status.code() == Some(3));
    c.truth(format!("CLI output {json:?} has no inf/nan"), !json.contains("inf") && !json.contains("NaN"));
    c.finish()
}

fn figure1() -> Outcome {
    let rs = repro::shape_grid(0.2, 3.0).map_err(|e| e.to_string())?;
    let names = ["crir_xy", "cpir_xy", "crir_yx", "cpir_yx"];
    let mut c = Checks::new();
    for fam in [ShapeFamily::Weibull, ShapeFamily::Gamma] {
        let rows = repro::ratio_sweep(fam, &rs, &q()).map_err(|e| e.to_string())?;
        let one = rows.iter().find(|r| r.r == 1.0).ok_or("no r = 1 row")?;
        for (k, name) in names.iter().enumerate() {
            match one.columns()[k] {
                Some(val) => c.within(format!("{} {name} at r=1", fam.name()), val, 1.0, 1e-6),
                None => c.truth(format!("{} {name} at r=1 diverged", fam.name()), false),
            }
            let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.columns()[k].map(|v| (r.r, v))).collect();
            let verdict = classify_points(&pts).map_err(|e| e.to_string())?;
            c.truth(
                format!("{} {name} is {} in r", fam.name(), verdict.classification),
                verdict.classification == Monotonicity::NonMonotone,
            );
        }
    }
    c.finish()
}

fn symmetric() -> Outcome {
    let u = Parametric::uniform(0.0, 1.0).unwrap();
    let s = Parametric::smoothstep(0.0, 1.0).unwrap();
    let mut c = Checks::new();
    for (x, y) in [(&u, &s), (&s, &u)] {
        for t in [0.2, 0.5, 0.7] {
            c.within(format!("{} {} t={t}", x.label(), y.label()), v(dcpi(x, y, t, &q())), v(dcri(x, y, 1.0 - t, &q())), 1e-6);
        }
    }
    c.finish()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("example 1 reproduction", example1),
        ("residual pair dcri", example21),
        ("past pair dcpi", example31),
        ("closed-form oracles", closed_forms),
        ("reductions and limits", reductions),
        ("proportional (reversed) hazards", power_models),
        ("derivative oracles", derivatives),
        ("dual-route equivalences", dual_routes),
        ("proposition harness", harness),
        ("divergence handling", divergence),
        ("ratio sweep", figure1),
        ("symmetric identity", symmetric),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS ({name}, {secs:.1}s): {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({name}, {secs:.1}s): {d}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
