//! Checks of self-contraction and its consequences on sampled curves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::{Curve, Mode};
use crate::error::{Error, Result};
use crate::flow::{GradientCurveRun, ObjectiveFn};
use crate::spaces::{Point, Space};

/// Default tolerance on distance inequalities.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub check: &'static str,
    /// Largest value of (left side - right side); negative means slack.
    pub max_violation: f64,
    pub tolerance: f64,
    pub n_checked: u64,
    pub pass: bool,
    /// Result is a diagnostic only (e.g. contraction for a non-convex objective).
    pub informational: bool,
    pub witness: Option<Witness>,
}

impl ViolationReport {
    fn new(check: &'static str, tolerance: f64) -> Self {
        ViolationReport {
            check,
            max_violation: f64::NEG_INFINITY,
            tolerance,
            n_checked: 0,
            pass: true,
            informational: false,
            witness: None,
        }
    }

    fn record(&mut self, v: f64, witness: impl FnOnce() -> Witness) {
        if v > self.max_violation {
            self.max_violation = v;
            self.witness = Some(witness());
        }
    }

    fn finish(mut self) -> Self {
        if self.n_checked == 0 {
            self.max_violation = 0.0;
        }
        self.pass = self.max_violation <= self.tolerance;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingConfig {
    /// All triples are checked when the curve has at most this many probe
    /// points.
    pub exhaustive_limit: usize,
    /// Random triples drawn above the limit.
    pub random_triples: usize,
    /// Interior points per segment for interpolated curves.
    pub segment_points: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            exhaustive_limit: 10_000,
            random_triples: 1_000_000,
            segment_points: 3,
            tolerance: VIOLATION_TOLERANCE,
            seed: 7,
        }
    }
}

impl SamplingConfig {
    /// Only `n` random triples, regardless of curve size.
    pub fn random(n: usize, seed: u64) -> Self {
        SamplingConfig {
            exhaustive_limit: 0,
            random_triples: n,
            seed,
            ..Default::default()
        }
    }
}

/// Times and points examined by the checks: the samples, plus interior
/// points of each segment for interpolated curves.
pub fn probe_points(curve: &Curve, segment_points: usize) -> (Vec<f64>, Vec<Point>) {
    let s = curve.samples();
    let mut ts = Vec::new();
    let mut ps = Vec::new();
    for (i, a) in s.iter().enumerate() {
        ts.push(a.t);
        ps.push(a.p.clone());
        if curve.mode == Mode::GeodesicInterpolated && i + 1 < s.len() {
            let b = &s[i + 1];
            for j in 1..=segment_points {
                let f = j as f64 / (segment_points + 1) as f64;
                ts.push(a.t + f * (b.t - a.t));
                ps.push(curve.space.geo(&a.p, &b.p, f));
            }
        }
    }
    (ts, ps)
}

fn witness(ts: &[f64], ps: &[Point], idx: &[usize]) -> Witness {
    Witness {
        times: idx.iter().map(|&i| ts[i]).collect(),
        points: idx.iter().map(|&i| ps[i].coords()).collect(),
    }
}

/// `d(xi(t2), xi(t3)) <= d(xi(t1), xi(t3))` for `t1 < t2 < t3`.
///
/// The exhaustive pass is quadratic: for a fixed `t3` the worst `t1` for a
/// given `t2` is the earlier point nearest to `xi(t3)`, so a running minimum
/// covers all triples.
pub fn is_self_contracted(space: &Space, curve: &Curve, cfg: &SamplingConfig) -> ViolationReport {
    let (ts, ps) = probe_points(curve, cfg.segment_points);
    let n = ps.len();
    let mut rep = ViolationReport::new("self_contracted", cfg.tolerance);
    if n < 3 {
        return rep.finish();
    }
    if n <= cfg.exhaustive_limit {
        for m in 2..n {
            let dm: Vec<f64> = (0..m).map(|j| space.d(&ps[j], &ps[m])).collect();
            let mut kmin = 0;
            for l in 1..m {
                let v = dm[l] - dm[kmin];
                rep.record(v, || witness(&ts, &ps, &[kmin, l, m]));
                if dm[l] < dm[kmin] {
                    kmin = l;
                }
            }
            rep.n_checked += (m as u64) * (m as u64 - 1) / 2;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let strata = cfg.random_triples.max(1);
        for i in 0..cfg.random_triples {
            // stratify the last index across the curve
            let lo = 2 + (i * (n - 2)) / strata;
            let hi = (2 + ((i + 1) * (n - 2)) / strata).max(lo + 1).min(n);
            let m = rng.random_range(lo..hi);
            let l = rng.random_range(1..m);
            let k = rng.random_range(0..l);
            let v = space.d(&ps[l], &ps[m]) - space.d(&ps[k], &ps[m]);
            rep.record(v, || witness(&ts, &ps, &[k, l, m]));
            rep.n_checked += 1;
        }
    }
    rep.finish()
}

/// `t -> d(xi(t), xi(T))` is non-increasing over samples up to `T`.
pub fn tail_monotonicity(space: &Space, curve: &Curve, t_end: f64, tolerance: f64) -> Result<ViolationReport> {
    let idx = curve.index_of_time(t_end)?;
    let s = curve.samples();
    let ts: Vec<f64> = s.iter().map(|a| a.t).collect();
    let ps: Vec<Point> = s.iter().map(|a| a.p.clone()).collect();
    let mut rep = ViolationReport::new("tail_monotonicity", tolerance);
    let d: Vec<f64> = (0..=idx).map(|j| space.d(&ps[j], &ps[idx])).collect();
    let mut kmin = 0;
    for l in 1..=idx {
        rep.record(d[l] - d[kmin], || witness(&ts, &ps, &[kmin, l, idx]));
        rep.n_checked += l as u64;
        if d[l] < d[kmin] {
            kmin = l;
        }
    }
    Ok(rep.finish())
}

/// Whenever `xi(t1) = xi(t3)`, every sample in between equals `xi(t1)`.
pub fn stationarity_check(space: &Space, curve: &Curve) -> ViolationReport {
    let s = curve.samples();
    let ts: Vec<f64> = s.iter().map(|a| a.t).collect();
    let ps: Vec<Point> = s.iter().map(|a| a.p.clone()).collect();
    let mut rep = ViolationReport::new("stationarity", space.tolerance);
    for i in 0..ps.len() {
        let Some(last) = (i + 1..ps.len()).rev().find(|&k| space.same_point(&ps[i], &ps[k])) else {
            continue;
        };
        for j in i + 1..last {
            rep.n_checked += 1;
            rep.record(space.d(&ps[j], &ps[i]), || witness(&ts, &ps, &[i, j, last]));
        }
    }
    rep.finish()
}

/// Self-contraction of `xi o phi` sampled at `new_times`; `phi` must be
/// non-decreasing there.
pub fn reparam_preserves(
    space: &Space,
    curve: &Curve,
    phi: impl Fn(f64) -> f64,
    new_times: &[f64],
    cfg: &SamplingConfig,
) -> Result<ViolationReport> {
    let mapped: Vec<f64> = new_times.iter().map(|&t| phi(t)).collect();
    if let Some(i) = mapped.windows(2).position(|w| !(w[1] >= w[0])) {
        return Err(Error::NonMonotoneTimeMap { index: i + 1 });
    }
    let composed = curve.reparametrized(new_times, phi)?;
    let mut rep = is_self_contracted(space, &composed, cfg);
    rep.check = "reparametrized";
    Ok(rep)
}

/// Angle at `xi(tau)` between the directions to `xi(t1)` and `xi(t2)`.
pub fn angle_estimate_check(space: &Space, curve: &Curve, tau: f64, t1: f64, t2: f64) -> Result<f64> {
    if !(t1 > tau && t2 > tau) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t1.min(t2),
        });
    }
    let base = curve.point_at(tau);
    let (d1, _) = space.log_direction(&base, &curve.point_at(t1))?;
    let (d2, _) = space.log_direction(&base, &curve.point_at(t2))?;
    space.direction_angle(&d1, &d2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleSweep {
    pub max_angle: f64,
    pub n_checked: u64,
    /// Triples skipped because a later point coincides with the base.
    pub n_degenerate: u64,
    pub witness: Option<[f64; 3]>,
}

/// Angle estimate over sample triples `tau < t1 < t2` (all of them when the
/// curve is small, else `n_random`).
pub fn angle_sweep(space: &Space, curve: &Curve, n_random: usize, seed: u64) -> AngleSweep {
    let s = curve.samples();
    let n = s.len();
    let mut out = AngleSweep {
        max_angle: 0.0,
        n_checked: 0,
        n_degenerate: 0,
        witness: None,
    };
    let visit = |i: usize, j: usize, k: usize, out: &mut AngleSweep| match angle_estimate_check(
        space, curve, s[i].t, s[j].t, s[k].t,
    ) {
        Ok(a) => {
            out.n_checked += 1;
            if a > out.max_angle {
                out.max_angle = a;
                out.witness = Some([s[i].t, s[j].t, s[k].t]);
            }
        }
        Err(_) => out.n_degenerate += 1,
    };
    if n < 3 {
        return out;
    }
    let total = (n * (n - 1) * (n - 2) / 6) as u64;
    if total <= n_random as u64 {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    visit(i, j, k, &mut out);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n_random {
            let i = rng.random_range(0..n - 2);
            let j = rng.random_range(i + 1..n - 1);
            let k = rng.random_range(j + 1..n);
            visit(i, j, k, &mut out);
        }
    }
    out
}

/// If `xi(t1), xi(t2)` lie in `B(x, r)`, the curve between them stays in
/// `B(x, 3r)`.
pub fn ball_confinement_check(
    space: &Space,
    curve: &Curve,
    x: &Point,
    r: f64,
    segment_points: usize,
) -> Result<ViolationReport> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange { name: "r", value: r });
    }
    let (ts, ps) = probe_points(curve, segment_points);
    let d: Vec<f64> = ps.iter().map(|p| space.d(x, p)).collect();
    let mut rep = ViolationReport::new("ball_confinement", space.tolerance);
    let inside: Vec<usize> = (0..ps.len()).filter(|&i| d[i] <= r).collect();
    if let (Some(&a), Some(&b)) = (inside.first(), inside.last()) {
        for j in a + 1..b {
            rep.n_checked += 1;
            rep.record(d[j] - 3.0 * r, || witness(&ts, &ps, &[a, j, b]));
        }
    }
    Ok(rep.finish())
}

/// `d(xi(t), xi(tau)) >= d(xi(T), xi(tau)) / 2` for samples `tau < T <= t`.
pub fn half_distance_check(space: &Space, curve: &Curve, tolerance: f64) -> ViolationReport {
    let s = curve.samples();
    let ts: Vec<f64> = s.iter().map(|a| a.t).collect();
    let ps: Vec<Point> = s.iter().map(|a| a.p.clone()).collect();
    let n = ps.len();
    let mut rep = ViolationReport::new("half_distance", tolerance);
    for i in 0..n {
        let d: Vec<f64> = (0..n)
            .map(|j| if j > i { space.d(&ps[j], &ps[i]) } else { 0.0 })
            .collect();
        // suffix minimum of d over t >= T
        let mut best = usize::MAX;
        for big in (i + 1..n).rev() {
            if best == usize::MAX || d[big] < d[best] {
                best = big;
            }
            rep.n_checked += (n - big) as u64;
            rep.record(d[big] / 2.0 - d[best], || witness(&ts, &ps, &[i, big, best]));
        }
    }
    rep.finish()
}

/// Forward-difference residual
/// `[d^2(xi(t+h), y) - d^2(xi(t), y)] / (2h) + f(xi(t)) - f(y)`.
pub fn evi_residual(space: &Space, f: &ObjectiveFn, curve: &Curve, t: f64, y: &Point, h: f64) -> Result<f64> {
    if !f.class.is_convex() {
        return Err(Error::Unsupported("EVI residual needs a convex objective".into()));
    }
    if !(h > 0.0) {
        return Err(Error::OutOfRange { name: "h", value: h });
    }
    curve.index_of_time(t)?;
    space.check_point(y)?;
    let a = curve.point_at(t);
    let b = curve.point_at(t + h);
    let (da, db) = (space.d(&a, y), space.d(&b, y));
    Ok((db * db - da * da) / (2.0 * h) + f.eval(space, &a) - f.eval(space, y))
}

/// `k -> d(x^k, y^k)` is non-increasing for two runs with the same schedule.
/// Only asserted for convex objectives.
pub fn contraction_check(
    space: &Space,
    f: &ObjectiveFn,
    a: &GradientCurveRun,
    b: &GradientCurveRun,
    tolerance: f64,
) -> Result<ViolationReport> {
    if a.step_sizes != b.step_sizes || a.len() != b.len() {
        return Err(Error::MismatchedSchedules);
    }
    let d: Vec<f64> = a.points.iter().zip(&b.points).map(|(p, q)| space.d(p, q)).collect();
    let mut rep = ViolationReport::new("contraction", tolerance);
    rep.informational = !f.class.is_convex();
    for k in 1..d.len() {
        rep.n_checked += 1;
        rep.record(d[k] - d[k - 1], || Witness {
            times: vec![a.times[k - 1], a.times[k]],
            points: vec![a.points[k].coords(), b.points[k].coords()],
        });
    }
    Ok(rep.finish())
}
