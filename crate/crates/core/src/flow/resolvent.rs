//! Moreau–Yosida values and resolvent sets.
//!
//! Closed forms are used for distance-type objectives on the whole space.
//! Everything else goes through a multi-start search over charts: boxes of
//! parameters mapped into the space (edges, legs, sheets, tangent planes).

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::objective::{Domain, ObjectiveFn, ObjectiveKind};
use crate::error::{Error, Result};
use crate::spaces::{hyperbolic, Point, Space, SpaceKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Grid cells per one-dimensional chart.
    pub grid_cells: usize,
    /// Total grid budget per multi-dimensional chart.
    pub grid_budget: usize,
    /// Local refinements started from the best grid minima of each chart.
    pub starts_per_chart: usize,
    /// Values within this of the optimum count as ties.
    pub tie_tolerance: f64,
    /// Minimizers closer than this are merged.
    pub dedup_tolerance: f64,
    /// Unboundedness is declared below this value...
    pub unbounded_value: f64,
    /// ...or when a probe ray keeps decreasing past this radius.
    pub unbounded_radius: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grid_cells: 10_000,
            grid_budget: 20_000,
            starts_per_chart: 6,
            tie_tolerance: 1e-6,
            dedup_tolerance: 1e-6,
            unbounded_value: -1e12,
            unbounded_radius: 1e6,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolventStatus {
    Unique,
    MultipleTies,
    Empty,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventResult {
    /// Sorted by the tie-break order: nearest to `x` first, then
    /// lexicographically smallest coordinates.
    #[serde(skip)]
    pub minimizers: Vec<Point>,
    /// `f_tau(x)`; `-inf` when unbounded.
    pub value: f64,
    pub status: ResolventStatus,
}

impl ResolventResult {
    /// Minimizer selected by the tie-break policy.
    pub fn chosen(&self) -> Option<&Point> {
        self.minimizers.first()
    }
}

/// Guard for semi-convex objectives: `tau < 1 / (-lambda)`.
pub fn check_step(f: &ObjectiveFn, tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
        });
    }
    if let Some(l) = f.class.lambda() {
        if l < 0.0 && tau * (-l) >= 1.0 {
            return Err(Error::StepTooLarge {
                tau,
                lambda: l,
                limit: -1.0 / l,
            });
        }
    }
    Ok(())
}

/// `inf_z f(z) + d(x,z)^2 / (2 tau)`; `-inf` marks detected unboundedness.
pub fn moreau_yosida(f: &ObjectiveFn, space: &Space, x: &Point, tau: f64, cfg: &SolverConfig) -> Result<f64> {
    Ok(resolvent(f, space, x, tau, cfg)?.value)
}

/// All global minimizers of `z -> f(z) + d(x,z)^2 / (2 tau)` found by the
/// solver.
pub fn resolvent(f: &ObjectiveFn, space: &Space, x: &Point, tau: f64, cfg: &SolverConfig) -> Result<ResolventResult> {
    check_step(f, tau)?;
    space.check_point(x)?;
    let x = space.canonical(x);
    if !f.in_domain(&x) {
        return Err(Error::DomainViolation);
    }
    if let Some(r) = closed_form(f, space, &x, tau) {
        return Ok(r);
    }
    if matches!(space.kind, SpaceKind::Product { .. }) {
        return Err(Error::Unsupported("numerical resolvent on product spaces".into()));
    }
    Solver::new(f, space, &x, tau, cfg).run()
}

fn closed_form(f: &ObjectiveFn, space: &Space, x: &Point, tau: f64) -> Option<ResolventResult> {
    if f.domain != Domain::Whole {
        return None;
    }
    let unique = |z: Point, value: f64| ResolventResult {
        minimizers: vec![z],
        value,
        status: ResolventStatus::Unique,
    };
    match &f.kind {
        ObjectiveKind::HalfSquaredDistance { target } => {
            let dd = space.d(x, target);
            let z = space.geo(x, target, tau / (1.0 + tau));
            Some(unique(z, dd * dd / (2.0 * (1.0 + tau))))
        }
        ObjectiveKind::Distance { target } => {
            let dd = space.d(x, target);
            if dd <= tau {
                Some(unique(target.clone(), dd * dd / (2.0 * tau)))
            } else {
                Some(unique(space.geo(x, target, tau / dd), dd - tau / 2.0))
            }
        }
        ObjectiveKind::DistanceToBall { center, radius } => {
            let dd = space.d(x, center);
            if dd <= *radius {
                return Some(unique(x.clone(), 0.0));
            }
            let t = tau.min(dd - radius);
            Some(unique(
                space.geo(x, center, t / dd),
                dd - radius - t + t * t / (2.0 * tau),
            ))
        }
        ObjectiveKind::Constant(c) => Some(unique(x.clone(), *c)),
        _ => None,
    }
}

type ChartMap<'a> = Box<dyn Fn(&[f64]) -> Point + 'a>;

/// Box of parameters mapped into the space.
struct Chart<'a> {
    lo: Vec<f64>,
    hi: Vec<f64>,
    map: ChartMap<'a>,
}

impl Chart<'_> {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn clamp(&self, c: &mut [f64]) {
        for i in 0..c.len() {
            c[i] = c[i].clamp(self.lo[i], self.hi[i]);
        }
    }
}

struct Candidate {
    p: Point,
    value: f64,
    /// `x` itself or a special point of the objective.
    special: bool,
}

struct Solver<'a> {
    f: &'a ObjectiveFn,
    space: &'a Space,
    x: &'a Point,
    tau: f64,
    cfg: &'a SolverConfig,
    fx: f64,
}

impl<'a> Solver<'a> {
    fn new(f: &'a ObjectiveFn, space: &'a Space, x: &'a Point, tau: f64, cfg: &'a SolverConfig) -> Self {
        let fx = f.eval(space, x);
        Solver {
            f,
            space,
            x,
            tau,
            cfg,
            fx,
        }
    }

    fn phi(&self, p: &Point) -> f64 {
        let v = self.f.eval(self.space, p);
        let dd = self.space.d(self.x, p);
        v + dd * dd / (2.0 * self.tau)
    }

    fn run(&self) -> Result<ResolventResult> {
        if !self.fx.is_finite() {
            return Err(Error::NonConvergence { best: self.fx });
        }
        let radius = match self.search_radius() {
            Some(r) => r,
            None => {
                return Ok(ResolventResult {
                    minimizers: Vec::new(),
                    value: f64::NEG_INFINITY,
                    status: ResolventStatus::Unbounded,
                })
            }
        };
        if radius <= 0.0 {
            return Ok(ResolventResult {
                minimizers: vec![self.x.clone()],
                value: self.fx,
                status: ResolventStatus::Unique,
            });
        }

        let mut cands = vec![Candidate {
            p: self.x.clone(),
            value: self.fx,
            special: true,
        }];
        for p in self.f.special_points(self.space) {
            let p = self.space.canonical(&p);
            if self.space.d(self.x, &p) <= radius {
                let value = self.phi(&p);
                cands.push(Candidate {
                    p,
                    value,
                    special: true,
                });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        for chart in self.charts(radius) {
            self.search_chart(&chart, &mut rng, &mut cands);
        }
        let best_val = cands.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        if !best_val.is_finite() {
            return Err(Error::NonConvergence { best: best_val });
        }
        if best_val < self.cfg.unbounded_value {
            return Ok(ResolventResult {
                minimizers: Vec::new(),
                value: f64::NEG_INFINITY,
                status: ResolventStatus::Unbounded,
            });
        }
        let mut result = self.select(cands);
        if self.radius_is_heuristic() {
            // a minimizer on the artificial search boundary means the
            // infimum was not attained within the budget
            let edge = result
                .minimizers
                .iter()
                .any(|z| self.space.d(self.x, z) >= radius * (1.0 - 1e-9));
            if edge {
                result.minimizers.clear();
                result.status = ResolventStatus::Empty;
            }
        }
        Ok(result)
    }

    fn radius_is_heuristic(&self) -> bool {
        self.f.lower_bound.is_none() && self.f.domain == Domain::Whole && !self.probe_rays().is_empty()
    }

    /// Radius containing every minimizer; `None` when the objective is
    /// detected to be unbounded below along a probe ray.
    fn search_radius(&self) -> Option<f64> {
        if let Some(lb) = self.f.lower_bound {
            // f(z) + d^2/(2 tau) <= f(x) forces d <= sqrt(2 tau (f(x) - lb))
            let r = (2.0 * self.tau * (self.fx - lb).max(0.0)).sqrt();
            return Some(r * (1.0 + 1e-9) + if r > 0.0 { 1e-12 } else { 0.0 });
        }
        if let Domain::Interval { lo, hi } = self.f.domain {
            let z = self.x.coords()[0];
            return Some((z - lo).abs().max((hi - z).abs()));
        }
        let rays = self.probe_rays();
        if rays.is_empty() {
            return Some(self.compact_extent());
        }
        let max_exp = if matches!(self.space.kind, SpaceKind::Hyperbolic) {
            8
        } else {
            (self.cfg.unbounded_radius.log2().ceil() as i32).max(1)
        };
        let mut reach = 1.0f64;
        for ray in &rays {
            let mut prev = f64::INFINITY;
            let mut decreasing_run = 0;
            for j in 0..=max_exp {
                let r = 2f64.powi(j);
                let p = ray(r);
                if !self.f.in_domain(&p) {
                    break;
                }
                let v = self.phi(&p);
                if v < self.cfg.unbounded_value {
                    return None;
                }
                if v <= self.fx {
                    reach = reach.max(r);
                }
                decreasing_run = if v < prev { decreasing_run + 1 } else { 0 };
                prev = v;
            }
            if decreasing_run > max_exp as usize / 2 && prev < self.fx {
                return None;
            }
        }
        Some((2.0 * reach).min(self.cfg.unbounded_radius))
    }

    fn compact_extent(&self) -> f64 {
        match &self.space.kind {
            SpaceKind::Tree { tree } => tree.total_length(),
            SpaceKind::Spider(s) => 2.0 * s.legs.iter().cloned().fold(0.0, f64::max),
            _ => self.cfg.unbounded_radius,
        }
    }

    fn probe_rays(&self) -> Vec<Box<dyn Fn(f64) -> Point + '_>> {
        let mut out: Vec<Box<dyn Fn(f64) -> Point + '_>> = Vec::new();
        match (&self.space.kind, self.x) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(v)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ 0x9e37);
                let mut dirs = Vec::new();
                for i in 0..*dim {
                    for sgn in [1.0, -1.0] {
                        let mut u = vec![0.0; *dim];
                        u[i] = sgn;
                        dirs.push(u);
                    }
                }
                if *dim > 1 {
                    for _ in 0..8 {
                        let u: Vec<f64> = (0..*dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                        let n = u.iter().map(|a| a * a).sum::<f64>().sqrt();
                        if n > 1e-3 {
                            dirs.push(u.iter().map(|a| a / n).collect());
                        }
                    }
                }
                for u in dirs {
                    let v = v.clone();
                    out.push(Box::new(move |r| {
                        Point::Euclidean(v.iter().zip(&u).map(|(a, b)| a + r * b).collect())
                    }));
                }
            }
            (SpaceKind::Hyperbolic, Point::Hyperbolic(h)) => {
                for j in 0..12 {
                    let th = j as f64 * std::f64::consts::PI / 6.0;
                    let u = hyperbolic::tangent_from_coords(h, [th.cos(), th.sin()]);
                    let h = *h;
                    out.push(Box::new(move |r| Point::Hyperbolic(hyperbolic::exp(&h, &u, r))));
                }
            }
            (SpaceKind::Spider(s), _) => {
                for leg in 0..s.k() {
                    if s.legs[leg].is_infinite() {
                        out.push(Box::new(move |r| Point::Spider { leg, r }));
                    }
                }
            }
            (SpaceKind::Book(b), Point::Book { a, .. }) => {
                let a0 = *a;
                for sheet in 0..b.k {
                    for j in 0..=6 {
                        let th = j as f64 * std::f64::consts::PI / 6.0;
                        out.push(Box::new(move |r| Point::Book {
                            sheet,
                            a: a0 + r * th.cos(),
                            b: (r * th.sin()).max(0.0),
                        }));
                    }
                }
            }
            _ => {}
        }
        out
    }

    fn charts(&self, radius: f64) -> Vec<Chart<'a>> {
        let tol = self.space.tolerance;
        let mut out = Vec::new();
        match (&self.space.kind, self.x) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(v)) => {
                let mut lo: Vec<f64> = v.iter().map(|c| c - radius).collect();
                let mut hi: Vec<f64> = v.iter().map(|c| c + radius).collect();
                if let Domain::Interval { lo: a, hi: b } = self.f.domain {
                    lo[0] = lo[0].max(a);
                    hi[0] = hi[0].min(b);
                }
                let _ = dim;
                out.push(Chart {
                    lo,
                    hi,
                    map: Box::new(|c: &[f64]| Point::Euclidean(c.to_vec())),
                });
            }
            (SpaceKind::Hyperbolic, Point::Hyperbolic(h)) => {
                let r = radius.min(50.0);
                let h = *h;
                let [e1, e2] = hyperbolic::tangent_basis(&h);
                out.push(Chart {
                    lo: vec![-r, -r],
                    hi: vec![r, r],
                    map: Box::new(move |c: &[f64]| {
                        let t = c[0].hypot(c[1]);
                        if t == 0.0 {
                            return Point::Hyperbolic(h);
                        }
                        let u = [
                            (c[0] * e1[0] + c[1] * e2[0]) / t,
                            (c[0] * e1[1] + c[1] * e2[1]) / t,
                            (c[0] * e1[2] + c[1] * e2[2]) / t,
                        ];
                        Point::Hyperbolic(hyperbolic::exp(&h, &u, t))
                    }),
                });
            }
            (SpaceKind::Tree { tree }, Point::Tree { edge, offset }) => {
                for e in 0..tree.edges().len() {
                    for (a, b) in tree.ball_on_edge((*edge, *offset), radius, e, tol) {
                        out.push(Chart {
                            lo: vec![a],
                            hi: vec![b],
                            map: Box::new(move |c: &[f64]| Point::Tree { edge: e, offset: c[0] }),
                        });
                    }
                }
            }
            (SpaceKind::Spider(s), Point::Spider { leg, r }) => {
                for l in 0..s.k() {
                    if let Some((a, b)) = s.ball_on_leg((*leg, *r), radius, l) {
                        out.push(Chart {
                            lo: vec![a],
                            hi: vec![b],
                            map: Box::new(move |c: &[f64]| Point::Spider { leg: l, r: c[0] }),
                        });
                    }
                }
            }
            (SpaceKind::Book(bk), Point::Book { sheet, a, b }) => {
                let (s0, a0, b0) = (*sheet, *a, *b);
                for s in 0..bk.k {
                    let top = if s == s0 { b0 + radius } else { radius - b0 };
                    if top <= 0.0 {
                        continue;
                    }
                    out.push(Chart {
                        lo: vec![a0 - radius, 0.0],
                        hi: vec![a0 + radius, top],
                        map: Box::new(move |c: &[f64]| Point::Book {
                            sheet: s,
                            a: c[0],
                            b: c[1],
                        }),
                    });
                }
                out.push(Chart {
                    lo: vec![a0 - radius],
                    hi: vec![a0 + radius],
                    map: Box::new(|c: &[f64]| Point::Book {
                        sheet: 0,
                        a: c[0],
                        b: 0.0,
                    }),
                });
            }
            _ => {}
        }
        out
    }

    fn eval_chart(&self, chart: &Chart, c: &[f64]) -> f64 {
        let mut c = c.to_vec();
        chart.clamp(&mut c);
        self.phi(&(chart.map)(&c))
    }

    fn search_chart(&self, chart: &Chart, rng: &mut ChaCha8Rng, out: &mut Vec<Candidate>) {
        let n = chart.dim();
        if chart.lo.iter().zip(&chart.hi).any(|(a, b)| !(b >= a)) {
            return;
        }
        let starts: Vec<Vec<f64>> = if n == 1 {
            self.grid_1d(chart)
        } else {
            self.grid_nd(chart, rng)
        };
        let mut pushes = Vec::new();
        for s in starts {
            let c = if n == 1 {
                self.refine_1d(chart, s[0])
            } else {
                let c = nelder_mead(|c| self.eval_chart(chart, c), &s, chart);
                polish(|c| self.eval_chart(chart, c), c, chart)
            };
            let mut c = c;
            chart.clamp(&mut c);
            let p = self.space.canonical(&(chart.map)(&c));
            let value = self.phi(&p);
            pushes.push(Candidate {
                p,
                value,
                special: false,
            });
        }
        out.extend(pushes);
    }

    /// Grid local minima (best first), as starting abscissae.
    fn grid_1d(&self, chart: &Chart) -> Vec<Vec<f64>> {
        let (a, b) = (chart.lo[0], chart.hi[0]);
        let cells = if b > a { self.cfg.grid_cells } else { 0 };
        let zs: Vec<f64> = (0..=cells)
            .map(|i| {
                if i == cells {
                    b
                } else {
                    a + (b - a) * i as f64 / cells.max(1) as f64
                }
            })
            .collect();
        let vals: Vec<f64> = zs.iter().map(|&z| self.eval_chart(chart, &[z])).collect();
        let mut minima: Vec<usize> = (0..zs.len())
            .filter(|&i| (i == 0 || vals[i] <= vals[i - 1]) && (i + 1 == zs.len() || vals[i] <= vals[i + 1]))
            .collect();
        minima.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        let mut picked: Vec<usize> = Vec::new();
        for i in minima {
            if picked.iter().all(|&j| i.abs_diff(j) > 2) {
                picked.push(i);
            }
            if picked.len() >= self.cfg.starts_per_chart {
                break;
            }
        }
        picked.into_iter().map(|i| vec![zs[i]]).collect()
    }

    /// Golden-section search on the two cells around `z`, then a secant
    /// polish on the numerical derivative.
    fn refine_1d(&self, chart: &Chart, z: f64) -> Vec<f64> {
        let (lo, hi) = (chart.lo[0], chart.hi[0]);
        let h = (hi - lo) / self.cfg.grid_cells.max(1) as f64;
        let phi = |t: f64| self.eval_chart(chart, &[t]);
        let (mut a, mut b) = ((z - h).max(lo), (z + h).min(hi));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (phi(c), phi(d));
        for _ in 0..80 {
            if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = phi(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = phi(d);
            }
        }
        let mut best = [(z, phi(z)), (a, phi(a)), (b, phi(b)), (c, fc), (d, fd)]
            .into_iter()
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("nonempty");
        let polished = polish(|c| phi(c[0]), vec![best.0], chart);
        let pv = phi(polished[0]);
        if pv <= best.1 {
            best = (polished[0], pv);
        }
        vec![best.0]
    }

    fn grid_nd(&self, chart: &Chart, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let n = chart.dim();
        let per_axis = (self.cfg.grid_budget as f64).powf(1.0 / n as f64).floor() as usize;
        let mut pts: Vec<(Vec<f64>, f64)> = Vec::new();
        if n <= 3 && per_axis >= 3 {
            let k = per_axis;
            let total = k.pow(n as u32);
            let mut vals = vec![0.0; total];
            let coord = |idx: usize| -> Vec<f64> {
                let mut c = vec![0.0; n];
                let mut r = idx;
                for (i, ci) in c.iter_mut().enumerate() {
                    let j = r % k;
                    r /= k;
                    *ci = chart.lo[i] + (chart.hi[i] - chart.lo[i]) * j as f64 / (k - 1) as f64;
                }
                c
            };
            for (idx, v) in vals.iter_mut().enumerate() {
                *v = self.eval_chart(chart, &coord(idx));
            }
            // local minima over axis neighbors
            for idx in 0..total {
                let mut is_min = true;
                let mut stride = 1;
                for _ in 0..n {
                    let j = (idx / stride) % k;
                    if j > 0 && vals[idx - stride] < vals[idx] {
                        is_min = false;
                    }
                    if j + 1 < k && vals[idx + stride] < vals[idx] {
                        is_min = false;
                    }
                    stride *= k;
                }
                if is_min {
                    pts.push((coord(idx), vals[idx]));
                }
            }
        } else {
            for _ in 0..self.cfg.grid_budget {
                let c: Vec<f64> = (0..n).map(|i| rng.random_range(chart.lo[i]..=chart.hi[i])).collect();
                let v = self.eval_chart(chart, &c);
                pts.push((c, v));
            }
        }
        pts.sort_by(|p, q| p.1.total_cmp(&q.1));
        let cell: f64 = (0..n)
            .map(|i| (chart.hi[i] - chart.lo[i]) / per_axis.max(2) as f64)
            .fold(0.0, f64::max);
        let mut picked: Vec<Vec<f64>> = Vec::new();
        for (c, _) in pts {
            if picked.iter().all(|q| dist(q, &c) > 2.5 * cell) {
                picked.push(c);
            }
            if picked.len() >= self.cfg.starts_per_chart {
                break;
            }
        }
        picked
    }

    /// Clusters candidates, snaps clusters onto special points with an equal
    /// value and applies the tie-break policy.
    fn select(&self, mut cands: Vec<Candidate>) -> ResolventResult {
        cands.retain(|c| c.value.is_finite());
        cands.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut reps: Vec<Candidate> = Vec::new();
        for c in cands {
            match reps
                .iter_mut()
                .find(|r| self.space.d(&r.p, &c.p) <= self.cfg.dedup_tolerance)
            {
                Some(r) => {
                    let noise = 1e-12 * (1.0 + r.value.abs());
                    if c.special && !r.special && c.value <= r.value + noise {
                        r.p = c.p;
                        r.special = true;
                    }
                }
                None => reps.push(c),
            }
        }
        let best = reps[0].value;
        let mut ties: Vec<Candidate> = reps
            .into_iter()
            .filter(|r| r.value <= best + self.cfg.tie_tolerance)
            .collect();
        // the bare point x is only a minimizer if nothing else beats it
        if ties.len() > 1 {
            ties.retain(|r| {
                !(r.special && self.space.same_point(&r.p, self.x)) || r.value <= best + 1e-12 * (1.0 + best.abs())
            });
        }
        ties.sort_by(|a, b| {
            let da = self.space.d(self.x, &a.p);
            let db = self.space.d(self.x, &b.p);
            if (da - db).abs() <= self.cfg.dedup_tolerance {
                a.p.lex_cmp(&b.p)
            } else {
                da.partial_cmp(&db).unwrap_or(Ordering::Equal)
            }
        });
        let status = if ties.len() == 1 {
            ResolventStatus::Unique
        } else {
            ResolventStatus::MultipleTies
        };
        ResolventResult {
            minimizers: ties.into_iter().map(|c| c.p).collect(),
            value: best,
            status,
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Box-clamped Nelder–Mead with adaptive coefficients.
fn nelder_mead(phi: impl Fn(&[f64]) -> f64, start: &[f64], chart: &Chart) -> Vec<f64> {
    let n = start.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let scale: f64 = (0..n).map(|i| chart.hi[i] - chart.lo[i]).fold(0.0, f64::max);
    let step = (scale / 50.0).max(1e-6);
    let clamp = |mut c: Vec<f64>| {
        chart.clamp(&mut c);
        c
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let s0 = clamp(start.to_vec());
    simplex.push((s0.clone(), phi(&s0)));
    for i in 0..n {
        let mut c = s0.clone();
        c[i] += if c[i] + step <= chart.hi[i] { step } else { -step };
        let c = clamp(c);
        let v = phi(&c);
        simplex.push((c, v));
    }
    for _ in 0..(400 * n) {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex[1..]
            .iter()
            .map(|(c, _)| dist(c, &simplex[0].0))
            .fold(0.0, f64::max);
        if size <= 1e-14 * (1.0 + scale) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(c, _)| c[i]).sum::<f64>() / nf)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| clamp((0..n).map(|i| centroid[i] + t * (worst.0[i] - centroid[i])).collect());
        let xr = along(-alpha);
        let fr = phi(&xr);
        if fr < simplex[0].1 {
            let xe = along(-alpha * gamma);
            let fe = phi(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(-alpha * rho);
                let fc = phi(&xc);
                (xc, fc)
            } else {
                let xc = along(rho);
                let fc = phi(&xc);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let c = clamp((0..n).map(|i| best[i] + sigma * (item.0[i] - best[i])).collect());
                    let v = phi(&c);
                    *item = (c, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0).0
}

/// Newton steps on finite-difference derivatives. Value-only searches stop at
/// roughly the square root of machine precision in position; this recovers
/// most of the remaining digits where the objective is smooth. Steps that
/// increase the value are rejected.
fn polish(phi: impl Fn(&[f64]) -> f64, start: Vec<f64>, chart: &Chart) -> Vec<f64> {
    let n = start.len();
    let mut c = start;
    let mut fc = phi(&c);
    for _ in 0..6 {
        let h: Vec<f64> = c.iter().map(|v| 1e-5 * (1.0 + v.abs())).collect();
        let mut g = vec![0.0; n];
        let mut hess = vec![vec![0.0; n]; n];
        let shifted = |i: usize, si: f64, j: usize, sj: f64| {
            let mut d = c.clone();
            d[i] += si;
            d[j] += sj;
            phi(&d)
        };
        for i in 0..n {
            let fp = shifted(i, h[i], i, 0.0);
            let fm = shifted(i, -h[i], i, 0.0);
            g[i] = (fp - fm) / (2.0 * h[i]);
            hess[i][i] = (fp - 2.0 * fc + fm) / (h[i] * h[i]);
            for j in 0..i {
                let v = (shifted(i, h[i], j, h[j]) - shifted(i, h[i], j, -h[j]) - shifted(i, -h[i], j, h[j])
                    + shifted(i, -h[i], j, -h[j]))
                    / (4.0 * h[i] * h[j]);
                hess[i][j] = v;
                hess[j][i] = v;
            }
        }
        let Some(delta) = solve(hess, g.iter().map(|v| -v).collect()) else {
            break;
        };
        let mut next: Vec<f64> = c.iter().zip(&delta).map(|(a, b)| a + b).collect();
        chart.clamp(&mut next);
        let fnext = phi(&next);
        if !(fnext <= fc) {
            break;
        }
        let moved = dist(&next, &c);
        c = next;
        fc = fnext;
        if moved <= 1e-15 * (1.0 + c.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
    }
    c
}

/// Gaussian elimination for a small positive definite system.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if !(a[piv][col].abs() > 1e-300) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    // positive curvature only
    if (0..n).any(|i| !(a[i][i] > 0.0)) {
        return None;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
