//! Projections onto directions and mean width.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::compensated_sum;
use crate::spaces::{DirPayload, Direction, Point, Space, SpaceKind};

/// `[min, max]` of `s cos angle_x(dir, eta)` over the log coordinates
/// `(eta, s)` of `points` at the base of `dir`. The base itself maps to 0.
pub fn projection_extent(space: &Space, dir: &Direction, points: &[Point]) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::Empty("points"));
    }
    space.check_point(&dir.base)?;
    let base = &space.canonical(&dir.base);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        let v = project(space, base, dir, p)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

fn project(space: &Space, base: &Point, dir: &Direction, p: &Point) -> Result<f64> {
    if let (DirPayload::Euclidean(u), Point::Euclidean(b), Point::Euclidean(q)) = (&dir.payload, base, p) {
        return Ok(u.iter().zip(q.iter().zip(b)).map(|(ui, (qi, bi))| ui * (qi - bi)).sum());
    }
    match space.log_unchecked(base, p) {
        None => Ok(0.0),
        Some((d, s)) => Ok(s * space.angle_unchecked(dir, &d).cos()),
    }
}

/// Something whose mean width can be measured.
#[derive(Debug, Clone, PartialEq)]
pub enum WidthTarget {
    Points(Vec<Point>),
    /// Euclidean ball.
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthMethod {
    /// Exact where available (hulls on the line and plane), Monte Carlo
    /// elsewhere.
    Auto,
    /// Midpoint rule on `2^k` angles in the plane.
    Quadrature(u32),
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthConfig {
    pub n_dirs: usize,
    pub seed: u64,
    pub method: WidthMethod,
    /// Basepoints are drawn within this distance of the set (non-Euclidean
    /// spaces).
    pub basepoint_radius: f64,
}

impl Default for WidthConfig {
    fn default() -> Self {
        WidthConfig {
            n_dirs: 4096,
            seed: 1,
            method: WidthMethod::Auto,
            basepoint_radius: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthReport {
    pub mean_width: f64,
    pub n_directions: usize,
    pub seed: u64,
    /// Monte Carlo standard error; 0 for exact methods.
    pub stderr: f64,
    pub method: &'static str,
}

fn euclid_coords(p: &Point) -> Result<&[f64]> {
    match p {
        Point::Euclidean(v) => Ok(v),
        _ => Err(Error::MismatchedSpace("expected a Euclidean point".into())),
    }
}

/// Width of the projection of the target onto the unit vector `u`.
fn euclidean_width(target: &WidthTarget, u: &[f64]) -> f64 {
    match target {
        WidthTarget::Ball { radius, .. } => 2.0 * radius,
        WidthTarget::Points(ps) => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in ps {
                if let Point::Euclidean(v) = p {
                    let s: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
            }
            hi - lo
        }
    }
}

/// Convex hull of planar points (counter-clockwise, no collinear points).
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn hull_perimeter(points: &[[f64; 2]]) -> f64 {
    let h = convex_hull(points);
    match h.len() {
        0 | 1 => 0.0,
        2 => 2.0 * (h[1][0] - h[0][0]).hypot(h[1][1] - h[0][1]),
        n => compensated_sum((0..n).map(|i| {
            let (a, b) = (h[i], h[(i + 1) % n]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })),
    }
}

/// Mean width: the average projected length over directions (Euclidean
/// spaces) or over basepoint and direction pairs (other spaces).
pub fn mean_width(space: &Space, target: &WidthTarget, cfg: &WidthConfig) -> Result<WidthReport> {
    if cfg.n_dirs == 0 {
        return Err(Error::OutOfRange {
            name: "n_dirs",
            value: 0.0,
        });
    }
    let report = |w: f64, n: usize, se: f64, method: &'static str| WidthReport {
        mean_width: w,
        n_directions: n,
        seed: cfg.seed,
        stderr: se,
        method,
    };
    if let WidthTarget::Points(ps) = target {
        if ps.is_empty() {
            return Err(Error::Empty("points"));
        }
        for p in ps {
            space.check_point(p)?;
        }
    }
    match &space.kind {
        SpaceKind::Euclidean { dim } => {
            let n = *dim;
            match (cfg.method, n, target) {
                (WidthMethod::Auto, 1, _) => Ok(report(euclidean_width(target, &[1.0]), 1, 0.0, "exact")),
                (WidthMethod::Auto, 2, WidthTarget::Ball { radius, .. }) => Ok(report(2.0 * radius, 0, 0.0, "exact")),
                (WidthMethod::Auto, 2, WidthTarget::Points(ps)) => {
                    let pts: Vec<[f64; 2]> = ps
                        .iter()
                        .map(|p| euclid_coords(p).map(|v| [v[0], v[1]]))
                        .collect::<Result<_>>()?;
                    Ok(report(hull_perimeter(&pts) / PI, 0, 0.0, "exact_hull"))
                }
                (WidthMethod::Quadrature(k), 2, _) => {
                    if k > 24 {
                        return Err(Error::OutOfRange {
                            name: "k",
                            value: k as f64,
                        });
                    }
                    let m = 1usize << k;
                    // the width is pi-periodic; midpoint nodes on [0, pi)
                    let w = compensated_sum((0..m).map(|i| {
                        let th = PI * (i as f64 + 0.5) / m as f64;
                        euclidean_width(target, &[th.cos(), th.sin()])
                    })) / m as f64;
                    Ok(report(w, m, 0.0, "quadrature"))
                }
                (WidthMethod::Quadrature(_), _, _) => {
                    Err(Error::Unsupported("angular quadrature needs the plane".into()))
                }
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    let samples: Vec<f64> = (0..cfg.n_dirs)
                        .map(|_| {
                            let u = random_unit(&mut rng, n);
                            euclidean_width(target, &u)
                        })
                        .collect();
                    let (m, se) = mean_stderr(&samples);
                    Ok(report(m, cfg.n_dirs, se, "monte_carlo"))
                }
            }
        }
        _ => {
            let WidthTarget::Points(ps) = target else {
                return Err(Error::Unsupported("balls are only measured in Euclidean space".into()));
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut samples = Vec::with_capacity(cfg.n_dirs);
            for _ in 0..cfg.n_dirs {
                let anchor = &ps[rng.random_range(0..ps.len())];
                let base = space.random_point_near(&mut rng, anchor, cfg.basepoint_radius);
                let dir = space.random_direction(&mut rng, &base);
                let (lo, hi) = projection_extent(space, &dir, ps)?;
                samples.push(hi - lo);
            }
            let (m, se) = mean_stderr(&samples);
            Ok(report(m, cfg.n_dirs, se, "monte_carlo"))
        }
    }
}

pub(crate) fn random_unit<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.iter().map(|a| a / norm).collect();
        }
    }
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1.0);
    (mean, (var / n).sqrt())
}
