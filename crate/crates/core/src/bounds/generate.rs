//! Example and random self-contracted curves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Mode};
use crate::error::{Error, Result};
use crate::flow::{discrete_gradient_curve, geodesic_interpolation, ObjectiveFn, SolverConfig};
use crate::spaces::{Point, Space, SpaceKind};

/// Jumps between the tips of a `k`-spider with unit legs; length `2(k-1)`,
/// diameter 2.
pub fn spider_jump_curve(k: usize) -> Result<Curve> {
    let space = Space::spider(k, 1.0)?;
    let pts = (0..k).map(|leg| Point::Spider { leg, r: 1.0 }).collect();
    Curve::from_points(space, Mode::Discrete, pts)
}

/// Jumps between the points `(a, b) = (0, 1)` of each sheet of a `k`-sheet
/// book; length `2(k-1)`.
pub fn book_spine_jump_curve(k: usize) -> Result<Curve> {
    let space = Space::book(k)?;
    let pts = (0..k).map(|sheet| Point::Book { sheet, a: 0.0, b: 1.0 }).collect();
    Curve::from_points(space, Mode::Discrete, pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenMode {
    /// Interpolated proximal runs of random distance-type objectives.
    Gradient,
    /// Discrete curves grown point by point, rejecting any point that breaks
    /// self-contraction.
    Rejection,
}

/// Proposals tried per step before [`GenMode::Rejection`] gives up and
/// returns the curve built so far.
pub const REJECTION_BUDGET: usize = 200;

/// Random self-contracted curve with up to `n` samples.
pub fn random_self_contracted(space: &Space, n: usize, seed: u64, mode: GenMode) -> Result<Curve> {
    if n == 0 {
        return Err(Error::Empty("sample count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        GenMode::Gradient => {
            if matches!(space.kind, SpaceKind::Product { .. }) {
                return Err(Error::Unsupported("gradient generation on product spaces".into()));
            }
            let target = space.random_point(&mut rng, 2.0);
            let f = match rng.random_range(0..3) {
                0 => ObjectiveFn::half_squared_distance(target),
                1 => ObjectiveFn::distance(target),
                _ => ObjectiveFn::distance_to_ball(target, rng.random_range(0.1..1.0)),
            };
            let x0 = space.random_point(&mut rng, 3.0);
            let taus: Vec<f64> = (1..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let run = discrete_gradient_curve(&f, space, &x0, &taus, &SolverConfig::default())?;
            geodesic_interpolation(space, &run)
        }
        GenMode::Rejection => {
            let mut pts = vec![space.random_point(&mut rng, 3.0)];
            'grow: while pts.len() < n {
                let last = pts.last().expect("nonempty");
                let step = if pts.len() >= 2 {
                    space.d(&pts[pts.len() - 2], last).max(1e-3)
                } else {
                    1.0
                };
                for _ in 0..REJECTION_BUDGET {
                    let p = if rng.random::<f64>() < 0.5 {
                        space.random_point_near(&mut rng, last, step)
                    } else {
                        space.random_point(&mut rng, 3.0)
                    };
                    if extends_self_contracted(space, &pts, &p) {
                        pts.push(p);
                        continue 'grow;
                    }
                }
                break;
            }
            Curve::from_points(space.clone(), Mode::Discrete, pts)
        }
    }
}

/// Appending `p` keeps the sequence self-contracted iff its distances to the
/// earlier points are non-increasing along the sequence.
pub fn extends_self_contracted(space: &Space, pts: &[Point], p: &Point) -> bool {
    let mut prev = f64::INFINITY;
    for q in pts {
        let d = space.d(q, p);
        if d > prev {
            return false;
        }
        prev = d;
    }
    true
}
