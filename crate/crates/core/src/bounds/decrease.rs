//! Directional decrease of projected lengths along a self-contracted curve.

use rand::Rng;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::spaces::directions::CoverCenter;
use crate::spaces::{DirPayload, Direction, Point, SpaceKind};

use super::width::{projection_extent, random_unit};

/// Densification levels used for the images of interpolated curves.
pub const IMAGE_LEVELS: usize = 3;

/// Directions from `curve(t)` toward the later image points, skipping points
/// that coincide with it.
pub fn tail_directions(curve: &Curve, t: f64) -> Result<Vec<Direction>> {
    let i = curve.index_of_time(t)?;
    let space = &curve.space;
    let base = &curve.samples()[i].p;
    Ok(curve
        .image_points(i, IMAGE_LEVELS)
        .iter()
        .filter_map(|p| space.log_unchecked(base, p).map(|(d, _)| d))
        .collect())
}

/// Cover center of the tail directions at `curve(t)`; `None` when the tail
/// never leaves `curve(t)`.
pub fn tail_cover_center(curve: &Curve, t: f64) -> Result<Option<CoverCenter>> {
    let dirs = tail_directions(curve, t)?;
    if dirs.is_empty() {
        return Ok(None);
    }
    curve.space.direction_cover_center(&dirs).map(Some)
}

/// Residual `|P(tail at t_end)| - |P(tail at tau)| + c d(curve(tau), curve(t_end))`
/// where `P` projects onto `dir` at its base. Non-positive residuals mean the
/// decrease holds.
pub fn directional_decrease_check(curve: &Curve, tau: f64, t_end: f64, dir: &Direction, c: f64) -> Result<f64> {
    if !(t_end >= tau) {
        return Err(Error::OutOfRange {
            name: "t_end",
            value: t_end,
        });
    }
    let space = &curve.space;
    let i = curve.index_of_time(tau)?;
    let j = curve.index_of_time(t_end)?;
    let extent = |k: usize| -> Result<f64> {
        let (lo, hi) = projection_extent(space, dir, &curve.image_points(k, IMAGE_LEVELS))?;
        Ok(hi - lo)
    };
    let d = space.d(&curve.samples()[i].p, &curve.samples()[j].p);
    Ok(extent(j)? - extent(i)? + c * d)
}

/// Random direction at the base of `dir` whose angle from `dir` is at most
/// `max_angle`. Euclidean and hyperbolic spaces only.
pub fn perturb_direction<R: Rng>(dir: &Direction, max_angle: f64, rng: &mut R) -> Result<Direction> {
    let th = max_angle * rng.random::<f64>();
    let payload = match &dir.payload {
        DirPayload::Euclidean(v) => {
            let n = v.len();
            if n == 1 {
                DirPayload::Euclidean(v.clone())
            } else {
                // unit vector orthogonal to v
                let w = loop {
                    let r = random_unit(rng, n);
                    let dot: f64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
                    let w: Vec<f64> = r.iter().zip(v).map(|(a, b)| a - dot * b).collect();
                    let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
                    if norm > 1e-6 {
                        break w.iter().map(|a| a / norm).collect::<Vec<_>>();
                    }
                };
                DirPayload::Euclidean(v.iter().zip(&w).map(|(a, b)| th.cos() * a + th.sin() * b).collect())
            }
        }
        DirPayload::Hyperbolic([a, b]) => {
            let th = if rng.random::<bool>() { th } else { -th };
            DirPayload::Hyperbolic([th.cos() * a - th.sin() * b, th.sin() * a + th.cos() * b])
        }
        _ => {
            return Err(Error::Unsupported(
                "direction perturbation outside Euclidean and hyperbolic spaces".into(),
            ))
        }
    };
    Ok(Direction {
        base: dir.base.clone(),
        payload,
    })
}

/// One perturbed basepoint test for the curved variant of the decrease.
#[derive(Debug, Clone, PartialEq)]
pub struct BasepointProbe {
    pub basepoint: Point,
    pub direction: Direction,
    pub residual: f64,
}

/// Curved variant: basepoints `x` within `sigma` of `curve(tau)`, roughly
/// opposite to the cover center, with directions near the one pointing back
/// at `curve(tau)`, each checked with decrease factor `eps / 2`.
pub fn perturbed_basepoint_check<R: Rng>(
    curve: &Curve,
    tau: f64,
    t_end: f64,
    center: &Direction,
    eps: f64,
    sigma: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<BasepointProbe>> {
    let space = &curve.space;
    if !matches!(space.kind, SpaceKind::Euclidean { .. } | SpaceKind::Hyperbolic) {
        return Err(Error::Unsupported(format!("perturbed basepoints on {}", space.name())));
    }
    let slack = 2.0 * (eps / 2.0).asin();
    let anti = negate(center);
    let origin = &curve.samples()[curve.index_of_time(tau)?].p;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let away = perturb_direction(&anti, slack, rng)?;
        let r = sigma * (0.05 + 0.95 * rng.random::<f64>());
        let x = space.exp_direction(&away, r)?;
        let (back, _) = space.log_direction(&x, origin)?;
        let gamma = perturb_direction(&back, slack, rng)?;
        let residual = directional_decrease_check(curve, tau, t_end, &gamma, eps / 2.0)?;
        out.push(BasepointProbe {
            basepoint: x,
            direction: gamma,
            residual,
        });
    }
    Ok(out)
}

fn negate(d: &Direction) -> Direction {
    let payload = match &d.payload {
        DirPayload::Euclidean(v) => DirPayload::Euclidean(v.iter().map(|a| -a).collect()),
        DirPayload::Hyperbolic([a, b]) => DirPayload::Hyperbolic([-a, -b]),
        p => p.clone(),
    };
    Direction {
        base: d.base.clone(),
        payload,
    }
}
