//! Four-point sub-embedding test.
//!
//! A quadrilateral `wxyz` with sides `wx, xy, yz, zw` and diagonals `wy, xz`
//! sub-embeds in the plane when some planar quadrilateral has the same four
//! sides and diagonals at least as long. We hinge the triangles `w x y` and
//! `w z y` on opposite sides of a planar diagonal of length `delta` and sweep
//! `delta` upward from `wy`; the opposite-side placement maximizes the other
//! diagonal for each `delta`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of grid cells in the diagonal sweep.
pub const SWEEP_CELLS: usize = 10_000;
/// Refinement steps around the best grid cell.
pub const REFINE_STEPS: usize = 60;
/// Relative tolerance on the diagonal comparison.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubEmbedding {
    pub pass: bool,
    /// Planar `|w y|` achieving the best `|x z|`.
    pub delta: f64,
    /// Best planar `|x z|` found.
    pub best_xz: f64,
    /// Required `|x z|`.
    pub target_xz: f64,
}

/// Six distances `d(w,x), d(x,y), d(y,z), d(z,w), d(w,y), d(x,z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub wx: f64,
    pub xy: f64,
    pub yz: f64,
    pub zw: f64,
    pub wy: f64,
    pub xz: f64,
}

fn triangle_ok(a: f64, b: f64, c: f64, tol: f64) -> bool {
    a <= b + c + tol && b <= a + c + tol && c <= a + b + tol
}

/// Largest `|x z|` when the diagonal `w y` has planar length `delta`.
fn hinge(q: &Quad, delta: f64) -> f64 {
    if delta <= 0.0 {
        return q.wx + q.zw;
    }
    let xc = (q.wx * q.wx - q.xy * q.xy + delta * delta) / (2.0 * delta);
    let xh = (q.wx * q.wx - xc * xc).max(0.0).sqrt();
    let zc = (q.zw * q.zw - q.yz * q.yz + delta * delta) / (2.0 * delta);
    let zh = (q.zw * q.zw - zc * zc).max(0.0).sqrt();
    (xc - zc).hypot(xh + zh)
}

pub fn four_point_subembed(q: Quad) -> Result<SubEmbedding> {
    let vals = [q.wx, q.xy, q.yz, q.zw, q.wy, q.xz];
    if vals.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InconsistentMetric(
            "distances must be finite and non-negative".into(),
        ));
    }
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(*v));
    let tol = RELATIVE_TOLERANCE * scale;
    if !triangle_ok(q.wx, q.xy, q.wy, tol) || !triangle_ok(q.zw, q.yz, q.wy, tol) {
        return Err(Error::InconsistentMetric("triangle inequality fails on a face".into()));
    }
    let lo = q.wy;
    let hi = (q.wx + q.xy).min(q.zw + q.yz).max(lo);
    let result = |delta: f64, best: f64| SubEmbedding {
        pass: best >= q.xz - tol,
        delta,
        best_xz: best,
        target_xz: q.xz,
    };

    let h_lo = hinge(&q, lo);
    if h_lo >= q.xz - tol || hi <= lo {
        return Ok(result(lo, h_lo));
    }
    let step = (hi - lo) / SWEEP_CELLS as f64;
    let mut best = (lo, h_lo);
    for i in 1..=SWEEP_CELLS {
        let delta = if i == SWEEP_CELLS { hi } else { lo + i as f64 * step };
        let h = hinge(&q, delta);
        if h >= q.xz - tol {
            return Ok(result(delta, h));
        }
        if h > best.1 {
            best = (delta, h);
        }
    }
    // golden-section refinement on the bracketing cells
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut hc, mut hd) = (hinge(&q, c), hinge(&q, d));
    for _ in 0..REFINE_STEPS {
        if hc > hd {
            b = d;
            d = c;
            hd = hc;
            c = b - g * (b - a);
            hc = hinge(&q, c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + g * (b - a);
            hd = hinge(&q, d);
        }
    }
    for (delta, h) in [(c, hc), (d, hd)] {
        if h > best.1 {
            best = (delta, h);
        }
    }
    Ok(result(best.0, best.1))
}

/// Convenience wrapper taking the six distances from points of a space.
pub fn quad_from_points(
    space: &crate::spaces::Space,
    w: &crate::spaces::Point,
    x: &crate::spaces::Point,
    y: &crate::spaces::Point,
    z: &crate::spaces::Point,
) -> Quad {
    Quad {
        wx: space.d(w, x),
        xy: space.d(x, y),
        yz: space.d(y, z),
        zw: space.d(z, w),
        wy: space.d(w, y),
        xz: space.d(x, z),
    }
}
