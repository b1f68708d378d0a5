//! Open book: `k` closed half-planes `{(a, b) : b >= 0}` glued along the
//! spine `b = 0`.
//!
//! Two points on different sheets are joined by unfolding the second sheet
//! into the lower half-plane of the first, so the distance is
//! `sqrt((a - a')^2 + (b + b')^2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BookSpace {
    pub k: usize,
}

/// `(sheet, a, b)`.
pub(crate) type B = (usize, f64, f64);

impl BookSpace {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidSpace(format!("book needs k >= 2 sheets, got {k}")));
        }
        Ok(BookSpace { k })
    }

    pub(crate) fn check(&self, p: B, tol: f64) -> Result<()> {
        if p.0 >= self.k {
            return Err(Error::InvalidPoint(format!("sheet {} does not exist", p.0)));
        }
        if !p.1.is_finite() || !(p.2 >= -tol) || !p.2.is_finite() {
            return Err(Error::InvalidPoint(format!("bad sheet coordinates ({}, {})", p.1, p.2)));
        }
        Ok(())
    }

    pub(crate) fn canonical(p: B, tol: f64) -> B {
        if p.2 <= tol {
            (0, p.1, 0.0)
        } else {
            p
        }
    }

    fn same_chart(p: B, q: B) -> bool {
        p.0 == q.0 || p.2 == 0.0 || q.2 == 0.0
    }

    /// Planar coordinates of `q` in the chart of `p`'s sheet, with other
    /// sheets unfolded into the lower half-plane.
    pub(crate) fn unfold(p: B, q: B) -> [f64; 2] {
        if Self::same_chart(p, q) {
            [q.1, q.2]
        } else {
            [q.1, -q.2]
        }
    }

    pub(crate) fn dist(p: B, q: B) -> f64 {
        let u = Self::unfold(p, q);
        (u[0] - p.1).hypot(u[1] - p.2)
    }

    pub(crate) fn geodesic(p: B, q: B, s: f64, tol: f64) -> B {
        if s <= 0.0 {
            return p;
        }
        if s >= 1.0 {
            return q;
        }
        let u = Self::unfold(p, q);
        let a = (1.0 - s) * p.1 + s * u[0];
        let b = (1.0 - s) * p.2 + s * u[1];
        // when p is on the spine the chart is q's sheet
        let home = if p.2 == 0.0 { q.0 } else { p.0 };
        if b >= 0.0 {
            Self::canonical((home, a, b), tol)
        } else {
            Self::canonical((q.0, a, -b), tol)
        }
    }

    /// Initial direction `(sheet, unit planar vector)` of the geodesic p -> q.
    pub(crate) fn initial_direction(p: B, q: B, tol: f64) -> Option<(usize, [f64; 2])> {
        let u = Self::unfold(p, q);
        let v = [u[0] - p.1, u[1] - p.2];
        let n = v[0].hypot(v[1]);
        if n <= tol {
            return None;
        }
        let v = [v[0] / n, v[1] / n];
        let sheet = if p.2 == 0.0 { q.0 } else { p.0 };
        Some(Self::canonical_direction(p, sheet, v))
    }

    /// Directions along the spine from a spine point live on sheet 0.
    pub(crate) fn canonical_direction(p: B, sheet: usize, u: [f64; 2]) -> (usize, [f64; 2]) {
        if p.2 == 0.0 && u[1] <= 0.0 {
            (0, [u[0], 0.0f64.max(u[1])])
        } else {
            (sheet, u)
        }
    }

    /// Angle between two directions at `p`.
    pub(crate) fn angle(p: B, d1: (usize, [f64; 2]), d2: (usize, [f64; 2])) -> f64 {
        let (u, v) = (d1.1, d2.1);
        let c = if p.2 == 0.0 && d1.0 != d2.0 && u[1] > 0.0 && v[1] > 0.0 {
            u[0] * v[0] - u[1] * v[1]
        } else {
            u[0] * v[0] + u[1] * v[1]
        };
        c.clamp(-1.0, 1.0).acos()
    }
}
