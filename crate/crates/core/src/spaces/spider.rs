//! k-spider: `k` segments glued at a common center.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiderSpace {
    pub legs: Vec<f64>,
}

impl SpiderSpace {
    pub fn new(legs: Vec<f64>) -> Result<Self> {
        if legs.len() < 2 {
            return Err(Error::InvalidSpace(format!(
                "spider needs k >= 2 legs, got {}",
                legs.len()
            )));
        }
        if let Some(bad) = legs.iter().find(|l| !(**l > 0.0)) {
            return Err(Error::InvalidSpace(format!("spider leg length {bad} must be positive")));
        }
        Ok(SpiderSpace { legs })
    }

    pub fn uniform(k: usize, length: f64) -> Result<Self> {
        Self::new(vec![length; k])
    }

    pub fn k(&self) -> usize {
        self.legs.len()
    }

    pub fn total_length(&self) -> f64 {
        self.legs.iter().sum()
    }

    pub(crate) fn check(&self, leg: usize, r: f64, tol: f64) -> Result<()> {
        let len = *self
            .legs
            .get(leg)
            .ok_or_else(|| Error::InvalidPoint(format!("leg {leg} does not exist")))?;
        if !(r >= -tol && r <= len + tol) {
            return Err(Error::InvalidPoint(format!(
                "radius {r} outside [0, {len}] on leg {leg}"
            )));
        }
        Ok(())
    }

    pub(crate) fn canonical(&self, leg: usize, r: f64, tol: f64) -> (usize, f64) {
        if r <= tol {
            (0, 0.0)
        } else {
            (leg, r.min(self.legs[leg]))
        }
    }

    pub(crate) fn dist(p: (usize, f64), q: (usize, f64)) -> f64 {
        if p.0 == q.0 {
            (p.1 - q.1).abs()
        } else {
            p.1 + q.1
        }
    }

    pub(crate) fn geodesic(&self, p: (usize, f64), q: (usize, f64), s: f64, tol: f64) -> (usize, f64) {
        if s <= 0.0 {
            return p;
        }
        if s >= 1.0 {
            return q;
        }
        if p.0 == q.0 {
            return self.canonical(p.0, (1.0 - s) * p.1 + s * q.1, tol);
        }
        let walked = s * (p.1 + q.1);
        if walked <= p.1 {
            self.canonical(p.0, p.1 - walked, tol)
        } else {
            self.canonical(q.0, walked - p.1, tol)
        }
    }

    /// Initial direction `(leg, outward)` from p toward q.
    pub(crate) fn initial_direction(p: (usize, f64), q: (usize, f64), tol: f64) -> Option<(usize, bool)> {
        if Self::dist(p, q) <= tol {
            return None;
        }
        if p.1 <= tol {
            return Some((q.0, true));
        }
        if p.0 == q.0 {
            Some((p.0, q.1 > p.1))
        } else {
            Some((p.0, false))
        }
    }

    pub(crate) fn directions_at(&self, p: (usize, f64), tol: f64) -> Vec<(usize, bool)> {
        if p.1 <= tol {
            (0..self.k()).map(|l| (l, true)).collect()
        } else if p.1 >= self.legs[p.0] - tol {
            vec![(p.0, false)]
        } else {
            vec![(p.0, true), (p.0, false)]
        }
    }

    /// Leg offsets within distance `r` of `p`, one interval per leg.
    pub(crate) fn ball_on_leg(&self, p: (usize, f64), r: f64, leg: usize) -> Option<(f64, f64)> {
        let len = self.legs[leg];
        if p.0 == leg || p.1 == 0.0 {
            let lo = (p.1 - r).max(0.0);
            let lo = if p.0 == leg { lo } else { 0.0 };
            let hi = if p.0 == leg { p.1 + r } else { r - p.1 };
            if hi < lo {
                return None;
            }
            return Some((lo, hi.min(len)));
        }
        if r >= p.1 {
            Some((0.0, (r - p.1).min(len)))
        } else {
            None
        }
    }
}
