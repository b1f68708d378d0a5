//! Time-stamped curves in a space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{compensated_sum, diameter};
use crate::spaces::{Point, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// The curve jumps from one sample to the next.
    Discrete,
    /// Consecutive samples are joined by constant-speed geodesics.
    GeodesicInterpolated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub p: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub space: Space,
    pub mode: Mode,
    samples: Vec<Sample>,
    /// End of the time domain; `None` means `+inf`.
    pub domain_end: Option<f64>,
}

impl Curve {
    /// Validates times, points and the domain end, and canonicalizes points.
    pub fn new(space: Space, mode: Mode, samples: Vec<Sample>, domain_end: Option<f64>) -> Result<Curve> {
        if samples.is_empty() {
            return Err(Error::Empty("curve samples"));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidPoint(format!(
                    "sample times must increase strictly (index {})",
                    i + 1
                )));
            }
        }
        if samples.iter().any(|s| !s.t.is_finite()) {
            return Err(Error::InvalidPoint("non-finite sample time".into()));
        }
        let last = samples.last().map(|s| s.t).unwrap_or(0.0);
        if let Some(end) = domain_end {
            if !(end > last) {
                return Err(Error::OutOfRange {
                    name: "domain_end",
                    value: end,
                });
            }
        }
        let samples = samples
            .into_iter()
            .map(|s| {
                Ok(Sample {
                    t: s.t,
                    p: space.point(s.p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Curve {
            space,
            mode,
            samples,
            domain_end,
        })
    }

    /// Samples at times `0, 1, 2, ...`.
    pub fn from_points(space: Space, mode: Mode, points: Vec<Point>) -> Result<Curve> {
        let samples = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| Sample { t: i as f64, p })
            .collect();
        Curve::new(space, mode, samples, None)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.samples.iter().map(|s| s.p.clone()).collect()
    }

    pub fn index_of_time(&self, t: f64) -> Result<usize> {
        self.samples
            .iter()
            .position(|s| s.t == t)
            .ok_or(Error::NotASampleTime(t))
    }

    /// Value at time `t`: the last sample at or before `t` in discrete mode,
    /// the geodesic interpolant otherwise. Times before the first sample
    /// return the first point.
    pub fn point_at(&self, t: f64) -> Point {
        let i = self.samples.partition_point(|s| s.t <= t);
        if i == 0 {
            return self.samples[0].p.clone();
        }
        let a = &self.samples[i - 1];
        if self.mode == Mode::Discrete || i == self.samples.len() || a.t == t {
            return a.p.clone();
        }
        let b = &self.samples[i];
        self.space.geo(&a.p, &b.p, (t - a.t) / (b.t - a.t))
    }

    /// Polygonal length over consecutive samples, summed with compensation.
    pub fn length(&self) -> f64 {
        compensated_sum(self.samples.windows(2).map(|w| self.space.d(&w[0].p, &w[1].p)))
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.space, &self.points())
    }

    /// Points of the tail from sample index `i` on.
    pub fn tail_points(&self, i: usize) -> Vec<Point> {
        self.samples[i..].iter().map(|s| s.p.clone()).collect()
    }

    /// Image points used for projections and neighborhoods: the samples, plus
    /// `levels` rounds of geodesic midpoint insertion for interpolated curves.
    pub fn image_points(&self, from: usize, levels: usize) -> Vec<Point> {
        let base = &self.samples[from..];
        if self.mode == Mode::Discrete || levels == 0 {
            return base.iter().map(|s| s.p.clone()).collect();
        }
        let parts = 1usize << levels;
        let mut out = Vec::with_capacity(base.len() * parts);
        for w in base.windows(2) {
            for j in 0..parts {
                out.push(self.space.geo(&w[0].p, &w[1].p, j as f64 / parts as f64));
            }
        }
        out.push(base.last().expect("nonempty").p.clone());
        out
    }

    /// Joins `other` after `self`. The first sample of `other` must coincide
    /// with the last sample of `self` in both time and position.
    pub fn concat(&self, other: &Curve) -> Result<Curve> {
        let last = self.samples.last().expect("nonempty");
        let first = &other.samples[0];
        if last.t != first.t || !self.space.same_point(&last.p, &first.p) {
            return Err(Error::InvalidPoint("curves do not share an endpoint".into()));
        }
        let mut samples = self.samples.clone();
        samples.extend(other.samples[1..].iter().cloned());
        Curve::new(self.space.clone(), self.mode, samples, other.domain_end)
    }

    /// Inserts the interpolated point at time `t` as an extra sample.
    pub fn with_sample_at(&self, t: f64) -> Result<Curve> {
        if self.samples.iter().any(|s| s.t == t) {
            return Ok(self.clone());
        }
        let p = self.point_at(t);
        let mut samples = self.samples.clone();
        let i = samples.partition_point(|s| s.t < t);
        samples.insert(i, Sample { t, p });
        Curve::new(self.space.clone(), self.mode, samples, self.domain_end)
    }

    /// Curve `t -> self(phi(t))` sampled at `new_times`.
    pub fn reparametrized(&self, new_times: &[f64], phi: impl Fn(f64) -> f64) -> Result<Curve> {
        let samples = new_times
            .iter()
            .map(|&t| Sample {
                t,
                p: self.point_at(phi(t)),
            })
            .collect();
        Curve::new(self.space.clone(), self.mode, samples, None)
    }
}

/// Length of a curve (see [`Curve::length`]).
pub fn curve_length(curve: &Curve) -> f64 {
    curve.length()
}
