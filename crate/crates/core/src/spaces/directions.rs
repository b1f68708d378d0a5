//! Spaces of directions and tangent cones.
//!
//! A [`Direction`] is the germ of a geodesic leaving its base point; a
//! [`ConePoint`] is a direction scaled by a radius. Each model has a closed
//! form for angles and for barycenters in its tangent cone.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use serde::Serialize;

use super::book::BookSpace;
use super::spider::SpiderSpace;
use super::{euclid, hyperbolic, Point, Space, SpaceKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirPayload {
    /// Unit vector.
    Euclidean(Vec<f64>),
    /// Unit vector in the tangent-plane frame at the base point.
    Hyperbolic([f64; 2]),
    /// Edge leaving the base point; `forward` runs from the edge's first
    /// endpoint toward its second.
    Tree {
        edge: usize,
        forward: bool,
    },
    Spider {
        leg: usize,
        outward: bool,
    },
    /// Sheet chart plus planar unit vector; at spine points the second
    /// component is non-negative and spine directions use sheet 0.
    Book {
        sheet: usize,
        u: [f64; 2],
    },
    /// Component directions with speed weights `(cos a, sin a)`. A missing
    /// component has weight 0.
    Product {
        left: Option<Box<DirPayload>>,
        right: Option<Box<DirPayload>>,
        weights: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction {
    #[serde(skip)]
    pub base: Point,
    pub payload: DirPayload,
}

/// Point `(direction, radius)` of the tangent cone; radius 0 is the apex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConePoint {
    pub direction: Direction,
    pub radius: f64,
}

impl ConePoint {
    pub fn is_apex(&self) -> bool {
        self.radius == 0.0
    }
}

/// Tangent-cone distance `sqrt(s^2 + t^2 - 2 s t cos(angle))`.
pub fn cone_distance(angle: f64, s: f64, t: f64) -> f64 {
    (s * s + t * t - 2.0 * s * t * angle.cos()).max(0.0).sqrt()
}

fn payload_log(space: &Space, x: &Point, y: &Point) -> Option<DirPayload> {
    let tol = space.tolerance;
    match (&space.kind, x, y) {
        (SpaceKind::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => {
            euclid::normalized(&euclid::sub(b, a)).map(DirPayload::Euclidean)
        }
        (SpaceKind::Hyperbolic, Point::Hyperbolic(a), Point::Hyperbolic(b)) => {
            let u = hyperbolic::log_unit(a, b)?;
            let c = hyperbolic::tangent_coords(a, &u);
            let n = c[0].hypot(c[1]);
            Some(DirPayload::Hyperbolic([c[0] / n, c[1] / n]))
        }
        (SpaceKind::Tree { tree }, Point::Tree { edge: e1, offset: o1 }, Point::Tree { edge: e2, offset: o2 }) => {
            let (edge, forward) = tree.initial_direction((*e1, *o1), (*e2, *o2), tol)?;
            Some(DirPayload::Tree { edge, forward })
        }
        (SpaceKind::Spider(_), Point::Spider { leg: l1, r: r1 }, Point::Spider { leg: l2, r: r2 }) => {
            let (leg, outward) = SpiderSpace::initial_direction((*l1, *r1), (*l2, *r2), tol)?;
            Some(DirPayload::Spider { leg, outward })
        }
        (
            SpaceKind::Book(_),
            Point::Book {
                sheet: s1,
                a: a1,
                b: b1,
            },
            Point::Book {
                sheet: s2,
                a: a2,
                b: b2,
            },
        ) => {
            let (sheet, u) = BookSpace::initial_direction((*s1, *a1, *b1), (*s2, *a2, *b2), tol)?;
            Some(DirPayload::Book { sheet, u })
        }
        (SpaceKind::Product { left, right }, Point::Product(l1, r1), Point::Product(l2, r2)) => {
            let d1 = left.d(l1, l2);
            let d2 = right.d(r1, r2);
            let d = d1.hypot(d2);
            if d <= tol {
                return None;
            }
            let lp = if d1 > left.tolerance {
                payload_log(left, l1, l2).map(Box::new)
            } else {
                None
            };
            let rp = if d2 > right.tolerance {
                payload_log(right, r1, r2).map(Box::new)
            } else {
                None
            };
            let w = [
                if lp.is_some() { d1 / d } else { 0.0 },
                if rp.is_some() { d2 / d } else { 0.0 },
            ];
            let n = w[0].hypot(w[1]);
            Some(DirPayload::Product {
                left: lp,
                right: rp,
                weights: [w[0] / n, w[1] / n],
            })
        }
        _ => None,
    }
}

fn payload_angle(space: &Space, base: &Point, p: &DirPayload, q: &DirPayload) -> f64 {
    let tol = space.tolerance;
    match (&space.kind, base, p, q) {
        (_, _, DirPayload::Euclidean(u), DirPayload::Euclidean(v)) => euclid::vector_angle(u, v),
        (_, _, DirPayload::Hyperbolic(u), DirPayload::Hyperbolic(v)) => euclid::vector_angle(u, v),
        (
            SpaceKind::Tree { tree },
            Point::Tree { edge, offset },
            DirPayload::Tree { edge: e1, forward: f1 },
            DirPayload::Tree { edge: e2, forward: f2 },
        ) => {
            let a = tree.direction_key((*edge, *offset), (*e1, *f1), tol);
            let b = tree.direction_key((*edge, *offset), (*e2, *f2), tol);
            if a == b {
                0.0
            } else {
                PI
            }
        }
        (_, _, DirPayload::Spider { leg: l1, outward: o1 }, DirPayload::Spider { leg: l2, outward: o2 }) => {
            if (l1, o1) == (l2, o2) {
                0.0
            } else {
                PI
            }
        }
        (
            _,
            Point::Book { sheet, a, b },
            DirPayload::Book { sheet: s1, u: u1 },
            DirPayload::Book { sheet: s2, u: u2 },
        ) => BookSpace::angle((*sheet, *a, *b), (*s1, *u1), (*s2, *u2)),
        (
            SpaceKind::Product { left, right },
            Point::Product(bl, br),
            DirPayload::Product {
                left: l1,
                right: r1,
                weights: w1,
            },
            DirPayload::Product {
                left: l2,
                right: r2,
                weights: w2,
            },
        ) => {
            let mut c = 0.0;
            if let (Some(a), Some(b)) = (l1, l2) {
                c += w1[0] * w2[0] * payload_angle(left, bl, a, b).cos();
            }
            if let (Some(a), Some(b)) = (r1, r2) {
                c += w1[1] * w2[1] * payload_angle(right, br, a, b).cos();
            }
            euclid::clamp_cos(c).acos()
        }
        _ => f64::NAN,
    }
}

impl Space {
    /// Initial direction of the geodesic from `x` to `y`, plus `d(x, y)`.
    pub fn log_direction(&self, x: &Point, y: &Point) -> Result<(Direction, f64)> {
        self.check_point(x)?;
        self.check_point(y)?;
        let (x, y) = (self.canonical(x), self.canonical(y));
        let d = self.d(&x, &y);
        if d <= self.tolerance {
            return Err(Error::Degenerate("log of a point at itself".into()));
        }
        let payload = payload_log(self, &x, &y).ok_or_else(|| Error::Degenerate("no initial direction".into()))?;
        Ok((Direction { base: x, payload }, d))
    }

    /// Point at distance `t` along the geodesic leaving `dir.base` in
    /// direction `dir`. On trees the step must stay on the starting edge;
    /// other combinatorial spaces are unsupported.
    pub fn exp_direction(&self, dir: &Direction, t: f64) -> Result<Point> {
        match (&self.kind, &dir.base, &dir.payload) {
            (SpaceKind::Euclidean { .. }, Point::Euclidean(x), DirPayload::Euclidean(u)) => {
                Ok(Point::Euclidean(x.iter().zip(u).map(|(a, b)| a + t * b).collect()))
            }
            (SpaceKind::Hyperbolic, Point::Hyperbolic(x), DirPayload::Hyperbolic(c)) => {
                let u = hyperbolic::tangent_from_coords(x, *c);
                Ok(Point::Hyperbolic(hyperbolic::exp(x, &u, t)))
            }
            (SpaceKind::Tree { tree }, Point::Tree { edge, offset }, DirPayload::Tree { edge: de, forward }) => tree
                .step((*edge, *offset), (*de, *forward), t, self.tolerance)
                .map(|(edge, offset)| Point::Tree { edge, offset })
                .ok_or(Error::OutOfRange { name: "t", value: t }),
            _ => Err(Error::Unsupported(format!("exponential map on {}", self.name()))),
        }
    }

    /// Unchecked direction computation used in inner loops.
    pub(crate) fn log_unchecked(&self, x: &Point, y: &Point) -> Option<(Direction, f64)> {
        let d = self.d(x, y);
        if d <= self.tolerance {
            return None;
        }
        payload_log(self, x, y).map(|payload| {
            (
                Direction {
                    base: x.clone(),
                    payload,
                },
                d,
            )
        })
    }

    /// Angle between two directions at the same base point.
    pub fn direction_angle(&self, d1: &Direction, d2: &Direction) -> Result<f64> {
        if !self.same_point(&d1.base, &d2.base) {
            return Err(Error::BasepointMismatch);
        }
        let a = payload_angle(self, &d1.base, &d1.payload, &d2.payload);
        if a.is_nan() {
            return Err(Error::MismatchedSpace(
                "direction payloads do not match the space".into(),
            ));
        }
        Ok(a)
    }

    pub(crate) fn angle_unchecked(&self, d1: &Direction, d2: &Direction) -> f64 {
        payload_angle(self, &d1.base, &d1.payload, &d2.payload)
    }

    pub fn cone_point_distance(&self, p: &ConePoint, q: &ConePoint) -> f64 {
        if p.radius == 0.0 || q.radius == 0.0 {
            return (p.radius - q.radius).abs();
        }
        cone_distance(self.angle_unchecked(&p.direction, &q.direction), p.radius, q.radius)
    }

    /// Minimizer of `w -> sum_i d_x(w, (g_i, 1))^2` over the tangent cone.
    pub fn cone_barycenter(&self, dirs: &[Direction]) -> Result<ConePoint> {
        let first = dirs.first().ok_or(Error::Empty("direction list"))?;
        if dirs.iter().any(|d| !self.same_point(&d.base, &first.base)) {
            return Err(Error::BasepointMismatch);
        }
        let pts: Vec<(DirPayload, f64)> = dirs.iter().map(|d| (d.payload.clone(), 1.0)).collect();
        let (payload, radius) = barycenter(self, &first.base, &pts);
        Ok(ConePoint {
            direction: Direction {
                base: first.base.clone(),
                payload: payload.unwrap_or_else(|| first.payload.clone()),
            },
            radius,
        })
    }

    /// Center direction of a set of directions with angular diameter at most
    /// pi/2, built from a greedy maximal pi/3-separated subset (taken in input
    /// order) and the cone barycenter of that subset.
    pub fn direction_cover_center(&self, dirs: &[Direction]) -> Result<CoverCenter> {
        let first = dirs.first().ok_or(Error::Empty("direction list"))?;
        if dirs.iter().any(|d| !self.same_point(&d.base, &first.base)) {
            return Err(Error::BasepointMismatch);
        }
        let mut diameter = 0.0f64;
        for (i, a) in dirs.iter().enumerate() {
            for b in &dirs[i + 1..] {
                diameter = diameter.max(self.angle_unchecked(a, b));
            }
        }
        if diameter > FRAC_PI_2 + 1e-9 {
            return Err(Error::DiameterTooLarge { diameter });
        }
        let separated = greedy_separated(self, dirs);
        let subset: Vec<Direction> = separated.iter().map(|&i| dirs[i].clone()).collect();
        let center = self.cone_barycenter(&subset)?.direction;
        let radius = dirs
            .iter()
            .map(|d| self.angle_unchecked(&center, d))
            .fold(0.0, f64::max);
        Ok(CoverCenter {
            direction: center,
            radius,
            m: subset.len(),
            diameter,
        })
    }
}

/// Result of [`Space::direction_cover_center`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverCenter {
    pub direction: Direction,
    /// Largest angle from the center to an input direction.
    pub radius: f64,
    /// Size of the greedy pi/3-separated subset.
    pub m: usize,
    pub diameter: f64,
}

impl CoverCenter {
    /// `arccos(1 / (2 m))`.
    pub fn guaranteed_radius(&self) -> f64 {
        (1.0 / (2.0 * self.m as f64)).acos()
    }
}

/// Indices of a maximal subset with pairwise angles at least pi/3, chosen
/// greedily in input order.
pub fn greedy_separated(space: &Space, dirs: &[Direction]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        if chosen.iter().all(|&j| space.angle_unchecked(d, &dirs[j]) >= FRAC_PI_3) {
            chosen.push(i);
        }
    }
    chosen
}

/// Barycenter of weighted cone points `(payload_i, r_i)`. Returns the
/// direction (None at the apex) and radius.
fn barycenter(space: &Space, base: &Point, pts: &[(DirPayload, f64)]) -> (Option<DirPayload>, f64) {
    let k = pts.len() as f64;
    let tol = space.tolerance;
    match &space.kind {
        SpaceKind::Euclidean { dim } => {
            let mut sum = vec![0.0; *dim];
            for (p, r) in pts {
                if let DirPayload::Euclidean(u) = p {
                    for (s, x) in sum.iter_mut().zip(u) {
                        *s += r * x;
                    }
                }
            }
            let mean = euclid::scale(&sum, 1.0 / k);
            let n = euclid::norm(&mean);
            if n <= 1e-15 {
                (None, 0.0)
            } else {
                (Some(DirPayload::Euclidean(euclid::scale(&mean, 1.0 / n))), n)
            }
        }
        SpaceKind::Hyperbolic => {
            let mut sum = [0.0; 2];
            for (p, r) in pts {
                if let DirPayload::Hyperbolic(u) = p {
                    sum[0] += r * u[0];
                    sum[1] += r * u[1];
                }
            }
            let mean = [sum[0] / k, sum[1] / k];
            let n = mean[0].hypot(mean[1]);
            if n <= 1e-15 {
                (None, 0.0)
            } else {
                (Some(DirPayload::Hyperbolic([mean[0] / n, mean[1] / n])), n)
            }
        }
        SpaceKind::Tree { .. } | SpaceKind::Spider(_) => {
            // Cone over a discrete set: a star of rays. On ray v the
            // objective is sum over same-ray (t - r_i)^2 + other (t + r_i)^2.
            let total: f64 = pts.iter().map(|(_, r)| r).sum();
            let mut best: (Option<DirPayload>, f64) = (None, 0.0);
            for (cand, _) in pts {
                let same: f64 = pts
                    .iter()
                    .filter(|(p, _)| payload_angle(space, base, p, cand) == 0.0)
                    .map(|(_, r)| r)
                    .sum();
                let t = ((2.0 * same - total) / k).max(0.0);
                if t > best.1 {
                    best = (Some(cand.clone()), t);
                }
            }
            best
        }
        SpaceKind::Book(_) => {
            let on_spine = matches!(base, Point::Book { b, .. } if *b == 0.0);
            let planar: Vec<(usize, [f64; 2])> = pts
                .iter()
                .filter_map(|(p, r)| match p {
                    DirPayload::Book { sheet, u } => Some((*sheet, [r * u[0], r * u[1]])),
                    _ => None,
                })
                .collect();
            let a_mean = planar.iter().map(|(_, v)| v[0]).sum::<f64>() / k;
            if !on_spine {
                let b_mean = planar.iter().map(|(_, v)| v[1]).sum::<f64>() / k;
                let n = a_mean.hypot(b_mean);
                let sheet = match base {
                    Point::Book { sheet, .. } => *sheet,
                    _ => 0,
                };
                return if n <= 1e-15 {
                    (None, 0.0)
                } else {
                    (
                        Some(DirPayload::Book {
                            sheet,
                            u: [a_mean / n, b_mean / n],
                        }),
                        n,
                    )
                };
            }
            // At the spine the cone is itself a book: minimize per sheet.
            let sheets = match &space.kind {
                SpaceKind::Book(b) => b.k,
                _ => unreachable!(),
            };
            let objective = |sheet: usize, a: f64, b: f64| -> f64 {
                planar
                    .iter()
                    .map(|(s, v)| {
                        let vb = if *s == sheet || v[1] == 0.0 { v[1] } else { -v[1] };
                        (a - v[0]).powi(2) + (b - vb).powi(2)
                    })
                    .sum()
            };
            let mut best = (0usize, a_mean, 0.0, f64::INFINITY);
            for sheet in 0..sheets {
                let signed: f64 = planar
                    .iter()
                    .map(|(s, v)| if *s == sheet || v[1] == 0.0 { v[1] } else { -v[1] })
                    .sum();
                let b = (signed / k).max(0.0);
                let val = objective(sheet, a_mean, b);
                if val < best.3 - 1e-15 {
                    best = (sheet, a_mean, b, val);
                }
            }
            let (sheet, a, b, _) = best;
            let n = a.hypot(b);
            if n <= 1e-15 {
                (None, 0.0)
            } else {
                let (sheet, u) = BookSpace::canonical_direction((0, 0.0, 0.0), sheet, [a / n, b / n]);
                (Some(DirPayload::Book { sheet, u }), n)
            }
        }
        SpaceKind::Product { left, right } => {
            let (bl, br) = match base {
                Point::Product(l, r) => (l.as_ref(), r.as_ref()),
                _ => return (None, 0.0),
            };
            let mut lp = Vec::new();
            let mut rp = Vec::new();
            let mut lzero = 0usize;
            let mut rzero = 0usize;
            for (p, r) in pts {
                if let DirPayload::Product {
                    left: l,
                    right: rr,
                    weights,
                } = p
                {
                    match l {
                        Some(d) => lp.push((d.as_ref().clone(), r * weights[0])),
                        None => lzero += 1,
                    }
                    match rr {
                        Some(d) => rp.push((d.as_ref().clone(), r * weights[1])),
                        None => rzero += 1,
                    }
                }
            }
            // apex contributions are points at radius 0 in the factor cone;
            // they only change the averaging denominator
            let factor = |sp: &Space, b: &Point, v: &[(DirPayload, f64)], zeros: usize| {
                if v.is_empty() {
                    return (None, 0.0);
                }
                let (d, r) = barycenter(sp, b, v);
                let scale = v.len() as f64 / (v.len() + zeros) as f64;
                (d, r * scale)
            };
            let (dl, sl) = factor(left, bl, &lp, lzero);
            let (dr, sr) = factor(right, br, &rp, rzero);
            let s = sl.hypot(sr);
            if s <= tol * 1e-6 {
                return (None, 0.0);
            }
            let dl = if sl > 0.0 { dl.map(Box::new) } else { None };
            let dr = if sr > 0.0 { dr.map(Box::new) } else { None };
            (
                Some(DirPayload::Product {
                    left: dl,
                    right: dr,
                    weights: [sl / s, sr / s],
                }),
                s,
            )
        }
    }
}
