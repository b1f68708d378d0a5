//! Hausdorff measures of metric neighborhoods.
//!
//! One-dimensional measures on trees and spiders are unions of intervals per
//! edge. Areas on books (and in the plane) are unions of disks, computed
//! exactly from the boundary arcs with Green's theorem.

use std::f64::consts::PI;

use super::{Point, Space, SpaceKind};
use crate::error::{Error, Result};

/// Total length of a union of closed intervals.
pub(crate) fn interval_union_length(mut iv: Vec<(f64, f64)>) -> f64 {
    iv.retain(|(a, b)| b > a);
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            Some((lo, hi)) if a <= hi => cur = Some((lo, hi.max(b))),
            Some((lo, hi)) => {
                total += hi - lo;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((lo, hi)) = cur {
        total += hi - lo;
    }
    total
}

/// Area of the union of disks `(cx, cy, r)`, optionally intersected with the
/// upper half-plane `y >= 0`.
///
/// The boundary of the region consists of uncovered circle arcs plus pieces
/// of the x-axis; the latter contribute nothing to `(x dy - y dx) / 2`, so
/// only arcs are integrated.
pub fn disk_union_area(disks: &[(f64, f64, f64)], upper_half: bool) -> f64 {
    let mut ds: Vec<(f64, f64, f64)> = disks
        .iter()
        .copied()
        .filter(|&(_, cy, r)| r > 0.0 && (!upper_half || cy + r > 0.0))
        .collect();
    ds.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1)));
    // drop disks contained in another (including duplicates)
    let mut kept: Vec<(f64, f64, f64)> = Vec::with_capacity(ds.len());
    for d in ds {
        let inside = kept
            .iter()
            .any(|k| (d.0 - k.0).hypot(d.1 - k.1) + d.2 <= k.2 * (1.0 + 1e-14));
        if !inside {
            kept.push(d);
        }
    }
    let n = kept.len();
    let mut area = 0.0;
    for i in 0..n {
        let (cx, cy, r) = kept[i];
        let mut cuts = vec![0.0, 2.0 * PI];
        for (j, &(ox, oy, or)) in kept.iter().enumerate() {
            if i == j {
                continue;
            }
            let dx = ox - cx;
            let dy = oy - cy;
            let d = dx.hypot(dy);
            if d >= r + or || d <= (r - or).abs() || d == 0.0 {
                continue;
            }
            let base = dy.atan2(dx);
            let half = ((r * r + d * d - or * or) / (2.0 * r * d)).clamp(-1.0, 1.0).acos();
            cuts.push((base - half).rem_euclid(2.0 * PI));
            cuts.push((base + half).rem_euclid(2.0 * PI));
        }
        if upper_half && cy.abs() < r {
            let s = (-cy / r).asin();
            cuts.push(s.rem_euclid(2.0 * PI));
            cuts.push((PI - s).rem_euclid(2.0 * PI));
        }
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let (t1, t2) = (w[0], w[1]);
            if t2 - t1 <= 0.0 {
                continue;
            }
            let tm = 0.5 * (t1 + t2);
            let (mx, my) = (cx + r * tm.cos(), cy + r * tm.sin());
            if upper_half && my < 0.0 {
                continue;
            }
            let covered = kept
                .iter()
                .enumerate()
                .any(|(j, &(ox, oy, or))| j != i && (mx - ox).hypot(my - oy) < or);
            if covered {
                continue;
            }
            area += 0.5 * (r * r * (t2 - t1) + cx * r * (t2.sin() - t1.sin()) - cy * r * (t2.cos() - t1.cos()));
        }
    }
    area
}

impl Space {
    /// Hausdorff measure of dimension `dim` of the closed `radius`
    /// neighborhood of `points`.
    ///
    /// Supported: trees and spiders with `dim = 1`, books and the plane with
    /// `dim = 2`, the line with `dim = 1`.
    pub fn hausdorff_measure_neighborhood(&self, points: &[Point], radius: f64, dim: usize) -> Result<f64> {
        if !(radius > 0.0) {
            return Err(Error::OutOfRange {
                name: "radius",
                value: radius,
            });
        }
        for p in points {
            self.check_point(p)?;
        }
        let points: Vec<Point> = points.iter().map(|p| self.canonical(p)).collect();
        let tol = self.tolerance;
        match (&self.kind, dim) {
            (SpaceKind::Tree { tree }, 1) => {
                let mut total = 0.0;
                for e in 0..tree.edges().len() {
                    let mut iv = Vec::new();
                    for p in &points {
                        if let Point::Tree { edge, offset } = p {
                            iv.extend(tree.ball_on_edge((*edge, *offset), radius, e, tol));
                        }
                    }
                    total += interval_union_length(iv);
                }
                Ok(total)
            }
            (SpaceKind::Spider(s), 1) => {
                let mut total = 0.0;
                for leg in 0..s.k() {
                    let iv: Vec<(f64, f64)> = points
                        .iter()
                        .filter_map(|p| match p {
                            Point::Spider { leg: l, r } => s.ball_on_leg((*l, *r), radius, leg),
                            _ => None,
                        })
                        .collect();
                    total += interval_union_length(iv);
                }
                Ok(total)
            }
            (SpaceKind::Book(b), 2) => {
                let mut total = 0.0;
                for sheet in 0..b.k {
                    let disks: Vec<(f64, f64, f64)> = points
                        .iter()
                        .filter_map(|p| match p {
                            Point::Book { sheet: s, a, b } => {
                                let cy = if *s == sheet || *b == 0.0 { *b } else { -*b };
                                Some((*a, cy, radius))
                            }
                            _ => None,
                        })
                        .collect();
                    total += disk_union_area(&disks, true);
                }
                Ok(total)
            }
            (SpaceKind::Euclidean { dim: 1 }, 1) => Ok(interval_union_length(
                points
                    .iter()
                    .filter_map(|p| match p {
                        Point::Euclidean(v) => Some((v[0] - radius, v[0] + radius)),
                        _ => None,
                    })
                    .collect(),
            )),
            (SpaceKind::Euclidean { dim: 2 }, 2) => Ok(disk_union_area(
                &points
                    .iter()
                    .filter_map(|p| match p {
                        Point::Euclidean(v) => Some((v[0], v[1], radius)),
                        _ => None,
                    })
                    .collect::<Vec<_>>(),
                false,
            )),
            _ => Err(Error::Unsupported(format!(
                "{}-dimensional Hausdorff measure on {}",
                dim,
                self.name()
            ))),
        }
    }
}
