//! Space-agnostic metric primitives: comparison angles, angles as limits,
//! the CAT(0) inequality and first variation, diameters.

use crate::error::{Error, Result};
use crate::spaces::{Point, Space};

/// Inequality tolerance used by the angle monotonicity assertion.
pub const INEQUALITY_TOLERANCE: f64 = 1e-7;

/// Sum with Neumaier compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Angle at the vertex of a Euclidean triangle with adjacent sides `a`,
/// `b` and opposite side `c`.
pub fn comparison_angle_from_sides(a: f64, b: f64, c: f64) -> f64 {
    ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
}

/// Euclidean comparison angle at `x` of the triangle `xyz`.
pub fn comparison_angle(space: &Space, x: &Point, y: &Point, z: &Point) -> Result<f64> {
    for p in [x, y, z] {
        space.check_point(p)?;
    }
    let (x, y, z) = (space.canonical(x), space.canonical(y), space.canonical(z));
    let a = space.d(&x, &y);
    let b = space.d(&x, &z);
    if a <= space.tolerance || b <= space.tolerance {
        return Err(Error::Degenerate("comparison angle at a coincident vertex".into()));
    }
    Ok(comparison_angle_from_sides(a, b, space.d(&y, &z)))
}

/// Comparison angles of `gamma_xy(s_j) x gamma_xz(s_j)` along `schedule`.
pub fn comparison_sequence(space: &Space, x: &Point, y: &Point, z: &Point, schedule: &[f64]) -> Vec<f64> {
    schedule
        .iter()
        .map(|&s| {
            let ys = space.geo(x, y, s);
            let zs = space.geo(x, z, s);
            comparison_angle_from_sides(space.d(x, &ys), space.d(x, &zs), space.d(&ys, &zs))
        })
        .collect()
}

/// Default shrinking schedule `2^-j`, `j = 0..=30`.
pub fn default_schedule() -> Vec<f64> {
    (0..=30).map(|j| 0.5f64.powi(j)).collect()
}

/// Resolution of the comparison angle at shrink parameter `s`:
/// [`INEQUALITY_TOLERANCE`] plus coordinate rounding and the space's
/// point tolerance, relative to the shorter shrunk side.
pub fn stage_tolerance(space: &Space, x: &Point, y: &Point, z: &Point, s: f64, angle: f64) -> f64 {
    let scale = [x, y, z]
        .iter()
        .flat_map(|p| p.coords())
        .fold(1.0f64, |m, c| m.max(c.abs()));
    let side = s * space.d(x, y).min(space.d(x, z));
    let blur = 64.0 * f64::EPSILON * scale + 2.0 * space.tolerance;
    INEQUALITY_TOLERANCE + blur / (side * angle.sin().max(1e-12))
}

/// Angle at `x` between the geodesics toward `y` and `z`.
///
/// The value is the closed-form direction angle of the model. The
/// comparison angles along `schedule` are evaluated as well and must be
/// non-increasing; an increase beyond [`stage_tolerance`] means the
/// geometry routines disagree and is reported as an error.
pub fn upper_angle(space: &Space, x: &Point, y: &Point, z: &Point, schedule: &[f64]) -> Result<f64> {
    for p in [x, y, z] {
        space.check_point(p)?;
    }
    let (x, y, z) = (space.canonical(x), space.canonical(y), space.canonical(z));
    if space.same_point(&x, &y) || space.same_point(&x, &z) {
        return Err(Error::Degenerate("upper angle at a coincident vertex".into()));
    }
    if schedule.windows(2).any(|w| !(w[1] < w[0])) || schedule.iter().any(|s| !(*s > 0.0 && *s <= 1.0)) {
        return Err(Error::InvalidPoint("schedule must decrease within (0, 1]".into()));
    }
    let seq = comparison_sequence(space, &x, &y, &z, schedule);
    for (j, w) in seq.windows(2).enumerate() {
        let noise = stage_tolerance(space, &x, &y, &z, schedule[j + 1], w[1]);
        if w[1] > w[0] + noise {
            return Err(Error::NonMonotoneAngle {
                stage: j + 1,
                previous: w[0],
                current: w[1],
            });
        }
    }
    let (dy, _) = space.log_direction(&x, &y)?;
    let (dz, _) = space.log_direction(&x, &z)?;
    space.direction_angle(&dy, &dz)
}

/// `(1-s) d^2(x,y) + s d^2(x,z) - (1-s) s d^2(y,z) - d^2(x, gamma_yz(s))`,
/// which is non-negative in a CAT(0) space.
pub fn cat0_inequality_residual(space: &Space, x: &Point, y: &Point, z: &Point, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange { name: "s", value: s });
    }
    for p in [x, y, z] {
        space.check_point(p)?;
    }
    let (x, y, z) = (space.canonical(x), space.canonical(y), space.canonical(z));
    Ok(cat0_residual_unchecked(space, &x, &y, &z, s))
}

pub(crate) fn cat0_residual_unchecked(space: &Space, x: &Point, y: &Point, z: &Point, s: f64) -> f64 {
    let dxy = space.d(x, y);
    let dxz = space.d(x, z);
    let dyz = space.d(y, z);
    let m = space.geo(y, z, s);
    let dxm = space.d(x, &m);
    (1.0 - s) * dxy * dxy + s * dxz * dxz - (1.0 - s) * s * dyz * dyz - dxm * dxm
}

/// Difference between the difference quotient
/// `(d^2(gamma_xy(s), z) - d^2(x, z)) / s` and its limit
/// `-2 d(x,y) d(x,z) cos angle[yxz]`.
pub fn first_variation_residual(space: &Space, x: &Point, y: &Point, z: &Point, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::OutOfRange { name: "s", value: s });
    }
    let (dy, a) = space.log_direction(x, y)?;
    let (dz, b) = space.log_direction(x, z)?;
    let angle = space.direction_angle(&dy, &dz)?;
    let (x, y, z) = (space.canonical(x), space.canonical(y), space.canonical(z));
    let moved = space.geo(&x, &y, s);
    let q = (space.d(&moved, &z).powi(2) - b * b) / s;
    Ok(q + 2.0 * a * b * angle.cos())
}

/// Largest pairwise distance; 0 for an empty or singleton list.
pub fn diameter(space: &Space, points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(space.d(p, q));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn e(v: &[f64]) -> Point {
        Point::Euclidean(v.to_vec())
    }

    #[test]
    fn comparison_angles() {
        let s = Space::euclidean(2).unwrap();
        let a = comparison_angle(&s, &e(&[0.0, 0.0]), &e(&[1.0, 0.0]), &e(&[0.0, 1.0])).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-15);
        assert!((comparison_angle_from_sides(1.0, 1.0, 1.0) - FRAC_PI_3).abs() < 1e-15);
        let sp = Space::spider(3, 1.0).unwrap();
        let a = comparison_angle(
            &sp,
            &Point::Spider { leg: 0, r: 0.0 },
            &Point::Spider { leg: 0, r: 1.0 },
            &Point::Spider { leg: 1, r: 1.0 },
        )
        .unwrap();
        assert_eq!(a, PI);
        assert!(comparison_angle(&s, &e(&[0.0, 0.0]), &e(&[0.0, 0.0]), &e(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn upper_angle_closed_form() {
        let s = Space::euclidean(2).unwrap();
        let a = upper_angle(
            &s,
            &e(&[0.0, 0.0]),
            &e(&[1.0, 0.0]),
            &e(&[1.0, 1.0]),
            &default_schedule(),
        )
        .unwrap();
        assert!((a - FRAC_PI_4).abs() < 1e-15);
        let a = upper_angle(
            &s,
            &e(&[0.0, 0.0]),
            &e(&[1.0, 1.0]),
            &e(&[1.0, 1.0]),
            &default_schedule(),
        )
        .unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn spider_residual_by_direct_evaluation() {
        let s = Space::spider(3, 1.0).unwrap();
        let tips: Vec<Point> = (0..3).map(|leg| Point::Spider { leg, r: 1.0 }).collect();
        let r = cat0_inequality_residual(&s, &tips[0], &tips[1], &tips[2], 0.5).unwrap();
        // independent evaluation: all tip distances 2, midpoint of y,z is the center
        let expect = 0.5 * 4.0 + 0.5 * 4.0 - 0.25 * 4.0 - 1.0;
        assert!((r - expect).abs() < 1e-15);
        assert_eq!(
            cat0_inequality_residual(&s, &tips[0], &tips[1], &tips[2], 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn compensated_sum_is_exact_on_repeats() {
        let v = compensated_sum(std::iter::repeat_n(0.1, 10));
        assert_eq!(v, 1.0);
    }
}
