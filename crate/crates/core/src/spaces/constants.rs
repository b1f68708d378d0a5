//! Dimension constants for direction covering and directional decrease, and estimators for
//! the total-boundedness, area-ratio and volume-ratio constants on the
//! implemented spaces.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use super::{hyperbolic, Point, Space, SpaceKind};
use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusConstants {
    pub n: usize,
    /// `arccos(1 / (2 * 3^n))`.
    pub theta_general: f64,
    /// Sharper values known in low dimension.
    pub theta_improved: Option<f64>,
    /// `cos(theta_general) / 3`.
    pub eps_n: f64,
    pub m_bound: usize,
    /// `1 / (6 m)` unless a space supplies a sharper value.
    pub eps_bold: f64,
    pub a_ratio: Option<f64>,
    pub b_ratio: Option<f64>,
    pub sigma: Option<f64>,
    /// Measure of the region used for `b_ratio`.
    pub region_measure: Option<f64>,
    /// The region reaches points where geodesics cannot be extended (tree
    /// leaves, spider tips). The volume ratio there assumes the edges are
    /// extended beyond the boundary.
    pub boundary_contact: bool,
}

impl RadiusConstants {
    /// `2 / (a b eps)`, the factor multiplying the diameter in the generic
    /// bound.
    pub fn generic_factor(&self) -> Option<f64> {
        Some(2.0 / (self.a_ratio? * self.b_ratio? * self.eps_bold))
    }
}

/// Covering and decrease constants in dimension `n`.
pub fn radius_constants(n: usize) -> Result<RadiusConstants> {
    if n == 0 {
        return Err(Error::OutOfRange { name: "n", value: 0.0 });
    }
    let m = 3usize.checked_pow(n as u32).ok_or(Error::OutOfRange {
        name: "n",
        value: n as f64,
    })?;
    let theta_general = (1.0 / (2.0 * m as f64)).acos();
    Ok(RadiusConstants {
        n,
        theta_general,
        theta_improved: match n {
            1 => Some(0.0),
            2 => Some(FRAC_PI_4),
            _ => None,
        },
        eps_n: 1.0 / (2.0 * 3f64.powi(n as i32 + 1)),
        m_bound: m,
        eps_bold: 1.0 / (6.0 * m as f64),
        a_ratio: None,
        b_ratio: None,
        sigma: None,
        region_measure: None,
        boundary_contact: false,
    })
}

/// Surface area of the unit sphere `S^{n-1}` in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2),
    }
}

/// Volume of the unit ball in `R^n`.
pub fn ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

/// Area of the cap of angular radius `rho` on `S^{n-1}`.
pub fn cap_area(n: usize, rho: f64) -> f64 {
    let rho = rho.clamp(0.0, PI);
    match n {
        1 => {
            if rho > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        2 => 2.0 * rho,
        _ => {
            let k = (n - 2) as i32;
            sphere_area(n - 1) * quad::integrate(|p: f64| p.sin().powi(k), 0.0, rho, 8, 20)
        }
    }
}

/// Angular radius of the chordal `eps`-ball on the unit sphere.
pub fn chordal_cap_radius(eps: f64) -> f64 {
    2.0 * (eps / 2.0).asin()
}

/// Measure `a_n` of the chordal `eps_n`-cap on `S^{n-1}`.
pub fn a_n(n: usize) -> Result<f64> {
    let c = radius_constants(n)?;
    Ok(cap_area(n, chordal_cap_radius(c.eps_n)))
}

/// Euclidean length-bound constant `A(S^{n-1}) / (a_n eps_n)`.
pub fn c_n(n: usize) -> Result<f64> {
    let c = radius_constants(n)?;
    Ok(sphere_area(n) / (a_n(n)? * c.eps_n))
}

/// Book constant `C` in `L <= C k H^2(Omega) diam`.
pub const BOOK_C: f64 = 54.0 * std::f64::consts::SQRT_2 * PI;

/// A bounded region of a space, used by the constant estimators.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Closed `radius`-neighborhood of a finite point set.
    Neighborhood { points: Vec<Point>, radius: f64 },
    /// Region with a known measure in the space's natural dimension.
    Explicit { measure: f64 },
}

impl Space {
    /// Measure of a region in the space's natural Hausdorff dimension. For
    /// three-dimensional Euclidean and hyperbolic neighborhoods this is an
    /// upper bound, which keeps the volume ratio a valid lower bound.
    pub fn region_measure(&self, region: &Region) -> Result<f64> {
        let (points, radius) = match region {
            Region::Explicit { measure } => {
                return if *measure > 0.0 {
                    Ok(*measure)
                } else {
                    Err(Error::OutOfRange {
                        name: "measure",
                        value: *measure,
                    })
                }
            }
            Region::Neighborhood { points, radius } => (points, *radius),
        };
        if points.is_empty() {
            return Err(Error::Empty("region points"));
        }
        match &self.kind {
            SpaceKind::Tree { .. } | SpaceKind::Spider(_) => self.hausdorff_measure_neighborhood(points, radius, 1),
            SpaceKind::Book(_) => self.hausdorff_measure_neighborhood(points, radius, 2),
            SpaceKind::Euclidean { dim } if *dim <= 2 => self.hausdorff_measure_neighborhood(points, radius, *dim),
            SpaceKind::Euclidean { dim } => {
                let n = *dim;
                let balls = points.len() as f64 * ball_volume(n) * radius.powi(n as i32);
                let mut lo = vec![f64::INFINITY; n];
                let mut hi = vec![f64::NEG_INFINITY; n];
                for p in points {
                    if let Point::Euclidean(v) = p {
                        for i in 0..n {
                            lo[i] = lo[i].min(v[i]);
                            hi[i] = hi[i].max(v[i]);
                        }
                    }
                }
                let bbox: f64 = (0..n).map(|i| hi[i] - lo[i] + 2.0 * radius).product();
                Ok(balls.min(bbox))
            }
            SpaceKind::Hyperbolic => {
                let p0 = &points[0];
                let reach = points.iter().map(|p| self.d(p0, p)).fold(0.0, f64::max);
                let disks = points.len() as f64 * hyperbolic::disk_area(radius);
                Ok(disks.min(hyperbolic::disk_area(reach + radius)))
            }
            SpaceKind::Product { .. } => Err(Error::Unsupported("region measure on product spaces".into())),
        }
    }

    /// Constants `m`, `eps`, `a`, `b`, `sigma` for a region of this space.
    pub fn estimate_condition_constants(&self, region: &Region, sigma: f64) -> Result<RadiusConstants> {
        if !(sigma > 0.0) {
            return Err(Error::OutOfRange {
                name: "sigma",
                value: sigma,
            });
        }
        let measure = self.region_measure(region)?;
        let boundary_contact = self.region_touches_boundary(region);
        match &self.kind {
            SpaceKind::Tree { tree } => Ok(RadiusConstants {
                a_ratio: Some(1.0 / tree.max_degree() as f64),
                b_ratio: Some(sigma.min(1.0) / measure),
                sigma: Some(sigma),
                region_measure: Some(measure),
                boundary_contact,
                ..radius_constants(1)?.with_m(1)
            }),
            SpaceKind::Spider(s) => Ok(RadiusConstants {
                a_ratio: Some(1.0 / s.k().max(2) as f64),
                b_ratio: Some(sigma.min(1.0) / measure),
                sigma: Some(sigma),
                region_measure: Some(measure),
                boundary_contact,
                ..radius_constants(1)?.with_m(1)
            }),
            SpaceKind::Book(b) => {
                let s = (1.0 / (6.0 * std::f64::consts::SQRT_2)).asin();
                let k = b.k as f64;
                let mut c = radius_constants(2)?.with_m(2 * b.k + 2);
                c.eps_bold = 1.0 / (3.0 * std::f64::consts::SQRT_2);
                Ok(RadiusConstants {
                    a_ratio: Some(4.0 / (k * PI) * s),
                    b_ratio: Some(2.0 * s * sigma.min(1.0).powi(2) / measure),
                    sigma: Some(sigma),
                    region_measure: Some(measure),
                    boundary_contact,
                    ..c
                })
            }
            SpaceKind::Euclidean { dim } if *dim <= 3 => {
                let n = *dim;
                let c = radius_constants(n)?;
                let rho = chordal_cap_radius(c.eps_bold);
                let a = cap_area(n, rho) / sphere_area(n);
                let b = a * ball_volume(n) * sigma.powi(n as i32) / measure;
                Ok(RadiusConstants {
                    a_ratio: Some(a),
                    b_ratio: Some(b),
                    sigma: Some(sigma),
                    region_measure: Some(measure),
                    ..c
                })
            }
            SpaceKind::Hyperbolic => {
                let c = radius_constants(2)?;
                let rho = chordal_cap_radius(c.eps_bold);
                let a = cap_area(2, rho) / sphere_area(2);
                let b = a * hyperbolic::disk_area(sigma) / measure;
                Ok(RadiusConstants {
                    a_ratio: Some(a),
                    b_ratio: Some(b),
                    sigma: Some(sigma),
                    region_measure: Some(measure),
                    ..c
                })
            }
            _ => Err(Error::Unsupported(format!("condition constants on {}", self.name()))),
        }
    }

    fn region_touches_boundary(&self, region: &Region) -> bool {
        let Region::Neighborhood { points, radius } = region else {
            return false;
        };
        match &self.kind {
            SpaceKind::Tree { tree } => (0..tree.n_vertices()).filter(|&v| tree.degree(v) == 1).any(|v| {
                let (edge, offset) = tree.vertex_point(v);
                let leaf = Point::Tree { edge, offset };
                points.iter().any(|p| self.d(p, &leaf) <= *radius)
            }),
            SpaceKind::Spider(s) => (0..s.k()).any(|leg| {
                let tip = Point::Spider { leg, r: s.legs[leg] };
                s.legs[leg].is_finite() && points.iter().any(|p| self.d(p, &tip) <= *radius)
            }),
            _ => false,
        }
    }
}

impl RadiusConstants {
    fn with_m(mut self, m: usize) -> Self {
        self.m_bound = m;
        self.eps_bold = 1.0 / (6.0 * m as f64);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((ball_volume(3) - 4.0 / 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cap_area_closed_forms() {
        let rho = 0.3;
        assert!((cap_area(3, rho) - 2.0 * PI * (1.0 - rho.cos())).abs() < 1e-13);
        let exact4 = 4.0 * PI * (rho / 2.0 - (2.0 * rho).sin() / 4.0);
        assert!((cap_area(4, rho) - exact4).abs() < 1e-13);
        assert!((cap_area(3, PI) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn planar_constants() {
        let c = radius_constants(2).unwrap();
        assert!((c.eps_n - 1.0 / 54.0).abs() < 1e-17);
        assert!((c.theta_general - (1.0f64 / 18.0).acos()).abs() < 1e-15);
        assert!((a_n(2).unwrap() - 4.0 * (1.0f64 / 108.0).asin()).abs() < 1e-15);
        assert!((radius_constants(3).unwrap().eps_n - 1.0 / 162.0).abs() < 1e-17);
    }
}
