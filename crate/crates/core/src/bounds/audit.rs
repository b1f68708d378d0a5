//! Length-versus-diameter audits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::metric::{compensated_sum, diameter};
use crate::spaces::constants::{c_n, radius_constants, RadiusConstants, Region, BOOK_C};
use crate::spaces::{Point, Space, SpaceKind};

use super::decrease::IMAGE_LEVELS;
use super::width::{mean_width, WidthConfig, WidthTarget};

/// Relative slack on `length <= bound`.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub audit: String,
    pub space: String,
    pub n_samples: usize,
    pub length: f64,
    pub diam: f64,
    /// Sum of `d_i / diam` over consecutive samples.
    pub length_over_diam: f64,
    pub width: Option<f64>,
    pub constants: BTreeMap<String, f64>,
    /// `None` when no bound can be claimed.
    pub bound: Option<f64>,
    /// `length / bound`.
    pub ratio: Option<f64>,
    pub pass: bool,
    pub boundary_contact: bool,
    pub note: Option<String>,
}

impl BoundReport {
    fn new(audit: &str, curve: &Curve, diam: f64) -> BoundReport {
        BoundReport {
            audit: audit.into(),
            space: curve.space.name(),
            n_samples: curve.len(),
            length: curve.length(),
            diam,
            length_over_diam: growth(curve, diam),
            width: None,
            constants: BTreeMap::new(),
            bound: None,
            ratio: None,
            pass: false,
            boundary_contact: false,
            note: None,
        }
    }

    fn finish(mut self, bound: f64) -> BoundReport {
        self.bound = Some(bound);
        self.ratio = Some(if bound > 0.0 {
            self.length / bound
        } else if self.length == 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
        self.pass = self.length <= bound * (1.0 + AUDIT_TOLERANCE);
        self
    }

    pub const CSV_HEADER: &'static str =
        "audit,space,n_samples,length,diam,length_over_diam,width,bound,ratio,pass,boundary_contact,constants";

    /// One CSV row matching [`Self::CSV_HEADER`]; constants are `key=value`
    /// pairs joined by `;`.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let constants: Vec<String> = self.constants.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.audit,
            csv_field(&self.space),
            self.n_samples,
            self.length,
            self.diam,
            self.length_over_diam,
            opt(self.width),
            opt(self.bound),
            opt(self.ratio),
            self.pass,
            self.boundary_contact,
            constants.join(";")
        )
    }
}

fn growth(curve: &Curve, diam: f64) -> f64 {
    if diam == 0.0 {
        return 0.0;
    }
    let s = curve.samples();
    compensated_sum(s.windows(2).map(|w| curve.space.d(&w[0].p, &w[1].p) / diam))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn image(curve: &Curve) -> Vec<Point> {
    curve.image_points(0, IMAGE_LEVELS)
}

/// `length <= C_n W` in `R^n`, `n <= max_dim`.
pub fn euclidean_length_bound(curve: &Curve, max_dim: usize, width: &WidthConfig) -> Result<BoundReport> {
    let SpaceKind::Euclidean { dim } = curve.space.kind else {
        return Err(Error::MismatchedSpace(format!(
            "euclidean audit on {}",
            curve.space.name()
        )));
    };
    if dim > max_dim {
        return Err(Error::OutOfRange {
            name: "dim",
            value: dim as f64,
        });
    }
    let w = mean_width(&curve.space, &WidthTarget::Points(image(curve)), width)?;
    let c = c_n(dim)?;
    let mut r = BoundReport::new("euclidean", curve, curve.diameter());
    r.width = Some(w.mean_width);
    r.constants.insert("C_n".into(), c);
    r.constants.insert("n".into(), dim as f64);
    if w.stderr > 0.0 {
        r.constants.insert("width_stderr".into(), w.stderr);
    }
    Ok(r.finish(c * w.mean_width))
}

/// `length <= 6 L H1(Omega) diam` on trees and spiders, with `L` the largest
/// vertex degree and `Omega` the unit neighborhood of the image.
pub fn tree_length_bound(curve: &Curve) -> Result<BoundReport> {
    let lambda = match &curve.space.kind {
        SpaceKind::Tree { tree } => tree.max_degree(),
        SpaceKind::Spider(s) => s.k().max(2),
        _ => return Err(Error::MismatchedSpace(format!("tree audit on {}", curve.space.name()))),
    } as f64;
    let region = Region::Neighborhood {
        points: image(curve),
        radius: 1.0,
    };
    let c = curve.space.estimate_condition_constants(&region, 1.0)?;
    let h1 = c.region_measure.expect("set by the estimator");
    let mut r = BoundReport::new("tree", curve, curve.diameter());
    r.constants.insert("Lambda".into(), lambda);
    r.constants.insert("H1".into(), h1);
    r.boundary_contact = c.boundary_contact;
    let bound = 6.0 * lambda * h1 * r.diam;
    Ok(r.finish(bound))
}

/// `length <= C k H2(Omega) diam` on `k`-sheet books, with `Omega` the unit
/// neighborhood of the image.
pub fn book_length_bound(curve: &Curve) -> Result<BoundReport> {
    let SpaceKind::Book(b) = &curve.space.kind else {
        return Err(Error::MismatchedSpace(format!("book audit on {}", curve.space.name())));
    };
    let k = b.k as f64;
    let h2 = curve.space.hausdorff_measure_neighborhood(&image(curve), 1.0, 2)?;
    let mut r = BoundReport::new("book", curve, curve.diameter());
    r.constants.insert("C".into(), BOOK_C);
    r.constants.insert("k".into(), k);
    r.constants.insert("H2".into(), h2);
    let bound = BOOK_C * k * h2 * r.diam;
    Ok(r.finish(bound))
}

/// `length <= 2 / (a b eps) diam` from precomputed constants on `region`. The
/// `sigma`-neighborhood of the image must lie inside `region`; when that
/// cannot be confirmed no bound is claimed.
pub fn generic_cat0_bound(curve: &Curve, constants: &RadiusConstants, region: &Region) -> Result<BoundReport> {
    let mut r = BoundReport::new("generic", curve, curve.diameter());
    let (Some(a), Some(b), Some(sigma)) = (constants.a_ratio, constants.b_ratio, constants.sigma) else {
        return Err(Error::Unsupported("constants lack a, b or sigma".into()));
    };
    r.constants.insert("a".into(), a);
    r.constants.insert("b".into(), b);
    r.constants.insert("eps".into(), constants.eps_bold);
    r.constants.insert("sigma".into(), sigma);
    r.constants.insert("m".into(), constants.m_bound as f64);
    r.boundary_contact = constants.boundary_contact;
    if !contains_neighborhood(&curve.space, region, &image(curve), sigma) {
        r.note = Some("sigma-neighborhood of the image is not inside the region".into());
        return Ok(r);
    }
    let factor = constants.generic_factor().expect("a and b present");
    let bound = factor * r.diam;
    Ok(r.finish(bound))
}

/// Builds `Omega` as the `sigma`-neighborhood of the image and runs
/// [`generic_cat0_bound`].
pub fn generic_cat0_audit(curve: &Curve, sigma: f64) -> Result<BoundReport> {
    let region = Region::Neighborhood {
        points: image(curve),
        radius: sigma,
    };
    let c = curve.space.estimate_condition_constants(&region, sigma)?;
    generic_cat0_bound(curve, &c, &region)
}

fn contains_neighborhood(space: &Space, region: &Region, image: &[Point], sigma: f64) -> bool {
    match region {
        Region::Explicit { .. } => false,
        Region::Neighborhood { points, radius } => image
            .iter()
            .all(|p| points.iter().any(|c| space.d(c, p) + sigma <= radius * (1.0 + 1e-12))),
    }
}

/// Orthonormal jump curve `e_1, ..., e_k` in `R^k`, with its audit against
/// `C_k diam`. Length `sqrt(2)(k-1)`, diameter `sqrt(2)`.
pub fn unrectifiable_witness(k: usize) -> Result<(Curve, BoundReport)> {
    if k < 2 {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
        });
    }
    let space = Space::euclidean(k)?;
    let pts = (0..k)
        .map(|i| {
            let mut v = vec![0.0; k];
            v[i] = 1.0;
            Point::Euclidean(v)
        })
        .collect();
    let curve = Curve::from_points(space, crate::Mode::Discrete, pts)?;
    let diam = diameter(&curve.space, &curve.points());
    let c = c_n(k)?;
    let mut r = BoundReport::new("orthonormal", &curve, diam);
    r.constants.insert("C_n".into(), c);
    r.constants.insert("n".into(), k as f64);
    r.constants.insert("eps_n".into(), radius_constants(k)?.eps_n);
    let r = r.finish(c * diam);
    Ok((curve, r))
}
