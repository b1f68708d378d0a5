//! Concrete geodesic spaces and the dispatch layer every other module uses.
//!
//! A [`Space`] is an immutable descriptor; points are plain values that only
//! make sense together with the space they were created for.

pub mod book;
pub mod constants;
pub mod directions;
pub(crate) mod euclid;
pub(crate) mod hyperbolic;
pub mod measure;
pub mod spider;
pub mod tree;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub use book::BookSpace;
pub use directions::{ConePoint, DirPayload, Direction};
pub use spider::SpiderSpace;
pub use tree::TreeSpace;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    Euclidean { dim: usize },
    Hyperbolic,
    Tree { tree: TreeSpace },
    Spider(SpiderSpace),
    Book(BookSpace),
    Product { left: Box<Space>, right: Box<Space> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Space {
    #[serde(flatten)]
    pub kind: SpaceKind,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Euclidean(Vec<f64>),
    Hyperbolic([f64; 3]),
    Tree { edge: usize, offset: f64 },
    Spider { leg: usize, r: f64 },
    Book { sheet: usize, a: f64, b: f64 },
    Product(Box<Point>, Box<Point>),
}

impl Point {
    /// Flat coordinate list, used for lexicographic tie-breaking and output.
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Euclidean(v) => v.clone(),
            Point::Hyperbolic(x) => x.to_vec(),
            Point::Tree { edge, offset } => vec![*edge as f64, *offset],
            Point::Spider { leg, r } => vec![*leg as f64, *r],
            Point::Book { sheet, a, b } => vec![*sheet as f64, *a, *b],
            Point::Product(l, r) => {
                let mut v = l.coords();
                v.extend(r.coords());
                v
            }
        }
    }

    pub fn hyperbolic_from_plane(x1: f64, x2: f64) -> Point {
        Point::Hyperbolic(hyperbolic::lift(x1, x2))
    }

    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        let (a, b) = (self.coords(), other.coords());
        for (x, y) in a.iter().zip(&b) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

fn mismatch(space: &Space, p: &Point) -> Error {
    Error::MismatchedSpace(format!("{:?} is not a point of {}", p, space.name()))
}

impl Space {
    fn wrap(kind: SpaceKind) -> Space {
        Space {
            kind,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn euclidean(dim: usize) -> Result<Space> {
        if dim == 0 {
            return Err(Error::InvalidSpace("euclidean dimension must be >= 1".into()));
        }
        Ok(Self::wrap(SpaceKind::Euclidean { dim }))
    }

    pub fn hyperbolic() -> Space {
        Self::wrap(SpaceKind::Hyperbolic)
    }

    pub fn tree(tree: TreeSpace) -> Space {
        Self::wrap(SpaceKind::Tree { tree })
    }

    pub fn spider(k: usize, leg_length: f64) -> Result<Space> {
        Ok(Self::wrap(SpaceKind::Spider(SpiderSpace::uniform(k, leg_length)?)))
    }

    pub fn spider_with_legs(legs: Vec<f64>) -> Result<Space> {
        Ok(Self::wrap(SpaceKind::Spider(SpiderSpace::new(legs)?)))
    }

    pub fn book(k: usize) -> Result<Space> {
        Ok(Self::wrap(SpaceKind::Book(BookSpace::new(k)?)))
    }

    pub fn product(left: Space, right: Space) -> Space {
        Self::wrap(SpaceKind::Product {
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Space> {
        if !(tolerance > 0.0) {
            return Err(Error::OutOfRange {
                name: "tolerance",
                value: tolerance,
            });
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    /// Re-checks the descriptor invariants, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        match &self.kind {
            SpaceKind::Euclidean { dim } if *dim == 0 => {
                Err(Error::InvalidSpace("euclidean dimension must be >= 1".into()))
            }
            SpaceKind::Spider(s) => SpiderSpace::new(s.legs.clone()).map(|_| ()),
            SpaceKind::Book(b) => BookSpace::new(b.k).map(|_| ()),
            SpaceKind::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }

    /// Short human-readable name, matching the CLI space syntax.
    pub fn name(&self) -> String {
        match &self.kind {
            SpaceKind::Euclidean { dim } => format!("euclidean:{dim}"),
            SpaceKind::Hyperbolic => "hyperbolic".into(),
            SpaceKind::Tree { tree } => format!("tree[{} edges]", tree.edges().len()),
            SpaceKind::Spider(s) => format!("spider:{}", s.k()),
            SpaceKind::Book(b) => format!("book:{}", b.k),
            SpaceKind::Product { left, right } => format!("product({},{})", left.name(), right.name()),
        }
    }

    /// Short family name used when aggregating reports.
    pub fn family(&self) -> &'static str {
        match &self.kind {
            SpaceKind::Euclidean { .. } => "euclidean",
            SpaceKind::Hyperbolic => "hyperbolic",
            SpaceKind::Tree { .. } => "tree",
            SpaceKind::Spider(_) => "spider",
            SpaceKind::Book(_) => "book",
            SpaceKind::Product { .. } => "product",
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        let tol = self.tolerance;
        match (&self.kind, p) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(v)) => {
                if v.len() != *dim {
                    return Err(Error::InvalidPoint(format!(
                        "expected {dim} coordinates, got {}",
                        v.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidPoint("non-finite coordinate".into()));
                }
                Ok(())
            }
            (SpaceKind::Hyperbolic, Point::Hyperbolic(x)) => {
                if x.iter().all(|c| c.is_finite()) && hyperbolic::on_sheet(x, 1e-6) {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!(
                        "{x:?} is not on the upper hyperboloid sheet"
                    )))
                }
            }
            (SpaceKind::Tree { tree }, Point::Tree { edge, offset }) => tree.check(*edge, *offset, tol),
            (SpaceKind::Spider(s), Point::Spider { leg, r }) => s.check(*leg, *r, tol),
            (SpaceKind::Book(b), Point::Book { sheet, a, b: h }) => b.check((*sheet, *a, *h), tol),
            (SpaceKind::Product { left, right }, Point::Product(l, r)) => {
                left.check_point(l)?;
                right.check_point(r)
            }
            _ => Err(mismatch(self, p)),
        }
    }

    /// Unique representative of a point: centers, spines and tree vertices
    /// get one fixed encoding.
    pub fn canonical(&self, p: &Point) -> Point {
        let tol = self.tolerance;
        match (&self.kind, p) {
            (SpaceKind::Hyperbolic, Point::Hyperbolic(x)) => Point::Hyperbolic(hyperbolic::reproject(x)),
            (SpaceKind::Tree { tree }, Point::Tree { edge, offset }) => {
                let (edge, offset) = tree.canonical(*edge, offset.clamp(0.0, tree.edges()[*edge].length), tol);
                Point::Tree { edge, offset }
            }
            (SpaceKind::Spider(s), Point::Spider { leg, r }) => {
                let (leg, r) = s.canonical(*leg, *r, tol);
                Point::Spider { leg, r }
            }
            (SpaceKind::Book(_), Point::Book { sheet, a, b }) => {
                let (sheet, a, b) = BookSpace::canonical((*sheet, *a, *b), tol);
                Point::Book { sheet, a, b }
            }
            (SpaceKind::Product { left, right }, Point::Product(l, r)) => {
                Point::Product(Box::new(left.canonical(l)), Box::new(right.canonical(r)))
            }
            _ => p.clone(),
        }
    }

    /// Validates and canonicalizes.
    pub fn point(&self, p: Point) -> Result<Point> {
        self.check_point(&p)?;
        Ok(self.canonical(&p))
    }

    /// Distance between two points of this space. Mismatched point variants
    /// give NaN; use [`Space::distance`] for a checked version.
    pub fn d(&self, p: &Point, q: &Point) -> f64 {
        match (&self.kind, p, q) {
            (SpaceKind::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => euclid::dist(a, b),
            (SpaceKind::Hyperbolic, Point::Hyperbolic(a), Point::Hyperbolic(b)) => hyperbolic::dist(a, b),
            (SpaceKind::Tree { tree }, Point::Tree { edge: e1, offset: o1 }, Point::Tree { edge: e2, offset: o2 }) => {
                tree.dist((*e1, *o1), (*e2, *o2), self.tolerance)
            }
            (SpaceKind::Spider(_), Point::Spider { leg: l1, r: r1 }, Point::Spider { leg: l2, r: r2 }) => {
                SpiderSpace::dist((*l1, *r1), (*l2, *r2))
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
            ) => BookSpace::dist((*s1, *a1, *b1), (*s2, *a2, *b2)),
            (SpaceKind::Product { left, right }, Point::Product(l1, r1), Point::Product(l2, r2)) => {
                left.d(l1, l2).hypot(right.d(r1, r2))
            }
            _ => f64::NAN,
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.d(&self.canonical(p), &self.canonical(q)))
    }

    pub fn same_point(&self, p: &Point, q: &Point) -> bool {
        self.d(p, q) <= self.tolerance
    }

    /// Unchecked geodesic evaluation; `s` is clamped to `[0, 1]`.
    pub fn geo(&self, x: &Point, y: &Point, s: f64) -> Point {
        let s = s.clamp(0.0, 1.0);
        let tol = self.tolerance;
        match (&self.kind, x, y) {
            (SpaceKind::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => {
                Point::Euclidean(euclid::lerp(a, b, s))
            }
            (SpaceKind::Hyperbolic, Point::Hyperbolic(a), Point::Hyperbolic(b)) => {
                Point::Hyperbolic(hyperbolic::geodesic(a, b, s))
            }
            (SpaceKind::Tree { tree }, Point::Tree { edge: e1, offset: o1 }, Point::Tree { edge: e2, offset: o2 }) => {
                let (edge, offset) = tree.geodesic((*e1, *o1), (*e2, *o2), s, tol);
                Point::Tree { edge, offset }
            }
            (SpaceKind::Spider(sp), Point::Spider { leg: l1, r: r1 }, Point::Spider { leg: l2, r: r2 }) => {
                let (leg, r) = sp.geodesic((*l1, *r1), (*l2, *r2), s, tol);
                Point::Spider { leg, r }
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
                let (sheet, a, b) = BookSpace::geodesic((*s1, *a1, *b1), (*s2, *a2, *b2), s, tol);
                Point::Book { sheet, a, b }
            }
            (SpaceKind::Product { left, right }, Point::Product(l1, r1), Point::Product(l2, r2)) => {
                Point::Product(Box::new(left.geo(l1, l2, s)), Box::new(right.geo(r1, r2, s)))
            }
            _ => x.clone(),
        }
    }

    /// Constant-speed minimal geodesic from `x` (s = 0) to `y` (s = 1).
    pub fn geodesic_point(&self, x: &Point, y: &Point, s: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange { name: "s", value: s });
        }
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.geo(&self.canonical(x), &self.canonical(y), s))
    }

    /// Dimension of the Hausdorff measure natural to the space.
    pub fn intrinsic_dim(&self) -> usize {
        match &self.kind {
            SpaceKind::Euclidean { dim } => *dim,
            SpaceKind::Hyperbolic | SpaceKind::Book(_) => 2,
            SpaceKind::Tree { .. } | SpaceKind::Spider(_) => 1,
            SpaceKind::Product { left, right } => left.intrinsic_dim() + right.intrinsic_dim(),
        }
    }

    /// Random point, roughly spread over a region of size `scale`.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> Point {
        match &self.kind {
            SpaceKind::Euclidean { dim } => {
                Point::Euclidean((0..*dim).map(|_| rng.random_range(-scale..=scale)).collect())
            }
            SpaceKind::Hyperbolic => {
                let r = scale * rng.random::<f64>();
                let th = rng.random_range(0.0..2.0 * PI);
                Point::Hyperbolic(hyperbolic::lift(r.sinh() * th.cos(), r.sinh() * th.sin()))
            }
            SpaceKind::Tree { tree } => {
                let total = tree.total_length();
                let mut u = rng.random::<f64>() * total;
                let mut pick = (tree.edges().len() - 1, 0.0);
                for (i, e) in tree.edges().iter().enumerate() {
                    if u <= e.length {
                        pick = (i, u);
                        break;
                    }
                    u -= e.length;
                }
                self.canonical(&Point::Tree {
                    edge: pick.0,
                    offset: pick.1.min(tree.edges()[pick.0].length),
                })
            }
            SpaceKind::Spider(s) => {
                let leg = rng.random_range(0..s.k());
                let top = s.legs[leg].min(scale);
                self.canonical(&Point::Spider {
                    leg,
                    r: rng.random::<f64>() * top,
                })
            }
            SpaceKind::Book(b) => {
                let sheet = rng.random_range(0..b.k);
                let a = rng.random_range(-scale..=scale);
                // a share of spine points exercises the glued locus
                let h = if rng.random::<f64>() < 0.1 {
                    0.0
                } else {
                    rng.random::<f64>() * scale
                };
                self.canonical(&Point::Book { sheet, a, b: h })
            }
            SpaceKind::Product { left, right } => Point::Product(
                Box::new(left.random_point(rng, scale)),
                Box::new(right.random_point(rng, scale)),
            ),
        }
    }

    /// Random point within distance `r` of `x`.
    pub fn random_point_near<R: Rng + ?Sized>(&self, rng: &mut R, x: &Point, r: f64) -> Point {
        for _ in 0..16 {
            let y = self.random_point(rng, 1.0 + 2.0 * r);
            let d = self.d(x, &y);
            if d > self.tolerance {
                let t = r * rng.random::<f64>();
                return self.geo(x, &y, (t / d).min(1.0));
            }
        }
        x.clone()
    }

    /// Random unit direction at `x`.
    pub fn random_direction<R: Rng + ?Sized>(&self, rng: &mut R, x: &Point) -> Direction {
        let tol = self.tolerance;
        let payload = match (&self.kind, x) {
            (SpaceKind::Euclidean { dim }, _) => loop {
                let v: Vec<f64> = (0..*dim).map(|_| StandardNormal.sample(rng)).collect();
                if let Some(u) = euclid::normalized(&v) {
                    break DirPayload::Euclidean(u);
                }
            },
            (SpaceKind::Hyperbolic, _) => {
                let th = rng.random_range(0.0..2.0 * PI);
                DirPayload::Hyperbolic([th.cos(), th.sin()])
            }
            (SpaceKind::Tree { tree }, Point::Tree { edge, offset }) => {
                let dirs = tree.directions_at((*edge, *offset), tol);
                let (edge, forward) = dirs[rng.random_range(0..dirs.len())];
                DirPayload::Tree { edge, forward }
            }
            (SpaceKind::Spider(s), Point::Spider { leg, r }) => {
                let dirs = s.directions_at((*leg, *r), tol);
                let (leg, outward) = dirs[rng.random_range(0..dirs.len())];
                DirPayload::Spider { leg, outward }
            }
            (SpaceKind::Book(b), Point::Book { sheet, a, b: h }) => {
                if *h == 0.0 {
                    let th = rng.random_range(0.0..=PI);
                    let s = rng.random_range(0..b.k);
                    let (sheet, u) = BookSpace::canonical_direction((0, *a, 0.0), s, [th.cos(), th.sin()]);
                    DirPayload::Book { sheet, u }
                } else {
                    let th = rng.random_range(0.0..2.0 * PI);
                    DirPayload::Book {
                        sheet: *sheet,
                        u: [th.cos(), th.sin()],
                    }
                }
            }
            (SpaceKind::Product { left, right }, Point::Product(l, r)) => {
                let alpha = rng.random_range(0.0..=PI / 2.0);
                DirPayload::Product {
                    left: Some(Box::new(left.random_direction(rng, l).payload)),
                    right: Some(Box::new(right.random_direction(rng, r).payload)),
                    weights: [alpha.cos(), alpha.sin()],
                }
            }
            _ => panic!("random_direction: point does not belong to {}", self.name()),
        };
        Direction {
            base: x.clone(),
            payload,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_345() {
        let s = Space::euclidean(2).unwrap();
        let d = s
            .distance(&Point::Euclidean(vec![0.0, 0.0]), &Point::Euclidean(vec![3.0, 4.0]))
            .unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn mismatched_points_are_rejected() {
        let s = Space::euclidean(2).unwrap();
        let err = s.distance(&Point::Spider { leg: 0, r: 1.0 }, &Point::Euclidean(vec![0.0, 0.0]));
        assert!(matches!(err, Err(Error::MismatchedSpace(_))));
        let err = s.distance(&Point::Euclidean(vec![0.0]), &Point::Euclidean(vec![0.0, 0.0]));
        assert!(matches!(err, Err(Error::InvalidPoint(_))));
    }

    #[test]
    fn geodesic_parameter_range() {
        let s = Space::euclidean(1).unwrap();
        let x = Point::Euclidean(vec![0.0]);
        assert!(s.geodesic_point(&x, &x, 1.5).is_err());
    }

    #[test]
    fn space_json_round_trip() {
        let s = Space::product(Space::book(3).unwrap(), Space::spider(4, 1.0).unwrap());
        let text = serde_json::to_string(&s).unwrap();
        let back: Space = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
        let t = TreeSpace::parse("edge a b 1\nedge b c 2").unwrap();
        let s = Space::tree(t);
        let back: Space = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
    }
}
