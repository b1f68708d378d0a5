//! Objective functions with declared convexity.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::{Point, Space, SpaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", content = "lambda", rename_all = "snake_case")]
pub enum ConvexityClass {
    QuasiConvex,
    /// `f(gamma(s)) <= (1-s) f(x) + s f(y) - (lambda/2)(1-s) s d(x,y)^2`.
    LambdaConvex(f64),
    Convex,
}

impl ConvexityClass {
    /// Convexity modulus if the class implies one.
    pub fn lambda(&self) -> Option<f64> {
        match self {
            ConvexityClass::QuasiConvex => None,
            ConvexityClass::LambdaConvex(l) => Some(*l),
            ConvexityClass::Convex => Some(0.0),
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self.lambda(), Some(l) if l >= 0.0)
    }
}

/// Where an objective is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    Whole,
    /// Closed interval of the real line.
    Interval {
        lo: f64,
        hi: f64,
    },
}

pub type CustomFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ObjectiveKind {
    /// `d(z, target)^2 / 2`.
    HalfSquaredDistance {
        target: Point,
    },
    /// `d(z, target)`.
    Distance {
        target: Point,
    },
    /// `max(0, d(z, center) - radius)`, the distance to a closed ball.
    DistanceToBall {
        center: Point,
        radius: f64,
    },
    /// `-z^3` on the line.
    NegCube,
    /// Piecewise linear on the line through `knots`, constant outside them.
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
    },
    /// Pointwise maximum.
    MaxOf(Vec<ObjectiveFn>),
    Constant(f64),
    /// Arbitrary evaluator. Its special points (if any) help the solver.
    Custom {
        eval: CustomFn,
        special: Vec<Point>,
    },
}

impl fmt::Debug for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::HalfSquaredDistance { target } => write!(f, "HalfSquaredDistance({target:?})"),
            ObjectiveKind::Distance { target } => write!(f, "Distance({target:?})"),
            ObjectiveKind::DistanceToBall { center, radius } => write!(f, "DistanceToBall({center:?}, {radius})"),
            ObjectiveKind::NegCube => write!(f, "NegCube"),
            ObjectiveKind::PiecewiseLinear { knots } => write!(f, "PiecewiseLinear({knots:?})"),
            ObjectiveKind::MaxOf(v) => write!(f, "MaxOf({v:?})"),
            ObjectiveKind::Constant(c) => write!(f, "Constant({c})"),
            ObjectiveKind::Custom { .. } => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ObjectiveFn {
    pub name: String,
    pub kind: ObjectiveKind,
    pub class: ConvexityClass,
    pub lower_bound: Option<f64>,
    pub domain: Domain,
}

fn line_coord(p: &Point) -> f64 {
    match p {
        Point::Euclidean(v) if v.len() == 1 => v[0],
        _ => f64::NAN,
    }
}

impl ObjectiveFn {
    pub fn half_squared_distance(target: Point) -> Self {
        ObjectiveFn {
            name: "half_sq_dist".into(),
            kind: ObjectiveKind::HalfSquaredDistance { target },
            class: ConvexityClass::LambdaConvex(1.0),
            lower_bound: Some(0.0),
            domain: Domain::Whole,
        }
    }

    pub fn distance(target: Point) -> Self {
        ObjectiveFn {
            name: "dist".into(),
            kind: ObjectiveKind::Distance { target },
            class: ConvexityClass::Convex,
            lower_bound: Some(0.0),
            domain: Domain::Whole,
        }
    }

    pub fn distance_to_ball(center: Point, radius: f64) -> Self {
        ObjectiveFn {
            name: "dist_ball".into(),
            kind: ObjectiveKind::DistanceToBall { center, radius },
            class: ConvexityClass::Convex,
            lower_bound: Some(0.0),
            domain: Domain::Whole,
        }
    }

    /// `-z^3` on the whole line (unbounded below).
    pub fn neg_cube() -> Self {
        ObjectiveFn {
            name: "neg_cube".into(),
            kind: ObjectiveKind::NegCube,
            class: ConvexityClass::QuasiConvex,
            lower_bound: None,
            domain: Domain::Whole,
        }
    }

    /// `-z^3` restricted to `[0, 1]`.
    pub fn neg_cube_unit() -> Self {
        ObjectiveFn {
            name: "neg_cube_unit".into(),
            kind: ObjectiveKind::NegCube,
            class: ConvexityClass::QuasiConvex,
            lower_bound: Some(-1.0),
            domain: Domain::Interval { lo: 0.0, hi: 1.0 },
        }
    }

    /// Piecewise linear function through `knots`, which must be sorted by
    /// abscissa and have values non-increasing then non-decreasing.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Empty("knots"));
        }
        if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidPoint("knot abscissae must increase".into()));
        }
        let mut rising = false;
        for w in knots.windows(2) {
            if w[1].1 > w[0].1 {
                rising = true;
            } else if rising && w[1].1 < w[0].1 {
                return Err(Error::InvalidPoint("knot values must fall then rise".into()));
            }
        }
        let lower = knots.iter().map(|k| k.1).fold(f64::INFINITY, f64::min);
        Ok(ObjectiveFn {
            name: "piecewise".into(),
            kind: ObjectiveKind::PiecewiseLinear { knots },
            class: ConvexityClass::QuasiConvex,
            lower_bound: Some(lower),
            domain: Domain::Whole,
        })
    }

    pub fn max_of(parts: Vec<ObjectiveFn>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Empty("max_of parts"));
        }
        let class = parts
            .iter()
            .fold(ConvexityClass::Convex, |acc, p| match (acc, p.class) {
                (ConvexityClass::QuasiConvex, _) | (_, ConvexityClass::QuasiConvex) => ConvexityClass::QuasiConvex,
                (a, b) => {
                    let l = a.lambda().unwrap_or(0.0).min(b.lambda().unwrap_or(0.0));
                    if l == 0.0 {
                        ConvexityClass::Convex
                    } else {
                        ConvexityClass::LambdaConvex(l)
                    }
                }
            });
        let lower_bound = parts
            .iter()
            .filter_map(|p| p.lower_bound)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        Ok(ObjectiveFn {
            name: "max_of".into(),
            kind: ObjectiveKind::MaxOf(parts),
            class,
            lower_bound,
            domain: Domain::Whole,
        })
    }

    pub fn constant(c: f64) -> Self {
        ObjectiveFn {
            name: "constant".into(),
            kind: ObjectiveKind::Constant(c),
            class: ConvexityClass::Convex,
            lower_bound: Some(c),
            domain: Domain::Whole,
        }
    }

    pub fn custom(name: &str, class: ConvexityClass, eval: CustomFn) -> Self {
        ObjectiveFn {
            name: name.into(),
            kind: ObjectiveKind::Custom {
                eval,
                special: Vec::new(),
            },
            class,
            lower_bound: None,
            domain: Domain::Whole,
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_lower_bound(mut self, lb: Option<f64>) -> Self {
        self.lower_bound = lb;
        self
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn in_domain(&self, p: &Point) -> bool {
        match self.domain {
            Domain::Whole => true,
            Domain::Interval { lo, hi } => {
                let z = line_coord(p);
                z >= lo && z <= hi
            }
        }
    }

    /// Evaluates `f` at `p`. Points outside the domain evaluate to `+inf`.
    pub fn eval(&self, space: &Space, p: &Point) -> f64 {
        if !self.in_domain(p) {
            return f64::INFINITY;
        }
        match &self.kind {
            ObjectiveKind::HalfSquaredDistance { target } => 0.5 * space.d(p, target).powi(2),
            ObjectiveKind::Distance { target } => space.d(p, target),
            ObjectiveKind::DistanceToBall { center, radius } => (space.d(p, center) - radius).max(0.0),
            ObjectiveKind::NegCube => -line_coord(p).powi(3),
            ObjectiveKind::PiecewiseLinear { knots } => piecewise(knots, line_coord(p)),
            ObjectiveKind::MaxOf(parts) => parts.iter().map(|f| f.eval(space, p)).fold(f64::NEG_INFINITY, f64::max),
            ObjectiveKind::Constant(c) => *c,
            ObjectiveKind::Custom { eval, .. } => eval(p),
        }
    }

    /// Checked evaluation.
    pub fn value(&self, space: &Space, p: &Point) -> Result<f64> {
        space.check_point(p)?;
        if !self.in_domain(p) {
            return Err(Error::DomainViolation);
        }
        Ok(self.eval(space, &space.canonical(p)))
    }

    /// Points where the objective is non-smooth or attains its minimum;
    /// candidate minimizers for the resolvent solver.
    pub fn special_points(&self, space: &Space) -> Vec<Point> {
        let mut out = Vec::new();
        match &self.kind {
            ObjectiveKind::HalfSquaredDistance { target } | ObjectiveKind::Distance { target } => {
                out.push(target.clone())
            }
            ObjectiveKind::DistanceToBall { center, .. } => out.push(center.clone()),
            ObjectiveKind::PiecewiseLinear { knots } => out.extend(knots.iter().map(|k| Point::Euclidean(vec![k.0]))),
            ObjectiveKind::MaxOf(parts) => {
                for p in parts {
                    out.extend(p.special_points(space));
                }
            }
            ObjectiveKind::Custom { special, .. } => out.extend(special.iter().cloned()),
            ObjectiveKind::NegCube | ObjectiveKind::Constant(_) => {}
        }
        if let (Domain::Interval { lo, hi }, SpaceKind::Euclidean { dim: 1 }) = (self.domain, &space.kind) {
            out.push(Point::Euclidean(vec![lo]));
            out.push(Point::Euclidean(vec![hi]));
        }
        out.retain(|p| self.in_domain(p));
        out
    }
}

fn piecewise(knots: &[(f64, f64)], z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z <= knots[0].0 {
        return knots[0].1;
    }
    for w in knots.windows(2) {
        if z <= w[1].0 {
            let s = (z - w[0].0) / (w[1].0 - w[0].0);
            return (1.0 - s) * w[0].1 + s * w[1].1;
        }
    }
    knots[knots.len() - 1].1
}

/// Default objective catalog for a space.
pub fn builtin_objectives(space: &Space) -> Vec<ObjectiveFn> {
    let mut out = Vec::new();
    let anchor = default_anchor(space);
    let other = secondary_anchor(space);
    out.push(ObjectiveFn::half_squared_distance(anchor.clone()));
    out.push(ObjectiveFn::distance(anchor.clone()));
    out.push(ObjectiveFn::distance_to_ball(anchor.clone(), 0.5));
    out.push(ObjectiveFn::constant(1.0));
    if let Some(o) = other {
        out.push(
            ObjectiveFn::max_of(vec![ObjectiveFn::distance(anchor), ObjectiveFn::distance(o)])
                .expect("nonempty")
                .with_name("max_dist"),
        );
    }
    if let SpaceKind::Euclidean { dim: 1 } = space.kind {
        out.push(ObjectiveFn::neg_cube());
        out.push(ObjectiveFn::neg_cube_unit());
        out.push(
            ObjectiveFn::piecewise_linear(vec![
                (-2.0, 3.0),
                (-1.0, 1.0),
                (0.0, 0.0),
                (0.5, 0.0),
                (1.0, 2.0),
                (3.0, 2.5),
            ])
            .expect("valid knots"),
        );
    }
    out
}

/// Looks up a catalog entry by name.
pub fn objective_by_name(space: &Space, name: &str) -> Result<ObjectiveFn> {
    builtin_objectives(space)
        .into_iter()
        .find(|o| o.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown objective `{name}` for {}", space.name())))
}

/// Point used as the target of catalog objectives: the origin, the spider
/// tip of leg 0, a point above the book spine, the first tree vertex.
pub fn default_anchor(space: &Space) -> Point {
    match &space.kind {
        SpaceKind::Euclidean { dim } => Point::Euclidean(vec![0.0; *dim]),
        SpaceKind::Hyperbolic => Point::hyperbolic_from_plane(0.0, 0.0),
        SpaceKind::Tree { tree } => {
            let (edge, offset) = tree.vertex_point(0);
            Point::Tree { edge, offset }
        }
        SpaceKind::Spider(s) => Point::Spider {
            leg: 0,
            r: s.legs[0].min(1.0),
        },
        SpaceKind::Book(_) => Point::Book {
            sheet: 0,
            a: 0.0,
            b: 1.0,
        },
        SpaceKind::Product { left, right } => {
            Point::Product(Box::new(default_anchor(left)), Box::new(default_anchor(right)))
        }
    }
}

fn secondary_anchor(space: &Space) -> Option<Point> {
    match &space.kind {
        SpaceKind::Euclidean { dim } => {
            let mut v = vec![0.0; *dim];
            v[0] = 1.0;
            Some(Point::Euclidean(v))
        }
        SpaceKind::Hyperbolic => Some(Point::hyperbolic_from_plane(1.0, 0.5)),
        SpaceKind::Tree { tree } => {
            let last = tree.n_vertices() - 1;
            let (edge, offset) = tree.vertex_point(last);
            Some(Point::Tree { edge, offset })
        }
        SpaceKind::Spider(s) => Some(Point::Spider {
            leg: 1,
            r: s.legs[1].min(1.0),
        }),
        SpaceKind::Book(b) => Some(Point::Book {
            sheet: b.k - 1,
            a: 1.0,
            b: 0.5,
        }),
        SpaceKind::Product { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_contents() {
        let r2 = Space::euclidean(2).unwrap();
        let cat = builtin_objectives(&r2);
        let h = cat.iter().find(|o| o.name == "half_sq_dist").unwrap();
        assert_eq!(h.class, ConvexityClass::LambdaConvex(1.0));
        let r1 = Space::euclidean(1).unwrap();
        let nc = objective_by_name(&r1, "neg_cube").unwrap();
        assert_eq!(nc.class, ConvexityClass::QuasiConvex);
        assert_eq!(nc.lower_bound, None);
        let sp = Space::spider(4, 1.0).unwrap();
        assert!(objective_by_name(&sp, "dist").is_ok());
        assert!(objective_by_name(&sp, "neg_cube").is_err());
    }

    #[test]
    fn piecewise_validation() {
        assert!(ObjectiveFn::piecewise_linear(vec![(0.0, 1.0), (1.0, 0.0), (2.0, 1.0), (3.0, 0.0)]).is_err());
        let f = ObjectiveFn::piecewise_linear(vec![(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let s = Space::euclidean(1).unwrap();
        assert_eq!(f.eval(&s, &Point::Euclidean(vec![0.5])), 0.5);
        assert_eq!(f.eval(&s, &Point::Euclidean(vec![-5.0])), 1.0);
    }

    #[test]
    fn domain_is_enforced() {
        let s = Space::euclidean(1).unwrap();
        let f = ObjectiveFn::neg_cube_unit();
        assert_eq!(f.value(&s, &Point::Euclidean(vec![2.0])), Err(Error::DomainViolation));
        assert_eq!(f.value(&s, &Point::Euclidean(vec![1.0])).unwrap(), -1.0);
    }
}
