//! Space specs, coordinate conversion, and the curve file format.
//!
//! Space specs: `euclidean:N`, `hyperbolic`, `spider:K[:LEN]`, `book:K`,
//! `tree:PATH` (edge-list file), `tree:random:EDGES:MAXDEG:SEED`, and
//! `product(A,B)`.
//!
//! Point coordinates: Euclidean vectors; hyperboloid `[x0, x1, x2]` or plane
//! `[x1, x2]`; tree `[edge, offset]`; spider `[leg, r]`; book
//! `[sheet, a, b]`; products concatenate their factors.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Mode, Sample};
use crate::error::{Error, Result};
use crate::spaces::{Point, Space, SpaceKind, TreeSpace};

pub const CURVE_SCHEMA_VERSION: u32 = 1;

pub fn parse_space(spec: &str) -> Result<Space> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let (a, b) = split_top_level(inner).ok_or_else(|| Error::Parse(format!("bad product spec `{spec}`")))?;
        return Ok(Space::product(parse_space(a)?, parse_space(b)?));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::Parse(format!("bad integer `{s}` in `{spec}`")))
    };
    match parts.as_slice() {
        ["euclidean", n] => Space::euclidean(num(n)?),
        ["hyperbolic"] => Ok(Space::hyperbolic()),
        ["spider", k] => Space::spider(num(k)?, 1.0),
        ["spider", k, len] => {
            let len: f64 = len
                .parse()
                .map_err(|_| Error::Parse(format!("bad leg length `{len}`")))?;
            Space::spider(num(k)?, len)
        }
        ["book", k] => Space::book(num(k)?),
        ["tree", "random", e, d, seed] => {
            let mut rng = ChaCha8Rng::seed_from_u64(num(seed)? as u64);
            Ok(Space::tree(TreeSpace::random(num(e)?, num(d)?, &mut rng)?))
        }
        ["tree", rest @ ..] if !rest.is_empty() => {
            let path = rest.join(":");
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Parse(format!("cannot read tree file `{path}`: {e}")))?;
            Ok(Space::tree(TreeSpace::parse(&text)?))
        }
        _ => Err(Error::Parse(format!("unknown space spec `{spec}`"))),
    }
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Comma-separated coordinates.
pub fn parse_coords(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coordinate `{x}`")))
        })
        .collect()
}

fn coord_len(space: &Space) -> usize {
    match &space.kind {
        SpaceKind::Euclidean { dim } => *dim,
        SpaceKind::Hyperbolic | SpaceKind::Book(_) => 3,
        SpaceKind::Tree { .. } | SpaceKind::Spider(_) => 2,
        SpaceKind::Product { left, right } => coord_len(left) + coord_len(right),
    }
}

fn index(x: f64) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x < u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(Error::Parse(format!("`{x}` is not an index")))
    }
}

/// Point of `space` from flat coordinates, validated and canonicalized.
pub fn point_from_coords(space: &Space, c: &[f64]) -> Result<Point> {
    let bad = || {
        Error::Parse(format!(
            "{} coordinates do not describe a point of {}",
            c.len(),
            space.name()
        ))
    };
    let p = match (&space.kind, c) {
        (SpaceKind::Euclidean { dim }, _) if c.len() == *dim => Point::Euclidean(c.to_vec()),
        (SpaceKind::Hyperbolic, [x0, x1, x2]) => Point::Hyperbolic([*x0, *x1, *x2]),
        (SpaceKind::Hyperbolic, [x1, x2]) => Point::hyperbolic_from_plane(*x1, *x2),
        (SpaceKind::Tree { .. }, [e, o]) => Point::Tree {
            edge: index(*e)?,
            offset: *o,
        },
        (SpaceKind::Spider(_), [l, r]) => Point::Spider { leg: index(*l)?, r: *r },
        (SpaceKind::Book(_), [s, a, b]) => Point::Book {
            sheet: index(*s)?,
            a: *a,
            b: *b,
        },
        (SpaceKind::Product { left, right }, _) => {
            let n = coord_len(left);
            if c.len() != n + coord_len(right) {
                return Err(bad());
            }
            Point::Product(
                Box::new(point_from_coords(left, &c[..n])?),
                Box::new(point_from_coords(right, &c[n..])?),
            )
        }
        _ => return Err(bad()),
    };
    space.point(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub t: f64,
    pub p: Vec<f64>,
}

/// On-disk curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub schema_version: u32,
    pub space: Space,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_end: Option<f64>,
    pub samples: Vec<SampleRecord>,
}

impl CurveFile {
    pub fn from_curve(curve: &Curve) -> CurveFile {
        CurveFile {
            schema_version: CURVE_SCHEMA_VERSION,
            space: curve.space.clone(),
            mode: curve.mode,
            domain_end: curve.domain_end,
            samples: curve
                .samples()
                .iter()
                .map(|s| SampleRecord {
                    t: s.t,
                    p: s.p.coords(),
                })
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<Curve> {
        if self.schema_version != CURVE_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        self.space.validate()?;
        let samples = self
            .samples
            .iter()
            .map(|s| {
                Ok(Sample {
                    t: s.t,
                    p: point_from_coords(&self.space, &s.p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Curve::new(self.space.clone(), self.mode, samples, self.domain_end)
    }
}

pub fn curve_to_json(curve: &Curve) -> String {
    serde_json::to_string_pretty(&CurveFile::from_curve(curve)).expect("curve serializes")
}

pub fn curve_from_json(text: &str) -> Result<Curve> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("curve file: {e}")))?;
    file.to_curve()
}

pub fn load_curve(path: &Path) -> Result<Curve> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read `{}`: {e}", path.display())))?;
    curve_from_json(&text)
}
