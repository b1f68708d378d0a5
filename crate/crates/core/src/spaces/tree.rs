//! Metric trees with weighted edges.
//!
//! A point is `(edge, offset)` with `offset` measured from the edge's first
//! endpoint. Vertex points are canonicalized onto their lowest-numbered
//! incident edge so that equality tests are representation independent.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// Serialized form of a tree: vertex labels plus `[u, v, length]` triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TreeSpec", into = "TreeSpec")]
pub struct TreeSpace {
    labels: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
    max_degree: usize,
    /// All-pairs vertex distances.
    vdist: Vec<Vec<f64>>,
    /// `first_edge[a][b]`: edge leaving `a` on the path to `b`.
    first_edge: Vec<Vec<usize>>,
}

impl TryFrom<TreeSpec> for TreeSpace {
    type Error = Error;
    fn try_from(spec: TreeSpec) -> Result<Self> {
        TreeSpace::new(spec.vertices, spec.edges)
    }
}

impl From<TreeSpace> for TreeSpec {
    fn from(t: TreeSpace) -> Self {
        TreeSpec {
            vertices: t.labels,
            edges: t.edges.iter().map(|e| (e.u, e.v, e.length)).collect(),
        }
    }
}

/// Where a canonical tree point sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Site {
    Vertex(usize),
    Interior { edge: usize, offset: f64 },
}

impl TreeSpace {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSpace("tree has no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidSpace(format!(
                "a tree on {n} vertices needs {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut incident = vec![Vec::new(); n];
        let mut es = Vec::with_capacity(edges.len());
        for (i, &(u, v, length)) in edges.iter().enumerate() {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidSpace(format!("edge {i} has bad endpoints ({u}, {v})")));
            }
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::InvalidSpace(format!("edge {i} has length {length}")));
            }
            incident[u].push(i);
            incident[v].push(i);
            es.push(Edge { u, v, length });
        }
        let max_degree = incident.iter().map(Vec::len).max().unwrap_or(0);

        let mut vdist = vec![vec![f64::INFINITY; n]; n];
        let mut first_edge = vec![vec![usize::MAX; n]; n];
        for src in 0..n {
            vdist[src][src] = 0.0;
            let mut queue = VecDeque::from([src]);
            while let Some(a) = queue.pop_front() {
                for &e in &incident[a] {
                    let b = es[e].other(a);
                    if vdist[src][b].is_infinite() {
                        vdist[src][b] = vdist[src][a] + es[e].length;
                        first_edge[src][b] = if a == src { e } else { first_edge[src][a] };
                        queue.push_back(b);
                    }
                }
            }
            if vdist[src].iter().any(|d| d.is_infinite()) {
                return Err(Error::InvalidSpace("tree is not connected".into()));
            }
        }
        Ok(TreeSpace {
            labels,
            edges: es,
            incident,
            max_degree,
            vdist,
            first_edge,
        })
    }

    /// Builds a tree from unlabeled edges, naming vertices `0..n`.
    pub fn from_edges(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        Self::new((0..n_vertices).map(|i| i.to_string()).collect(), edges)
    }

    /// Parses the line format
    ///
    /// ```text
    /// # comment
    /// vertex a
    /// vertex b
    /// edge a b 1.5
    /// ```
    ///
    /// Vertices named in `edge` lines are declared implicitly.
    pub fn parse(text: &str) -> Result<Self> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut intern = |name: &str, labels: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["vertex", name] => {
                    intern(name, &mut labels);
                }
                ["edge", a, b, len] => {
                    let length: f64 = len
                        .parse()
                        .map_err(|_| Error::Parse(format!("line {}: bad edge length `{len}`", lineno + 1)))?;
                    let u = intern(a, &mut labels);
                    let v = intern(b, &mut labels);
                    edges.push((u, v, length));
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `vertex NAME` or `edge A B LENGTH`, got `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(labels, edges)
    }

    /// Random tree: each new vertex attaches to a uniformly chosen vertex of
    /// degree below `max_degree`.
    pub fn random<R: rand::Rng>(n_edges: usize, max_degree: usize, rng: &mut R) -> Result<Self> {
        if max_degree < 2 && n_edges > 1 {
            return Err(Error::InvalidSpace("max_degree must be at least 2".into()));
        }
        let mut degree = vec![0usize];
        let mut edges = Vec::with_capacity(n_edges);
        for new in 1..=n_edges {
            let open: Vec<usize> = (0..new).filter(|&v| degree[v] < max_degree).collect();
            let parent = open[rng.random_range(0..open.len())];
            degree[parent] += 1;
            degree.push(1);
            edges.push((parent, new, rng.random_range(0.2..2.0)));
        }
        Self::from_edges(n_edges + 1, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Maximum vertex degree, counted as at least 2 because interior edge
    /// points already carry two directions.
    pub fn max_degree(&self) -> usize {
        self.max_degree.max(2)
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.vdist[a][b]
    }

    pub fn vertex_point(&self, v: usize) -> (usize, f64) {
        let e = self.incident[v]
            .iter()
            .copied()
            .min()
            .expect("tree vertex without edges");
        let edge = self.edges[e];
        (e, if edge.u == v { 0.0 } else { edge.length })
    }

    pub(crate) fn check(&self, edge: usize, offset: f64, tol: f64) -> Result<()> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::InvalidPoint(format!("edge {edge} does not exist")))?;
        if !(offset >= -tol && offset <= e.length + tol) {
            return Err(Error::InvalidPoint(format!(
                "offset {offset} outside [0, {}] on edge {edge}",
                e.length
            )));
        }
        Ok(())
    }

    pub(crate) fn site(&self, edge: usize, offset: f64, tol: f64) -> Site {
        let e = self.edges[edge];
        if offset <= tol {
            Site::Vertex(e.u)
        } else if offset >= e.length - tol {
            Site::Vertex(e.v)
        } else {
            Site::Interior { edge, offset }
        }
    }

    pub(crate) fn canonical(&self, edge: usize, offset: f64, tol: f64) -> (usize, f64) {
        match self.site(edge, offset, tol) {
            Site::Vertex(v) => self.vertex_point(v),
            Site::Interior { edge, offset } => (edge, offset),
        }
    }

    fn point_of(&self, site: Site) -> (usize, f64) {
        match site {
            Site::Vertex(v) => self.vertex_point(v),
            Site::Interior { edge, offset } => (edge, offset),
        }
    }

    /// Distance from a site to vertex `w`.
    fn to_vertex(&self, site: Site, w: usize) -> f64 {
        match site {
            Site::Vertex(v) => self.vdist[v][w],
            Site::Interior { edge, offset } => {
                let e = self.edges[edge];
                (offset + self.vdist[e.u][w]).min(e.length - offset + self.vdist[e.v][w])
            }
        }
    }

    pub(crate) fn dist(&self, p: (usize, f64), q: (usize, f64), tol: f64) -> f64 {
        let sp = self.site(p.0, p.1, tol);
        let sq = self.site(q.0, q.1, tol);
        match (sp, sq) {
            (Site::Interior { edge: a, offset: oa }, Site::Interior { edge: b, offset: ob }) if a == b => {
                (oa - ob).abs()
            }
            (_, Site::Vertex(w)) => self.to_vertex(sp, w),
            (Site::Vertex(v), _) => self.to_vertex(sq, v),
            (Site::Interior { .. }, Site::Interior { edge: b, offset: ob }) => {
                let e = self.edges[b];
                (ob + self.to_vertex(sp, e.u)).min(e.length - ob + self.to_vertex(sp, e.v))
            }
        }
    }

    /// Vertex sequence of the geodesic between two sites, as a list of
    /// `(edge, from_vertex_side_offset)` waypoints: returns the ordered list of
    /// sites the path passes through (start, vertices..., end).
    fn path(&self, sp: Site, sq: Site) -> Vec<Site> {
        if let (Site::Interior { edge: a, .. }, Site::Interior { edge: b, .. }) = (sp, sq) {
            if a == b {
                return vec![sp, sq];
            }
        }
        // Pick the exit vertex of p and the entry vertex of q on the geodesic.
        let exits: Vec<usize> = match sp {
            Site::Vertex(v) => vec![v],
            Site::Interior { edge, .. } => vec![self.edges[edge].u, self.edges[edge].v],
        };
        let entries: Vec<usize> = match sq {
            Site::Vertex(v) => vec![v],
            Site::Interior { edge, .. } => vec![self.edges[edge].u, self.edges[edge].v],
        };
        let mut best = (f64::INFINITY, 0, 0);
        for &a in &exits {
            for &b in &entries {
                let total = self.site_to(sp, a) + self.vdist[a][b] + self.site_to(sq, b);
                if total < best.0 {
                    best = (total, a, b);
                }
            }
        }
        let (_, a, b) = best;
        let mut out = vec![sp];
        let mut cur = a;
        if sp != Site::Vertex(a) {
            out.push(Site::Vertex(a));
        }
        while cur != b {
            let e = self.first_edge[cur][b];
            cur = self.edges[e].other(cur);
            out.push(Site::Vertex(cur));
        }
        if sq != Site::Vertex(b) {
            out.push(sq);
        }
        out
    }

    fn site_to(&self, s: Site, v: usize) -> f64 {
        match s {
            Site::Vertex(w) => self.vdist[w][v],
            Site::Interior { edge, offset } => {
                let e = self.edges[edge];
                if e.u == v {
                    offset
                } else if e.v == v {
                    e.length - offset
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Edge carrying the consecutive waypoints `a`, `b`, plus the offsets of
    /// both on that edge.
    fn segment(&self, a: Site, b: Site) -> (usize, f64, f64) {
        let on = |s: Site, e: usize| -> f64 {
            match s {
                Site::Interior { offset, .. } => offset,
                Site::Vertex(v) => {
                    if self.edges[e].u == v {
                        0.0
                    } else {
                        self.edges[e].length
                    }
                }
            }
        };
        let e = match (a, b) {
            (Site::Interior { edge, .. }, _) | (_, Site::Interior { edge, .. }) => edge,
            (Site::Vertex(x), Site::Vertex(y)) => self.first_edge[x][y],
        };
        (e, on(a, e), on(b, e))
    }

    pub(crate) fn geodesic(&self, p: (usize, f64), q: (usize, f64), s: f64, tol: f64) -> (usize, f64) {
        let sp = self.site(p.0, p.1, tol);
        let sq = self.site(q.0, q.1, tol);
        if s <= 0.0 {
            return self.point_of(sp);
        }
        if s >= 1.0 {
            return self.point_of(sq);
        }
        let total = self.dist(p, q, tol);
        let target = s * total;
        let waypoints = self.path(sp, sq);
        let mut walked = 0.0;
        for w in waypoints.windows(2) {
            let (e, from, to) = self.segment(w[0], w[1]);
            let len = (to - from).abs();
            if walked + len >= target || std::ptr::eq(w, waypoints.windows(2).last().unwrap()) {
                let rem = (target - walked).clamp(0.0, len);
                let off = if to >= from { from + rem } else { from - rem };
                return self.canonical(e, off, tol);
            }
            walked += len;
        }
        self.point_of(sq)
    }

    /// Initial direction `(edge, forward)` of the geodesic from p to q, where
    /// `forward` means moving from the edge's first endpoint to its second.
    pub(crate) fn initial_direction(&self, p: (usize, f64), q: (usize, f64), tol: f64) -> Option<(usize, bool)> {
        let sp = self.site(p.0, p.1, tol);
        let sq = self.site(q.0, q.1, tol);
        if sp == sq {
            return None;
        }
        let waypoints = self.path(sp, sq);
        let (e, from, to) = self.segment(waypoints[0], waypoints[1]);
        if (to - from).abs() <= 0.0 {
            return None;
        }
        Some((e, to > from))
    }

    /// Canonical direction key at a site: at a vertex only the edge matters.
    pub(crate) fn direction_key(&self, p: (usize, f64), dir: (usize, bool), tol: f64) -> (usize, bool) {
        match self.site(p.0, p.1, tol) {
            Site::Vertex(v) => (dir.0, self.edges[dir.0].u == v),
            Site::Interior { .. } => dir,
        }
    }

    /// Directions available at a point.
    pub(crate) fn directions_at(&self, p: (usize, f64), tol: f64) -> Vec<(usize, bool)> {
        match self.site(p.0, p.1, tol) {
            Site::Vertex(v) => self.incident[v].iter().map(|&e| (e, self.edges[e].u == v)).collect(),
            Site::Interior { edge, .. } => vec![(edge, true), (edge, false)],
        }
    }

    /// Moves distance `t` from `p` along `dir`, staying on the starting edge.
    pub(crate) fn step(&self, p: (usize, f64), dir: (usize, bool), t: f64, tol: f64) -> Option<(usize, f64)> {
        let (edge, forward) = dir;
        let e = self.edges[edge];
        let off = match self.site(p.0, p.1, tol) {
            Site::Vertex(v) => {
                if e.u == v {
                    0.0
                } else if e.v == v {
                    e.length
                } else {
                    return None;
                }
            }
            Site::Interior { edge: pe, offset } => {
                if pe != edge {
                    return None;
                }
                offset
            }
        };
        let new = if forward { off + t } else { off - t };
        if new < -tol || new > e.length + tol {
            return None;
        }
        Some(self.canonical(edge, new.clamp(0.0, e.length), tol))
    }

    /// Offsets on `edge` within distance `r` of point `p`, as a union of
    /// closed intervals.
    pub(crate) fn ball_on_edge(&self, p: (usize, f64), r: f64, edge: usize, tol: f64) -> Vec<(f64, f64)> {
        let e = self.edges[edge];
        let sp = self.site(p.0, p.1, tol);
        if let Site::Interior { edge: pe, offset } = sp {
            if pe == edge {
                return vec![((offset - r).max(0.0), (offset + r).min(e.length))];
            }
        }
        let mut out = Vec::new();
        let du = self.to_vertex(sp, e.u);
        let dv = self.to_vertex(sp, e.v);
        if du <= r {
            out.push((0.0, (r - du).min(e.length)));
        }
        if dv <= r {
            out.push(((e.length - (r - dv)).max(0.0), e.length));
        }
        out
    }
}

impl Edge {
    pub fn other(&self, a: usize) -> usize {
        if self.u == a {
            self.v
        } else {
            self.u
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> TreeSpace {
        // center 0 with three unit legs
        TreeSpace::from_edges(4, vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap()
    }

    #[test]
    fn parse_grammar() {
        let t = TreeSpace::parse("# a path\nvertex a\nedge a b 2\nedge b c 0.5\n").unwrap();
        assert_eq!(t.n_vertices(), 3);
        assert_eq!(t.labels(), &["a", "b", "c"]);
        assert!((t.vertex_distance(0, 2) - 2.5).abs() < 1e-15);
        assert!(TreeSpace::parse("edge a b x").is_err());
        assert!(TreeSpace::parse("vertex a\nvertex b").is_err());
    }

    #[test]
    fn rejects_cycles() {
        assert!(TreeSpace::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).is_err());
        assert!(TreeSpace::from_edges(4, vec![(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0)]).is_err());
    }

    #[test]
    fn distances_through_center() {
        let t = star();
        let d = t.dist((0, 1.0), (1, 0.5), 1e-12);
        assert!((d - 1.5).abs() < 1e-15);
        // same edge
        assert!((t.dist((2, 0.25), (2, 0.75), 1e-12) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn geodesic_passes_center() {
        let t = star();
        let m = t.geodesic((0, 1.0), (1, 1.0), 0.5, 1e-12);
        assert_eq!(t.site(m.0, m.1, 1e-12), Site::Vertex(0));
        let q = t.geodesic((0, 1.0), (1, 1.0), 0.75, 1e-12);
        assert_eq!(q.0, 1);
        assert!((q.1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vertex_canonicalization() {
        let t = star();
        assert_eq!(t.canonical(2, 0.0, 1e-12), (0, 0.0));
        assert_eq!(t.canonical(1, 1.0, 1e-12), (1, 1.0));
    }
}
