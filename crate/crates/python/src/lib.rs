//! Python bindings. Reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use sccurve::bounds::{
    book_length_bound, euclidean_length_bound, generic_cat0_audit, mean_width, random_self_contracted,
    spider_jump_curve, tree_length_bound, unrectifiable_witness, GenMode, WidthConfig, WidthTarget,
};
use sccurve::flow::{discrete_gradient_curve, geodesic_interpolation, objective_by_name, SolverConfig};
use sccurve::four_point::{four_point_subembed, quad_from_points};
use sccurve::io::{curve_from_json, curve_to_json, parse_space, point_from_coords};
use sccurve::verify::{angle_sweep, is_self_contracted, SamplingConfig};
use sccurve::{Mode, SpaceKind};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?
        .call_method1("loads", (text,))?
        .cast_into::<PyDict>()
        .map_err(Into::into)
}

#[pyclass(module = "sccurve_py", frozen, from_py_object)]
#[derive(Clone)]
struct Space {
    inner: sccurve::Space,
}

#[pymethods]
impl Space {
    /// `euclidean:N`, `hyperbolic`, `spider:K[:LEN]`, `book:K`,
    /// `tree:random:EDGES:DEGREE:SEED`, `product(A,B)`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Space {
            inner: parse_space(spec).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    fn distance(&self, a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
        let (a, b) = (self.point(&a)?, self.point(&b)?);
        Ok(self.inner.d(&a, &b))
    }

    /// Point at fraction `s` of the geodesic from `a` to `b`.
    fn geodesic(&self, a: Vec<f64>, b: Vec<f64>, s: f64) -> PyResult<Vec<f64>> {
        let (a, b) = (self.point(&a)?, self.point(&b)?);
        Ok(self.inner.geodesic_point(&a, &b, s).map_err(err)?.coords())
    }

    /// Whether four points embed in the plane without shrinking any distance.
    fn four_point(&self, pts: [Vec<f64>; 4]) -> PyResult<bool> {
        let p: Vec<_> = pts.iter().map(|c| self.point(c)).collect::<PyResult<_>>()?;
        let q = quad_from_points(&self.inner, &p[0], &p[1], &p[2], &p[3]);
        Ok(four_point_subembed(q).map_err(err)?.pass)
    }

    fn __repr__(&self) -> String {
        format!("Space('{}')", self.inner.name())
    }
}

impl Space {
    fn point(&self, c: &[f64]) -> PyResult<sccurve::Point> {
        point_from_coords(&self.inner, c).map_err(err)
    }
}

#[pyclass(module = "sccurve_py", frozen)]
struct Curve {
    inner: sccurve::Curve,
}

#[pymethods]
impl Curve {
    /// `mode` is `"discrete"` or `"geodesic"`. Times default to `0, 1, 2, ...`.
    #[new]
    #[pyo3(signature = (space, points, times=None, mode="geodesic"))]
    fn new(space: &Space, points: Vec<Vec<f64>>, times: Option<Vec<f64>>, mode: &str) -> PyResult<Self> {
        let mode = match mode {
            "discrete" => Mode::Discrete,
            "geodesic" => Mode::GeodesicInterpolated,
            m => return Err(err(format!("unknown mode `{m}`"))),
        };
        let pts: Vec<_> = points.iter().map(|c| space.point(c)).collect::<PyResult<_>>()?;
        let inner = match times {
            None => sccurve::Curve::from_points(space.inner.clone(), mode, pts),
            Some(ts) => {
                if ts.len() != pts.len() {
                    return Err(err("times and points differ in length"));
                }
                let samples = ts.into_iter().zip(pts).map(|(t, p)| sccurve::Sample { t, p }).collect();
                sccurve::Curve::new(space.inner.clone(), mode, samples, None)
            }
        }
        .map_err(err)?;
        Ok(Curve { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Curve {
            inner: curve_from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        curve_to_json(&self.inner)
    }

    #[getter]
    fn space(&self) -> Space {
        Space {
            inner: self.inner.space.clone(),
        }
    }

    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().iter().map(|p| p.coords()).collect()
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Self-contraction check. `samples=None` is exhaustive on small curves.
    #[pyo3(signature = (samples=None, seed=0))]
    fn verify<'py>(&self, py: Python<'py>, samples: Option<usize>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let cfg = match samples {
            Some(n) => SamplingConfig::random(n, seed),
            None => SamplingConfig::default(),
        };
        to_dict(py, &is_self_contracted(&self.inner.space, &self.inner, &cfg))
    }

    #[pyo3(signature = (samples=1000, seed=0))]
    fn max_angle(&self, samples: usize, seed: u64) -> f64 {
        angle_sweep(&self.inner.space, &self.inner, samples, seed).max_angle
    }

    /// Length-bound audit: `euclidean`, `tree`, `book`, `generic` or `auto`.
    #[pyo3(signature = (bound="auto", sigma=0.25, seed=1))]
    fn audit<'py>(&self, py: Python<'py>, bound: &str, sigma: f64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let kind = match (bound, &self.inner.space.kind) {
            ("auto", SpaceKind::Euclidean { .. }) => "euclidean",
            ("auto", SpaceKind::Tree { .. } | SpaceKind::Spider(_)) => "tree",
            ("auto", SpaceKind::Book(_)) => "book",
            ("auto", _) => "generic",
            (b, _) => b,
        };
        let rep = match kind {
            "euclidean" => euclidean_length_bound(
                &self.inner,
                4,
                &WidthConfig {
                    seed,
                    ..WidthConfig::default()
                },
            ),
            "tree" => tree_length_bound(&self.inner),
            "book" => book_length_bound(&self.inner),
            "generic" => generic_cat0_audit(&self.inner, sigma),
            b => return Err(err(format!("unknown bound `{b}`"))),
        }
        .map_err(err)?;
        to_dict(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!("Curve(space='{}', n={})", self.inner.space.name(), self.inner.len())
    }
}

/// Proximal gradient curve of a catalog objective, geodesically interpolated.
#[pyfunction]
#[pyo3(signature = (space, objective, start, tau, steps))]
fn simulate(space: &Space, objective: &str, start: Vec<f64>, tau: f64, steps: usize) -> PyResult<Curve> {
    let f = objective_by_name(&space.inner, objective).map_err(err)?;
    let x0 = space.point(&start)?;
    let run =
        discrete_gradient_curve(&f, &space.inner, &x0, &vec![tau; steps], &SolverConfig::default()).map_err(err)?;
    if let Some(stop) = run.stop {
        return Err(err(format!("step {} stopped: {:?}", stop.step, stop.status)));
    }
    Ok(Curve {
        inner: geodesic_interpolation(&space.inner, &run).map_err(err)?,
    })
}

/// Random self-contracted curve; `mode` is `"gradient"` or `"rejection"`.
#[pyfunction]
#[pyo3(signature = (space, n, seed, mode="gradient"))]
fn random_curve(space: &Space, n: usize, seed: u64, mode: &str) -> PyResult<Curve> {
    let mode = match mode {
        "gradient" => GenMode::Gradient,
        "rejection" => GenMode::Rejection,
        m => return Err(err(format!("unknown mode `{m}`"))),
    };
    Ok(Curve {
        inner: random_self_contracted(&space.inner, n, seed, mode).map_err(err)?,
    })
}

/// Jump curve visiting the tips of a `k`-legged spider.
#[pyfunction]
fn spider_jumps(k: usize) -> PyResult<Curve> {
    Ok(Curve {
        inner: spider_jump_curve(k).map_err(err)?,
    })
}

/// Jump curve through an orthonormal frame, with its audit.
#[pyfunction]
fn orthonormal_jumps<'py>(py: Python<'py>, k: usize) -> PyResult<(Curve, Bound<'py, PyDict>)> {
    let (c, rep) = unrectifiable_witness(k).map_err(err)?;
    Ok((Curve { inner: c }, to_dict(py, &rep)?))
}

/// Mean width of a finite point set.
#[pyfunction]
#[pyo3(signature = (space, points, n_dirs=4096, seed=1))]
fn width<'py>(
    py: Python<'py>,
    space: &Space,
    points: Vec<Vec<f64>>,
    n_dirs: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let pts: Vec<_> = points.iter().map(|c| space.point(c)).collect::<PyResult<_>>()?;
    let cfg = WidthConfig {
        n_dirs,
        seed,
        ..WidthConfig::default()
    };
    to_dict(
        py,
        &mean_width(&space.inner, &WidthTarget::Points(pts), &cfg).map_err(err)?,
    )
}

#[pymodule]
fn sccurve_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(random_curve, m)?)?;
    m.add_function(wrap_pyfunction!(spider_jumps, m)?)?;
    m.add_function(wrap_pyfunction!(orthonormal_jumps, m)?)?;
    m.add_function(wrap_pyfunction!(width, m)?)?;
    Ok(())
}
