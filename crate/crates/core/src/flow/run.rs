//! Discrete gradient curves and their geodesic interpolation.

use serde::Serialize;

use super::objective::ObjectiveFn;
use super::resolvent::{resolvent, ResolventStatus, SolverConfig};
use crate::curve::{Curve, Mode, Sample};
use crate::error::{Error, Result};
use crate::metric::compensated_sum;
use crate::spaces::{Point, Space};

/// Why a run ended before its schedule did.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunStop {
    /// Index of the step that failed (1-based, like `x^k`).
    pub step: usize,
    pub status: ResolventStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientCurveRun {
    pub space: Space,
    pub objective: String,
    /// Step sizes of the completed steps.
    pub step_sizes: Vec<f64>,
    /// `t_0 = 0`, `t_k = tau_1 + ... + tau_k`.
    pub times: Vec<f64>,
    pub points: Vec<Point>,
    /// `f(x^k)`.
    pub values: Vec<f64>,
    /// Resolvent status at each completed step.
    pub statuses: Vec<ResolventStatus>,
    pub stop: Option<RunStop>,
}

impl GradientCurveRun {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Steps at which the resolvent had several minimizers.
    pub fn tie_steps(&self) -> Vec<usize> {
        self.statuses
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == ResolventStatus::MultipleTies)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// The points as a discrete curve at the cumulative step times.
    pub fn discrete_curve(&self) -> Result<Curve> {
        self.curve(Mode::Discrete)
    }

    fn curve(&self, mode: Mode) -> Result<Curve> {
        let samples = self
            .times
            .iter()
            .zip(&self.points)
            .map(|(&t, p)| Sample { t, p: p.clone() })
            .collect();
        Curve::new(self.space.clone(), mode, samples, None)
    }
}

/// Constant schedule of `k` steps.
pub fn constant_schedule(tau: f64, k: usize) -> Vec<f64> {
    vec![tau; k]
}

/// Iterates the resolvent along `taus`, choosing minimizers by the
/// tie-break policy. Stops early, keeping the prefix, when a resolvent is
/// empty or unbounded.
pub fn discrete_gradient_curve(
    f: &ObjectiveFn,
    space: &Space,
    x0: &Point,
    taus: &[f64],
    cfg: &SolverConfig,
) -> Result<GradientCurveRun> {
    let x0 = space.point(x0.clone())?;
    if !f.in_domain(&x0) {
        return Err(Error::DomainViolation);
    }
    let mut run = GradientCurveRun {
        space: space.clone(),
        objective: f.name.clone(),
        step_sizes: Vec::new(),
        times: vec![0.0],
        values: vec![f.eval(space, &x0)],
        points: vec![x0],
        statuses: Vec::new(),
        stop: None,
    };
    for (k, &tau) in taus.iter().enumerate() {
        let x = run.points.last().expect("nonempty");
        let r = resolvent(f, space, x, tau, cfg)?;
        let Some(z) = r.chosen() else {
            run.stop = Some(RunStop {
                step: k + 1,
                status: r.status,
            });
            break;
        };
        let z = z.clone();
        run.values.push(f.eval(space, &z));
        run.points.push(z);
        run.step_sizes.push(tau);
        run.times.push(compensated_sum(run.step_sizes.iter().copied()));
        run.statuses.push(r.status);
    }
    Ok(run)
}

/// Piecewise-geodesic curve through the run: on `[t_{k-1}, t_k]` it follows
/// the geodesic from `x^{k-1}` to `x^k` at constant speed.
pub fn geodesic_interpolation(space: &Space, run: &GradientCurveRun) -> Result<Curve> {
    if run.is_empty() {
        return Err(Error::Empty("gradient curve run"));
    }
    if *space != run.space {
        return Err(Error::MismatchedSpace("run was computed on a different space".into()));
    }
    run.curve(Mode::GeodesicInterpolated)
}
