//! Randomized check of declared convexity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::objective::{Domain, ObjectiveFn};
use crate::spaces::{Point, Space};

/// Violations below this (relative to the values involved) are rounding.
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub samples: usize,
    pub qc_violations: usize,
    pub max_qc_violation: f64,
    /// Present when the objective declares a convexity modulus.
    pub lambda_violations: Option<usize>,
    pub max_lambda_violation: Option<f64>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.qc_violations == 0 && self.lambda_violations.unwrap_or(0) == 0
    }
}

fn sample(f: &ObjectiveFn, space: &Space, rng: &mut ChaCha8Rng) -> Point {
    match f.domain {
        Domain::Interval { lo, hi } => Point::Euclidean(vec![rng.random_range(lo..=hi)]),
        Domain::Whole => space.random_point(rng, 3.0),
    }
}

/// Samples `(x, y, s)` and measures
/// `f(gamma(s)) - max(f(x), f(y))` and, when a modulus is declared,
/// `f(gamma(s)) - (1-s) f(x) - s f(y) + (lambda/2)(1-s) s d(x,y)^2`.
pub fn quasiconvexity_probe(f: &ObjectiveFn, space: &Space, n_samples: usize, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = f.class.lambda();
    let mut report = ProbeReport {
        samples: n_samples,
        qc_violations: 0,
        max_qc_violation: 0.0,
        lambda_violations: lambda.map(|_| 0),
        max_lambda_violation: lambda.map(|_| 0.0),
    };
    for _ in 0..n_samples {
        let x = sample(f, space, &mut rng);
        let y = sample(f, space, &mut rng);
        let s: f64 = rng.random();
        let m = space.geo(&x, &y, s);
        let (fx, fy, fm) = (f.eval(space, &x), f.eval(space, &y), f.eval(space, &m));
        let scale = 1.0 + fx.abs().max(fy.abs());
        let qc = fm - fx.max(fy);
        report.max_qc_violation = report.max_qc_violation.max(qc);
        if qc > SLACK * scale {
            report.qc_violations += 1;
        }
        if let Some(l) = lambda {
            let d = space.d(&x, &y);
            let v = fm - (1.0 - s) * fx - s * fy + 0.5 * l * (1.0 - s) * s * d * d;
            let max = report.max_lambda_violation.as_mut().expect("set");
            *max = max.max(v);
            if v > SLACK * (scale + d * d) {
                *report.lambda_violations.as_mut().expect("set") += 1;
            }
        }
    }
    report
}
