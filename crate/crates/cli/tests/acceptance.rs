//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `cargo test -p sccurve-cli --test acceptance`; exits non-zero if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sccurve::bounds::*;
use sccurve::flow::*;
use sccurve::four_point::{four_point_subembed, quad_from_points, Quad};
use sccurve::metric::cat0_inequality_residual;
use sccurve::spaces::constants::{c_n, BOOK_C};
use sccurve::spaces::{ConePoint, Direction, TreeSpace};
use sccurve::verify::*;
use sccurve::{Point, Space};

// Tolerances.
const LOCATION_TOL: f64 = 1e-9;
const VALUE_TOL: f64 = 1e-9;
const SELF_CONTRACTION_TOL: f64 = 1e-9;
const ANGLE_SLACK: f64 = 1e-6;
const CAT0_TOL: f64 = 1e-7;
const QUADRATURE_TOL: f64 = 1e-6;
const DECREASE_TOL: f64 = 1e-9;
const VARIANCE_TOL: f64 = 1e-9;
const CONTRACTION_TOL: f64 = 1e-6;
const SLOPE_TOL: f64 = 1e-12;
const MC_SIGMAS: f64 = 3.0;

// Sizes.
const GRADIENT_RUNS: usize = 100;
const SAMPLED_TRIPLES: usize = 1000;
const QUADRUPLES: usize = 10_000;
const CAT0_TRIPLES: usize = 10_000;
const PLANE_CURVES: usize = 200;
const TREE_BOOK_CURVES: usize = 1000;
const DECREASE_CURVES: usize = 100;
const DIRECTION_SETS: usize = 1000;
const PROBES: usize = 1000;
const START_PAIRS: usize = 50;
const QUADRATURE_LEVEL: u32 = 14;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let pass = o.pass && elapsed < limit;
    println!(
        "{} {:>2} {name}: {} [{:.2}s, limit {}s]",
        if pass { "PASS" } else { "FAIL" },
        id,
        o.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn e(v: &[f64]) -> Point {
    Point::Euclidean(v.to_vec())
}

// ------------------------------------------------------------------- 1, 2

fn c1() -> Outcome {
    let sp = Space::euclidean(1).unwrap();
    let f = objective_by_name(&sp, "neg_cube_unit").unwrap();
    let r = resolvent(&f, &sp, &e(&[0.0]), 0.5, &SolverConfig::default()).unwrap();
    let xs: Vec<f64> = r.minimizers.iter().map(|p| p.coords()[0]).collect();
    let phi = |z: f64| f.eval(&sp, &e(&[z])) + z * z;
    let ok = xs.len() == 2
        && (xs[0] - 0.0).abs() <= LOCATION_TOL
        && (xs[1] - 1.0).abs() <= LOCATION_TOL
        && (phi(xs[0]) - phi(xs[1])).abs() <= VALUE_TOL
        && r.status == ResolventStatus::MultipleTies;
    outcome(ok, format!("minimizers {xs:?}, status {:?}", r.status))
}

fn c2() -> Outcome {
    let sp = Space::euclidean(1).unwrap();
    let f = objective_by_name(&sp, "neg_cube").unwrap();
    let r = resolvent(&f, &sp, &e(&[0.0]), 0.5, &SolverConfig::default()).unwrap();
    let ok = matches!(r.status, ResolventStatus::Unbounded | ResolventStatus::Empty);
    outcome(ok, format!("status {:?}, value {}", r.status, r.value))
}

// ------------------------------------------------------------------- 3, 4

#[derive(Serialize)]
struct SpiderRow {
    k: usize,
    length: f64,
    max_violation: f64,
    bound: f64,
}

fn c3_rows() -> (bool, Vec<SpiderRow>) {
    let mut ok = true;
    let mut rows = Vec::new();
    for k in 2..=10 {
        let c = spider_jump_curve(k).unwrap();
        let sc = is_self_contracted(&c.space, &c, &SamplingConfig::default());
        let r = tree_length_bound(&c).unwrap();
        // unit legs, all covered by the unit neighborhood of the tips
        let expected = 6.0 * k as f64 * k as f64 * 2.0;
        let bound = r.bound.unwrap();
        ok &= c.length() == 2.0 * (k - 1) as f64
            && sc.pass
            && sc.max_violation <= 0.0
            && r.pass
            && (bound - expected).abs() <= 1e-12 * expected;
        rows.push(SpiderRow {
            k,
            length: c.length(),
            max_violation: sc.max_violation,
            bound,
        });
    }
    (ok, rows)
}

fn c3() -> Outcome {
    let (ok, rows) = c3_rows();
    let k5 = &rows[3];
    outcome(ok, format!("k=2..10 exact, k=5: L={} bound={}", k5.length, k5.bound))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn c4_series() -> (bool, Vec<(f64, f64)>) {
    let mut ok = true;
    let mut series = Vec::new();
    for k in 2..=12 {
        let (c, r) = unrectifiable_witness(k).unwrap();
        ok &= is_self_contracted(&c.space, &c, &SamplingConfig::default()).pass;
        ok &= r.length_over_diam == (k - 1) as f64;
        series.push((k as f64, r.length_over_diam));
    }
    (ok, series)
}

fn c4() -> Outcome {
    let (ok, series) = c4_series();
    let s = slope(&series);
    outcome(
        ok && (s - 1.0).abs() <= SLOPE_TOL,
        format!("L/diam = k-1 for k=2..12, slope {s}"),
    )
}

// ------------------------------------------------------------------- 5, 6

fn suite_spaces(seed: u64) -> Vec<Space> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        Space::euclidean(1).unwrap(),
        Space::euclidean(2).unwrap(),
        Space::euclidean(3).unwrap(),
        Space::hyperbolic(),
        Space::tree(TreeSpace::random(12, 5, &mut rng).unwrap()),
        Space::spider(5, 1.5).unwrap(),
        Space::book(3).unwrap(),
    ]
}

fn c5_c6() -> (Outcome, Outcome) {
    let spaces = suite_spaces(5);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let (mut worst_discrete, mut worst_interp, mut worst_angle) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    let mut all_pass = true;
    let mut n_angles = 0u64;
    for run_id in 0..GRADIENT_RUNS {
        let sp = &spaces[run_id % spaces.len()];
        let catalog: Vec<ObjectiveFn> = builtin_objectives(sp)
            .into_iter()
            .filter(|f| f.lower_bound.is_some() && f.name != "constant")
            .collect();
        let f = &catalog[rng.random_range(0..catalog.len())];
        let x0 = loop {
            let p = sp.random_point(&mut rng, 3.0);
            if f.in_domain(&p) {
                break p;
            }
        };
        let taus: Vec<f64> = (0..10).map(|_| rng.random_range(0.05..1.5)).collect();
        let cfg = SolverConfig {
            seed: run_id as u64,
            ..SolverConfig::default()
        };
        let run = discrete_gradient_curve(f, sp, &x0, &taus, &cfg).unwrap();
        let pts = &run.points;
        for m in 0..pts.len() {
            for l in 0..m {
                for k in 0..l {
                    worst_discrete = worst_discrete.max(sp.d(&pts[l], &pts[m]) - sp.d(&pts[k], &pts[m]));
                }
            }
        }
        let c = geodesic_interpolation(sp, &run).unwrap();
        let rep = is_self_contracted(sp, &c, &SamplingConfig::random(SAMPLED_TRIPLES, run_id as u64));
        all_pass &= rep.pass;
        worst_interp = worst_interp.max(rep.max_violation);
        let sweep = angle_sweep(sp, &c, SAMPLED_TRIPLES, run_id as u64);
        worst_angle = worst_angle.max(sweep.max_angle);
        n_angles += sweep.n_checked;
    }
    let c5 = outcome(
        worst_discrete <= SELF_CONTRACTION_TOL && all_pass,
        format!("{GRADIENT_RUNS} runs, discrete max {worst_discrete:e}, interpolated max {worst_interp:e}"),
    );
    let c6 = outcome(
        worst_angle < FRAC_PI_2 + ANGLE_SLACK,
        format!("{n_angles} triples, max angle {worst_angle:.9} (pi/2 = {FRAC_PI_2:.9})"),
    );
    (c5, c6)
}

// --------------------------------------------------------------------- 7

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spaces = [
        Space::tree(TreeSpace::random(20, 6, &mut rng).unwrap()),
        Space::spider(5, 1.0).unwrap(),
        Space::book(3).unwrap(),
        Space::euclidean(3).unwrap(),
        Space::hyperbolic(),
    ];
    let mut fails = 0;
    let mut worst = f64::INFINITY;
    for sp in &spaces {
        for _ in 0..QUADRUPLES {
            let p: Vec<Point> = (0..4).map(|_| sp.random_point(&mut rng, 3.0)).collect();
            if !four_point_subembed(quad_from_points(sp, &p[0], &p[1], &p[2], &p[3]))
                .unwrap()
                .pass
            {
                fails += 1;
            }
        }
        for _ in 0..CAT0_TRIPLES {
            let (x, y, z) = (
                sp.random_point(&mut rng, 3.0),
                sp.random_point(&mut rng, 3.0),
                sp.random_point(&mut rng, 3.0),
            );
            let s = rng.random::<f64>();
            worst = worst.min(cat0_inequality_residual(sp, &x, &y, &z, s).unwrap());
        }
    }
    let sphere = Quad {
        wx: FRAC_PI_2,
        xy: FRAC_PI_2,
        yz: FRAC_PI_2,
        zw: FRAC_PI_2,
        wy: PI,
        xz: PI,
    };
    let sphere_fails = !four_point_subembed(sphere).unwrap().pass;
    outcome(
        fails == 0 && sphere_fails && worst >= -CAT0_TOL,
        format!("{fails} four-point failures, spherical rejected: {sphere_fails}, min residual {worst:e}"),
    )
}

// --------------------------------------------------------------------- 8

fn c8() -> Outcome {
    let eps = 1.0 / 54.0;
    let a2 = 4.0 * (1.0f64 / 108.0).asin();
    let c2 = 2.0 * PI / (a2 * eps);
    let consistent = (c_n(2).unwrap() / c2 - 1.0).abs() < 1e-12;
    let sp = Space::euclidean(2).unwrap();
    let quad = WidthConfig {
        method: WidthMethod::Quadrature(QUADRATURE_LEVEL),
        ..WidthConfig::default()
    };
    let (mut ok, mut max_ratio, mut max_quad_err) = (true, 0.0f64, 0.0f64);
    for seed in 0..PLANE_CURVES as u64 {
        let mode = if seed % 2 == 0 {
            GenMode::Gradient
        } else {
            GenMode::Rejection
        };
        let c = random_self_contracted(&sp, 20, 8_000 + seed, mode).unwrap();
        ok &= is_self_contracted(&sp, &c, &SamplingConfig::default()).pass;
        let target = WidthTarget::Points(c.image_points(0, 3));
        let w = mean_width(&sp, &target, &quad).unwrap().mean_width;
        let exact = mean_width(&sp, &target, &WidthConfig::default()).unwrap().mean_width;
        max_quad_err = max_quad_err.max((w - exact).abs());
        ok &= c.length() <= c2 * w;
        if w > 0.0 {
            max_ratio = max_ratio.max(c.length() / (c2 * w));
        }
    }
    outcome(
        ok && consistent && max_quad_err < QUADRATURE_TOL,
        format!("C2 = {c2:.3}, max L/(C2 W) = {max_ratio:.3e}, quadrature error {max_quad_err:.1e}"),
    )
}

// --------------------------------------------------------------------- 9

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut tree_fail, mut book_fail, mut max_tree, mut max_book) = (0, 0, 0.0f64, 0.0f64);
    for i in 0..TREE_BOOK_CURVES {
        let mode = if i % 2 == 0 {
            GenMode::Gradient
        } else {
            GenMode::Rejection
        };
        let tree = TreeSpace::random(rng.random_range(1..=50), rng.random_range(2..=6), &mut rng).unwrap();
        let sp = Space::tree(tree);
        let c = random_self_contracted(&sp, 12, rng.random(), mode).unwrap();
        let r = tree_length_bound(&c).unwrap();
        let sc = is_self_contracted(&sp, &c, &SamplingConfig::default()).pass;
        if !(r.pass && sc && r.constants["Lambda"] <= 6.0) {
            tree_fail += 1;
        }
        max_tree = max_tree.max(r.ratio.unwrap());

        let sp = Space::book([2, 3, 5][i % 3]).unwrap();
        let c = random_self_contracted(&sp, 12, rng.random(), mode).unwrap();
        let r = book_length_bound(&c).unwrap();
        let sc = is_self_contracted(&sp, &c, &SamplingConfig::default()).pass;
        if !(r.pass && sc && r.constants["C"] == BOOK_C) {
            book_fail += 1;
        }
        max_book = max_book.max(r.ratio.unwrap());
    }
    let c_ok = (BOOK_C - 54.0 * SQRT_2 * PI).abs() < 1e-12;
    outcome(
        tree_fail == 0 && book_fail == 0 && c_ok,
        format!(
            "{TREE_BOOK_CURVES} trees ({tree_fail} fail, max ratio {max_tree:.2e}), {TREE_BOOK_CURVES} books ({book_fail} fail, max ratio {max_book:.2e})"
        ),
    )
}

// -------------------------------------------------------------------- 10

#[derive(Serialize)]
struct WidthRow {
    what: String,
    expected: f64,
    report: WidthReport,
}

fn c10_rows() -> (bool, Vec<WidthRow>) {
    let cfg = WidthConfig {
        method: WidthMethod::MonteCarlo,
        seed: 10,
        ..WidthConfig::default()
    };
    let mut ok = true;
    let mut rows = Vec::new();
    for n in [2, 3] {
        let sp = Space::euclidean(n).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let w = mean_width(
                &sp,
                &WidthTarget::Ball {
                    center: vec![0.0; n],
                    radius: r,
                },
                &cfg,
            )
            .unwrap();
            ok &= (w.mean_width - 2.0 * r).abs() <= MC_SIGMAS * w.stderr + 1e-12;
            rows.push(WidthRow {
                what: format!("ball r={r} in R^{n}"),
                expected: 2.0 * r,
                report: w,
            });
        }
    }
    let sp = Space::euclidean(2).unwrap();
    for len in [1.0, 3.0] {
        let seg = WidthTarget::Points(vec![e(&[0.0, 0.0]), e(&[len, 0.0])]);
        let w = mean_width(&sp, &seg, &cfg).unwrap();
        let expected = 2.0 * len / PI;
        ok &= (w.mean_width - expected).abs() <= MC_SIGMAS * w.stderr;
        rows.push(WidthRow {
            what: format!("segment L={len}"),
            expected,
            report: w,
        });
    }
    (ok, rows)
}

fn c10() -> Outcome {
    let (ok, rows) = c10_rows();
    let worst = rows
        .iter()
        .map(|r| (r.report.mean_width - r.expected).abs() / r.report.stderr.max(1e-300))
        .filter(|z| z.is_finite())
        .fold(0.0f64, f64::max);
    outcome(ok, format!("{} targets, worst deviation {worst:.2} stderr", rows.len()))
}

// -------------------------------------------------------------------- 11

fn c11() -> Outcome {
    let eps: f64 = 1.0 / 54.0;
    let max_angle = 2.0 * (eps / 2.0).asin();
    let sp = Space::euclidean(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut checked, mut chord_ok) = (f64::NEG_INFINITY, 0, true);
    for seed in 0..DECREASE_CURVES as u64 {
        let mode = if seed % 2 == 0 {
            GenMode::Gradient
        } else {
            GenMode::Rejection
        };
        let c = random_self_contracted(&sp, 20, 11_000 + seed, mode).unwrap();
        let times = c.times();
        for _ in 0..10 {
            let i = rng.random_range(0..times.len() - 1);
            let j = rng.random_range(i + 1..times.len());
            let Some(cc) = tail_cover_center(&c, times[i]).unwrap() else {
                continue;
            };
            for _ in 0..10 {
                let v = perturb_direction(&cc.direction, max_angle, &mut rng).unwrap();
                if let (sccurve::spaces::DirPayload::Euclidean(a), sccurve::spaces::DirPayload::Euclidean(b)) =
                    (&v.payload, &cc.direction.payload)
                {
                    chord_ok &= (a[0] - b[0]).hypot(a[1] - b[1]) <= eps * (1.0 + 1e-12);
                }
                worst = worst.max(directional_decrease_check(&c, times[i], times[j], &v, eps).unwrap());
                checked += 1;
            }
        }
    }
    outcome(
        worst <= DECREASE_TOL && chord_ok,
        format!("{checked} checks, max residual {worst:e}"),
    )
}

// -------------------------------------------------------------------- 12

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut worst_var, mut radius_ok, mut worst_gap) = (f64::INFINITY, true, f64::INFINITY);
    for n in [2usize, 3] {
        let sp = Space::euclidean(n).unwrap();
        let limit = (1.0 / (2.0 * 3f64.powi(n as i32))).acos();
        for _ in 0..DIRECTION_SETS {
            let x = sp.random_point(&mut rng, 1.0);
            let k = rng.random_range(1..10);
            let dirs: Vec<Direction> = (0..k).map(|_| sp.random_direction(&mut rng, &x)).collect();
            let v = sp.cone_barycenter(&dirs).unwrap();
            let unit = |d: &Direction| ConePoint {
                direction: d.clone(),
                radius: 1.0,
            };
            let mean_sq = |w: &ConePoint| {
                dirs.iter()
                    .map(|g| sp.cone_point_distance(w, &unit(g)).powi(2))
                    .sum::<f64>()
                    / k as f64
            };
            let base = mean_sq(&v);
            for _ in 0..PROBES {
                let w = ConePoint {
                    direction: sp.random_direction(&mut rng, &x),
                    radius: 2.0 * rng.random::<f64>(),
                };
                worst_var = worst_var.min(mean_sq(&w) - sp.cone_point_distance(&w, &v).powi(2) - base);
            }

            let axis = sp.random_direction(&mut rng, &x);
            let set: Vec<Direction> = (0..rng.random_range(1..30))
                .map(|_| perturb_direction(&axis, PI / 4.0, &mut rng).unwrap())
                .collect();
            let cc = sp.direction_cover_center(&set).unwrap();
            radius_ok &= cc.radius <= limit;
            worst_gap = worst_gap.min(limit - cc.radius);
        }
    }
    outcome(
        worst_var >= -VARIANCE_TOL && radius_ok,
        format!("min variance residual {worst_var:e}, min radius slack {worst_gap:.3}"),
    )
}

// -------------------------------------------------------------------- 13

fn c13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = f64::NEG_INFINITY;
    for sp in [
        Space::euclidean(2).unwrap(),
        Space::spider(4, 2.0).unwrap(),
        Space::book(3).unwrap(),
    ] {
        let f = ObjectiveFn::half_squared_distance(sp.random_point(&mut rng, 2.0));
        for _ in 0..START_PAIRS {
            let taus: Vec<f64> = (0..10).map(|_| rng.random_range(0.05..1.5)).collect();
            let cfg = SolverConfig::default();
            let a = discrete_gradient_curve(&f, &sp, &sp.random_point(&mut rng, 3.0), &taus, &cfg).unwrap();
            let b = discrete_gradient_curve(&f, &sp, &sp.random_point(&mut rng, 3.0), &taus, &cfg).unwrap();
            worst = worst.max(
                contraction_check(&sp, &f, &a, &b, CONTRACTION_TOL)
                    .unwrap()
                    .max_violation,
            );
        }
    }
    outcome(
        worst <= CONTRACTION_TOL,
        format!("3 spaces x {START_PAIRS} pairs, max increase {worst:e}"),
    )
}

// -------------------------------------------------------------------- 14

fn cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_sccurve"))
        .args(args)
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn cli_round(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let (sim, ver, aud, ce, rep) = (
        dir.join("sim"),
        dir.join("ver"),
        dir.join("aud"),
        dir.join("ce"),
        dir.join("rep"),
    );
    let curve = s(&sim.join("curve.json"));
    let mut codes = vec![
        cli(&[
            "simulate",
            "--space",
            "spider:3",
            "--objective",
            "max_dist",
            "--tau",
            "0.4",
            "--steps",
            "12",
            "--seed",
            "14",
            "--out",
            &s(&sim),
        ]),
        cli(&["verify", &curve, "--check", "all", "--seed", "14", "--out", &s(&ver)]),
        cli(&["audit", &curve, "--bound", "generic", "--seed", "14", "--out", &s(&aud)]),
    ];
    for k in 2..=10 {
        codes.push(cli(&["counterexample", "--k", &k.to_string(), "--out", &s(&ce)]));
    }
    codes.push(cli(&["report", &format!("{}/*.csv", s(&ce)), "--out", &s(&rep)]));
    assert!(codes.iter().all(|c| *c == 0), "{codes:?}");
    let mut all = Vec::new();
    for d in [sim, ver, aud, ce, rep] {
        all.extend(read_all(&d));
    }
    all
}

fn c14() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ra, rb) = (cli_round(a.path()), cli_round(b.path()));
    let cli_same = ra == rb;
    // in-process criteria reports
    let json = || serde_json::to_string(&(c3_rows().1, c4_series().1, c10_rows().1)).unwrap();
    let lib_same = json() == json();
    outcome(
        cli_same && lib_same,
        format!(
            "{} CLI files identical: {cli_same}, library reports identical: {lib_same}",
            ra.len()
        ),
    )
}

fn main() {
    let mut results = vec![
        criterion(1, "resolvent pathology", secs(1), c1),
        criterion(2, "resolvent unboundedness", secs(1), c2),
        criterion(3, "spider jump curves", secs(5), c3),
        criterion(4, "orthonormal jumps", secs(5), c4),
    ];
    let start = Instant::now();
    let (o5, o6) = c5_c6();
    let shared = start.elapsed();
    let limit = secs(120);
    results.push(criterion(
        5,
        "gradient runs are self-contracted",
        limit.saturating_sub(shared),
        || o5,
    ));
    results.push(criterion(6, "angle estimate", limit.saturating_sub(shared), || o6));
    results.push(criterion(7, "CAT(0) certification", secs(60), c7));
    results.push(criterion(8, "euclidean bound", secs(60), c8));
    results.push(criterion(9, "tree and book bounds", secs(120), c9));
    results.push(criterion(10, "mean width sanity", secs(10), c10));
    results.push(criterion(11, "directional decrease", secs(60), c11));
    results.push(criterion(12, "cone barycenter", secs(60), c12));
    results.push(criterion(13, "contraction", secs(60), c13));
    results.push(criterion(14, "determinism", secs(120), c14));
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, p)| !**p)
        .map(|(i, _)| i + 1)
        .collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
