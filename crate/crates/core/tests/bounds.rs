use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sccurve::bounds::*;
use sccurve::spaces::constants::{c_n, BOOK_C};
use sccurve::spaces::{DirPayload, Direction};
use sccurve::verify::{is_self_contracted, SamplingConfig};
use sccurve::{Curve, Mode, Point, Space};

fn e(v: &[f64]) -> Point {
    Point::Euclidean(v.to_vec())
}

/// Mean width in the plane by brute-force angular averaging.
fn width_oracle(pts: &[[f64; 2]], m: usize) -> f64 {
    let mut total = 0.0;
    for i in 0..m {
        let th = 2.0 * PI * (i as f64 + 0.5) / m as f64;
        let (c, s) = (th.cos(), th.sin());
        let proj: Vec<f64> = pts.iter().map(|p| p[0] * c + p[1] * s).collect();
        let hi = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = proj.iter().cloned().fold(f64::INFINITY, f64::min);
        total += hi - lo;
    }
    total / m as f64
}

#[test]
fn projection_on_a_spider() {
    let s = Space::spider(3, 1.0).unwrap();
    let center = Point::Spider { leg: 0, r: 0.0 };
    let dir = Direction {
        base: center,
        payload: DirPayload::Spider { leg: 1, outward: true },
    };
    let pts = [Point::Spider { leg: 1, r: 1.0 }, Point::Spider { leg: 2, r: 1.0 }];
    assert_eq!(projection_extent(&s, &dir, &pts).unwrap(), (-1.0, 1.0));
}

#[test]
fn projection_matches_inner_products() {
    let s = Space::euclidean(3).unwrap();
    let dir = Direction {
        base: e(&[1.0, 0.0, 0.0]),
        payload: DirPayload::Euclidean(vec![0.0, 1.0, 0.0]),
    };
    let (lo, hi) = projection_extent(&s, &dir, &[e(&[5.0, -2.0, 1.0]), e(&[0.0, 3.0, 9.0])]).unwrap();
    assert_eq!((lo, hi), (-2.0, 3.0));
}

#[test]
fn segment_and_square_widths() {
    let s = Space::euclidean(2).unwrap();
    let seg = WidthTarget::Points(vec![e(&[0.0, 0.0]), e(&[3.0, 0.0])]);
    let exact = mean_width(&s, &seg, &WidthConfig::default()).unwrap();
    assert!((exact.mean_width - 6.0 / PI).abs() < 1e-15);
    let mc = mean_width(
        &s,
        &seg,
        &WidthConfig {
            method: WidthMethod::MonteCarlo,
            ..Default::default()
        },
    )
    .unwrap();
    assert!((mc.mean_width - 6.0 / PI).abs() <= 3.0 * mc.stderr);
    let sq = WidthTarget::Points(vec![
        e(&[0.0, 0.0]),
        e(&[1.0, 0.0]),
        e(&[1.0, 1.0]),
        e(&[0.0, 1.0]),
        e(&[0.5, 0.5]),
    ]);
    assert!((mean_width(&s, &sq, &WidthConfig::default()).unwrap().mean_width - 4.0 / PI).abs() < 1e-15);
}

#[test]
fn ball_width_is_its_diameter() {
    for n in 2..5 {
        let s = Space::euclidean(n).unwrap();
        let ball = WidthTarget::Ball {
            center: vec![0.3; n],
            radius: 1.5,
        };
        let cfg = WidthConfig {
            method: WidthMethod::MonteCarlo,
            ..Default::default()
        };
        let w = mean_width(&s, &ball, &cfg).unwrap();
        assert!((w.mean_width - 3.0).abs() <= 3.0 * w.stderr + 1e-12);
    }
}

#[test]
fn hull_quadrature_and_oracle_agree() {
    let s = Space::euclidean(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let pts: Vec<[f64; 2]> = (0..rng.random_range(1..30))
            .map(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])
            .collect();
        let target = WidthTarget::Points(pts.iter().map(|p| e(p)).collect());
        let exact = mean_width(&s, &target, &WidthConfig::default()).unwrap().mean_width;
        let quad = mean_width(
            &s,
            &target,
            &WidthConfig {
                method: WidthMethod::Quadrature(14),
                ..Default::default()
            },
        )
        .unwrap()
        .mean_width;
        assert!((exact - quad).abs() < 1e-6, "{exact} {quad}");
        assert!((exact - width_oracle(&pts, 1 << 16)).abs() < 1e-6);
    }
}

#[test]
fn euclidean_constant_matches_closed_form() {
    let eps = 1.0 / 54.0;
    let oracle = 2.0 * PI / (4.0 * (eps / 2.0f64).asin() * eps);
    assert!((c_n(2).unwrap() / oracle - 1.0).abs() < 1e-12);
}

#[test]
fn spider_jump_audit() {
    let c = spider_jump_curve(5).unwrap();
    assert_eq!(c.length(), 8.0);
    let r = tree_length_bound(&c).unwrap();
    assert_eq!(r.diam, 2.0);
    assert_eq!(r.constants["H1"], 5.0);
    assert_eq!(r.bound, Some(300.0));
    assert!(r.pass);
    assert!(r.boundary_contact);
    let g = generic_cat0_audit(&c, 1.0).unwrap();
    assert!(g.pass && g.bound.unwrap() >= 300.0);
}

#[test]
fn book_jump_audit() {
    let c = book_spine_jump_curve(3).unwrap();
    assert_eq!(c.length(), 4.0);
    let r = book_length_bound(&c).unwrap();
    let h2 = 3.0 * PI;
    assert!((r.constants["H2"] - h2).abs() < 1e-9);
    assert!((r.bound.unwrap() - BOOK_C * 3.0 * h2 * 2.0).abs() < 1e-6);
    assert!(r.pass);
    assert!((BOOK_C - 54.0 * SQRT_2 * PI).abs() < 1e-12);
}

#[test]
fn orthonormal_growth_is_linear() {
    for k in 2..=12 {
        let (c, r) = unrectifiable_witness(k).unwrap();
        assert_eq!(c.len(), k);
        assert_eq!(r.length_over_diam, (k - 1) as f64);
        assert_eq!(r.diam, SQRT_2);
        assert!(r.pass);
    }
}

#[test]
fn generated_curves_are_self_contracted_and_bounded() {
    let spaces = [
        Space::euclidean(2).unwrap(),
        Space::hyperbolic(),
        Space::spider(4, 2.0).unwrap(),
        Space::book(3).unwrap(),
    ];
    for (i, s) in spaces.iter().enumerate() {
        for mode in [GenMode::Gradient, GenMode::Rejection] {
            for seed in 0..4 {
                let c = random_self_contracted(s, 12, 100 * i as u64 + seed, mode).unwrap();
                let rep = is_self_contracted(s, &c, &SamplingConfig::default());
                assert!(rep.pass, "{} {mode:?} {seed}: {}", s.name(), rep.max_violation);
                let g = generic_cat0_audit(&c, 1.0).unwrap();
                assert!(g.pass, "{}", g.csv_row());
            }
        }
    }
}

#[test]
fn rejection_curves_grow() {
    let s = Space::euclidean(2).unwrap();
    let c = random_self_contracted(&s, 40, 9, GenMode::Rejection).unwrap();
    assert!(c.len() >= 20, "{}", c.len());
}

fn plane_curves(n: usize) -> Vec<Curve> {
    let s = Space::euclidean(2).unwrap();
    (0..n as u64)
        .map(|seed| {
            let mode = if seed % 2 == 0 {
                GenMode::Gradient
            } else {
                GenMode::Rejection
            };
            random_self_contracted(&s, 15, seed, mode).unwrap()
        })
        .collect()
}

#[test]
fn decrease_holds_on_planar_curves() {
    let eps = 1.0 / 54.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = f64::NEG_INFINITY;
    for c in plane_curves(20) {
        let times = c.times();
        for _ in 0..5 {
            let i = rng.random_range(0..times.len());
            let j = rng.random_range(i..times.len());
            let Some(cc) = tail_cover_center(&c, times[i]).unwrap() else {
                continue;
            };
            assert!(cc.m <= 9);
            for _ in 0..5 {
                let v = perturb_direction(&cc.direction, 2.0 * (eps / 2.0f64).asin(), &mut rng).unwrap();
                worst = worst.max(directional_decrease_check(&c, times[i], times[j], &v, eps).unwrap());
            }
            let probes =
                perturbed_basepoint_check(&c, times[i], times[j], &cc.direction, eps, 1.0, 3, &mut rng).unwrap();
            for p in probes {
                worst = worst.max(p.residual);
            }
        }
    }
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn telescoped_widths() {
    let eps = 1.0 / 54.0;
    let a = 4.0 * (eps / 2.0f64).asin();
    let s = Space::euclidean(2).unwrap();
    for c in plane_curves(20) {
        let w = mean_width(&s, &WidthTarget::Points(c.image_points(0, 3)), &WidthConfig::default()).unwrap();
        assert!(a / (2.0 * PI) * eps * c.length() <= w.mean_width * (1.0 + 1e-12));
        let r = euclidean_length_bound(&c, 4, &WidthConfig::default()).unwrap();
        assert!(r.pass);
    }
}

#[test]
fn containment_failure_claims_no_bound() {
    let s = Space::euclidean(2).unwrap();
    let c = Curve::from_points(s.clone(), Mode::Discrete, vec![e(&[0.0, 0.0]), e(&[1.0, 0.0])]).unwrap();
    let region = sccurve::spaces::constants::Region::Neighborhood {
        points: vec![e(&[0.0, 0.0])],
        radius: 1.0,
    };
    let k = s.estimate_condition_constants(&region, 0.5).unwrap();
    let r = generic_cat0_bound(&c, &k, &region).unwrap();
    assert!(r.bound.is_none() && !r.pass && r.note.is_some());
}

#[test]
fn csv_and_json_rows() {
    let r = tree_length_bound(&spider_jump_curve(3).unwrap()).unwrap();
    let row = r.csv_row();
    assert_eq!(row.split(',').count(), BoundReport::CSV_HEADER.split(',').count());
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["bound"], serde_json::json!(r.bound.unwrap()));
}
