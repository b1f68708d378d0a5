use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sccurve::bounds::*;
use sccurve::flow::*;
use sccurve::four_point::{four_point_subembed, quad_from_points};
use sccurve::io::{curve_from_json, curve_to_json};
use sccurve::metric::{
    cat0_inequality_residual, comparison_angle, comparison_sequence, default_schedule, stage_tolerance, upper_angle,
};
use sccurve::spaces::directions::greedy_separated;
use sccurve::spaces::{ConePoint, Direction, TreeSpace};
use sccurve::verify::*;
use sccurve::{Curve, Mode, Point, Space};

const N_SPACES: usize = 7;

fn space_of(i: usize, seed: u64) -> Space {
    match i % N_SPACES {
        0 => Space::euclidean(2).unwrap(),
        1 => Space::euclidean(3).unwrap(),
        2 => Space::hyperbolic(),
        3 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Space::tree(TreeSpace::random(rng.random_range(1..20), 6, &mut rng).unwrap())
        }
        4 => Space::spider(5, 1.5).unwrap(),
        5 => Space::book(3).unwrap(),
        _ => Space::product(Space::euclidean(1).unwrap(), Space::spider(3, 1.0).unwrap()),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cat0_inequality_holds(i in 0..N_SPACES, seed: u64, s in prop::sample::select(vec![0.25, 0.5, 0.75])) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        for _ in 0..50 {
            let (x, y, z) = (sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0));
            prop_assert!(cat0_inequality_residual(&sp, &x, &y, &z, s).unwrap() >= -1e-7);
        }
    }

    #[test]
    fn geodesics_have_constant_speed(i in 0..N_SPACES, seed: u64, s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let (x, y) = (sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0));
        let (gs, gt) = (sp.geo(&x, &y, s), sp.geo(&x, &y, t));
        prop_assert!((sp.d(&gs, &gt) - (t - s).abs() * sp.d(&x, &y)).abs() < 1e-7);
    }

    #[test]
    fn random_quadruples_subembed(i in 0..N_SPACES - 1, seed: u64) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let p: Vec<Point> = (0..4).map(|_| sp.random_point(&mut r, 3.0)).collect();
        let q = quad_from_points(&sp, &p[0], &p[1], &p[2], &p[3]);
        prop_assert!(four_point_subembed(q).unwrap().pass);
    }

    #[test]
    fn shrinking_comparison_angles_stay_below(i in 0..N_SPACES - 1, seed: u64) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let (x, y, z) = (sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0));
        prop_assume!(sp.d(&x, &y) > 1e-6 && sp.d(&x, &z) > 1e-6);
        let full = comparison_angle(&sp, &x, &y, &z).unwrap();
        let upper = upper_angle(&sp, &x, &y, &z, &default_schedule()).unwrap();
        let stages: Vec<f64> = (0..=20).map(|j| 0.5f64.powi(j)).collect();
        for (s, a) in stages.iter().zip(comparison_sequence(&sp, &x, &y, &z, &stages)) {
            let tol = stage_tolerance(&sp, &x, &y, &z, *s, a);
            prop_assert!(a <= full + tol);
            prop_assert!(upper <= a + tol);
        }
    }

    #[test]
    fn length_is_additive_and_refinement_invariant(i in 0..N_SPACES, seed: u64, n in 2usize..8, frac in 0.01..0.99f64) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let pts: Vec<Point> = (0..n).map(|_| sp.random_point(&mut r, 3.0)).collect();
        let c = Curve::from_points(sp.clone(), Mode::GeodesicInterpolated, pts.clone()).unwrap();
        let cut = n / 2;
        let a = Curve::from_points(sp.clone(), Mode::GeodesicInterpolated, pts[..=cut].to_vec()).unwrap();
        let b = Curve::new(
            sp.clone(),
            Mode::GeodesicInterpolated,
            pts[cut..].iter().enumerate().map(|(j, p)| sccurve::Sample { t: (cut + j) as f64, p: p.clone() }).collect(),
            None,
        ).unwrap();
        let joined = a.concat(&b).unwrap();
        prop_assert!((joined.length() - (a.length() + b.length())).abs() < 1e-9);
        let refined = c.with_sample_at(frac * (n - 1) as f64).unwrap();
        prop_assert!((refined.length() - c.length()).abs() < 1e-7);
    }

    #[test]
    fn book_distance_matches_spine_search(seed: u64) {
        let sp = Space::book(3).unwrap();
        let mut r = rng(seed);
        let (p, q) = (sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0));
        let (Point::Book { sheet: s1, a: a1, b: b1 }, Point::Book { sheet: s2, a: a2, b: b2 }) = (&p, &q) else { unreachable!() };
        let oracle = if s1 == s2 || *b1 == 0.0 || *b2 == 0.0 {
            (a1 - a2).hypot(b1 - b2)
        } else {
            // shortest path through a spine point, on a fine grid
            let (lo, hi) = (a1.min(*a2) - 1.0, a1.max(*a2) + 1.0);
            (0..=200_000)
                .map(|j| {
                    let s = lo + (hi - lo) * j as f64 / 200_000.0;
                    (a1 - s).hypot(*b1) + (a2 - s).hypot(*b2)
                })
                .fold(f64::INFINITY, f64::min)
        };
        prop_assert!((sp.d(&p, &q) - oracle).abs() < 1e-3);
    }

    #[test]
    fn direction_angles_satisfy_triangle_inequality(i in 0..N_SPACES, seed: u64) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let x = sp.random_point(&mut r, 3.0);
        let d: Vec<Direction> = (0..3).map(|_| sp.random_direction(&mut r, &x)).collect();
        let a = |u: &Direction, v: &Direction| sp.direction_angle(u, v).unwrap();
        prop_assert!(a(&d[0], &d[2]) <= a(&d[0], &d[1]) + a(&d[1], &d[2]) + 1e-9);
    }

    #[test]
    fn barycenter_variance_inequality(n in 2usize..4, seed: u64, k in 1usize..8) {
        let sp = Space::euclidean(n).unwrap();
        let mut r = rng(seed);
        let x = sp.random_point(&mut r, 1.0);
        let dirs: Vec<Direction> = (0..k).map(|_| sp.random_direction(&mut r, &x)).collect();
        let v = sp.cone_barycenter(&dirs).unwrap();
        let unit = |d: &Direction| ConePoint { direction: d.clone(), radius: 1.0 };
        let mean_sq = |w: &ConePoint| dirs.iter().map(|g| sp.cone_point_distance(w, &unit(g)).powi(2)).sum::<f64>() / k as f64;
        let base = mean_sq(&v);
        for _ in 0..100 {
            let w = ConePoint { direction: sp.random_direction(&mut r, &x), radius: 2.0 * r.random::<f64>() };
            let res = mean_sq(&w) - sp.cone_point_distance(&w, &v).powi(2) - base;
            prop_assert!(res >= -1e-9, "{res}");
        }
    }

    #[test]
    fn cover_center_radius_and_cardinality(n in 2usize..4, seed: u64, k in 1usize..30) {
        let sp = Space::euclidean(n).unwrap();
        let mut r = rng(seed);
        let x = sp.random_point(&mut r, 1.0);
        let axis = sp.random_direction(&mut r, &x);
        // directions within pi/4 of an axis have angular diameter <= pi/2
        let dirs: Vec<Direction> = (0..k)
            .map(|_| perturb_direction(&axis, PI / 4.0, &mut r).unwrap())
            .collect();
        let cc = sp.direction_cover_center(&dirs).unwrap();
        prop_assert!(cc.radius <= cc.guaranteed_radius() + 1e-12);
        prop_assert!(cc.m <= 3usize.pow(n as u32));
        let all: Vec<Direction> = (0..200).map(|_| sp.random_direction(&mut r, &x)).collect();
        prop_assert!(greedy_separated(&sp, &all).len() <= 3usize.pow(n as u32));
    }

    #[test]
    fn widths_are_monotone_and_below_diameter(seed: u64, n in 2usize..30) {
        let sp = Space::euclidean(3).unwrap();
        let mut r = rng(seed);
        let pts: Vec<Point> = (0..n).map(|_| sp.random_point(&mut r, 2.0)).collect();
        let cfg = WidthConfig { seed, ..Default::default() };
        let small = mean_width(&sp, &WidthTarget::Points(pts[..n / 2 + 1].to_vec()), &cfg).unwrap();
        let big = mean_width(&sp, &WidthTarget::Points(pts.clone()), &cfg).unwrap();
        // same seed and directions: monotone per direction, hence exactly
        prop_assert!(small.mean_width <= big.mean_width);
        let diam = sccurve::metric::diameter(&sp, &pts);
        prop_assert!(big.mean_width <= diam + 3.0 * big.stderr);
    }

    #[test]
    fn curve_files_round_trip(i in 0..N_SPACES, seed: u64, n in 1usize..6) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let pts: Vec<Point> = (0..n).map(|_| sp.random_point(&mut r, 3.0)).collect();
        let c = Curve::from_points(sp, Mode::GeodesicInterpolated, pts).unwrap();
        prop_assert_eq!(curve_from_json(&curve_to_json(&c)).unwrap(), c);
    }
}

fn random_run(i: usize, seed: u64) -> (Space, ObjectiveFn, GradientCurveRun) {
    let sp = space_of(i, seed);
    let mut r = rng(seed);
    let catalog: Vec<ObjectiveFn> = builtin_objectives(&sp)
        .into_iter()
        .filter(|f| f.lower_bound.is_some())
        .collect();
    let f = catalog[r.random_range(0..catalog.len())].clone();
    let x0 = sp.random_point(&mut r, 3.0);
    let taus: Vec<f64> = (0..8).map(|_| r.random_range(0.1..1.5)).collect();
    let run = discrete_gradient_curve(&f, &sp, &x0, &taus, &SolverConfig::default()).unwrap();
    (sp, f, run)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gradient_runs_are_self_contracted(i in 0..N_SPACES - 1, seed: u64) {
        let (sp, _f, run) = random_run(i, seed);
        for m in 0..run.len() {
            for l in 0..m {
                for k in 0..l {
                    prop_assert!(sp.d(&run.points[l], &run.points[m]) <= sp.d(&run.points[k], &run.points[m]) + 1e-9);
                }
            }
        }
        for w in run.values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        let c = geodesic_interpolation(&sp, &run).unwrap();
        let cfg = SamplingConfig::random(1000, seed);
        prop_assert!(is_self_contracted(&sp, &c, &cfg).pass);

        // consequences on passing curves
        prop_assert!(half_distance_check(&sp, &c, 1e-9).pass);
        let sweep = angle_sweep(&sp, &c, 200, seed);
        prop_assert!(sweep.max_angle < FRAC_PI_2 + 1e-6);
        let mut r = rng(seed ^ 1);
        for _ in 0..20 {
            let x = sp.random_point(&mut r, 3.0);
            let rad = r.random_range(0.1..3.0);
            prop_assert!(ball_confinement_check(&sp, &c, &x, rad, 3).unwrap().pass);
        }
        let end = *c.times().last().unwrap();
        for _ in 0..10 {
            let mut times: Vec<f64> = (0..12).map(|_| r.random_range(0.0..10.0)).collect();
            times.sort_by(f64::total_cmp);
            times.dedup();
            let a = r.random_range(0.2..3.0);
            let phi = move |t: f64| (end * (t / 10.0).powf(a)).min(end);
            prop_assert!(reparam_preserves(&sp, &c, phi, &times, &SamplingConfig::default()).unwrap().pass);
        }
        prop_assert!(generic_cat0_audit(&c, 1.0).unwrap().pass);
    }

    #[test]
    fn resolvent_beats_a_dense_sweep(seed: u64, which in 0usize..6) {
        let sp = Space::euclidean(1).unwrap();
        let mut r = rng(seed);
        let f = builtin_objectives(&sp).into_iter().filter(|f| f.lower_bound.is_some()).nth(which % 6).unwrap();
        let x = Point::Euclidean(vec![r.random_range(-2.5..2.5)]);
        prop_assume!(f.in_domain(&x));
        let tau = r.random_range(0.1..1.0);
        let res = resolvent(&f, &sp, &x, tau, &SolverConfig::default()).unwrap();
        let phi = |z: f64| f.eval(&sp, &Point::Euclidean(vec![z])) + (z - x.coords()[0]).powi(2) / (2.0 * tau);
        let best = (0..=100_000).map(|j| phi(-6.0 + 12.0 * j as f64 / 100_000.0)).fold(f64::INFINITY, f64::min);
        prop_assert!(res.value <= best + 1e-6, "{} {} {}", f.name, res.value, best);
    }

    #[test]
    fn convex_runs_contract(i in prop::sample::select(vec![0usize, 4, 5]), seed: u64) {
        let sp = space_of(i, seed);
        let mut r = rng(seed);
        let f = ObjectiveFn::half_squared_distance(sp.random_point(&mut r, 2.0));
        let taus: Vec<f64> = (0..10).map(|_| r.random_range(0.1..1.0)).collect();
        let a = discrete_gradient_curve(&f, &sp, &sp.random_point(&mut r, 3.0), &taus, &SolverConfig::default()).unwrap();
        let b = discrete_gradient_curve(&f, &sp, &sp.random_point(&mut r, 3.0), &taus, &SolverConfig::default()).unwrap();
        prop_assert!(contraction_check(&sp, &f, &a, &b, 1e-6).unwrap().pass);
    }

    #[test]
    fn cosine_identity_in_the_plane(seed: u64) {
        let sp = Space::euclidean(2).unwrap();
        let mut r = rng(seed);
        let (x, p, q) = (sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0), sp.random_point(&mut r, 3.0));
        // triangle x, p = xi(tau), q = xi(t): projections of xq and pq onto xp
        let a1 = comparison_angle(&sp, &x, &p, &q).unwrap();
        let a2 = comparison_angle(&sp, &p, &x, &q).unwrap();
        let lhs = sp.d(&x, &q) * a1.cos() + sp.d(&p, &q) * a2.cos();
        prop_assert!((lhs - sp.d(&x, &p)).abs() < 1e-7);
    }

    #[test]
    fn generated_curves_pass_their_audits(seed: u64, which in 0usize..4, rejection: bool) {
        let mode = if rejection { GenMode::Rejection } else { GenMode::Gradient };
        let mut r = rng(seed);
        let sp = match which {
            0 => Space::euclidean(2).unwrap(),
            1 => Space::tree(TreeSpace::random(r.random_range(1..50), 6, &mut r).unwrap()),
            2 => Space::spider(r.random_range(2..7), 1.0).unwrap(),
            _ => Space::book([2, 3, 5][r.random_range(0..3)]).unwrap(),
        };
        let c = random_self_contracted(&sp, 12, seed, mode).unwrap();
        prop_assert!(is_self_contracted(&sp, &c, &SamplingConfig::default()).pass);
        let rep = match which {
            0 => euclidean_length_bound(&c, 4, &WidthConfig::default()).unwrap(),
            1 | 2 => tree_length_bound(&c).unwrap(),
            _ => book_length_bound(&c).unwrap(),
        };
        prop_assert!(rep.pass, "{}", rep.csv_row());
        prop_assert!(generic_cat0_audit(&c, 1.0).unwrap().pass);
    }

    #[test]
    fn decrease_and_telescoping(seed: u64) {
        let sp = Space::euclidean(2).unwrap();
        let eps = 1.0 / 54.0;
        let mut r = rng(seed);
        let c = random_self_contracted(&sp, 12, seed, if seed % 2 == 0 { GenMode::Gradient } else { GenMode::Rejection }).unwrap();
        let times = c.times();
        for _ in 0..5 {
            let i = r.random_range(0..times.len());
            let j = r.random_range(i..times.len());
            if let Some(cc) = tail_cover_center(&c, times[i]).unwrap() {
                let v = perturb_direction(&cc.direction, 2.0 * (eps / 2.0f64).asin(), &mut r).unwrap();
                prop_assert!(directional_decrease_check(&c, times[i], times[j], &v, eps).unwrap() <= 1e-9);
            }
        }
        let w = mean_width(&sp, &WidthTarget::Points(c.image_points(0, 3)), &WidthConfig::default()).unwrap();
        let a = 4.0 * (eps / 2.0f64).asin();
        prop_assert!(a / (2.0 * PI) * eps * c.length() <= w.mean_width + 3.0 * w.stderr);
    }
}

#[test]
fn spherical_quadruple_fails() {
    let q = sccurve::four_point::Quad {
        wx: FRAC_PI_2,
        xy: FRAC_PI_2,
        yz: FRAC_PI_2,
        zw: FRAC_PI_2,
        wy: PI,
        xz: PI,
    };
    assert!(!four_point_subembed(q).unwrap().pass);
}

#[test]
fn witness_ratio_is_exact() {
    for k in 2..=20 {
        assert_eq!(unrectifiable_witness(k).unwrap().1.length_over_diam, (k - 1) as f64);
    }
}
