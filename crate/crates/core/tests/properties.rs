use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tameplan::geometry::{line_of, line_projection, tangent_field};
use tameplan::pathkit::{concat_paths, transport_section, Homotopy, Trajectory};
use tameplan::planner_even::{
    cp_bar, collapse_to_line, desingularize_line, line_coordinates, rotate_to_reference, OriginLineSection,
};
use tameplan::planner_general::{collapse_to_axis, cp, desingularize, gamma_n, AxisSection};
use tameplan::random::{random_axis_query, random_direction, random_origin_line_query};
use tameplan::verify::{scan_collisions, transport_schedule};
use tameplan::{Algorithm, Configuration, Motion, Point, Query, Tolerances, UnitVector};

fn config_strategy(dim: std::ops::Range<usize>) -> impl Strategy<Value = Configuration> {
    (dim, 2usize..6)
        .prop_flat_map(|(d, k)| prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d), k))
        .prop_filter_map("robots too close", |coords| {
            let c = Configuration::from_coords(coords, 1e-9).ok()?;
            (c.min_separation() > 1e-3).then_some(c)
        })
}

fn even_config() -> impl Strategy<Value = Configuration> {
    (1usize..4, 2usize..6)
        .prop_flat_map(|(h, k)| prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2 * h), k))
        .prop_filter_map("robots too close", |coords| {
            let c = Configuration::from_coords(coords, 1e-9).ok()?;
            (c.min_separation() > 1e-3).then_some(c)
        })
}

fn brute_min_distance(c: &Configuration) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in c.points().iter().enumerate() {
        for b in &c.points()[i + 1..] {
            best = best.min(a.distance(b));
        }
    }
    best
}

#[test]
fn tangent_field_is_orthogonal_and_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in [2, 4, 6] {
        for _ in 0..1000 {
            let e = random_direction(&mut rng, d);
            let v = tangent_field(&e).unwrap();
            assert!(v.dot(&e).abs() <= 1e-12);
            let len = v.coords().iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((len - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn stationary_transport_is_image_equal_to_section() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tol = Tolerances::default();
    let stationary = Homotopy::stationary();
    for n in 2..=4 {
        for k in 2..=4 {
            let q = random_axis_query(&mut rng, 3, k, n);
            let moved = transport_section(&stationary, &AxisSection, q.configs()).unwrap();
            let direct = gamma_n(q.configs()).unwrap();
            let q2 = random_origin_line_query(&mut rng, 4, k, n);
            let moved2 = transport_section(&stationary, &OriginLineSection { tol }, q2.configs()).unwrap();
            let direct2 = tameplan::planner_even::gamma_bar_n(q2.configs(), &tol).unwrap();
            for i in 0..=600 {
                let tau = i as f64 / 600.0;
                let s = transport_schedule(n, tau);
                assert!(moved.eval(tau).distance(&direct.eval(s)) <= 1e-9);
                assert!(moved2.eval(tau).distance(&direct2.eval(s)) <= 1e-9);
            }
        }
    }
}

#[test]
fn plans_are_deterministic() {
    let q = Algorithm::Even.witness(2, 3, 3, 6).unwrap();
    for algorithm in [Algorithm::General, Algorithm::Even] {
        let planner = algorithm.planner(Tolerances::default());
        let a = planner.plan(&q).unwrap();
        let b = planner.plan(&q).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert_eq!(a.eval(t), b.eval(t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn accepted_configurations_are_separated(coords in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 2..6)) {
        if let Ok(c) = Configuration::from_coords(coords, 1e-3) {
            prop_assert!(brute_min_distance(&c) > 1e-3);
        }
    }

    #[test]
    fn line_projection_is_idempotent(c in config_strategy(2..6), x in prop::collection::vec(-5.0f64..5.0, 6)) {
        let x = Point::new(x[..c.dim()].to_vec());
        let once = line_projection(&c, &x, 1e-9).unwrap();
        let twice = line_projection(&c, &once, 1e-9).unwrap();
        prop_assert!(once.distance(&twice) <= 1e-12 * (1.0 + once.norm()));
    }

    #[test]
    fn line_direction_is_translation_invariant(c in config_strategy(2..6), w in prop::collection::vec(-10.0f64..10.0, 6)) {
        let moved = c.translate(&w[..c.dim()]);
        let (_, e) = line_of(&c, 1e-9).unwrap();
        let (_, e2) = line_of(&moved, 1e-9).unwrap();
        prop_assert!(e.dot(&e2) >= 1.0 - 1e-12);
    }

    #[test]
    fn concatenation_keeps_endpoints(c in config_strategy(2..4), w in prop::collection::vec(-3.0f64..3.0, 4)) {
        let shifted = c.translate(&w[..c.dim()]);
        let a = Trajectory::from_motion(Motion::linear(&c, &shifted));
        let b = Trajectory::from_motion(Motion::linear(&shifted, &c));
        let joined = concat_paths(&[a.clone(), b.clone(), a.clone()]).unwrap();
        prop_assert_eq!(joined.eval(0.0), a.eval(0.0));
        prop_assert_eq!(joined.eval(1.0), a.eval(1.0));
        prop_assert!(joined.junction_gap_max() <= 1e-9);
    }

    #[test]
    fn axis_desingularization_is_safe(c in config_strategy(2..5), tie in 0usize..5) {
        // force a shared first coordinate so the motion is not trivial
        let mut coords = c.to_coords();
        let other = tie % coords.len();
        coords[other][0] = coords[0][0];
        let Ok(c) = Configuration::from_coords(coords, 1e-9) else { return Ok(()) };
        let tol = Tolerances::default();
        let motion = desingularize(&c, &tol).unwrap();
        let mut last = cp(&c, &tol).unwrap();
        for i in 1..=100 {
            let x = motion.eval(i as f64 / 100.0);
            prop_assert!(x.min_separation() > 0.0);
            if let Ok(now) = cp(&x, &tol) {
                prop_assert!(now >= last);
                last = now;
            }
        }
        prop_assert_eq!(cp(&motion.eval(1.0), &tol).unwrap(), c.robots());
        let flat = collapse_to_axis(&motion.eval(1.0), &tol).unwrap();
        let path = Trajectory::from_motion(motion);
        prop_assert!(scan_collisions(&path, 100).is_ok());
        prop_assert!(scan_collisions(&Trajectory::from_motion(flat), 100).is_ok());
    }

    #[test]
    fn line_stages_keep_direction(c in even_config(), tie in 2usize..5) {
        // tie a robot's line coordinate to x_1's so the desingularization moves
        let tol = Tolerances::default();
        let mut c = c;
        if tie < c.robots() {
            let (e, along) = line_coordinates(&c, &tol).unwrap();
            let moved = c.point(tie).add_scaled(-along[tie], e.coords());
            let mut pts = c.points().to_vec();
            pts[tie] = moved;
            match Configuration::new(pts, 1e-3) {
                Ok(t) => c = t,
                Err(_) => return Ok(()),
            }
        }
        let (e, _) = line_coordinates(&c, &tol).unwrap();
        let desing = desingularize_line(&c, &tol).unwrap();
        let spread = desing.eval(1.0);
        prop_assert_eq!(cp_bar(&spread, &tol).unwrap(), c.robots());
        let collapse = collapse_to_line(&spread, &tol).unwrap();
        for motion in [&desing, &collapse] {
            for i in 0..100 {
                let x = motion.eval(i as f64 / 99.0);
                let (e2, _) = line_coordinates(&x, &tol).unwrap();
                prop_assert!(e.dot(&e2) >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn rotation_is_an_isometry(h in 1usize..4, offsets in prop::collection::vec(-4.0f64..4.0, 2..5), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 * h;
        let dir = random_direction(&mut rng, d);
        let reference = random_direction(&mut rng, d);
        prop_assume!(dir.dot(&reference) > -0.99);
        let mut offsets = offsets;
        offsets.sort_by(f64::total_cmp);
        offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(offsets.len() >= 2);
        let points: Vec<Point> = offsets.iter().map(|a| Point::new(dir.coords().iter().map(|c| a * c).collect())).collect();
        let c = Configuration::new(points, 1e-9).unwrap();
        let tol = Tolerances::default();
        let motion = rotate_to_reference(&c, &reference, &tol).unwrap();
        for i in 0..=50 {
            let x = motion.eval(i as f64 / 50.0);
            for (p, q) in x.points().iter().zip(c.points()) {
                prop_assert!((p.norm() - q.norm()).abs() <= 1e-9);
            }
        }
        let end = motion.eval(1.0);
        let (_, e_end) = line_of(&end, 1e-9).unwrap();
        prop_assert!(e_end.dot(&reference).abs() >= 1.0 - 1e-9);
    }

    #[test]
    fn plans_hit_waypoints(seed in 0u64..10_000, d in 2usize..5, k in 2usize..5, n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let algorithms: &[Algorithm] = if d % 2 == 0 { &[Algorithm::General, Algorithm::Even] } else { &[Algorithm::General] };
        for &algorithm in algorithms {
            let q: Query = tameplan::random::random_query(&mut rng, algorithm, d, k, n).unwrap();
            let traj = algorithm.planner(Tolerances::default()).plan(&q).unwrap();
            prop_assert!(tameplan::verify::check_waypoints(&traj, &q) <= 1e-9);
            prop_assert!(traj.junction_gap_max() <= 1e-9);
        }
    }
}

#[test]
fn unit_vector_rejects_non_unit() {
    assert!(UnitVector::checked(vec![1.0, 1.0], 1e-9).is_err());
    assert!(UnitVector::checked(vec![0.6, 0.8], 1e-9).is_ok());
}
