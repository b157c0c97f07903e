use std::f64::consts::{FRAC_PI_2, PI};

use binomap_core::smooth::{
    select_anchors, smooth_positions, smooth_rotations, smooth_trajectory, AnchorSet, SmoothConfig,
};
use binomap_core::{Arm, BimanualTrajectory, Point3, Pose, Rotation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn arc(n: usize, radius: f64, sweep: f64) -> Vec<Point3> {
    (0..n)
        .map(|i| {
            let a = sweep * i as f64 / (n - 1) as f64;
            Point3::new(radius * a.cos(), 0.0, radius * a.sin())
        })
        .collect()
}

fn rms(a: &[Point3], b: &[Point3]) -> f64 {
    (a.iter().zip(b).map(|(p, q)| p.distance_squared(*q)).sum::<f64>() / a.len() as f64).sqrt()
}

#[test]
fn quarter_circle_beats_polyline() {
    let r = 0.2;
    let pts: Vec<Point3> = arc(20, r, FRAC_PI_2).iter().map(|p| Point3::new(p.x, p.z, 0.0)).collect();
    let cfg = SmoothConfig { spline_control_points: Some(10), ..Default::default() };
    let out = smooth_positions(&pts, &cfg).unwrap();
    let sagitta = r * (1.0 - (FRAC_PI_2 / 19.0 / 2.0).cos());
    let worst = (0..=1000)
        .map(|k| (out.curve.eval(k as f64 / 1000.0).norm() - r).abs())
        .fold(0.0, f64::max);
    assert!(worst < sagitta, "{worst} vs {sagitta}");
    assert!(out.smoothed[0].distance(pts[0]) < 1e-9);
    assert!(out.smoothed[19].distance(pts[19]) < 1e-9);
}

#[test]
fn noisy_arc_error_halves_on_average() {
    let truth = arc(30, 0.15, FRAC_PI_2);
    let noise = Normal::new(0.0, 0.002).unwrap();
    let cfg = SmoothConfig { spline_control_points: Some(5), ..Default::default() };
    let ratios: Vec<f64> = (0..50)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<Point3> = truth
                .iter()
                .map(|p| *p + Point3::new(noise.sample(&mut rng), noise.sample(&mut rng), noise.sample(&mut rng)))
                .collect();
            let out = smooth_positions(&raw, &cfg).unwrap();
            rms(&out.smoothed, &truth) / rms(&raw, &truth)
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(mean <= 0.5, "mean ratio {mean}");
    assert!(ratios.iter().all(|r| *r < 1.0));
}

proptest! {
    #[test]
    fn outputs_are_coplanar_with_fixed_ends(seed in any::<u64>(), n in 4usize..40, top_n in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Point3> = (0..n)
            .map(|_| Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let cfg = SmoothConfig { top_n, ..Default::default() };
        let out = smooth_positions(&pts, &cfg).unwrap();
        for p in &out.smoothed {
            prop_assert!(out.plane.signed_distance(*p).abs() < 1e-9);
        }
        let project = |p: Point3| p - out.plane.normal * out.plane.signed_distance(p);
        prop_assert!(out.smoothed[0].distance(project(pts[0])) < 1e-9);
        prop_assert!(out.smoothed[n - 1].distance(project(pts[n - 1])) < 1e-9);
        prop_assert!(out.parameters.windows(2).all(|w| w[0] <= w[1]));
        for (d, (r, s)) in out.deviations.iter().zip(pts.iter().zip(&out.smoothed)) {
            prop_assert_eq!(*d, r.distance(*s));
        }
    }

    #[test]
    fn anchors_match_sort_oracle(devs in prop::collection::vec(0u8..20, 1..30), top_n in 0usize..10) {
        let devs: Vec<f64> = devs.into_iter().map(f64::from).collect();
        let n = devs.len();
        let mut inner: Vec<(f64, usize)> = (1..n.saturating_sub(1)).map(|i| (devs[i], i)).collect();
        inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expect: Vec<usize> = inner.into_iter().take(top_n).map(|(_, i)| i).collect();
        expect.push(0);
        if n > 1 {
            expect.push(n - 1);
        }
        expect.sort();
        let got = select_anchors(&devs, top_n);
        prop_assert_eq!(got.indices(), &expect[..]);
    }

    #[test]
    fn smoothed_rotations_are_valid(seed in any::<u64>(), n in 2usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rots: Vec<Rotation> = (0..n)
            .map(|_| Rotation::from_axis_angle(Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 1.0), rng.random_range(0.0..PI)))
            .collect();
        let mut idx: Vec<usize> = (1..n - 1).filter(|_| rng.random_bool(0.3)).collect();
        idx.insert(0, 0);
        idx.push(n - 1);
        let anchors = AnchorSet::new(idx.clone(), n).unwrap();
        let out = smooth_rotations(&rots, &anchors).unwrap();
        for (i, r) in out.iter().enumerate() {
            prop_assert!(r.orthonormality_error() < 1e-9);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-9);
            if idx.contains(&i) {
                prop_assert_eq!(*r, rots[i]);
            }
        }
    }
}

#[test]
fn quarter_turn_midpoint() {
    let r2 = Rotation::from_axis_angle(Point3::Z, FRAC_PI_2);
    let out = smooth_rotations(&[Rotation::IDENTITY, r2, r2], &AnchorSet::new(vec![0, 2], 3).unwrap()).unwrap();
    let expect = Rotation::from_axis_angle(Point3::Z, FRAC_PI_2 / 2.0);
    assert!(out[1].frobenius_distance(&expect) < 1e-12);
}

#[test]
fn third_turns_about_common_axis() {
    let axis = Point3::new(0.2, -0.5, 0.8).try_normalize().unwrap();
    let r4 = Rotation::from_axis_angle(axis, 2.0 * PI / 3.0);
    let rots = [Rotation::IDENTITY, r4, Rotation::IDENTITY, r4, r4];
    let out = smooth_rotations(&rots, &AnchorSet::new(vec![0, 4], 5).unwrap()).unwrap();
    for (k, r) in out.iter().enumerate().take(4).skip(1) {
        let expect = Rotation::from_axis_angle(axis, k as f64 * PI / 6.0);
        assert!(r.frobenius_distance(&expect) < 1e-12, "frame {k}");
    }
}

#[test]
fn trajectory_smoothing_is_per_arm() {
    let left: Vec<Pose> = arc(12, 0.1, FRAC_PI_2).into_iter().map(|p| Pose::new(p, Rotation::IDENTITY)).collect();
    let right: Vec<Pose> = arc(12, 0.2, PI)
        .into_iter()
        .map(|p| Pose::new(Point3::new(p.x, p.z, 0.3), Rotation::from_axis_angle(Point3::X, p.x)))
        .collect();
    let traj = BimanualTrajectory::from_arms(left, right).unwrap();
    let cfg = SmoothConfig { top_n: 10, spline_control_points: Some(12), ..Default::default() };
    let out = smooth_trajectory(&traj, &cfg, &cfg).unwrap();
    assert_eq!(out.trajectory.len(), 12);
    for arm in [Arm::Left, Arm::Right] {
        let plane = out.arm(arm).plane;
        for p in out.trajectory.positions(arm) {
            assert!(plane.signed_distance(p).abs() < 1e-9);
        }
        // Saturated control points and anchors: an already smooth coplanar
        // trajectory passes through unchanged.
        for (a, b) in out.trajectory.arm(arm).iter().zip(traj.arm(arm)) {
            assert!(a.position.distance(b.position) < 1e-9);
            assert_eq!(a.orientation, b.orientation);
        }
    }
    assert!(out.left.plane.normal.cross(out.right.plane.normal).norm() > 0.5);
}

#[test]
fn three_frames_rejected() {
    let p = Pose::default();
    let traj = BimanualTrajectory::from_arms(vec![p; 3], vec![p; 3]).unwrap();
    let err = smooth_trajectory(&traj, &SmoothConfig::default(), &SmoothConfig::default()).unwrap_err();
    assert_eq!(err.kind(), "DegenerateInput");
}

#[test]
fn parked_arm_keeps_its_position() {
    let right: Vec<Pose> = arc(10, 0.2, FRAC_PI_2).into_iter().map(|p| Pose::new(p, Rotation::IDENTITY)).collect();
    let left: Vec<Pose> = (0..10)
        .map(|i| Pose::new(Point3::new(-0.1, 0.0, 0.05), Rotation::from_axis_angle(Point3::Z, 0.01 * i as f64)))
        .collect();
    let traj = BimanualTrajectory::from_arms(left.clone(), right).unwrap();
    let out = smooth_trajectory(&traj, &SmoothConfig::default(), &SmoothConfig::default()).unwrap();
    assert!(out.left.deviations.iter().all(|d| *d == 0.0));
    for (a, b) in out.trajectory.left().iter().zip(&left) {
        assert_eq!(a.position, b.position);
        assert!(a.orientation.orthonormality_error() < 1e-12);
    }
}
