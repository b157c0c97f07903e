use binomap_core::adjust::Outcome;
use binomap_core::oracle::{verify_geometric, verify_window, FrameRange, OracleConfig, WindowOracle};
use binomap_core::{Arm, BimanualTrajectory, Point3, PointCloud, Pose, Rotation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn box_cloud(rng: &mut impl Rng, n: usize) -> PointCloud {
    PointCloud::new(
        (0..n)
            .map(|_| {
                let mut p = [rng.random_range(0.0..0.2), rng.random_range(0.0..0.1), rng.random_range(0.0..0.1)];
                // Push each sample onto a face of the box.
                let axis = rng.random_range(0..3);
                p[axis] = if rng.random_bool(0.5) { 0.0 } else { [0.2, 0.1, 0.1][axis] };
                Point3::from_array(p)
            })
            .collect(),
    )
}

fn random_traj(rng: &mut impl Rng, n: usize) -> BimanualTrajectory {
    let mut pose = || Pose::new(
        Point3::new(rng.random_range(-0.05..0.25), rng.random_range(-0.05..0.15), rng.random_range(-0.05..0.15)),
        Rotation::IDENTITY,
    );
    let left = (0..n).map(|_| pose()).collect();
    let right = (0..n).map(|_| pose()).collect();
    BimanualTrajectory::from_arms(left, right).unwrap()
}

proptest! {
    #[test]
    fn widening_window_keeps_success(seed in any::<u64>(), lo in 0.0..0.01f64, w in 0.0..0.01f64, grow_lo in 0.0..0.01f64, grow_hi in 0.0..0.01f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = box_cloud(&mut rng, 200);
        let traj = random_traj(&mut rng, 1);
        let narrow = WindowOracle::new(lo, lo + w).unwrap();
        let wide = WindowOracle::new((lo - grow_lo).max(0.0), lo + w + grow_hi).unwrap();
        if verify_window(&traj, Arm::Right, &cloud, &narrow).is_success() {
            prop_assert!(verify_window(&traj, Arm::Right, &cloud, &wide).is_success());
        }
    }

    #[test]
    fn geometric_verdict_is_rigid_invariant(seed in any::<u64>(), angle in 0.0..6.2f64, t in prop::array::uniform3(-1.0..1.0f64)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = box_cloud(&mut rng, 300);
        let traj = random_traj(&mut rng, 5);
        let r = Rotation::from_axis_angle(Point3::new(0.3, -0.4, 1.0), angle);
        let t = Point3::from_array(t);
        let moved_cloud = cloud.transformed(&r, t);
        let moved = BimanualTrajectory::from_arms(
            traj.left().iter().map(|p| Pose::new(r.apply(p.position) + t, r * p.orientation)).collect(),
            traj.right().iter().map(|p| Pose::new(r.apply(p.position) + t, r * p.orientation)).collect(),
        )
        .unwrap();
        let cfg = OracleConfig { loss_threshold: 0.03, compress_threshold: 0.01, contact_frames: None };
        let a = verify_geometric(&traj, Arm::Right, &cloud, &cfg);
        let b = verify_geometric(&moved, Arm::Right, &moved_cloud, &cfg);
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(verify_geometric(&traj, Arm::Right, &cloud, &cfg), a);
    }
}

#[test]
fn lowest_failing_frame_is_reported() {
    let cloud = PointCloud::new(
        (0..11).flat_map(|i| (0..11).map(move |j| Point3::new(i as f64 * 0.01, j as f64 * 0.01, 0.0))).collect(),
    );
    let heights = [0.0, 0.001, 0.02, 0.0, 0.03];
    let right: Vec<Pose> = heights.iter().map(|z| Pose::new(Point3::new(0.05, 0.05, *z), Rotation::IDENTITY)).collect();
    let traj = BimanualTrajectory::from_arms(right.clone(), right).unwrap();
    let r = verify_geometric(&traj, Arm::Right, &cloud, &OracleConfig::default());
    assert_eq!(r.outcome, Outcome::ContactLoss);
    assert!(r.detail.starts_with("frame 2:"), "{}", r.detail);
    let first_two = OracleConfig { contact_frames: Some(FrameRange { first: 0, last: 1 }), ..Default::default() };
    assert!(verify_geometric(&traj, Arm::Right, &cloud, &first_two).is_success());
}
