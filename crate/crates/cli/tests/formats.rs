use binomap::format::{read_cloud, read_trajectory, write_cloud, write_trajectory};
use binomap_core::{BimanualTrajectory, Point3, PointCloud, Pose, Rotation};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point3> {
    prop::array::uniform3(-10.0..10.0f64).prop_map(Point3::from_array)
}

fn pose() -> impl Strategy<Value = Pose> {
    (point(), point(), 0.0..3.1f64).prop_map(|(p, axis, angle)| {
        let axis = axis.try_normalize().unwrap_or(Point3::Z);
        Pose::new(p, Rotation::from_axis_angle(axis, angle))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectory_file_round_trip_is_exact(poses in prop::collection::vec((pose(), pose()), 1..20), t0 in -50i64..50) {
        let (left, right): (Vec<Pose>, Vec<Pose>) = poses.into_iter().unzip();
        let steps = (t0..t0 + left.len() as i64).collect();
        let traj = BimanualTrajectory::new(steps, left, right).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        write_trajectory(&path, &traj).unwrap();
        prop_assert_eq!(read_trajectory(&path).unwrap(), traj);
    }

    #[test]
    fn cloud_files_round_trip_exactly(points in prop::collection::vec(point(), 0..50)) {
        let cloud = PointCloud::new(points);
        let dir = tempfile::tempdir().unwrap();
        for name in ["c.ply", "c.csv", "c.json"] {
            let path = dir.path().join(name);
            write_cloud(&path, &cloud).unwrap();
            let back = read_cloud(&path).unwrap();
            prop_assert_eq!(back.points(), cloud.points(), "{}", name);
        }
    }

    #[test]
    fn organized_cloud_json_round_trip(w in 1usize..6, h in 1usize..6, seed in any::<u64>()) {
        let n = w * h;
        let points: Vec<Point3> = (0..n).map(|i| Point3::new(i as f64 * 0.1, (seed % 97) as f64 * 1e-3, 0.5)).collect();
        let valid: Vec<bool> = (0..n).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let cloud = PointCloud::organized(w, h, points, valid).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scene.json");
        write_cloud(&path, &cloud).unwrap();
        prop_assert_eq!(read_cloud(&path).unwrap(), cloud.clone());
        prop_assert!(write_cloud(&dir.path().join("scene.ply"), &cloud).is_err());
    }
}
