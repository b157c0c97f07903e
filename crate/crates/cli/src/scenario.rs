//! Seeded synthetic datasets standing in for recorded demonstrations.
//!
//! # Generative model
//!
//! Every scenario places one object on a table (`z = 0`, units m) and moves
//! both hands along a ground-truth path for 66 frames (10 fps). The annotated segment
//! is frames 3..=62; the hands rest at the start and end poses outside it.
//!
//! - **Hands.** A fixed 21-joint hand template (wrist 0, thumb 1-4, index
//!   5-8, middle 9-12, ring 13-16, pinky 17-20) is posed so that the
//!   thumb/index tip midpoint sits on the ground-truth contact, 8 mm off the
//!   object surface. Each frame adds one offset ~ N(0, σ²I) to the whole hand
//!   and independent N(0, (σ/4)²I) jitter to every joint. Joints are written
//!   in the camera frame.
//! - **Camera.** 400×300 pixels, fx = fy = 500, about 0.6 m from the motion.
//!   The motion plane of every hand is fronto-parallel.
//! - **Scene.** An organized cloud rendered from the camera. Pixels within a
//!   band around a hand's projected path carry the depth of that hand's
//!   motion plane, so lifting a contact pixel recovers the hand's position up
//!   to pixel quantization. Elsewhere the cloud shows the object (point
//!   splats), the table and a back wall. 2 % of pixels are dropped.
//! - **Objects.** Noise-free surface samples at about 1 mm spacing. The new
//!   instance is the base object scaled by 1.15 about its footprint centre
//!   and moved on the table.
//!
//! | scenario    | skill    | motion of the primary (right) arm              | support (left) arm |
//! |-------------|----------|------------------------------------------------|--------------------|
//! | pivot-bowl  | pivoting | 90° arc about the left contact, in `y = 0`     | holds the pivot    |
//! | poke-cup    | poking   | 40° arc about the cup's far bottom edge        | parked             |
//! | push-basket | pushing  | 8 cm push along −x, top-down camera            | pushes alongside   |
//! | wrap-ball   | wrapping | lift, carry 12 cm along +x, set down           | mirrors the right  |

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use binomap_core::adjust::SkillKind;
use binomap_core::retarget::{Camera, CameraIntrinsics, JOINT_COUNT};
use binomap_core::{fit_plane, Arm, BimanualTrajectory, Plane, Point3, PointCloud, Pose, Rotation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::config::{ArmSmoothBlock, CameraBlock, InputsBlock, PipelineConfig, SmoothBlock, VerifierBlock};
use crate::error::{CliError, CliResult};
use crate::format::{self, ArmName, HandEntry, HandFile, HANDS_VERSION, UNITS};

pub const FRAME_COUNT: i64 = 66;
pub const SEGMENT_START: i64 = 3;
pub const SEGMENT_END: i64 = 62;
pub const DEFAULT_SIGMA: f64 = 0.002;
/// Distance of the demonstrated contact point from the object surface.
pub const CLEARANCE: f64 = 0.008;
pub const DROPOUT: f64 = 0.02;
pub const IMAGE_WIDTH: usize = 400;
pub const IMAGE_HEIGHT: usize = 300;
pub const FOCAL: f64 = 500.0;
const SAMPLE_SPACING: f64 = 0.001;
const NEW_INSTANCE_SCALE: f64 = 1.15;
const MIN_BAND_PX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    PivotBowl,
    PokeCup,
    PushBasket,
    WrapBall,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::PivotBowl, Scenario::PokeCup, Scenario::PushBasket, Scenario::WrapBall];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::PivotBowl => "pivot-bowl",
            Scenario::PokeCup => "poke-cup",
            Scenario::PushBasket => "push-basket",
            Scenario::WrapBall => "wrap-ball",
        }
    }

    pub fn skill(self) -> SkillKind {
        match self {
            Scenario::PivotBowl => SkillKind::Pivoting,
            Scenario::PokeCup => SkillKind::Poking,
            Scenario::PushBasket => SkillKind::Pushing,
            Scenario::WrapBall => SkillKind::Wrapping,
        }
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Scenario> {
        Scenario::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| CliError::UnknownScenario(s.into()))
    }
}

/// Everything `gen` writes, in memory.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub scenario: Scenario,
    pub seed: u64,
    pub sigma: f64,
    pub hands: HandFile,
    /// Organized, camera frame.
    pub scene: PointCloud,
    pub object: PointCloud,
    pub object_new: PointCloud,
    /// Noise-free poses over the annotated segment.
    pub ground_truth: BimanualTrajectory,
    pub config: PipelineConfig,
}

/// Ground-truth left/right poses at motion phase `u ∈ [0, 1]`.
type Motion = Box<dyn Fn(f64) -> (Pose, Pose)>;

struct Layout {
    camera: Camera,
    object: Vec<Point3>,
    new_shift: Point3,
    motion: Motion,
    verifier: VerifierBlock,
    smooth: SmoothBlock,
}

/// Fingers along −x, palm normal up.
fn facing_neg_x() -> Rotation {
    Rotation::from_columns(Point3::Y, -Point3::X, Point3::Z).expect("rotation")
}

/// Fingers along +x, palm normal up.
fn facing_pos_x() -> Rotation {
    Rotation::from_columns(-Point3::Y, Point3::X, Point3::Z).expect("rotation")
}

/// Rotation in the `x–z` plane turning `+x` towards `+z`.
fn lift(angle: f64) -> Rotation {
    Rotation::from_axis_angle(-Point3::Y, angle)
}

fn intrinsics() -> CameraIntrinsics {
    CameraIntrinsics {
        fx: FOCAL,
        fy: FOCAL,
        cx: (IMAGE_WIDTH as f64 - 1.0) / 2.0,
        cy: (IMAGE_HEIGHT as f64 - 1.0) / 2.0,
    }
}

/// Looks along +y from 0.6 m in front of the `y = 0` plane.
fn side_camera() -> Camera {
    let r = Rotation::from_columns(Point3::X, -Point3::Z, Point3::Y).expect("rotation");
    Camera::new(intrinsics()).with_pose(r, Point3::new(0.0, -0.6, 0.12))
}

/// Looks straight down from 0.65 m.
fn top_camera() -> Camera {
    let r = Rotation::from_columns(Point3::X, -Point3::Y, -Point3::Z).expect("rotation");
    Camera::new(intrinsics()).with_pose(r, Point3::new(0.0, 0.0, 0.65))
}

fn fibonacci_sphere(center: Point3, radius: f64) -> Vec<Point3> {
    let n = (4.0 * PI * radius * radius / (SAMPLE_SPACING * SAMPLE_SPACING)).ceil() as usize;
    let golden = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            center + Point3::new(r * a.cos(), r * a.sin(), z) * radius
        })
        .collect()
}

fn ring(center: Point3, radius: f64) -> impl Iterator<Item = Point3> {
    let n = ((TAU * radius / SAMPLE_SPACING).ceil() as usize).max(1);
    (0..n).map(move |j| {
        let a = TAU * j as f64 / n as f64;
        center + Point3::new(radius * a.cos(), radius * a.sin(), 0.0)
    })
}

/// Upright cylinder with a closed bottom and open top.
fn cup(radius: f64, height: f64) -> Vec<Point3> {
    let rings = (height / SAMPLE_SPACING).round() as usize;
    let mut pts: Vec<Point3> = (0..=rings)
        .flat_map(|i| ring(Point3::new(0.0, 0.0, height * i as f64 / rings as f64), radius))
        .collect();
    let steps = (radius / SAMPLE_SPACING).round() as usize;
    pts.push(Point3::ZERO);
    for k in 1..steps {
        pts.extend(ring(Point3::ZERO, radius * k as f64 / steps as f64));
    }
    pts
}

fn face(origin: Point3, e1: Point3, e2: Point3, spacing: f64) -> impl Iterator<Item = Point3> {
    let n1 = (e1.norm() / spacing).round() as usize;
    let n2 = (e2.norm() / spacing).round() as usize;
    (0..=n1).flat_map(move |i| (0..=n2).map(move |j| origin + e1 * (i as f64 / n1 as f64) + e2 * (j as f64 / n2 as f64)))
}

/// Open-top box centred on the origin, resting on the table.
fn basket(size: Point3) -> Vec<Point3> {
    let h = size * 0.5;
    let s = 1.5 * SAMPLE_SPACING;
    let (ex, ey, ez) = (Point3::new(size.x, 0.0, 0.0), Point3::new(0.0, size.y, 0.0), Point3::new(0.0, 0.0, size.z));
    let corner = Point3::new(-h.x, -h.y, 0.0);
    let mut pts: Vec<Point3> = face(corner, ex, ey, s).collect();
    pts.extend(face(corner, ey, ez, s));
    pts.extend(face(corner + ex, ey, ez, s));
    pts.extend(face(corner, ex, ez, s));
    pts.extend(face(corner + ey, ex, ez, s));
    pts
}

fn layout(scenario: Scenario) -> Layout {
    let window = |lo: f64, hi: f64| VerifierBlock::Window { lo, hi };
    let first_frame = |loss: f64| VerifierBlock::Geometric { loss_threshold: loss, compress_threshold: 0.005, contact_frames: Some([0, 0]) };
    match scenario {
        Scenario::PivotBowl => {
            // Round bowl, sphere of radius r cut 0.3 r above its equator;
            // the hands hold it at the equator.
            let r = 0.07;
            let c = Point3::new(0.0, 0.0, r);
            let object = fibonacci_sphere(c, r).into_iter().filter(|p| p.z <= c.z + 0.3 * r).collect();
            let pivot = c - Point3::X * (r + CLEARANCE);
            let start = c + Point3::X * (r + CLEARANCE);
            Layout {
                camera: side_camera(),
                object,
                new_shift: Point3::new(0.05, 0.03, 0.0),
                motion: Box::new(move |u| {
                    let turn = lift(FRAC_PI_2 * u);
                    (Pose::new(pivot, facing_pos_x()), Pose::new(pivot + turn.apply(start - pivot), turn * facing_neg_x()))
                }),
                verifier: window(0.0030, 0.0034),
                smooth: SmoothBlock {
                    left: ArmSmoothBlock::default(),
                    right: ArmSmoothBlock { spline_control_points: Some(5), ..Default::default() },
                },
            }
        }
        Scenario::PokeCup => {
            let (r, h) = (0.04, 0.1);
            let edge = Point3::new(-r, 0.0, 0.0);
            let start = Point3::new(r + CLEARANCE, 0.0, 0.048);
            let parked = Point3::new(-0.16, 0.0, 0.03);
            Layout {
                camera: side_camera(),
                object: cup(r, h),
                new_shift: Point3::new(0.04, -0.02, 0.0),
                motion: Box::new(move |u| {
                    let turn = lift(40f64.to_radians() * u);
                    (Pose::new(parked, facing_pos_x()), Pose::new(edge + turn.apply(start - edge), turn * facing_neg_x()))
                }),
                verifier: first_frame(0.005),
                smooth: SmoothBlock::default(),
            }
        }
        Scenario::PushBasket => {
            let size = Point3::new(0.2, 0.15, 0.1);
            let left = Point3::new(size.x / 2.0 + CLEARANCE, 0.04, 0.05);
            let right = Point3::new(size.x / 2.0 + CLEARANCE, -0.04, 0.05);
            Layout {
                camera: top_camera(),
                object: basket(size),
                new_shift: Point3::new(-0.03, 0.02, 0.0),
                motion: Box::new(move |u| {
                    let d = Point3::new(-0.08 * u, 0.0, 0.0);
                    (Pose::new(left + d, facing_neg_x()), Pose::new(right + d, facing_neg_x()))
                }),
                verifier: first_frame(0.02),
                smooth: SmoothBlock::default(),
            }
        }
        Scenario::WrapBall => {
            let r = 0.06;
            let c = Point3::new(0.0, 0.0, r);
            let left = c - Point3::X * (r + CLEARANCE);
            let right = c + Point3::X * (r + CLEARANCE);
            Layout {
                camera: side_camera(),
                object: fibonacci_sphere(c, r),
                new_shift: Point3::new(0.05, 0.03, 0.0),
                motion: Box::new(move |u| {
                    let d = Point3::new(0.12 * u, 0.0, 0.06 * (PI * u).sin());
                    (Pose::new(left + d, facing_pos_x()), Pose::new(right + d, facing_neg_x()))
                }),
                verifier: window(0.0021, 0.0025),
                smooth: SmoothBlock::default(),
            }
        }
    }
}

/// Joint template in the hand frame: `v_y` along the fingers, `v_z` the
/// palm normal. Index, middle, ring and pinky are straight chains.
fn hand_template() -> [Point3; JOINT_COUNT] {
    let chain = |base: Point3, tip: Point3| -> [Point3; 4] { core::array::from_fn(|k| base + (tip - base) * (k as f64 / 3.0)) };
    let fingers = [
        chain(Point3::new(0.025, 0.025, 0.008), Point3::new(0.05, 0.12, 0.02)),
        chain(Point3::new(0.02, 0.085, 0.0), Point3::new(0.02, 0.17, 0.0)),
        chain(Point3::new(0.0, 0.09, 0.0), Point3::new(0.0, 0.18, 0.0)),
        chain(Point3::new(-0.02, 0.085, 0.0), Point3::new(-0.02, 0.17, 0.0)),
        chain(Point3::new(-0.038, 0.075, 0.0), Point3::new(-0.04, 0.15, 0.0)),
    ];
    let mut joints = [Point3::ZERO; JOINT_COUNT];
    for (f, chain) in fingers.iter().enumerate() {
        joints[1 + 4 * f..5 + 4 * f].copy_from_slice(chain);
    }
    joints
}

fn round_um(p: Point3) -> Point3 {
    let r = |v: f64| (v * 1e6).round() / 1e6;
    Point3::new(r(p.x), r(p.y), r(p.z))
}

fn phase(frame: i64) -> f64 {
    ((frame - SEGMENT_START) as f64 / (SEGMENT_END - SEGMENT_START) as f64).clamp(0.0, 1.0)
}

fn noise3(rng: &mut ChaCha8Rng, sigma: f64) -> Point3 {
    if sigma == 0.0 {
        return Point3::ZERO;
    }
    let n = Normal::new(0.0, sigma).expect("finite sigma");
    Point3::new(n.sample(rng), n.sample(rng), n.sample(rng))
}

/// Hand joints, camera frame, with the contact midpoint at `pose`.
fn pose_hand(pose: &Pose, camera: &Camera, rng: &mut ChaCha8Rng, sigma: f64) -> Vec<[f64; 3]> {
    let template = hand_template();
    let contact = (template[4] + template[8]) * 0.5;
    let offset = noise3(rng, sigma);
    template
        .iter()
        .map(|j| {
            let world = pose.position + pose.orientation.apply(*j - contact) + offset + noise3(rng, sigma / 4.0);
            round_um(camera.to_camera(world)).to_array()
        })
        .collect()
}

fn check_ground_truth(scenario: Scenario, gt: &BimanualTrajectory) {
    for arm in [Arm::Left, Arm::Right] {
        let pts = gt.positions(arm);
        if pts.iter().all(|p| *p == pts[0]) {
            continue;
        }
        // Straight pushes are collinear; everything else spans a plane.
        if let Ok(fit) = fit_plane(&pts) {
            if fit.eigenvalues[1] > 1e-12 {
                assert!(fit.residual < 1e-12, "{} ground truth for the {arm} arm is not planar", scenario.name());
            }
        }
    }
    if scenario == Scenario::PivotBowl {
        let pivot = gt.initial(Arm::Left).position;
        let right = gt.positions(Arm::Right);
        let (a, b) = (right[0] - pivot, *right.last().expect("nonempty") - pivot);
        let angle = a.cross(b).norm().atan2(a.dot(b));
        assert!((angle - FRAC_PI_2).abs() < 1e-9, "pivot arc spans {angle} rad");
        let radius = a.norm();
        assert!(right.iter().all(|p| ((*p - pivot).norm() - radius).abs() < 1e-12), "pivot path is not a circular arc");
        assert!(right.iter().all(|p| p.y == 0.0), "pivot arc leaves the y = 0 plane");
    }
}

/// Plane of constant camera depth through `p`.
fn depth_plane(camera: &Camera, p: Point3) -> Plane {
    Plane::through_point(camera.world_rotation.column(2), p).expect("unit axis")
}

fn pixel_ray(camera: &Camera, u: usize, v: usize) -> Point3 {
    let k = camera.intrinsics;
    Point3::new((u as f64 - k.cx) / k.fx, (v as f64 - k.cy) / k.fy, 1.0)
}

/// Camera-frame hit of the pixel ray with a world plane, if in front.
fn ray_plane(camera: &Camera, ray: Point3, plane: &Plane) -> Option<Point3> {
    let dir = camera.world_rotation.apply(ray);
    let denom = plane.normal.dot(dir);
    if denom.abs() < 1e-12 {
        return None;
    }
    let t = -plane.signed_distance(camera.world_translation) / denom;
    (t > 0.0).then(|| ray * t)
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let (ex, ey) = (p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
    (ex * ex + ey * ey).sqrt()
}

fn render_scene(layout: &Layout, sigma: f64, rng: &mut ChaCha8Rng) -> PointCloud {
    let cam = &layout.camera;
    let (w, h) = (IMAGE_WIDTH, IMAGE_HEIGHT);
    let k = cam.intrinsics;
    let background = [
        Plane::through_point(Point3::Z, Point3::ZERO).expect("unit"),
        Plane::through_point(Point3::Y, Point3::new(0.0, 0.35, 0.0)).expect("unit"),
    ];
    let mut points = vec![Point3::ZERO; w * h];
    let mut valid = vec![false; w * h];
    for v in 0..h {
        for u in 0..w {
            let ray = pixel_ray(cam, u, v);
            let hit = background.iter().filter_map(|pl| ray_plane(cam, ray, pl)).min_by(|a, b| a.z.total_cmp(&b.z));
            if let Some(p) = hit {
                points[v * w + u] = p;
                valid[v * w + u] = true;
            }
        }
    }
    for p in &layout.object {
        let c = cam.to_camera(*p);
        if c.z <= 0.0 {
            continue;
        }
        let (pu, pv) = ((k.fx * c.x / c.z + k.cx).round() as i64, (k.fy * c.y / c.z + k.cy).round() as i64);
        for (du, dv) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (u, v) = (pu + du, pv + dv);
            if u < 0 || v < 0 || u >= w as i64 || v >= h as i64 {
                continue;
            }
            let i = v as usize * w + u as usize;
            if !valid[i] || c.z < points[i].z {
                points[i] = c;
                valid[i] = true;
            }
        }
    }

    // Contact ribbons: the motion plane of each hand around its image path.
    let band = MIN_BAND_PX.max(6.0 * sigma * k.fx / 0.6);
    let mut owner: Vec<Option<(f64, usize)>> = vec![None; w * h];
    let paths: Vec<Vec<Point3>> = (0..2)
        .map(|arm| {
            (0..=200)
                .map(|i| {
                    let (l, r) = (layout.motion)(i as f64 / 200.0);
                    if arm == 0 { l.position } else { r.position }
                })
                .collect()
        })
        .collect();
    let planes: Vec<Plane> = paths.iter().map(|path| depth_plane(cam, path[0])).collect();
    for (arm, path) in paths.iter().enumerate() {
        assert!(path.iter().all(|p| planes[arm].signed_distance(*p).abs() < 1e-9), "hand path is not fronto-parallel");
        let px: Vec<[f64; 2]> = path
            .iter()
            .map(|p| {
                let c = cam.to_camera(*p);
                [k.fx * c.x / c.z + k.cx, k.fy * c.y / c.z + k.cy]
            })
            .collect();
        for seg in px.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let u0 = (a[0].min(b[0]) - band).floor().max(0.0) as usize;
            let u1 = ((a[0].max(b[0]) + band).ceil().max(0.0) as usize).min(w - 1);
            let v0 = (a[1].min(b[1]) - band).floor().max(0.0) as usize;
            let v1 = ((a[1].max(b[1]) + band).ceil().max(0.0) as usize).min(h - 1);
            for v in v0..=v1 {
                for u in u0..=u1 {
                    let d = segment_distance([u as f64, v as f64], a, b);
                    let i = v * w + u;
                    if d <= band && owner[i].is_none_or(|(best, _)| d < best) {
                        owner[i] = Some((d, arm));
                    }
                }
            }
        }
    }
    for v in 0..h {
        for u in 0..w {
            let i = v * w + u;
            if let Some((_, arm)) = owner[i] {
                if let Some(p) = ray_plane(cam, pixel_ray(cam, u, v), &planes[arm]) {
                    points[i] = p;
                    valid[i] = true;
                }
            }
        }
    }
    for (p, ok) in points.iter_mut().zip(valid.iter_mut()) {
        *p = round_um(*p);
        if rng.random_bool(DROPOUT) {
            *ok = false;
        }
    }
    PointCloud::organized(w, h, points, valid).expect("consistent grid")
}

fn camera_block(camera: &Camera) -> CameraBlock {
    let k = camera.intrinsics;
    CameraBlock {
        fx: k.fx,
        fy: k.fy,
        cx: k.cx,
        cy: k.cy,
        rotation: Some(camera.world_rotation.to_row_major()),
        translation: Some(camera.world_translation.to_array()),
    }
}

pub fn generate(scenario: Scenario, seed: u64, sigma: f64) -> CliResult<Dataset> {
    if !(0.0..=0.02).contains(&sigma) {
        return Err(CliError::Config(format!("noise sigma must be in [0, 0.02] m, got {sigma}")));
    }
    let layout = layout(scenario);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut frames = Vec::with_capacity(FRAME_COUNT as usize);
    for f in 0..FRAME_COUNT {
        let (l, r) = (layout.motion)(phase(f));
        let left = pose_hand(&l, &layout.camera, &mut rng, sigma);
        let right = pose_hand(&r, &layout.camera, &mut rng, sigma);
        frames.push(HandEntry { frame_index: f, left: Some(left), right: Some(right) });
    }
    let hands = HandFile { version: HANDS_VERSION.into(), units: UNITS.into(), t_s: SEGMENT_START, t_e: SEGMENT_END, frames };

    let (mut gl, mut gr) = (Vec::new(), Vec::new());
    for f in SEGMENT_START..=SEGMENT_END {
        let (l, r) = (layout.motion)(phase(f));
        gl.push(l);
        gr.push(r);
    }
    let ground_truth = BimanualTrajectory::new((SEGMENT_START..=SEGMENT_END).collect(), gl, gr).expect("equal lengths");
    check_ground_truth(scenario, &ground_truth);

    let scene = render_scene(&layout, sigma, &mut rng);
    let object: Vec<Point3> = layout.object.iter().map(|p| round_um(*p)).collect();
    let object_new = object.iter().map(|p| round_um(*p * NEW_INSTANCE_SCALE + layout.new_shift)).collect();

    let config = PipelineConfig {
        skill: scenario.skill().as_str().into(),
        primary_arm: ArmName::Right,
        camera: Some(camera_block(&layout.camera)),
        smooth: layout.smooth,
        verifier: layout.verifier,
        inputs: InputsBlock {
            hands: Some("hands.json".into()),
            scene: Some("scene.json".into()),
            object: Some("object.ply".into()),
            new_object: Some("object_new.ply".into()),
        },
        out: Some("out".into()),
        ..PipelineConfig::default()
    };
    Ok(Dataset {
        scenario,
        seed,
        sigma,
        hands,
        scene,
        object: PointCloud::new(object),
        object_new: PointCloud::new(object_new),
        ground_truth,
        config,
    })
}

#[derive(Serialize)]
struct DatasetInfo<'a> {
    version: &'a str,
    units: &'a str,
    scenario: &'a str,
    skill: &'a str,
    seed: u64,
    sigma: f64,
    frame_count: i64,
    t_s: i64,
    t_e: i64,
    clearance: f64,
    dropout: f64,
    image: [usize; 2],
    new_instance_scale: f64,
}

pub const DATASET_FILES: [&str; 7] =
    ["hands.json", "scene.json", "object.ply", "object_new.ply", "ground_truth.json", "config.json", "dataset.json"];

pub fn write_dataset(ds: &Dataset, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let path = |name: &str| dir.join(name);
    format::write_json(&path("hands.json"), &ds.hands)?;
    format::write_cloud(&path("scene.json"), &ds.scene)?;
    format::write_cloud(&path("object.ply"), &ds.object)?;
    format::write_cloud(&path("object_new.ply"), &ds.object_new)?;
    format::write_trajectory(&path("ground_truth.json"), &ds.ground_truth)?;
    format::write_json(&path("config.json"), &ds.config)?;
    format::write_json(
        &path("dataset.json"),
        &DatasetInfo {
            version: "binomap-dataset/1",
            units: UNITS,
            scenario: ds.scenario.name(),
            skill: ds.scenario.skill().as_str(),
            seed: ds.seed,
            sigma: ds.sigma,
            frame_count: FRAME_COUNT,
            t_s: SEGMENT_START,
            t_e: SEGMENT_END,
            clearance: CLEARANCE,
            dropout: DROPOUT,
            image: [IMAGE_WIDTH, IMAGE_HEIGHT],
            new_instance_scale: NEW_INSTANCE_SCALE,
        },
    )?;
    Ok(DATASET_FILES.iter().map(|n| path(n)).collect())
}
