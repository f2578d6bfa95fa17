use super::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn unit_wall() -> Wall {
    Wall::new(
        Vec3::new(-1.0, -1.0, -1.0),
        Vec3::new(1.0, -1.0, -1.0),
        Vec3::new(-1.0, 1.0, -1.0),
    )
}

#[test]
fn wall_planes_centered_eye() {
    let (p, head) = wall_to_planes(&unit_wall(), Vec3::ZERO, 0.1, 10.0).unwrap();
    assert_eq!(p.left, -0.1);
    assert_eq!(p.right, 0.1);
    assert_eq!(p.bottom, -0.1);
    assert_eq!(p.top, 0.1);
    assert_eq!(head, Mat4::IDENTITY);
}

#[test]
fn wall_planes_offset_eye_is_asymmetric() {
    let (p, _) = wall_to_planes(&unit_wall(), Vec3::new(0.5, 0.0, 0.0), 0.1, 10.0).unwrap();
    assert!((p.left - -0.15).abs() < 1e-15);
    assert!((p.right - 0.05).abs() < 1e-15);
}

#[test]
fn eye_in_wall_plane_is_an_error() {
    let eye = Vec3::new(0.3, 0.2, -1.0);
    assert_eq!(
        wall_to_planes(&unit_wall(), eye, 0.1, 10.0),
        Err(GeometryError::EyeInWallPlane)
    );
}

#[test]
fn degenerate_wall_is_an_error() {
    let wall = Wall::new(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
    assert!(wall_to_planes(&wall, Vec3::new(0.0, 0.0, 1.0), 0.1, 10.0).is_err());
}

#[test]
fn projection_implies_unit_wall() {
    let p = Projection {
        origin: Vec3::ZERO,
        hpr: Vec3::ZERO,
        fov: (FRAC_PI_4, FRAC_PI_4),
        distance: 1.0,
    };
    let wall = projection_to_wall(&p).unwrap();
    assert!((wall.bottom_left - Vec3::new(-1.0, -1.0, -1.0)).length() < 1e-12);
    assert!((wall.bottom_right - Vec3::new(1.0, -1.0, -1.0)).length() < 1e-12);
    assert!((wall.top_left - Vec3::new(-1.0, 1.0, -1.0)).length() < 1e-12);
}

#[test]
fn projection_head_rotation_turns_wall() {
    let p = Projection {
        origin: Vec3::ZERO,
        hpr: Vec3::new(FRAC_PI_2, 0.0, 0.0),
        fov: (FRAC_PI_4, FRAC_PI_4),
        distance: 1.0,
    };
    let wall = projection_to_wall(&p).unwrap();
    // All corners land on the x = -1 plane.
    for c in [wall.bottom_left, wall.bottom_right, wall.top_left] {
        assert!((c.x - -1.0).abs() < 1e-12, "corner {c:?} off the x=-1 plane");
    }
}

#[test]
fn zero_fov_is_an_error() {
    let p = Projection { origin: Vec3::ZERO, hpr: Vec3::ZERO, fov: (0.0, FRAC_PI_4), distance: 1.0 };
    assert!(projection_to_planes(&p, Vec3::ZERO, 0.1, 10.0).is_err());
}

#[test]
fn eye_position_identity_head() {
    let obs = Observer { eye_left: Vec3::new(-0.032, 0.0, 0.0), ..Observer::default() };
    assert_eq!(eye_world_position(&obs, Eye::Left, 1.0), Vec3::new(-0.032, 0.0, 0.0));
}

#[test]
fn eye_position_translated_head() {
    let obs = Observer {
        head: Mat4::translation(Vec3::new(1.0, 0.0, 0.0)),
        eye_left: Vec3::new(-0.032, 0.0, 0.0),
        ..Observer::default()
    };
    assert_eq!(eye_world_position(&obs, Eye::Left, 1.0), Vec3::new(0.968, 0.0, 0.0));
}

#[test]
fn model_unit_scales_the_surface() {
    let obs = Observer::default();
    let eye = Eye::Left;
    let unit = 1000.0;
    let (got, _) = view_frustum(&unit_wall(), &obs, eye, unit, 0.5, 64.0).unwrap();
    let by_hand = unit_wall().scaled_about(Vec3::ZERO, unit);
    let (want, _) =
        wall_to_planes(&by_hand, eye_world_position(&obs, eye, unit), 0.5, 64.0).unwrap();
    assert_eq!(got, want);
}

#[test]
fn focus_at_wall_distance_is_identity() {
    let (p, _) = wall_to_planes(&unit_wall(), Vec3::new(0.2, 0.1, 0.0), 0.25, 16.0).unwrap();
    assert_eq!(apply_dynamic_focus(&p, 1.0, 1.0), p);
}

#[test]
fn focus_halves_eye_shear() {
    // Head centered; the entire lateral asymmetry is the eye-induced shear.
    let eye = Vec3::new(0.06, 0.0, 0.0);
    let (p, _) = wall_to_planes(&unit_wall(), eye, 0.5, 16.0).unwrap();
    let shear = (p.left + p.right) / 2.0;
    let focused = apply_dynamic_focus(&p, 1.0, 2.0);
    let focused_shear = (focused.left + focused.right) / 2.0;
    assert!((focused_shear - shear / 2.0).abs() < 1e-12);
    assert!((focused.right - focused.left) - (p.right - p.left) < 1e-15);
}

/// Rays through the same screen fraction from both eyes must intersect at
/// the focus distance.
#[test]
fn focus_rays_intersect_at_focus_distance() {
    let wall = unit_wall(); // plane z = -1, distance 1 from the origin
    for focus in [0.5, 1.0, 2.0, 3.5] {
        for screen_fraction in [0.0, 0.25, 0.5, 0.9] {
            let mut lateral = Vec::new();
            for ex in [-0.04, 0.04] {
                let eye = Vec3::new(ex, 0.0, 0.0);
                let (p, _) = wall_to_planes(&wall, eye, 0.5, 16.0).unwrap();
                let p = apply_dynamic_focus(&p, 1.0, focus);
                // Near-plane point at the given horizontal screen fraction,
                // in eye-local coordinates (here: world-aligned axes).
                let nx = p.left + screen_fraction * (p.right - p.left);
                // Ray eye + t*(nx, ., -near); lateral position at depth `focus`.
                let t = focus / p.near;
                lateral.push(ex + t * nx);
            }
            assert!(
                (lateral[0] - lateral[1]).abs() < 1e-9,
                "rays miss at focus {focus}, fraction {screen_fraction}: {lateral:?}"
            );
        }
    }
}

#[test]
fn focus_is_noop_for_coincident_eyes() {
    // Both "eyes" at the cyclop position of a centered head: no shear, so
    // any focus distance leaves the planes alone.
    let (p, _) = wall_to_planes(&unit_wall(), Vec3::ZERO, 0.5, 16.0).unwrap();
    for focus in [0.25, 1.0, 7.0] {
        assert_eq!(apply_dynamic_focus(&p, 1.0, focus), p);
    }
}

#[test]
fn viewport_of_left_half() {
    let pvp = PixelViewport::new(0, 0, 1024, 768);
    let got = viewport_of(&pvp, &Viewport::new(0.0, 0.0, 0.5, 1.0));
    assert_eq!(got, PixelViewport::new(0, 0, 512, 768));
}

#[test]
fn viewport_of_odd_width_tiles_exactly() {
    let pvp = PixelViewport::new(0, 0, 1023, 100);
    let a = viewport_of(&pvp, &Viewport::new(0.0, 0.0, 0.5, 1.0));
    let b = viewport_of(&pvp, &Viewport::new(0.5, 0.0, 0.5, 1.0));
    assert_eq!(a.w, 511);
    assert_eq!(b.w, 512);
    assert_eq!(a.x + a.w, b.x);
}

#[test]
fn viewport_of_full_is_identity() {
    let pvp = PixelViewport::new(7, 9, 640, 480);
    assert_eq!(viewport_of(&pvp, &Viewport::FULL), pvp);
}

fn arb_rotation() -> impl Strategy<Value = Mat4> {
    (
        -std::f64::consts::PI..std::f64::consts::PI,
        -1.2f64..1.2,
        -std::f64::consts::PI..std::f64::consts::PI,
    )
        .prop_map(|(a, b, c)| Mat4::rotation_y(a).mul(Mat4::rotation_x(b)).mul(Mat4::rotation_z(c)))
}

fn arb_wall_and_eye() -> impl Strategy<Value = (Wall, Vec3)> {
    (
        arb_rotation(),
        0.2f64..4.0,
        0.2f64..3.0,
        prop::array::uniform3(-2.0f64..2.0),
        prop::array::uniform2(-0.8f64..0.8),
        0.05f64..5.0,
    )
        .prop_map(|(rot, w, h, center, eye_uv, eye_n)| {
            let u = rot.transform_vector(Vec3::new(1.0, 0.0, 0.0));
            let v = rot.transform_vector(Vec3::new(0.0, 1.0, 0.0));
            let n = rot.transform_vector(Vec3::new(0.0, 0.0, 1.0));
            let c = Vec3::new(center[0], center[1], center[2]);
            let bl = c - u * (w / 2.0) - v * (h / 2.0);
            let wall = Wall::new(bl, bl + u * w, bl + v * h);
            let eye = c + u * (eye_uv[0] * w) + v * (eye_uv[1] * h) + n * eye_n;
            (wall, eye)
        })
}

proptest! {
    /// Unprojecting the near-rectangle corners through the eye onto the
    /// wall plane reproduces the wall corners.
    #[test]
    fn near_rect_projects_onto_wall((wall, eye) in arb_wall_and_eye()) {
        let near = 0.125;
        let (p, head) = wall_to_planes(&wall, eye, near, 64.0).unwrap();
        let inv = head.rigid_inverse();
        let scale = wall.normal().dot(eye - wall.bottom_left) / near;
        let corners = [
            (p.left, p.bottom, wall.bottom_left),
            (p.right, p.bottom, wall.bottom_right),
            (p.left, p.top, wall.top_left),
            (p.right, p.top, wall.bottom_right + wall.height_vector()),
        ];
        for (cx, cy, want) in corners {
            let local = Vec3::new(cx * scale, cy * scale, -near * scale);
            let world = inv.transform_point(local);
            let extent = wall.width_vector().length().max(wall.height_vector().length());
            prop_assert!((world - want).length() <= 1e-9 * extent.max(eye.length()).max(1.0),
                "corner {want:?} reconstructed as {world:?}");
        }
    }

    /// The projection path is the exact composition through the wall path.
    #[test]
    fn projection_equals_wall_composition(
        hpr in prop::array::uniform3(-1.5f64..1.5),
        fov_h in 0.1f64..1.4,
        fov_v in 0.1f64..1.4,
        distance in 0.2f64..5.0,
        origin in prop::array::uniform3(-2.0f64..2.0),
        eye_off in prop::array::uniform3(-0.2f64..0.2),
    ) {
        let p = Projection {
            origin: Vec3::new(origin[0], origin[1], origin[2]),
            hpr: Vec3::new(hpr[0], hpr[1], hpr[2]),
            fov: (fov_h, fov_v),
            distance,
        };
        let eye = p.origin + Vec3::new(eye_off[0], eye_off[1], eye_off[2]);
        let via_wall = wall_to_planes(&projection_to_wall(&p).unwrap(), eye, 0.25, 32.0);
        let direct = projection_to_planes(&p, eye, 0.25, 32.0);
        prop_assert_eq!(direct, via_wall);
    }

    /// Mapped sibling viewports partition the parent pixel viewport.
    #[test]
    fn viewport_partition_is_exact(
        w in 1i32..2000,
        h in 1i32..1200,
        xs in prop::collection::vec(0.01f64..1.0, 0..4),
        ys in prop::collection::vec(0.01f64..1.0, 0..4),
    ) {
        // Build a grid partition of [0,1]^2 from sorted interior cuts.
        let mut x_edges = vec![0.0];
        let total: f64 = xs.iter().sum::<f64>() + 1.0;
        let mut acc = 0.0;
        for c in &xs { acc += c / total; x_edges.push(acc); }
        x_edges.push(1.0);
        let mut y_edges = vec![0.0];
        let total: f64 = ys.iter().sum::<f64>() + 1.0;
        let mut acc = 0.0;
        for c in &ys { acc += c / total; y_edges.push(acc); }
        y_edges.push(1.0);

        let parent = PixelViewport::new(3, -5, w, h);
        let mut covered = vec![false; (w * h) as usize];
        for xi in 0..x_edges.len() - 1 {
            for yi in 0..y_edges.len() - 1 {
                let vp = Viewport::new(
                    x_edges[xi], y_edges[yi],
                    x_edges[xi + 1] - x_edges[xi], y_edges[yi + 1] - y_edges[yi],
                );
                let sub = viewport_of(&parent, &vp);
                for y in sub.y..sub.y + sub.h {
                    for x in sub.x..sub.x + sub.w {
                        prop_assert!(parent.contains(x, y));
                        let idx = ((y - parent.y) * w + (x - parent.x)) as usize;
                        prop_assert!(!covered[idx], "pixel ({x},{y}) covered twice");
                        covered[idx] = true;
                    }
                }
            }
        }
        prop_assert!(covered.iter().all(|&c| c), "partition left holes");
    }

    #[test]
    fn focus_identity_at_wall_distance(
        (wall, eye) in arb_wall_and_eye(),
        near in 0.05f64..1.0,
    ) {
        let (p, _) = wall_to_planes(&wall, eye, near, 64.0).unwrap();
        let d = wall.normal().dot(eye - wall.bottom_left);
        let q = apply_dynamic_focus(&p, d, d);
        prop_assert_eq!(p, q);
    }
}
