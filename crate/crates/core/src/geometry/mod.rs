//! Viewports, data ranges, decomposition kernels, and the frustum maths for
//! planar display surfaces: off-axis wall frusta, projector descriptions,
//! head tracking with per-eye offsets, dynamic focus and model-unit scaling.
//!
//! Conventions: right-handed coordinates, the eye looks down -z in its local
//! frame, angles are radians, distances are meters.

mod math;

pub use math::{Mat4, Vec3};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("degenerate wall: {0}")]
    DegenerateWall(String),
    #[error("eye lies in the wall plane; frustum is degenerate")]
    EyeInWallPlane,
    #[error("invalid frustum parameter: {0}")]
    InvalidFrustum(String),
}

/// Fractional 2D viewport relative to a parent, all components in [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Viewport {
    pub const FULL: Viewport = Viewport { x: 0.0, y: 0.0, w: 1.0, h: 1.0 };

    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Viewport { x, y, w, h }
    }

    pub fn is_valid(&self) -> bool {
        self.x >= 0.0
            && self.y >= 0.0
            && self.w > 0.0
            && self.h > 0.0
            && self.x + self.w <= 1.0 + 1e-12
            && self.y + self.h <= 1.0 + 1e-12
    }

    /// Composes `self` within `parent` (both fractions of the same root).
    pub fn compose(&self, parent: &Viewport) -> Viewport {
        Viewport {
            x: parent.x + self.x * parent.w,
            y: parent.y + self.y * parent.h,
            w: self.w * parent.w,
            h: self.h * parent.h,
        }
    }

    pub fn intersect(&self, o: &Viewport) -> Option<Viewport> {
        let x0 = self.x.max(o.x);
        let y0 = self.y.max(o.y);
        let x1 = (self.x + self.w).min(o.x + o.w);
        let y1 = (self.y + self.h).min(o.y + o.h);
        if x1 > x0 && y1 > y0 {
            Some(Viewport::new(x0, y0, x1 - x0, y1 - y0))
        } else {
            None
        }
    }
}

/// Integer pixel rectangle. `x`/`y` is the lower-left corner; rows grow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PixelViewport {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl PixelViewport {
    pub fn new(x: i32, y: i32, w: i32, h: i32) -> Self {
        debug_assert!(w >= 0 && h >= 0);
        PixelViewport { x, y, w, h }
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn is_empty(&self) -> bool {
        self.w == 0 || self.h == 0
    }

    pub fn contains(&self, x: i32, y: i32) -> bool {
        x >= self.x && x < self.x + self.w && y >= self.y && y < self.y + self.h
    }

    pub fn intersect(&self, o: &PixelViewport) -> PixelViewport {
        let x0 = self.x.max(o.x);
        let y0 = self.y.max(o.y);
        let x1 = (self.x + self.w).min(o.x + o.w);
        let y1 = (self.y + self.h).min(o.y + o.h);
        if x1 > x0 && y1 > y0 {
            PixelViewport::new(x0, y0, x1 - x0, y1 - y0)
        } else {
            PixelViewport::new(x0.min(x1), y0.min(y1), 0, 0)
        }
    }

    pub fn union(&self, o: &PixelViewport) -> PixelViewport {
        if self.is_empty() {
            return *o;
        }
        if o.is_empty() {
            return *self;
        }
        let x0 = self.x.min(o.x);
        let y0 = self.y.min(o.y);
        let x1 = (self.x + self.w).max(o.x + o.w);
        let y1 = (self.y + self.h).max(o.y + o.h);
        PixelViewport::new(x0, y0, x1 - x0, y1 - y0)
    }
}

/// Database range as a sub-interval of [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const FULL: Range = Range { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        Range { lo, hi }
    }

    pub fn is_valid(&self) -> bool {
        0.0 <= self.lo && self.lo <= self.hi && self.hi <= 1.0
    }

    /// Narrows `parent` by `self` interpreted as fractions of it.
    pub fn compose(&self, parent: &Range) -> Range {
        let span = parent.hi - parent.lo;
        Range::new(parent.lo + self.lo * span, parent.lo + self.hi * span)
    }
}

/// Pixel-interleave decomposition kernel: a source owns destination pixels
/// (x, y) with x = dx (mod w) and y = dy (mod h).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelKernel {
    pub w: u32,
    pub h: u32,
    pub dx: u32,
    pub dy: u32,
}

impl PixelKernel {
    pub const NONE: PixelKernel = PixelKernel { w: 1, h: 1, dx: 0, dy: 0 };

    pub fn new(w: u32, h: u32, dx: u32, dy: u32) -> Self {
        PixelKernel { w, h, dx, dy }
    }

    pub fn is_valid(&self) -> bool {
        self.w >= 1 && self.h >= 1 && self.dx < self.w && self.dy < self.h
    }

    pub fn owns(&self, x: i32, y: i32) -> bool {
        x.rem_euclid(self.w as i32) as u32 == self.dx && y.rem_euclid(self.h as i32) as u32 == self.dy
    }

    /// Child ownership within the parent's owned grid; residues compose.
    pub fn compose(&self, parent: &PixelKernel) -> PixelKernel {
        PixelKernel {
            w: parent.w * self.w,
            h: parent.h * self.h,
            dx: parent.dx + parent.w * self.dx,
            dy: parent.dy + parent.h * self.dy,
        }
    }
}

/// Per-pixel sample decomposition: this source computes sample `index` of
/// `size` per destination pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubpixelKernel {
    pub size: u32,
    pub index: u32,
}

impl SubpixelKernel {
    pub const NONE: SubpixelKernel = SubpixelKernel { size: 1, index: 0 };

    pub fn new(size: u32, index: u32) -> Self {
        SubpixelKernel { size, index }
    }

    pub fn is_valid(&self) -> bool {
        self.size >= 1 && self.index < self.size
    }

    pub fn compose(&self, parent: &SubpixelKernel) -> SubpixelKernel {
        SubpixelKernel {
            size: parent.size * self.size,
            index: parent.index + parent.size * self.index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eye {
    Cyclop,
    Left,
    Right,
}

/// Planar projection surface given by three corners, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    pub bottom_left: Vec3,
    pub bottom_right: Vec3,
    pub top_left: Vec3,
}

impl Wall {
    pub fn new(bottom_left: Vec3, bottom_right: Vec3, top_left: Vec3) -> Self {
        Wall { bottom_left, bottom_right, top_left }
    }

    pub fn width_vector(&self) -> Vec3 {
        self.bottom_right - self.bottom_left
    }

    pub fn height_vector(&self) -> Vec3 {
        self.top_left - self.bottom_left
    }

    /// Unit normal `(BR-BL) x (TL-BL)`, pointing toward the viewer side.
    pub fn normal(&self) -> Vec3 {
        self.width_vector().cross(self.height_vector()).normalized()
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let u = self.width_vector();
        let v = self.height_vector();
        let ul = u.length();
        let vl = v.length();
        if ul < 1e-12 || vl < 1e-12 {
            return Err(GeometryError::DegenerateWall("zero-length edge".into()));
        }
        if u.dot(v).abs() > 1e-6 * ul * vl {
            return Err(GeometryError::DegenerateWall("edges not orthogonal".into()));
        }
        Ok(())
    }

    /// The sub-wall covered by a fractional viewport of this wall.
    pub fn sub_wall(&self, vp: &Viewport) -> Wall {
        let u = self.width_vector();
        let v = self.height_vector();
        let bl = self.bottom_left + u * vp.x + v * vp.y;
        Wall {
            bottom_left: bl,
            bottom_right: bl + u * vp.w,
            top_left: bl + v * vp.h,
        }
    }

    /// Scales the wall about `center` by `ratio`; used for dynamic focus
    /// (center = cyclop eye, ratio = focus/wall distance) and model units
    /// (center = origin, ratio = unit).
    pub fn scaled_about(&self, center: Vec3, ratio: f64) -> Wall {
        Wall {
            bottom_left: center + (self.bottom_left - center) * ratio,
            bottom_right: center + (self.bottom_right - center) * ratio,
            top_left: center + (self.top_left - center) * ratio,
        }
    }
}

/// Projector description: position, head-pitch-roll orientation, horizontal
/// and vertical half-angles and throw distance. An unrotated projector faces
/// -z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub origin: Vec3,
    /// Head (yaw about +y), pitch (about +x), roll (about +z), radians.
    pub hpr: Vec3,
    /// Horizontal and vertical half-angles, radians, each in (0, pi/2).
    pub fov: (f64, f64),
    pub distance: f64,
}

impl Projection {
    pub fn validate(&self) -> Result<(), GeometryError> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(self.fov.0 > 0.0 && self.fov.0 < half_pi && self.fov.1 > 0.0 && self.fov.1 < half_pi) {
            return Err(GeometryError::InvalidFrustum(format!(
                "fov half-angles must lie in (0, pi/2), got ({}, {})",
                self.fov.0, self.fov.1
            )));
        }
        if self.distance <= 0.0 {
            return Err(GeometryError::InvalidFrustum("projection distance must be > 0".into()));
        }
        Ok(())
    }
}

/// glFrustum-style parameters at the near plane, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrustumPlanes {
    pub left: f64,
    pub right: f64,
    pub bottom: f64,
    pub top: f64,
    pub near: f64,
    pub far: f64,
}

impl FrustumPlanes {
    pub fn is_valid(&self) -> bool {
        self.left < self.right && self.bottom < self.top && 0.0 < self.near && self.near < self.far
    }

    /// Narrows the frustum to a fractional window of its near rectangle.
    /// `x0..x1` and `y0..y1` are fractions of the full extent.
    pub fn sub_frustum(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> FrustumPlanes {
        let w = self.right - self.left;
        let h = self.top - self.bottom;
        FrustumPlanes {
            left: self.left + w * x0,
            right: self.left + w * x1,
            bottom: self.bottom + h * y0,
            top: self.bottom + h * y1,
            near: self.near,
            far: self.far,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FocusMode {
    /// Zero-parallax plane on the display surface.
    FixedOnSurface,
    /// Zero-parallax plane at `focus_distance` from the observer.
    Dynamic,
}

/// A head-tracked user: rigid head matrix plus measured per-eye offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observer {
    pub head: Mat4,
    pub eye_left: Vec3,
    pub eye_right: Vec3,
    pub eye_cyclop: Vec3,
    pub focus_distance: f64,
    pub focus_mode: FocusMode,
}

impl Default for Observer {
    fn default() -> Self {
        Observer {
            head: Mat4::IDENTITY,
            eye_left: Vec3::new(-0.03, 0.0, 0.0),
            eye_right: Vec3::new(0.03, 0.0, 0.0),
            eye_cyclop: Vec3::ZERO,
            focus_distance: 1.0,
            focus_mode: FocusMode::FixedOnSurface,
        }
    }
}

impl Observer {
    pub fn eye_offset(&self, eye: Eye) -> Vec3 {
        match eye {
            Eye::Cyclop => self.eye_cyclop,
            Eye::Left => self.eye_left,
            Eye::Right => self.eye_right,
        }
    }
}

/// World-space eye position: the head matrix applied to the per-eye offset.
///
/// Eye offsets stay metric under model-unit scaling; the unit is applied to
/// the wall/projection surface instead (`Wall::scaled_about` origin), which
/// yields the same frustum. `model_unit` is validated here so both halves of
/// the convention meet in one place.
pub fn eye_world_position(obs: &Observer, eye: Eye, model_unit: f64) -> Vec3 {
    assert!(model_unit > 0.0, "model unit must be positive");
    obs.head.transform_point(obs.eye_offset(eye))
}

/// Off-axis frustum from an eye onto a wall. Returns the glFrustum planes
/// whose near rectangle projects exactly onto the wall from the eye, and the
/// world-to-eye transform (wall-aligned axes, eye at origin, looking down
/// -z at the wall).
pub fn wall_to_planes(
    wall: &Wall,
    eye_world: Vec3,
    near: f64,
    far: f64,
) -> Result<(FrustumPlanes, Mat4), GeometryError> {
    wall.validate()?;
    if !(near > 0.0 && near < far) {
        return Err(GeometryError::InvalidFrustum(format!(
            "near/far must satisfy 0 < near < far, got {near}/{far}"
        )));
    }
    let u = wall.width_vector().normalized();
    let v = wall.height_vector().normalized();
    let n = wall.normal();
    let distance = n.dot(eye_world - wall.bottom_left);
    if distance.abs() < 1e-12 {
        return Err(GeometryError::EyeInWallPlane);
    }
    // The normal must face the eye; a wall viewed from behind is a
    // configuration error equivalent to a degenerate frustum.
    if distance < 0.0 {
        return Err(GeometryError::InvalidFrustum(
            "eye is behind the wall (normal faces away)".into(),
        ));
    }
    let scale = near / distance;
    let planes = FrustumPlanes {
        left: u.dot(wall.bottom_left - eye_world) * scale,
        right: u.dot(wall.bottom_right - eye_world) * scale,
        bottom: v.dot(wall.bottom_left - eye_world) * scale,
        top: v.dot(wall.top_left - eye_world) * scale,
        near,
        far,
    };
    let head = Mat4::from_rows(u, v, n, Vec3::ZERO);
    let t = head.transform_point(-eye_world);
    let head = Mat4::from_rows(u, v, n, t);
    Ok((planes, head))
}

/// The wall rectangle implied by a projector: centered `distance` along the
/// rotated -z axis, extents from the half-angle tangents.
pub fn projection_to_wall(p: &Projection) -> Result<Wall, GeometryError> {
    p.validate()?;
    let rot = Mat4::rotation_y(p.hpr.x)
        .mul(Mat4::rotation_x(p.hpr.y))
        .mul(Mat4::rotation_z(p.hpr.z));
    let dir = rot.transform_vector(Vec3::new(0.0, 0.0, -1.0));
    let right = rot.transform_vector(Vec3::new(1.0, 0.0, 0.0));
    let up = rot.transform_vector(Vec3::new(0.0, 1.0, 0.0));
    let center = p.origin + dir * p.distance;
    let half_w = p.fov.0.tan() * p.distance;
    let half_h = p.fov.1.tan() * p.distance;
    Ok(Wall {
        bottom_left: center - right * half_w - up * half_h,
        bottom_right: center + right * half_w - up * half_h,
        top_left: center - right * half_w + up * half_h,
    })
}

/// Exactly `wall_to_planes(projection_to_wall(p), ...)`.
pub fn projection_to_planes(
    p: &Projection,
    eye_world: Vec3,
    near: f64,
    far: f64,
) -> Result<(FrustumPlanes, Mat4), GeometryError> {
    wall_to_planes(&projection_to_wall(p)?, eye_world, near, far)
}

/// Moves the zero-parallax plane from `wall_distance` to `focus_distance`
/// by rescaling the lateral asymmetry of the planes. Rays through identical
/// screen points from two eyes sheared this way intersect at the focus
/// distance.
pub fn apply_dynamic_focus(
    planes: &FrustumPlanes,
    wall_distance: f64,
    focus_distance: f64,
) -> FrustumPlanes {
    assert!(focus_distance > 0.0, "focus distance must be positive");
    let ratio = wall_distance / focus_distance;
    let shear_x = (planes.left + planes.right) / 2.0;
    let shear_y = (planes.bottom + planes.top) / 2.0;
    let dx = shear_x * ratio - shear_x;
    let dy = shear_y * ratio - shear_y;
    FrustumPlanes {
        left: planes.left + dx,
        right: planes.right + dx,
        bottom: planes.bottom + dy,
        top: planes.top + dy,
        near: planes.near,
        far: planes.far,
    }
}

/// Default clip distances used where a configuration does not say more.
/// Dyadic values keep derived plane arithmetic exact for exact inputs.
pub const DEFAULT_NEAR: f64 = 0.5;
pub const DEFAULT_FAR: f64 = 64.0;

/// Full per-eye frustum for a tracked view onto a wall: applies the model
/// unit to the wall, positions the eye through the head matrix, and moves
/// the zero-parallax plane for dynamic-focus observers.
pub fn view_frustum(
    wall: &Wall,
    obs: &Observer,
    eye: Eye,
    model_unit: f64,
    near: f64,
    far: f64,
) -> Result<(FrustumPlanes, Mat4), GeometryError> {
    let surface = wall.scaled_about(Vec3::ZERO, model_unit);
    let eye_pos = eye_world_position(obs, eye, model_unit);
    let (planes, head) = wall_to_planes(&surface, eye_pos, near, far)?;
    match obs.focus_mode {
        FocusMode::FixedOnSurface => Ok((planes, head)),
        FocusMode::Dynamic => {
            let cyclop = eye_world_position(obs, Eye::Cyclop, model_unit);
            let wall_distance = surface.normal().dot(cyclop - surface.bottom_left);
            if wall_distance <= 0.0 {
                return Ok((planes, head));
            }
            Ok((apply_dynamic_focus(&planes, wall_distance, obs.focus_distance), head))
        }
    }
}

/// Rounds a fractional edge position to a pixel edge. Half-values round
/// down so that a 0.5/0.5 split of an odd extent gives the smaller part
/// first and sibling edges always coincide.
fn pixel_edge(fraction: f64, extent: i32) -> i32 {
    let e = (fraction * extent as f64 - 0.5).ceil() as i32;
    e.clamp(0, extent)
}

/// Maps a fractional viewport into a pixel viewport. Edges are rounded
/// independently, so viewports that tile [0,1] tile the parent exactly.
pub fn viewport_of(pvp: &PixelViewport, vp: &Viewport) -> PixelViewport {
    let x0 = pixel_edge(vp.x, pvp.w);
    let x1 = pixel_edge(vp.x + vp.w, pvp.w);
    let y0 = pixel_edge(vp.y, pvp.h);
    let y1 = pixel_edge(vp.y + vp.h, pvp.h);
    PixelViewport::new(pvp.x + x0, pvp.y + y0, (x1 - x0).max(0), (y1 - y0).max(0))
}

#[cfg(test)]
mod tests;
