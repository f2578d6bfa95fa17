//! Small fixed-size vector/matrix math. f64 throughout; the rest of the
//! crate depends on bit-stable arithmetic, so no SIMD or fused ops.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self / self.length()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 4x4 matrix. `m[row][col]`, points transform as column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4 {
    pub m: [[f64; 4]; 4],
}

impl Default for Mat4 {
    fn default() -> Self {
        Mat4::IDENTITY
    }
}

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4 {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub fn translation(t: Vec3) -> Mat4 {
        let mut m = Mat4::IDENTITY;
        m.m[0][3] = t.x;
        m.m[1][3] = t.y;
        m.m[2][3] = t.z;
        m
    }

    /// Rotation about +x by `a` radians.
    pub fn rotation_x(a: f64) -> Mat4 {
        let (s, c) = a.sin_cos();
        let mut m = Mat4::IDENTITY;
        m.m[1][1] = c;
        m.m[1][2] = -s;
        m.m[2][1] = s;
        m.m[2][2] = c;
        m
    }

    /// Rotation about +y by `a` radians.
    pub fn rotation_y(a: f64) -> Mat4 {
        let (s, c) = a.sin_cos();
        let mut m = Mat4::IDENTITY;
        m.m[0][0] = c;
        m.m[0][2] = s;
        m.m[2][0] = -s;
        m.m[2][2] = c;
        m
    }

    /// Rotation about +z by `a` radians.
    pub fn rotation_z(a: f64) -> Mat4 {
        let (s, c) = a.sin_cos();
        let mut m = Mat4::IDENTITY;
        m.m[0][0] = c;
        m.m[0][1] = -s;
        m.m[1][0] = s;
        m.m[1][1] = c;
        m
    }

    /// Builds a rigid transform from orthonormal rows and a translation,
    /// i.e. `p -> rows * p + t`.
    pub fn from_rows(rx: Vec3, ry: Vec3, rz: Vec3, t: Vec3) -> Mat4 {
        Mat4 {
            m: [
                [rx.x, rx.y, rx.z, t.x],
                [ry.x, ry.y, ry.z, t.y],
                [rz.x, rz.y, rz.z, t.z],
                [0.0, 0.0, 0.0, 1.0],
            ],
        }
    }

    pub fn mul(self, o: Mat4) -> Mat4 {
        let mut r = Mat4 { m: [[0.0; 4]; 4] };
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for (k, row) in o.m.iter().enumerate() {
                    acc += self.m[i][k] * row[j];
                }
                r.m[i][j] = acc;
            }
        }
        r
    }

    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        Vec3::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.m[0][2] * p.z + self.m[0][3],
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.m[1][2] * p.z + self.m[1][3],
            self.m[2][0] * p.x + self.m[2][1] * p.y + self.m[2][2] * p.z + self.m[2][3],
        )
    }

    pub fn transform_vector(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }

    /// Inverse assuming `self` is rigid (orthonormal rotation + translation).
    pub fn rigid_inverse(&self) -> Mat4 {
        let r = |i: usize, j: usize| self.m[j][i]; // transpose
        let t = Vec3::new(self.m[0][3], self.m[1][3], self.m[2][3]);
        let rt = Mat4 {
            m: [
                [r(0, 0), r(0, 1), r(0, 2), 0.0],
                [r(1, 0), r(1, 1), r(1, 2), 0.0],
                [r(2, 0), r(2, 1), r(2, 2), 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
        };
        let nt = rt.transform_vector(t);
        let mut out = rt;
        out.m[0][3] = -nt.x;
        out.m[1][3] = -nt.y;
        out.m[2][3] = -nt.z;
        out
    }

    /// True if the upper 3x3 block is orthonormal with determinant +1
    /// within `tol`.
    pub fn is_rigid(&self, tol: f64) -> bool {
        let rx = Vec3::new(self.m[0][0], self.m[0][1], self.m[0][2]);
        let ry = Vec3::new(self.m[1][0], self.m[1][1], self.m[1][2]);
        let rz = Vec3::new(self.m[2][0], self.m[2][1], self.m[2][2]);
        let ortho = (rx.length() - 1.0).abs() < tol
            && (ry.length() - 1.0).abs() < tol
            && (rz.length() - 1.0).abs() < tol
            && rx.dot(ry).abs() < tol
            && ry.dot(rz).abs() < tol
            && rz.dot(rx).abs() < tol;
        let det = rx.dot(ry.cross(rz));
        ortho && (det - 1.0).abs() < tol && self.m[3] == [0.0, 0.0, 0.0, 1.0]
    }
}
