//! Vector and frame primitives: 3D vectors, orthonormal residue frames,
//! rigid motions, mirror reflection and the analytic canonical pose.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::backbone::{Backbone, Residue};
use crate::error::{Error, Result};

/// Minimum accepted length of the A→N bond, Å.
pub const MIN_BOND_LENGTH: f64 = 1e-6;
/// Minimum accepted height of the residue triangle at C, Å.
pub const MIN_TRIANGLE_HEIGHT: f64 = 1e-6;
/// Tolerance for `RᵀR = I` and `det R = 1`.
pub const ROTATION_TOLERANCE: f64 = 1e-12;
/// Default half-width of the translation box used by [`random_motion`], Å.
pub const DEFAULT_TRANSLATION_BOX: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Why three atoms fail to define a residue frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// |AN| is below [`MIN_BOND_LENGTH`].
    ShortBond,
    /// The height of the triangle at C is below [`MIN_TRIANGLE_HEIGHT`].
    FlatTriangle,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::ShortBond => f.write_str("N and CA (nearly) coincide"),
            Degeneracy::FlatTriangle => f.write_str("N, CA and C are (nearly) collinear"),
        }
    }
}

/// Orthonormal basis attached to the alpha-carbon of one residue.
///
/// `u` points along A→N, `v` is the unit component of A→C orthogonal to `u`,
/// and `w = u × v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueFrame {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
    pub w: Vec3,
}

impl ResidueFrame {
    /// Coefficients of the vector `p` in the basis `u, v, w`.
    pub fn coordinates(&self, p: Vec3) -> Vec3 {
        Vec3::new(p.dot(self.u), p.dot(self.v), p.dot(self.w))
    }

    /// The vector whose coefficients in this basis are `c`.
    pub fn vector(&self, c: Vec3) -> Vec3 {
        self.u * c.x + self.v * c.y + self.w * c.z
    }
}

pub fn residue_frame(n: Vec3, a: Vec3, c: Vec3) -> Result<ResidueFrame, Degeneracy> {
    let an = n - a;
    let ac = c - a;
    let an_len = an.norm();
    if !(an_len >= MIN_BOND_LENGTH) {
        return Err(Degeneracy::ShortBond);
    }
    let u = an * (1.0 / an_len);
    let h = ac - u * ac.dot(u);
    let h_len = h.norm();
    if !(h_len >= MIN_TRIANGLE_HEIGHT) {
        return Err(Degeneracy::FlatTriangle);
    }
    let v = h * (1.0 / h_len);
    Ok(ResidueFrame { origin: a, u, v, w: u.cross(v) })
}

pub(crate) fn residue_frame_at(residue: &Residue, index: usize) -> Result<ResidueFrame> {
    residue_frame(residue.n, residue.a, residue.c).map_err(|reason| Error::DegenerateResidue { index, reason })
}

pub type Matrix3 = [[f64; 3]; 3];

/// Orientation-preserving isometry `p ↦ R·p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    rotation: Matrix3,
    translation: Vec3,
}

impl RigidMotion {
    /// Builds a motion, rejecting rotations that are not proper orthogonal
    /// within [`ROTATION_TOLERANCE`].
    pub fn new(rotation: Matrix3, translation: Vec3) -> Result<Self> {
        let deviation = rotation_deviation(&rotation);
        if !(deviation <= ROTATION_TOLERANCE) || !translation.is_finite() {
            return Err(Error::InvalidRotation { deviation });
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self { rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], translation: Vec3::ZERO }
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self { translation: t, ..Self::identity() }
    }

    /// Uniform rotation over SO(3) (unit quaternion on the 3-sphere) and a
    /// translation uniform in `[-half_box, half_box]³`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, half_box: f64) -> Self {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        let u3: f64 = rng.gen();
        let tau = std::f64::consts::TAU;
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let q = [b * (tau * u3).cos(), a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin()];
        let t = if half_box > 0.0 {
            Vec3::new(
                rng.gen_range(-half_box..=half_box),
                rng.gen_range(-half_box..=half_box),
                rng.gen_range(-half_box..=half_box),
            )
        } else {
            Vec3::ZERO
        };
        Self { rotation: quaternion_to_matrix(q), translation: t }
    }

    pub fn rotation(&self) -> &Matrix3 {
        &self.rotation
    }

    pub fn translation(&self) -> Vec3 {
        self.translation
    }

    pub fn rotate(&self, p: Vec3) -> Vec3 {
        let r = &self.rotation;
        Vec3::new(
            r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z,
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z,
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z,
        )
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        self.rotate(p) + self.translation
    }

    pub fn inverse(&self) -> Self {
        let rt = transpose(&self.rotation);
        let inv = Self { rotation: rt, translation: Vec3::ZERO };
        Self { rotation: rt, translation: -inv.rotate(self.translation) }
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &RigidMotion) -> Self {
        let mut rotation = [[0.0; 3]; 3];
        for (i, row) in rotation.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| other.rotation[i][k] * self.rotation[k][j]).sum();
            }
        }
        Self { rotation, translation: other.apply(self.translation) }
    }

    /// Rotation angle in radians, in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let r = &self.rotation;
        let c = ((r[0][0] + r[1][1] + r[2][2] - 1.0) / 2.0).clamp(-1.0, 1.0);
        c.acos()
    }
}

fn transpose(m: &Matrix3) -> Matrix3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn determinant(m: &Matrix3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Max of `|RᵀR − I|` entries and `|det R − 1|`.
pub fn rotation_deviation(m: &Matrix3) -> f64 {
    let mut dev = (determinant(m) - 1.0).abs();
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((dot - target).abs());
        }
    }
    if dev.is_nan() {
        f64::INFINITY
    } else {
        dev
    }
}

fn quaternion_to_matrix([w, x, y, z]: [f64; 4]) -> Matrix3 {
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub fn apply_motion(motion: &RigidMotion, backbone: &Backbone) -> Backbone {
    backbone.map_atoms(|p| motion.apply(p))
}

/// Reflection in the xy-plane: `(x, y, z) ↦ (x, y, −z)`.
pub fn mirror(backbone: &Backbone) -> Backbone {
    backbone.map_atoms(|p| Vec3::new(p.x, p.y, -p.z))
}

/// Moves the first alpha-carbon to the origin, the first nitrogen onto the
/// positive x-axis and the first carboxyl carbon into the upper xy-plane.
pub fn canonical_pose(backbone: &Backbone) -> Result<(Backbone, RigidMotion)> {
    let frame = residue_frame_at(&backbone.residues()[0], 0)?;
    let rotation = [frame.u.to_array(), frame.v.to_array(), frame.w.to_array()];
    let rotate = RigidMotion { rotation, translation: Vec3::ZERO };
    let motion = RigidMotion { rotation, translation: -rotate.rotate(frame.origin) };
    Ok((apply_motion(&motion, backbone), motion))
}

/// Deterministic random motion with translation in the default box.
pub fn random_motion(seed: u64) -> RigidMotion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RigidMotion::random(&mut rng, DEFAULT_TRANSLATION_BOX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn axis_aligned_frame() {
        let f = residue_frame(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(f.u, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(f.v, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(f.w, Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn obtuse_frame() {
        let f = residue_frame(Vec3::new(1.46, 0.0, 0.0), Vec3::ZERO, Vec3::new(-0.53, 1.42, 0.0)).unwrap();
        assert!(close(f.u, Vec3::new(1.0, 0.0, 0.0), 1e-15));
        assert!(close(f.v, Vec3::new(0.0, 1.0, 0.0), 1e-15));
        assert!(close(f.w, Vec3::new(0.0, 0.0, 1.0), 1e-15));
    }

    #[test]
    fn degenerate_frames() {
        let o = Vec3::ZERO;
        assert_eq!(residue_frame(o, o, Vec3::new(1.0, 0.0, 0.0)), Err(Degeneracy::ShortBond));
        assert_eq!(
            residue_frame(Vec3::new(1.0, 0.0, 0.0), o, Vec3::new(-2.0, 0.0, 0.0)),
            Err(Degeneracy::FlatTriangle)
        );
        assert_eq!(
            residue_frame(Vec3::new(1.0, 0.0, 0.0), o, Vec3::new(f64::NAN, 1.0, 0.0)),
            Err(Degeneracy::FlatTriangle)
        );
    }

    #[test]
    fn random_motion_is_deterministic_and_proper() {
        assert_eq!(random_motion(7), random_motion(7));
        assert_ne!(random_motion(7), random_motion(8));
        for seed in 0..200 {
            let m = random_motion(seed);
            assert!(rotation_deviation(m.rotation()) <= ROTATION_TOLERANCE);
        }
    }

    #[test]
    fn motion_rejects_reflection() {
        let r = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        assert!(matches!(RigidMotion::new(r, Vec3::ZERO), Err(Error::InvalidRotation { .. })));
    }

    #[test]
    fn inverse_and_composition() {
        let f = random_motion(11);
        let g = random_motion(12);
        let p = Vec3::new(3.0, -4.0, 5.5);
        assert!(close(f.inverse().apply(f.apply(p)), p, 1e-12));
        assert!(close(f.then(&g).apply(p), g.apply(f.apply(p)), 1e-12));
    }

    #[test]
    fn mean_rotation_angle_matches_haar_measure() {
        // Oracle: angle density (1 - cos θ)/π on [0, π], integrated by Simpson's rule.
        let n = 2000;
        let h = std::f64::consts::PI / n as f64;
        let density = |t: f64| t * (1.0 - t.cos()) / std::f64::consts::PI;
        let mut s = density(0.0) + density(std::f64::consts::PI);
        for i in 1..n {
            s += density(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let expected = (s * h / 3.0).to_degrees();
        assert!((expected - 126.476).abs() < 1e-2);

        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mean = (0..1000).map(|_| RigidMotion::random(&mut rng, 1.0).angle().to_degrees()).sum::<f64>() / 1000.0;
        assert!((mean - expected).abs() < 3.0, "mean angle {mean}");
    }
}
