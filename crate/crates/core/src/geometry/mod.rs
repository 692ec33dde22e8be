//! Frames of oriented 3-space and the two commuting group actions.
//!
//! A frame `x = (e1, e2, e3)` is an oriented orthonormal basis; `e3` is the
//! viewing direction and `(e1, e2)` span the camera plane. The rotation
//! group acts on the left on all three vectors, while the in-plane circle
//! group acts on the right, mixing `e1, e2` and fixing `e3`. In-plane
//! rotations are carried around as unit complex numbers; `g = (re, im)`
//! stands for the planar rotation matrix
//!
//! ```text
//! mat(g) = [ re   im ]
//!          [ -im  re ]
//! ```
//!
//! acting on the `(e1, e2)` pair, the identification under which
//! `δ_{x ◁ g} = ḡ · δ_x` for the complex camera vector `δ_x = e1 − i·e2`.

mod sampling;
mod transport;

pub use sampling::sample_haar_frame;
pub use transport::{geodesic_transport, transport_equation_residual, transport_rotation};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use thiserror::Error;

pub type Vec3 = Vector3<f64>;

/// Inner products below `−1 + ANTIPODAL_TOLERANCE` have no unique geodesic.
pub const ANTIPODAL_TOLERANCE: f64 = 1e-9;

/// Inner products at or above `1 − COINCIDENT_TOLERANCE` are treated as the
/// degenerate geodesic, whose transport is the identity by continuity.
pub const COINCIDENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    /// The two viewing directions are antipodal (or numerically so); the
    /// connecting geodesic is not unique.
    #[error("viewing directions are antipodal; parallel transport is undefined")]
    AntipodalPoints,
}

/// Oriented orthonormal frame of 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
}

impl Frame {
    /// The frame aligned with the coordinate axes.
    pub fn standard() -> Self {
        Frame {
            e1: Vec3::new(1.0, 0.0, 0.0),
            e2: Vec3::new(0.0, 1.0, 0.0),
            e3: Vec3::new(0.0, 0.0, 1.0),
        }
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Frame {
            e1: m.column(0).into(),
            e2: m.column(1).into(),
            e3: m.column(2).into(),
        }
    }

    /// Matrix with `e1, e2, e3` as columns.
    pub fn as_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.e1, self.e2, self.e3])
    }

    /// Viewing direction `π(x) = e3`.
    pub fn viewing_direction(&self) -> Vec3 {
        self.e3
    }

    /// Orthonormality and orientation check, used by tests and debug builds.
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        let m = self.as_matrix();
        let gram = m.transpose() * m;
        (gram - Matrix3::identity()).abs().max() <= tol && (m.determinant() - 1.0).abs() <= tol
    }

    /// Frobenius distance to another frame.
    pub fn distance(&self, other: &Frame) -> f64 {
        ((self.e1 - other.e1).norm_squared()
            + (self.e2 - other.e2).norm_squared()
            + (self.e3 - other.e3).norm_squared())
        .sqrt()
    }
}

/// Proper rotation of 3-space, stored as an explicit matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(Matrix3<f64>);

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3(Matrix3::identity())
    }

    /// Wrap a matrix that is already special orthogonal.
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        debug_assert!(
            {
                let gram = m.transpose() * m;
                (gram - Matrix3::identity()).abs().max() <= 1e-9 && (m.determinant() - 1.0).abs() <= 1e-9
            },
            "matrix is not special orthogonal"
        );
        Rotation3(m)
    }

    /// Rodrigues rotation about the unit `axis` by `angle`.
    pub fn from_axis_angle(axis: &Vec3, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let k = axis.normalize();
        Rotation3(c * Matrix3::identity() + s * skew(&k) + (1.0 - c) * k * k.transpose())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    pub fn compose(&self, rhs: &Rotation3) -> Rotation3 {
        Rotation3(self.0 * rhs.0)
    }

    pub fn inverse(&self) -> Rotation3 {
        Rotation3(self.0.transpose())
    }

    pub fn is_special_orthogonal(&self, tol: f64) -> bool {
        let gram = self.0.transpose() * self.0;
        (gram - Matrix3::identity()).abs().max() <= tol
            && (self.0.determinant() - 1.0).abs() <= tol
    }
}

fn skew(k: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0)
}

/// In-plane rotation as a unit complex number `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitComplex {
    pub re: f64,
    pub im: f64,
}

impl UnitComplex {
    pub fn one() -> Self {
        UnitComplex { re: 1.0, im: 0.0 }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        UnitComplex { re: c, im: s }
    }

    /// Normalize `(re, im)` onto the unit circle.
    pub fn from_components_normalized(re: f64, im: f64) -> Self {
        let norm = re.hypot(im);
        assert!(norm > 0.0, "cannot normalize the zero vector");
        UnitComplex {
            re: re / norm,
            im: im / norm,
        }
    }

    pub fn conj(&self) -> Self {
        UnitComplex {
            re: self.re,
            im: -self.im,
        }
    }

    /// Group inverse; coincides with conjugation on the unit circle.
    pub fn inverse(&self) -> Self {
        self.conj()
    }

    pub fn mul(&self, rhs: &UnitComplex) -> Self {
        UnitComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }

    pub fn angle(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm_error(&self) -> f64 {
        (self.re * self.re + self.im * self.im - 1.0).abs()
    }

    /// Distance on the unit circle to another element.
    pub fn dist(&self, rhs: &UnitComplex) -> f64 {
        (self.re - rhs.re).hypot(self.im - rhs.im)
    }
}

/// Element of the complexified 3-space `W = ℂ³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec3(pub [Complex64; 3]);

impl ComplexVec3 {
    pub fn scale(&self, c: Complex64) -> Self {
        ComplexVec3([self.0[0] * c, self.0[1] * c, self.0[2] * c])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, rhs: &ComplexVec3) -> f64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Left action: rotate all three basis vectors.
pub fn act_left(g: &Rotation3, x: &Frame) -> Frame {
    Frame {
        e1: g.apply(&x.e1),
        e2: g.apply(&x.e2),
        e3: g.apply(&x.e3),
    }
}

/// Right action of the in-plane circle group: `x ◁ g` applies `mat(g)` to
/// the `(e1, e2)` pair and fixes the viewing direction.
pub fn act_right(x: &Frame, g: UnitComplex) -> Frame {
    Frame {
        e1: g.re * x.e1 - g.im * x.e2,
        e2: g.im * x.e1 + g.re * x.e2,
        e3: x.e3,
    }
}

/// The complex camera vector `δ_x = e1 − i·e2`.
pub fn delta(x: &Frame) -> ComplexVec3 {
    ComplexVec3([
        Complex64::new(x.e1.x, -x.e2.x),
        Complex64::new(x.e1.y, -x.e2.y),
        Complex64::new(x.e1.z, -x.e2.z),
    ])
}

/// Hermitian product on `W = ℂ³`: linear in the first argument,
/// conjugate-linear in the second; restricts to the Euclidean product on
/// real vectors.
pub fn hermitian_product(w1: &ComplexVec3, w2: &ComplexVec3) -> Complex64 {
    w1.0.iter()
        .zip(w2.0.iter())
        .map(|(a, b)| a * b.conj())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn standard_frame_invariants() {
        assert!(Frame::standard().is_orthonormal(1e-15));
    }

    #[test]
    fn left_identity_and_right_unit_fix_the_frame() {
        let x = sample_haar_frame(&mut rng(7));
        assert_eq!(act_left(&Rotation3::identity(), &x), x);
        assert_eq!(act_right(&x, UnitComplex::one()), x);
    }

    #[test]
    fn actions_commute() {
        // Oracle: both orders are plain matrix products x·mat(h) and g·x.
        let mut r = rng(11);
        for _ in 0..50 {
            let x = sample_haar_frame(&mut r);
            let g = Rotation3::from_matrix(sample_haar_frame(&mut r).as_matrix());
            let h = UnitComplex::from_angle(rand::Rng::gen_range(&mut r, -3.2..3.2));
            let a = act_left(&g, &act_right(&x, h));
            let b = act_right(&act_left(&g, &x), h);
            assert!(a.distance(&b) < 1e-12);
        }
    }

    #[test]
    fn delta_of_standard_frame() {
        let d = delta(&Frame::standard());
        assert_eq!(d.0[0], Complex64::new(1.0, 0.0));
        assert_eq!(d.0[1], Complex64::new(0.0, -1.0));
        assert_eq!(d.0[2], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn delta_norm_squared_is_two() {
        let mut r = rng(3);
        for _ in 0..20 {
            let x = sample_haar_frame(&mut r);
            let p = hermitian_product(&delta(&x), &delta(&x));
            assert_abs_diff_eq!(p.re, 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn right_action_conjugates_delta() {
        let mut r = rng(5);
        for _ in 0..20 {
            let x = sample_haar_frame(&mut r);
            let g = UnitComplex::from_angle(rand::Rng::gen_range(&mut r, -3.2..3.2));
            let lhs = delta(&act_right(&x, g));
            let rhs = delta(&x).scale(g.conj().to_complex());
            assert!(lhs.dist(&rhs) < 1e-12);
        }
    }

    #[test]
    fn hermitian_product_basics() {
        let ex = ComplexVec3([
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        assert_eq!(hermitian_product(&ex, &ex), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hermitian_product_is_conjugate_symmetric() {
        let mut r = rng(9);
        for _ in 0..20 {
            let x = sample_haar_frame(&mut r);
            let y = sample_haar_frame(&mut r);
            let a = hermitian_product(&delta(&x), &delta(&y));
            let b = hermitian_product(&delta(&y), &delta(&x));
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, -b.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn extrinsic_identity() {
        // |⟨δ_x, δ_y⟩| − 1 = (π(x), π(y))
        let mut r = rng(13);
        for _ in 0..200 {
            let x = sample_haar_frame(&mut r);
            let y = sample_haar_frame(&mut r);
            let lhs = hermitian_product(&delta(&x), &delta(&y)).norm() - 1.0;
            let rhs = x.e3.dot(&y.e3);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }
}
