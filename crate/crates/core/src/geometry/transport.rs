//! Geodesic parallel transport on the sphere and the transport rotations it
//! induces between frames.

use super::{
    act_right, Frame, GeometryError, Rotation3, UnitComplex, Vec3, ANTIPODAL_TOLERANCE,
    COINCIDENT_TOLERANCE,
};

/// Parallel transport along the unique geodesic from `w` to `v`: the
/// rotation taking `w` to `v` whose axis is `w × v`, so that vectors normal
/// to the geodesic plane are fixed.
///
/// Coincident inputs (inner product within `COINCIDENT_TOLERANCE` of 1)
/// yield the identity by continuity; antipodal inputs have no unique
/// geodesic and are rejected.
pub fn geodesic_transport(v: &Vec3, w: &Vec3) -> Result<Rotation3, GeometryError> {
    let c = v.dot(w);
    if c <= -1.0 + ANTIPODAL_TOLERANCE {
        return Err(GeometryError::AntipodalPoints);
    }
    if c >= 1.0 - COINCIDENT_TOLERANCE {
        return Ok(Rotation3::identity());
    }
    let axis_sin = w.cross(v);
    let s = axis_sin.norm();
    let k = axis_sin / s;
    // Rodrigues with sin/cos taken directly from the geometry.
    let m = c * nalgebra::Matrix3::identity()
        + s * nalgebra::Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0)
        + (1.0 - c) * k * k.transpose();
    Ok(Rotation3::from_matrix(m))
}

/// The transport rotation `T(x, y)`: the unique in-plane rotation with
/// `x ◁ T(x,y) = t_{π(x),π(y)} ▷ y`, where `t` is geodesic transport
/// between the viewing directions. Equivalently, the in-plane rotation of
/// `x` closest to `y` in the Frobenius distance.
pub fn transport_rotation(x: &Frame, y: &Frame) -> Result<UnitComplex, GeometryError> {
    let t = geodesic_transport(&x.e3, &y.e3)?;
    let ty1 = t.apply(&y.e1);
    let ty2 = t.apply(&y.e2);
    // S = xᵀ·t·y is the in-plane block [[re, im], [-im, re]]; averaging the
    // two copies of each component suppresses floating-point asymmetry.
    let re = 0.5 * (x.e1.dot(&ty1) + x.e2.dot(&ty2));
    let im = 0.5 * (x.e1.dot(&ty2) - x.e2.dot(&ty1));
    Ok(UnitComplex::from_components_normalized(re, im))
}

/// Residual of the defining equation `x ◁ T(x,y) = t ▷ y`; used by tests.
pub fn transport_equation_residual(x: &Frame, y: &Frame, t_xy: UnitComplex) -> f64 {
    let t = geodesic_transport(&x.e3, &y.e3).expect("non-antipodal");
    let lhs = act_right(x, t_xy);
    let rhs = Frame {
        e1: t.apply(&y.e1),
        e2: t.apply(&y.e2),
        e3: t.apply(&y.e3),
    };
    lhs.distance(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{act_left, sample_haar_frame};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn transport_to_itself_is_identity() {
        let v = Vec3::new(0.6, -0.48, 0.64).normalize();
        let t = geodesic_transport(&v, &v).unwrap();
        assert_eq!(t, Rotation3::identity());
    }

    #[test]
    fn quarter_turn_between_axes() {
        // Oracle: Rodrigues rotation by π/2 about (0, 1, 0).
        let v = Vec3::new(1.0, 0.0, 0.0);
        let w = Vec3::new(0.0, 0.0, 1.0);
        let t = geodesic_transport(&v, &w).unwrap();
        let oracle = Rotation3::from_axis_angle(&Vec3::new(0.0, 1.0, 0.0), std::f64::consts::FRAC_PI_2);
        assert!((t.matrix() - oracle.matrix()).abs().max() < 1e-15);
        assert!((t.apply(&w) - v).norm() < 1e-15);
    }

    #[test]
    fn transport_maps_w_to_v() {
        let mut r = rng(2);
        for _ in 0..200 {
            let v = sample_haar_frame(&mut r).e3;
            let w = sample_haar_frame(&mut r).e3;
            if v.dot(&w) <= -1.0 + ANTIPODAL_TOLERANCE {
                continue;
            }
            let t = geodesic_transport(&v, &w).unwrap();
            assert!((t.apply(&w) - v).norm() < 1e-12);
            assert!(t.is_special_orthogonal(1e-12));
            // The axis direction w × v is fixed.
            let axis = w.cross(&v);
            if axis.norm() > 1e-6 {
                assert!((t.apply(&axis) - axis).norm() < 1e-12 * axis.norm().max(1.0));
            }
        }
    }

    #[test]
    fn antipodal_inputs_are_rejected() {
        let v = Vec3::new(0.0, 0.0, 1.0);
        assert_eq!(
            geodesic_transport(&v, &-v),
            Err(GeometryError::AntipodalPoints)
        );
        // Slightly within the tolerance band still errs.
        let w = Vec3::new(1e-6, 0.0, -1.0).normalize();
        assert!(v.dot(&w) <= -1.0 + ANTIPODAL_TOLERANCE);
        assert_eq!(geodesic_transport(&v, &w), Err(GeometryError::AntipodalPoints));
    }

    #[test]
    fn transport_rotation_on_the_diagonal() {
        let mut r = rng(3);
        let x = sample_haar_frame(&mut r);
        let t = transport_rotation(&x, &x).unwrap();
        assert!(t.dist(&UnitComplex::one()) < 1e-14);
    }

    #[test]
    fn same_viewing_direction_recovers_the_offset() {
        let mut r = rng(4);
        for _ in 0..50 {
            let x = sample_haar_frame(&mut r);
            let g = UnitComplex::from_angle(r.gen_range(-3.2..3.2));
            let y = act_right(&x, g);
            let t = transport_rotation(&x, &y).unwrap();
            assert!(t.dist(&g) < 1e-12);
        }
    }

    #[test]
    fn defining_equation_residual_is_small() {
        let mut r = rng(5);
        for _ in 0..200 {
            let x = sample_haar_frame(&mut r);
            let y = sample_haar_frame(&mut r);
            if x.e3.dot(&y.e3) <= -1.0 + ANTIPODAL_TOLERANCE {
                continue;
            }
            let t = transport_rotation(&x, &y).unwrap();
            assert!(t.norm_error() < 1e-12);
            assert!(transport_equation_residual(&x, &y, t) < 1e-12);
        }
    }

    #[test]
    fn symmetry_invariance_equivariance() {
        let mut r = rng(6);
        for _ in 0..100 {
            let x = sample_haar_frame(&mut r);
            let y = sample_haar_frame(&mut r);
            if x.e3.dot(&y.e3) <= -0.999 {
                continue;
            }
            let t_xy = transport_rotation(&x, &y).unwrap();

            // Symmetry: T(y, x) = conj T(x, y).
            let t_yx = transport_rotation(&y, &x).unwrap();
            assert!(t_yx.dist(&t_xy.conj()) < 1e-12);

            // Invariance under the left action.
            let g = Rotation3::from_matrix(sample_haar_frame(&mut r).as_matrix());
            let t_rot = transport_rotation(&act_left(&g, &x), &act_left(&g, &y)).unwrap();
            assert!(t_rot.dist(&t_xy) < 1e-12);

            // Equivariance under the right action.
            let g1 = UnitComplex::from_angle(r.gen_range(-3.2..3.2));
            let g2 = UnitComplex::from_angle(r.gen_range(-3.2..3.2));
            let t_eq = transport_rotation(&act_right(&x, g1), &act_right(&y, g2)).unwrap();
            let expect = g1.inverse().mul(&t_xy).mul(&g2);
            assert!(t_eq.dist(&expect) < 1e-12);
        }
    }

    #[test]
    fn transport_minimizes_frame_distance_over_in_plane_rotations() {
        // Grid oracle: T(x,y) is the in-plane rotation of x closest to y.
        let mut r = rng(7);
        let steps = 3600;
        for _ in 0..10 {
            let x = sample_haar_frame(&mut r);
            let y = sample_haar_frame(&mut r);
            if x.e3.dot(&y.e3) <= -0.999 {
                continue;
            }
            let t = transport_rotation(&x, &y).unwrap();
            let mut best = (f64::INFINITY, 0.0);
            for k in 0..steps {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
                let d = act_right(&x, UnitComplex::from_angle(theta)).distance(&y);
                if d < best.0 {
                    best = (d, theta);
                }
            }
            let diff = (UnitComplex::from_angle(best.1).mul(&t.inverse())).angle().abs();
            assert!(
                diff <= 2.0 * std::f64::consts::PI / steps as f64 + 1e-9,
                "grid argmin {} vs transport angle {}",
                best.1,
                t.angle()
            );
        }
    }
}
