//! Weight (1, −1) spherical functions along a meridian.
//!
//! `u_n` is the spherical function the eigenvalue computation integrates
//! against; restricted to frames `x_0 ◁ e^{θA_2}` it depends only on
//! `c = cos θ` and its generating function has the closed form
//!
//! ```text
//! Σ_{n≥1} u_n(θ) tⁿ = 3 sin²θ · t² Φ^{−5/2} − t (cos θ + 1) Φ^{−3/2},
//! Φ = 1 − 2t cos θ + t².
//! ```

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::RationalPolynomial;
use super::series::TruncatedSeries;

/// `u_1(θ), …, u_{n_max}(θ)` as exact polynomials in `c = cos θ`
/// (`sin²θ` enters as `1 − c²`). Index 0 holds `u_1`.
pub fn spherical_u_polynomials_up_to(n_max: usize) -> Vec<RationalPolynomial> {
    assert!(n_max >= 1);
    let u = TruncatedSeries::from_terms(
        n_max,
        &[
            (1, RationalPolynomial::from_ratios(&[(0, 1), (-2, 1)])),
            (2, RationalPolynomial::one()),
        ],
    );
    // 3 sin²θ = 3(1 − c²)
    let three_sin_sq = RationalPolynomial::from_ratios(&[(3, 1), (0, 1), (-3, 1)]);
    let c_plus_one = RationalPolynomial::from_ratios(&[(1, 1), (1, 1)]);
    let series = u
        .binomial_pow(-5, 2)
        .shift_up(2)
        .scale_poly(&three_sin_sq)
        .sub(&u.binomial_pow(-3, 2).shift_up(1).scale_poly(&c_plus_one));
    (1..=n_max).map(|n| series.coefficient(n).clone()).collect()
}

/// Exact polynomial of `u_n` in `c = cos θ`.
pub fn spherical_u_polynomial(n: usize) -> RationalPolynomial {
    spherical_u_polynomials_up_to(n).pop().expect("n >= 1")
}

/// `u_n(θ)`, evaluated exactly at the dyadic rational `cos θ`.
pub fn spherical_u(n: usize, theta: f64) -> f64 {
    let c = BigRational::from_float(theta.cos()).expect("finite angle");
    spherical_u_polynomial(n)
        .evaluate(&c)
        .to_f64()
        .expect("value fits in f64")
}
