//! Sign-flipped Legendre polynomials `Q_n(z) = (−1)^n P_n(z)` and the slope
//! generating function
//!
//! ```text
//! J(z,t) = (1 + (1+z)t + t²) / (2(1−z)) · (1 + 2tz + t²)^{−1/2},
//! ```
//!
//! whose `t^n` coefficient equals the eigenvalue slope `dλ_{n−1}/dh`
//! evaluated at `h = 1 + z` for `n ≥ 2` (the `n = 0, 1` coefficients are the
//! genuine pole `1/(2(1−z))`).

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::{rat, RationalPolynomial};
use super::series::TruncatedSeries;
use super::SpectralError;

/// `P_n(z)` by the standard three-term recurrence.
fn legendre_p(n: usize, z: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => z,
        _ => {
            let mut prev = 1.0;
            let mut cur = z;
            for k in 1..n {
                let next = ((2 * k + 1) as f64 * z * cur - k as f64 * prev) / (k + 1) as f64;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `Q_n(z) = (−1)^n P_n(z)`. At `z = −1` the recurrence runs on small
/// integers, so `Q_n(−1) = 1` comes out exact in f64.
pub fn legendre_q(n: usize, z: f64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * legendre_p(n, z)
}

/// Bracket polynomials `B_n(z) = [t^n] (1 + (1+z)t + t²)(1 + 2tz + t²)^{−1/2}`,
/// so that the slope coefficients are `J_n(z) = B_n(z) / (2(1−z))`. Exact in
/// `z`; index `n` of the returned vector holds `B_n`.
pub fn j_bracket_polynomials(n_max: usize) -> Vec<RationalPolynomial> {
    let u = TruncatedSeries::from_terms(
        n_max.max(1),
        &[
            (1, RationalPolynomial::from_ratios(&[(0, 1), (2, 1)])),
            (2, RationalPolynomial::one()),
        ],
    );
    let numerator = TruncatedSeries::from_terms(
        n_max.max(1),
        &[
            (0, RationalPolynomial::one()),
            (1, RationalPolynomial::from_ratios(&[(1, 1), (1, 1)])),
            (2, RationalPolynomial::one()),
        ],
    );
    let bracket = u.binomial_pow(-1, 2).mul(&numerator);
    (0..=n_max).map(|n| bracket.coefficient(n).clone()).collect()
}

/// Evaluate `J_n(z) = B_n(z) / (2(1−z))` exactly at the dyadic rational `z`.
pub fn j_coefficient_from_bracket(
    bracket: &RationalPolynomial,
    z: f64,
) -> Result<f64, SpectralError> {
    if !(z < 1.0) || !z.is_finite() {
        return Err(SpectralError::DomainError {
            name: "z",
            value: z,
            domain: "[-1, 1)",
        });
    }
    let zr = BigRational::from_float(z).expect("finite z");
    let one = BigRational::from_integer(1.into());
    let value = bracket.evaluate(&zr) / (rat(2, 1) * (one - zr));
    Ok(value.to_f64().expect("value fits in f64"))
}

/// `t^n` coefficient of the closed-form `J(z,t)`.
pub fn j_coefficient(n: usize, z: f64) -> Result<f64, SpectralError> {
    let brackets = j_bracket_polynomials(n);
    j_coefficient_from_bracket(&brackets[n], z)
}
