//! Exact spectral theory of the localized parallel transport operator.
//!
//! The localized operator `T_h` averages transport data over a spherical cap
//! of height `h = 1 − cos a`. Its spectrum is discrete: the eigenvalue on the
//! unique (2n+1)-dimensional component is a degree `n+1` polynomial
//! `λ_n(h)`, recovered exactly here from closed-form generating functions.
//! Alongside the exact polynomials this module carries a recurrence-based
//! floating evaluation path for large `n`, the spectral gap
//! `λ_1 − λ_2 = h²/2 − h³/6`, the trace identity `Σ (2n+1) λ_n(h)² = h/2`,
//! the upper bound `λ_n(h) ≤ √h/√(4n+2)`, and the Legendre-polynomial
//! apparatus used to compare eigenvalue slopes across orders.

mod eigenvalues;
mod legendre;
mod poly;
mod series;
mod spherical;

pub use eigenvalues::{
    eigenvalue_numeric, eigenvalue_polynomial, eigenvalue_polynomials_up_to,
    eigenvalue_upper_bound, eigenvalues_numeric_up_to, first_n_reaching_trace_deficit,
    integral_series, quadratic_approx, spectral_gap, trace_partial_sum, DEFAULT_EXACT_ORDER_CAP,
};
pub use legendre::{j_bracket_polynomials, j_coefficient, j_coefficient_from_bracket, legendre_q};
pub use poly::{rat, RationalPolynomial};
pub use series::TruncatedSeries;
pub use spherical::{spherical_u, spherical_u_polynomial, spherical_u_polynomials_up_to};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    /// Exact polynomial requested above the configured order cap; use the
    /// recurrence-based numeric path instead.
    #[error("exact eigenvalue polynomial order {n} exceeds cap {cap}")]
    OrderExceeded { n: usize, cap: usize },
    /// Argument outside the operator's parameter domain.
    #[error("{name} = {value} outside domain {domain}")]
    DomainError {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
}
