//! Eigenvalues of the localized transport operator: exact polynomials and
//! stable numeric evaluation.
//!
//! Everything derives from the generating function
//!
//! ```text
//! I(h,t) = ½ [ h·Φ^{−1/2} − t·h(2−h)·Φ^{−3/2} − (Φ^{1/2} − (1 − t))/t ],
//! Φ = 1 + 2t(h−1) + t²,      λ_n(h) = −I_n(h) / (n(n+1)),
//! ```
//!
//! where `I_n` is the `t^n` coefficient. The exact path expands `I` with
//! rational-polynomial coefficients; the numeric path reads the same three
//! binomial powers through Legendre/Gegenbauer three-term recurrences at
//! `x = 1 − h`, which stays stable where high-degree polynomial evaluation
//! would cancel catastrophically.

use super::poly::{rat, RationalPolynomial};
use super::series::TruncatedSeries;
use super::SpectralError;

/// Largest order served by the exact-polynomial path by default.
pub const DEFAULT_EXACT_ORDER_CAP: usize = 64;

/// Largest order accepted by the numeric path.
const NUMERIC_ORDER_CAP: usize = 1_000_000;

/// The generating function `I(h,t)` truncated at `t^order`, with exact
/// polynomial-in-`h` coefficients. The `1/t` term is handled by cancelling
/// the constant term symbolically (the bracket vanishes at `t = 0`) and
/// shifting indices, so no Laurent terms arise.
pub fn integral_series(order: usize) -> TruncatedSeries {
    assert!(order >= 1, "series order must be at least 1");
    let inner = order + 1;
    // Φ = 1 + u with u = 2t(h−1) + t²
    let u = TruncatedSeries::from_terms(
        inner,
        &[
            (1, RationalPolynomial::from_ratios(&[(-2, 1), (2, 1)])),
            (2, RationalPolynomial::one()),
        ],
    );
    let h = RationalPolynomial::monomial(1, rat(1, 1));
    // h(2−h) = 2h − h²
    let h_two_minus_h = RationalPolynomial::from_ratios(&[(0, 1), (2, 1), (-1, 1)]);
    let one_minus_t = TruncatedSeries::from_terms(
        inner,
        &[
            (0, RationalPolynomial::one()),
            (1, RationalPolynomial::constant(rat(-1, 1))),
        ],
    );

    let term1 = u.binomial_pow(-1, 2).scale_poly(&h);
    let term2 = u.binomial_pow(-3, 2).shift_up(1).scale_poly(&h_two_minus_h);
    let term3 = u.binomial_pow(1, 2).sub(&one_minus_t).shift_down();

    term1.sub(&term2).sub(&term3).scale(&rat(1, 2))
}

/// Exact eigenvalue polynomials `λ_1(h), …, λ_{n_max}(h)` from a single
/// series expansion. Index 0 holds `λ_1`.
pub fn eigenvalue_polynomials_up_to(n_max: usize) -> Vec<RationalPolynomial> {
    assert!(n_max >= 1);
    let series = integral_series(n_max);
    (1..=n_max)
        .map(|n| {
            series
                .coefficient(n)
                .scale(&rat(-1, (n * (n + 1)) as i64))
        })
        .collect()
}

/// Exact eigenvalue polynomial `λ_n(h)`, a polynomial of degree `n + 1`
/// with zero constant term.
pub fn eigenvalue_polynomial(n: usize) -> Result<RationalPolynomial, SpectralError> {
    assert!(n >= 1, "eigenvalue order must be at least 1");
    if n > DEFAULT_EXACT_ORDER_CAP {
        return Err(SpectralError::OrderExceeded {
            n,
            cap: DEFAULT_EXACT_ORDER_CAP,
        });
    }
    Ok(eigenvalue_polynomials_up_to(n).pop().expect("n >= 1"))
}

fn check_h(h: f64, lo: f64, hi: f64, domain: &'static str) -> Result<(), SpectralError> {
    if !(lo..=hi).contains(&h) || !h.is_finite() {
        return Err(SpectralError::DomainError {
            name: "h",
            value: h,
            domain,
        });
    }
    Ok(())
}

/// `λ_1(h), …, λ_{n_max}(h)` by the recurrence path, in one sweep.
///
/// Writes `Φ^{−1/2} = Σ P_k(x) t^k` (Legendre), `Φ^{−3/2} = Σ G_k(x) t^k`
/// (Gegenbauer with parameter 3/2) and `Φ^{1/2}` coefficients
/// `c_k = P_k − 2x P_{k−1} + P_{k−2}`, all at `x = 1 − h`, so that
/// `I_n = ½ [h P_n − h(2−h) G_{n−1} − c_{n+1}]`.
pub fn eigenvalues_numeric_up_to(n_max: usize, h: f64) -> Result<Vec<f64>, SpectralError> {
    assert!(n_max >= 1 && n_max <= NUMERIC_ORDER_CAP);
    check_h(h, 0.0, 2.0, "[0, 2]")?;
    let x = 1.0 - h;

    let mut p = vec![0.0f64; n_max + 2];
    p[0] = 1.0;
    p[1] = x;
    for k in 1..=n_max {
        p[k + 1] = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }

    let mut g = vec![0.0f64; n_max];
    g[0] = 1.0;
    if n_max >= 2 {
        g[1] = 3.0 * x;
    }
    for m in 1..n_max.saturating_sub(1) {
        g[m + 1] = ((2 * m + 3) as f64 * x * g[m] - (m + 2) as f64 * g[m - 1]) / (m + 1) as f64;
    }

    Ok((1..=n_max)
        .map(|n| {
            let c_next = p[n + 1] - 2.0 * x * p[n] + p[n - 1];
            let i_n = 0.5 * (h * p[n] - h * (2.0 - h) * g[n - 1] - c_next);
            -i_n / (n * (n + 1)) as f64
        })
        .collect())
}

/// `λ_n(h)` by the recurrence path.
pub fn eigenvalue_numeric(n: usize, h: f64) -> Result<f64, SpectralError> {
    Ok(*eigenvalues_numeric_up_to(n, h)?.last().expect("n >= 1"))
}

/// Leading expansion `½h − (1 + (n+2)(n−1)) h²/8` of `λ_n` at small `h`.
pub fn quadratic_approx(n: usize, h: f64) -> f64 {
    assert!(n >= 1);
    let n = n as f64;
    0.5 * h - (1.0 + (n + 2.0) * (n - 1.0)) / 8.0 * h * h
}

/// Spectral gap `G(h) = λ_1(h) − λ_2(h) = ½h² − ⅙h³`, valid on `[0, 1/2]`.
pub fn spectral_gap(h: f64) -> Result<f64, SpectralError> {
    check_h(h, 0.0, 0.5, "[0, 1/2]")?;
    Ok(0.5 * h * h - h * h * h / 6.0)
}

/// Partial trace `Σ_{n=1..n_max} (2n+1) λ_n(h)²`; monotone in `n_max` and
/// bounded by the full trace `h/2`.
pub fn trace_partial_sum(h: f64, n_max: usize) -> f64 {
    let lambdas = eigenvalues_numeric_up_to(n_max, h).expect("h in [0, 2]");
    lambdas
        .iter()
        .enumerate()
        .map(|(idx, l)| (2 * (idx + 1) + 1) as f64 * l * l)
        .sum()
}

/// First `n_max` whose partial trace is within `rel_deficit` (relative) of
/// the full trace `h/2`, searching up to `n_cap`.
pub fn first_n_reaching_trace_deficit(h: f64, rel_deficit: f64, n_cap: usize) -> Option<usize> {
    let target = h / 2.0;
    if target == 0.0 {
        return Some(1);
    }
    let lambdas = eigenvalues_numeric_up_to(n_cap, h).expect("h in [0, 2]");
    let mut sum = 0.0;
    for (idx, l) in lambdas.iter().enumerate() {
        let n = idx + 1;
        sum += (2 * n + 1) as f64 * l * l;
        if (target - sum) / target < rel_deficit {
            return Some(n);
        }
    }
    None
}

/// Trace-derived bound `λ_n(h) ≤ √h / √(4n+2)`.
pub fn eigenvalue_upper_bound(n: usize, h: f64) -> f64 {
    assert!(n >= 1);
    h.sqrt() / ((4 * n + 2) as f64).sqrt()
}
