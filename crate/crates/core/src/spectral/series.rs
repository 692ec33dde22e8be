//! Truncated power series in `t` whose coefficients are exact rational
//! polynomials in a second variable.
//!
//! All of the generating functions handled here are built from binomial
//! powers `(1 + u)^α` with `α ∈ {±1/2, −3/2, −5/2}` and `u` a quadratic in
//! `t` with no constant term, so the expansion `Σ_k C(α,k) u^k` terminates
//! at the truncation order and every coefficient comes out exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::poly::RationalPolynomial;

/// Series `Σ_{k=0..=order} c_k(x) · t^k`, truncated at `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<RationalPolynomial>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coeffs: vec![RationalPolynomial::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = RationalPolynomial::one();
        s
    }

    /// Series from explicit `(t-power, coefficient)` terms.
    pub fn from_terms(order: usize, terms: &[(usize, RationalPolynomial)]) -> Self {
        let mut s = Self::zero(order);
        for (k, p) in terms {
            if *k <= order {
                s.coeffs[*k] = s.coeffs[*k].add(p);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `t^k`; the zero polynomial beyond the truncation order.
    pub fn coefficient(&self, k: usize) -> &RationalPolynomial {
        assert!(k <= self.order, "coefficient index {k} beyond order {}", self.order);
        &self.coeffs[k]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].add(&rhs.coeffs[k]))
            .collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].sub(&rhs.coeffs[k]))
            .collect();
        TruncatedSeries { order, coeffs }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![RationalPolynomial::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        TruncatedSeries { order, coeffs }
    }

    /// Multiply every coefficient by the polynomial `p`.
    pub fn scale_poly(&self, p: &RationalPolynomial) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply by `t^k` (keeps the truncation order; high terms fall off).
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![RationalPolynomial::zero(); self.order + 1];
        if k <= self.order {
            for i in 0..=(self.order - k) {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        TruncatedSeries { order: self.order, coeffs }
    }

    /// Divide by `t`. The constant term must already be zero; the result has
    /// truncation order one lower.
    pub fn shift_down(&self) -> Self {
        assert!(
            self.coeffs[0].is_zero(),
            "division by t of a series with nonzero constant term"
        );
        assert!(self.order >= 1);
        TruncatedSeries {
            order: self.order - 1,
            coeffs: self.coeffs[1..].to_vec(),
        }
    }

    /// `(1 + u)^(num/den)` by exact binomial expansion, where `u = self` must
    /// have zero constant term (so `u^k` starts at `t^k` and the expansion
    /// terminates at the truncation order).
    pub fn binomial_pow(&self, num: i64, den: i64) -> Self {
        assert!(
            self.coeffs[0].is_zero(),
            "binomial power of a series whose constant term is not 1 + O(t)"
        );
        let alpha = BigRational::new(BigInt::from(num), BigInt::from(den));
        let mut acc = Self::one(self.order);
        let mut u_pow = Self::one(self.order);
        let mut binom = BigRational::one();
        for k in 1..=self.order {
            u_pow = u_pow.mul(self);
            // C(α, k) = C(α, k−1) · (α − k + 1) / k
            binom = binom * (&alpha - BigRational::from_integer(BigInt::from(k as i64 - 1)))
                / BigRational::from_integer(BigInt::from(k as i64));
            acc = acc.add(&u_pow.scale(&binom));
        }
        acc
    }
}
