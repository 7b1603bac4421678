//! Univariate polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients in increasing degree; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `k^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, k: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * k + c)
    }

    pub fn eval_int(&self, k: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(k)))
    }

    fn mul_linear(&self, root: &BigRational) -> RationalPoly {
        // (k - root) * self
        let mut out = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        RationalPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Multiplies by `k`.
    pub fn shift(&self) -> RationalPoly {
        if self.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(BigRational::zero());
        out.extend(self.coeffs.iter().cloned());
        RationalPoly::new(out)
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> RationalPoly {
        let mut total = RationalPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = RationalPoly::new(vec![BigRational::one()]);
            let mut denom = BigRational::one();
            for (m, (xm, _)) in points.iter().enumerate() {
                if m != i {
                    basis = basis.mul_linear(xm);
                    denom *= xi - xm;
                }
            }
            total = total.add(&basis.scale(&(yi / denom)));
        }
        total
    }
}

impl fmt::Display for RationalPoly {
    /// Coefficient list in increasing degree, e.g. `[1, 7/2, 5/2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // (k+1)(k+2)/2 = 1 + 3/2 k + 1/2 k^2
        let pts: Vec<_> = (0..4)
            .map(|k| (q(k, 1), q((k + 1) * (k + 2), 2)))
            .collect();
        let p = RationalPoly::interpolate(&pts);
        assert_eq!(p, RationalPoly::new(vec![q(1, 1), q(3, 2), q(1, 2)]));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_int(10), q(66, 1));
    }

    #[test]
    fn arithmetic() {
        let p = RationalPoly::new(vec![q(1, 1), q(2, 1)]);
        assert_eq!(p.shift(), RationalPoly::new(vec![q(0, 1), q(1, 1), q(2, 1)]));
        assert!(p.sub(&p).is_zero());
        assert_eq!(RationalPoly::new(vec![q(0, 1), q(0, 1)]).degree(), None);
        assert_eq!(p.to_string(), "[1, 2]");
    }
}
