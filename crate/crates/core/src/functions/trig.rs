use num_complex::Complex64;

use super::{AnalyticPolynomial, CircleFunction};

/// `sum_{n = min_degree}^{max_degree} a_n e^{i n theta}` on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    min_degree: i64,
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    /// `coeffs[k]` multiplies `z^{min_degree + k}`. Panics if `min_degree > 0`.
    pub fn new(min_degree: i64, coeffs: Vec<Complex64>) -> Self {
        assert!(min_degree <= 0, "min_degree must be <= 0");
        Self { min_degree, coeffs }
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero outside the stored range.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let k = n - self.min_degree;
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(k as usize).copied().unwrap_or_default()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

impl From<AnalyticPolynomial> for TrigPolynomial {
    fn from(f: AnalyticPolynomial) -> Self {
        Self::new(0, f.into_coeffs())
    }
}

impl CircleFunction for TrigPolynomial {
    fn on_circle(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let horner = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        if self.min_degree == 0 {
            horner
        } else {
            horner * Complex64::from_polar(1.0, self.min_degree as f64 * theta)
        }
    }

    fn is_identically_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Riesz projection: keeps the coefficients of `z^n` with `n >= 0`.
pub fn riesz_project(f: &TrigPolynomial) -> AnalyticPolynomial {
    let skip = (-f.min_degree) as usize;
    AnalyticPolynomial::new(f.coeffs.iter().skip(skip).copied().collect())
}
