use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CircleFunction, DiscFunction, RayRestriction};

/// `f(z) = sum a_n z^n` with finitely many coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalyticPolynomial {
    coeffs: Vec<Complex64>,
}

impl AnalyticPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(n: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Largest index with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(&self) -> Self {
        match self.degree() {
            Some(d) => Self::new(self.coeffs[..=d].to_vec()),
            None => Self::zero(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(sum |a_n|^2)^{1/2}`, which equals the `H^2` norm.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `f / ||f||_{H^2}`; `None` for the zero polynomial.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.l2_norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect())
    }

    /// Coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `f^k` by repeated multiplication; `f^0 = 1`.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.multiply(self))
    }

    /// Roots as eigenvalues of the companion matrix. Empty for constants.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[d];
        let mut companion = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        companion.schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
    }

    /// True when every root lies in `|z| > 1 + margin`. Constants (nonzero) qualify.
    pub fn is_zero_free_on_closed_disc(&self, margin: f64) -> bool {
        if self.is_zero() {
            return false;
        }
        self.roots().iter().all(|r| r.norm() > 1.0 + margin)
    }
}

impl DiscFunction for AnalyticPolynomial {
    fn value(&self, z: Complex64) -> Complex64 {
        self.eval(z)
    }

    fn ray_restriction(&self, dir: Complex64) -> Option<RayRestriction> {
        Some(RayRestriction { q: rotate(&self.coeffs, dir), b: Complex64::new(0.0, 0.0), scale: 1.0, power: 0 })
    }
}

/// Coefficients of `r -> p(r dir)`.
pub(crate) fn rotate(coeffs: &[Complex64], dir: Complex64) -> Vec<Complex64> {
    let mut u = Complex64::new(1.0, 0.0);
    coeffs
        .iter()
        .map(|c| {
            let v = c * u;
            u *= dir;
            v
        })
        .collect()
}

impl CircleFunction for AnalyticPolynomial {
    fn on_circle(&self, theta: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, theta))
    }

    fn is_identically_zero(&self) -> bool {
        self.is_zero()
    }
}
