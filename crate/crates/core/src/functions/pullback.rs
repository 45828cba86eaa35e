use num_complex::Complex64;

use super::{AnalyticPolynomial, CircleFunction, DiscFunction, RayRestriction};
use crate::error::{domain, Result};

/// Slack allowed on `|z| <= 1` for points computed as `e^{i theta}`.
const CIRCLE_SLACK: f64 = 1e-12;

/// The self-inverse disc automorphism `(w - z) / (1 - conj(w) z)`.
pub fn mobius_map(w: Complex64, z: Complex64) -> Result<Complex64> {
    if !(w.norm() < 1.0) {
        return Err(domain(format!("automorphism parameter must satisfy |w| < 1, got |w| = {}", w.norm())));
    }
    Ok(mobius_unchecked(w, z))
}

#[inline]
fn mobius_unchecked(w: Complex64, z: Complex64) -> Complex64 {
    (w - z) / (Complex64::new(1.0, 0.0) - w.conj() * z)
}

/// `g(z) = f(phi_w(z)) sqrt(1 - |w|^2) / (1 - conj(w) z)`.
///
/// The weight makes `f -> g` an isometry of `H^2` and transports
/// `|f(z)|^2 (1 - |z|^2)` along `phi_w`. Evaluated lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackFunction {
    base: AnalyticPolynomial,
    w: Complex64,
    kernel_scale: f64,
    /// `sum_n a_n (w - z)^n (1 - conj(w) z)^(d - n)`, so that
    /// `g = kernel_scale * numerator / (1 - conj(w) z)^(d + 1)`.
    numerator: Vec<Complex64>,
}

pub fn weighted_pullback(f: &AnalyticPolynomial, w: Complex64) -> Result<PullbackFunction> {
    PullbackFunction::new(f.clone(), w)
}

impl PullbackFunction {
    pub fn new(base: AnalyticPolynomial, w: Complex64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(domain(format!("automorphism parameter must satisfy |w| < 1, got |w| = {}", w.norm())));
        }
        let numerator = expand_numerator(base.coeffs(), w);
        Ok(Self { base, w, kernel_scale: (1.0 - w.norm_sqr()).sqrt(), numerator })
    }

    pub fn base(&self) -> &AnalyticPolynomial {
        &self.base
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    /// Checked evaluation on the closed disc.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + CIRCLE_SLACK {
            return Err(domain(format!("pullback evaluated outside the closed disc at |z| = {}", z.norm())));
        }
        Ok(self.value(z))
    }
}

impl DiscFunction for PullbackFunction {
    #[inline]
    fn value(&self, z: Complex64) -> Complex64 {
        let denom = Complex64::new(1.0, 0.0) - self.w.conj() * z;
        let phi = (self.w - z) / denom;
        self.base.eval(phi) * (self.kernel_scale / denom)
    }

    fn ray_restriction(&self, dir: Complex64) -> Option<RayRestriction> {
        if self.numerator.is_empty() {
            return None;
        }
        Some(RayRestriction {
            q: super::poly::rotate(&self.numerator, dir),
            b: self.w.conj() * dir,
            scale: self.kernel_scale * self.kernel_scale,
            power: self.numerator.len() as i32,
        })
    }
}

fn expand_numerator(a: &[Complex64], w: Complex64) -> Vec<Complex64> {
    let Some(d) = a.len().checked_sub(1) else {
        return Vec::new();
    };
    let one = Complex64::new(1.0, 0.0);
    let lin = AnalyticPolynomial::new(vec![w, -one]);
    let ker = AnalyticPolynomial::new(vec![one, -w.conj()]);
    let mut lin_pows = vec![AnalyticPolynomial::constant(one)];
    let mut ker_pows = vec![AnalyticPolynomial::constant(one)];
    for k in 1..=d {
        lin_pows.push(lin_pows[k - 1].multiply(&lin));
        ker_pows.push(ker_pows[k - 1].multiply(&ker));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
    for (n, an) in a.iter().enumerate() {
        let term = lin_pows[n].multiply(&ker_pows[d - n]);
        for (o, t) in out.iter_mut().zip(term.coeffs()) {
            *o += an * t;
        }
    }
    out
}

impl CircleFunction for PullbackFunction {
    fn on_circle(&self, theta: f64) -> Complex64 {
        self.value(Complex64::from_polar(1.0, theta))
    }
}
