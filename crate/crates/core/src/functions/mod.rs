//! Analytic polynomials, trigonometric polynomials and weighted Möbius
//! pullbacks, plus the Riesz projection between them.

mod poly;
mod pullback;
mod trig;

pub use poly::AnalyticPolynomial;
pub use pullback::{mobius_map, weighted_pullback, PullbackFunction};
pub use trig::{riesz_project, TrigPolynomial};

use num_complex::Complex64;

/// A function that can be evaluated at points of the closed unit disc.
///
/// `value` does no domain checking; callers stay inside `|z| <= 1`.
pub trait DiscFunction {
    fn value(&self, z: Complex64) -> Complex64;

    /// `|f(z)|^2 (1 - |z|^2)`, invariant under weighted pullbacks.
    fn invariant_quantity(&self, z: Complex64) -> f64 {
        self.value(z).norm_sqr() * (1.0 - z.norm_sqr())
    }

    /// Closed form of `r -> |f(r dir)|^2 (1 - r^2)`, when one is available.
    fn ray_restriction(&self, dir: Complex64) -> Option<RayRestriction> {
        let _ = dir;
        None
    }
}

/// `r -> scale |Q(r)|^2 (1 - r^2) / |1 - r b|^(2 power)` for a polynomial `Q`
/// with complex coefficients in the real variable `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayRestriction {
    pub q: Vec<Complex64>,
    pub b: Complex64,
    pub scale: f64,
    pub power: i32,
}

impl RayRestriction {
    #[inline]
    pub fn invariant(&self, r: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.q.iter().rev() {
            acc = acc * r + c;
        }
        let mut v = self.scale * acc.norm_sqr() * ((1.0 - r) * (1.0 + r));
        if self.power != 0 {
            let d = (1.0 - r * self.b.re).powi(2) + (r * self.b.im).powi(2);
            v /= d.powi(self.power);
        }
        v
    }
}

/// A function on the unit circle, parametrized by angle.
pub trait CircleFunction {
    fn on_circle(&self, theta: f64) -> Complex64;

    /// Whether the function is known to vanish identically.
    fn is_identically_zero(&self) -> bool {
        false
    }
}

/// Adapts a closure `theta -> value` to [`CircleFunction`].
pub struct CircleFn<F>(pub F);

impl<F: Fn(f64) -> Complex64> CircleFunction for CircleFn<F> {
    fn on_circle(&self, theta: f64) -> Complex64 {
        (self.0)(theta)
    }
}

impl<T: DiscFunction + ?Sized> DiscFunction for &T {
    fn value(&self, z: Complex64) -> Complex64 {
        (**self).value(z)
    }

    fn invariant_quantity(&self, z: Complex64) -> f64 {
        (**self).invariant_quantity(z)
    }

    fn ray_restriction(&self, dir: Complex64) -> Option<RayRestriction> {
        (**self).ray_restriction(dir)
    }
}

impl<T: CircleFunction + ?Sized> CircleFunction for &T {
    fn on_circle(&self, theta: f64) -> Complex64 {
        (**self).on_circle(theta)
    }

    fn is_identically_zero(&self) -> bool {
        (**self).is_identically_zero()
    }
}
