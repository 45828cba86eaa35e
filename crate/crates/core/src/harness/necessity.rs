use std::fmt;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::functions::{AnalyticPolynomial, CircleFn};
use crate::norms::{hardy_norm, lebesgue_norm};
use crate::quadrature::QuadratureConfig;

/// Default `eps` grid `0.02, 0.04, ..., 0.1`.
pub fn default_eps_grid() -> Vec<f64> {
    (1..=5).map(|k| 0.02 * k as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Consistent => "CONSISTENT",
            Self::Inconsistent => "INCONSISTENT",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NecessityResult {
    pub r: f64,
    pub q: f64,
    pub rho: f64,
    /// `(eps, ||f_eps||_{L^r} - ||P f_eps||_{H^q})`.
    pub margins: Vec<(f64, f64)>,
    /// Fitted coefficient of `eps^2`.
    pub slope: f64,
    /// Fitted coefficient of `eps^4`.
    pub quartic: f64,
    /// `1/r + rho - q/4`.
    pub predicted: f64,
    pub verdict: Verdict,
}

impl NecessityResult {
    /// `|slope - predicted| / |predicted|`; infinite when the prediction is 0
    /// and the fit is not.
    pub fn relative_error(&self) -> f64 {
        if self.predicted == 0.0 {
            if self.slope == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.slope - self.predicted).abs() / self.predicted.abs()
        }
    }
}

/// `rho = 1 - 2/r`.
pub fn necessity_rho(r: f64) -> f64 {
    if r.is_infinite() {
        1.0
    } else {
        1.0 - 2.0 / r
    }
}

/// `f_eps = (1 - eps z) / (1 - eps conj(z))^rho` on the circle.
pub fn necessity_function(r: f64, eps: f64) -> CircleFn<impl Fn(f64) -> Complex64> {
    let rho = necessity_rho(r);
    CircleFn(move |theta: f64| {
        let z = Complex64::from_polar(1.0, theta);
        (1.0 - eps * z) / (1.0 - eps * z.conj()).powf(rho)
    })
}

/// `P f_eps = 1 - rho eps^2 - eps z`.
pub fn necessity_projection(r: f64, eps: f64) -> AnalyticPolynomial {
    let rho = necessity_rho(r);
    AnalyticPolynomial::from_real(&[1.0 - rho * eps * eps, -eps])
}

/// Least-squares fit of `margin = s eps^2 + c eps^4`.
fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let (mut s22, mut s24, mut s44, mut b2, mut b4) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(e, m) in points {
        let (x2, x4) = (e * e, e.powi(4));
        s22 += x2 * x2;
        s24 += x2 * x4;
        s44 += x4 * x4;
        b2 += x2 * m;
        b4 += x4 * m;
    }
    let det = s22 * s44 - s24 * s24;
    if points.len() < 2 || det.abs() <= f64::EPSILON * s22 * s44 {
        return (if s22 > 0.0 { b2 / s22 } else { 0.0 }, 0.0);
    }
    ((b2 * s44 - b4 * s24) / det, (s22 * b4 - s24 * b2) / det)
}

/// Compares the small-`eps` behaviour of the margin along `f_eps` with the
/// predicted coefficient `1/r + rho - q/4`.
pub fn necessity_check(r: f64, q: f64, eps_grid: &[f64], cfg: &QuadratureConfig) -> Result<NecessityResult> {
    if !(r > 1.0) || !(q > 0.0) || !q.is_finite() {
        return Err(domain(format!("necessity check needs r > 1 and finite q > 0, got r={r}, q={q}")));
    }
    if eps_grid.is_empty()
        || eps_grid.iter().any(|e| !(*e > 0.0 && *e <= 0.2))
        || eps_grid.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(domain("eps grid must be sorted and lie in (0, 0.2]"));
    }
    let rho = necessity_rho(r);
    let mut margins = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let lhs = lebesgue_norm(&necessity_function(r, eps), r, cfg)?;
        let rhs = hardy_norm(&necessity_projection(r, eps), q, cfg)?;
        margins.push((eps, lhs - rhs));
    }
    let (slope, quartic) = fit(&margins);
    let predicted = if r.is_infinite() { rho - q / 4.0 } else { 1.0 / r + rho - q / 4.0 };
    let scale = margins.iter().map(|m| m.1.abs()).fold(0.0, f64::max);
    let verdict = if predicted == 0.0 {
        if slope.abs() <= 1e-6 * (1.0 + scale) {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }
    } else if slope.signum() == predicted.signum() {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(NecessityResult { r, q, rho, margins, slope, quartic, predicted, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_and_norm_closed_forms() {
        let cfg = QuadratureConfig::default();
        for &r in &[2.0, 3.0, 4.0, f64::INFINITY] {
            for &eps in &[0.05, 0.1] {
                let n = lebesgue_norm(&necessity_function(r, eps), r, &cfg).unwrap();
                let exact = if r.is_infinite() { 1.0 } else { (1.0 + eps * eps).powf(1.0 / r) };
                assert!((n - exact).abs() < 1e-12, "r={r} eps={eps} {n} {exact}");
                // Nonnegative Fourier modes of f_eps, by quadrature.
                let f = necessity_function(r, eps);
                let p = necessity_projection(r, eps);
                for k in 0..3 {
                    let c = crate::quadrature::circle_integral_vec(
                        2,
                        |t, o: &mut [f64]| {
                            let v = crate::functions::CircleFunction::on_circle(&f, t)
                                * Complex64::from_polar(1.0, -(k as f64) * t);
                            o[0] = v.re;
                            o[1] = v.im;
                        },
                        &cfg,
                    )
                    .unwrap();
                    let expect = p.coeffs().get(k).copied().unwrap_or_default();
                    assert!((Complex64::new(c[0].value, c[1].value) - expect).norm() < 1e-12, "k={k}");
                }
            }
        }
    }

    #[test]
    fn identity_case_has_zero_margin() {
        let res = necessity_check(2.0, 2.0, &default_eps_grid(), &QuadratureConfig::default()).unwrap();
        assert!(res.margins.iter().all(|m| m.1.abs() < 1e-12));
        assert_eq!(res.predicted, 0.0);
        assert_eq!(res.verdict, Verdict::Consistent);
    }

    #[test]
    fn slopes_match_expansion() {
        for &(r, q, pred) in &[(2.0, 3.0, -0.25), (4.0, 3.5, -0.125), (f64::INFINITY, 4.5, -0.125)] {
            let res = necessity_check(r, q, &default_eps_grid(), &QuadratureConfig::default()).unwrap();
            assert_eq!(res.predicted, pred);
            assert_eq!(res.verdict, Verdict::Consistent);
            assert!(res.relative_error() <= 0.1, "r={r} q={q} slope={}", res.slope);
        }
        assert_eq!(necessity_rho(4.0), 0.5);
    }

    #[test]
    fn least_squares_recovers_polynomial() {
        let pts: Vec<(f64, f64)> = default_eps_grid().iter().map(|&e| (e, -0.3 * e * e + 2.0 * e.powi(4))).collect();
        let (s, c) = fit(&pts);
        assert!((s + 0.3).abs() < 1e-10 && (c - 2.0).abs() < 1e-6);
    }
}
