//! Norm functionals: `H^p`, `L^r`, the geometric mean, weighted Bergman
//! norms, `U_f(alpha)` with its derivative, the Littlewood–Paley form of the
//! `H^2` norm, and the interpolation constants for non-integer `alpha`.

use std::f64::consts::{E, LN_2, TAU};

use crate::error::{domain, Error, Result};
use crate::functions::{AnalyticPolynomial, CircleFunction, TrigPolynomial};
use crate::quadrature::{
    bracketed_root, circle_integral, circle_integral_guarded, disc_integral, weighted_disc_integral,
    weighted_disc_integral_family, QuadratureConfig,
};
use crate::weights::coefficient_bergman_norm;

/// Points in the dense scan used for `L^infinity` norms.
pub const SUP_GRID: usize = 4096;
/// Grid maxima refined locally for `L^infinity` norms.
pub const SUP_CANDIDATES: usize = 8;
/// Finite-difference step for the `U'` cross-check.
pub const U_FD_STEP: f64 = 1e-4;

/// `sqrt(2 / (e log 2))`, the uniform bound on the coefficient-form
/// interpolation constant for `alpha = 2/p >= 2`.
pub fn small_p_constant() -> f64 {
    (2.0 / (E * LN_2)).sqrt()
}

fn check_exponent(p: f64, name: &str) -> Result<()> {
    if !(p > 0.0) || p.is_nan() {
        return Err(domain(format!("{name} must be positive, got {p}")));
    }
    Ok(())
}

/// `(mean |f|^p)^{1/p}` on the circle, for any circle function.
pub fn circle_mean_power<F: CircleFunction>(f: &F, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_exponent(p, "exponent")?;
    if !p.is_finite() {
        return Ok(sup_on_circle(f));
    }
    let mean = if p == 2.0 {
        circle_integral(|t| f.on_circle(t).norm_sqr(), cfg)?
    } else {
        circle_integral(|t| f.on_circle(t).norm().powf(p), cfg)?
    };
    Ok(mean.value.max(0.0).powf(1.0 / p))
}

/// `||f||_{H^p}` as the boundary mean. At `p = 2` the result is checked
/// against Parseval's identity.
pub fn hardy_norm(f: &AnalyticPolynomial, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !p.is_finite() {
        return Err(domain("hardy_norm needs a finite exponent"));
    }
    let value = circle_mean_power(f, p, cfg)?;
    if p == 2.0 {
        let exact = f.l2_norm();
        if (value - exact).abs() > 1e-8 * exact.max(f64::MIN_POSITIVE) {
            return Err(Error::SelfCheck(format!("H^2 quadrature {value} disagrees with Parseval value {exact}")));
        }
    }
    Ok(value)
}

/// `||f||_{L^r}` on the circle; `r = f64::INFINITY` gives the supremum.
pub fn lebesgue_norm<F: CircleFunction>(f: &F, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    circle_mean_power(f, r, cfg)
}

/// Supremum of `|f|` on the circle: a dense scan followed by golden-section
/// refinement of the best candidates.
pub fn sup_on_circle<F: CircleFunction>(f: &F) -> f64 {
    let h = TAU / SUP_GRID as f64;
    let values: Vec<f64> = (0..SUP_GRID).map(|i| f.on_circle(h * i as f64).norm()).collect();
    let mut order: Vec<usize> = (0..SUP_GRID).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut best = values[order[0]];
    for &i in order.iter().take(SUP_CANDIDATES) {
        let center = h * i as f64;
        best = best.max(golden_max(|t| f.on_circle(t).norm(), center - h, center + h));
    }
    best
}

fn golden_max<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while b - a > 1e-13 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = g(x1);
        }
    }
    f1.max(f2)
}

/// `exp(mean log |f|)`, the limit of `||f||_{H^q}` as `q -> 0`. Runs with the
/// singularity guard on.
pub fn geometric_mean_norm<F: CircleFunction>(f: &F, cfg: &QuadratureConfig) -> Result<f64> {
    if f.is_identically_zero() {
        return Err(domain("geometric mean of the zero function"));
    }
    let guarded = cfg.with_guard(true);
    let mean_log = circle_integral_guarded(|t| f.on_circle(t).norm().ln(), |t| f.on_circle(t).norm(), &guarded)?;
    Ok(mean_log.value.exp())
}

/// `||f||_{A^p_alpha} = (int |f|^p (alpha-1)(1-|z|^2)^{alpha-2} dxdy/pi)^{1/p}`.
///
/// `alpha = 1` is read as `H^p`. For even integer `p` the value is checked
/// against the coefficient formula for `||f^{p/2}||_{A^2_alpha}`.
pub fn bergman_norm(f: &AnalyticPolynomial, p: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_exponent(p, "p")?;
    if alpha == 1.0 {
        return hardy_norm(f, p, cfg);
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(domain(format!("Bergman weight needs alpha >= 1, got {alpha}")));
    }
    let integral = weighted_disc_integral(alpha, |z, _| f.eval(z).norm().powf(p), cfg)?;
    let value = integral.value.max(0.0).powf(1.0 / p);
    let half = p / 2.0;
    if half.fract() == 0.0 && half <= 64.0 {
        let k = half as u32;
        let exact = coefficient_bergman_norm(&f.pow(k), alpha)?.powf(1.0 / half);
        if (value - exact).abs() > 1e-6 * exact.max(f64::MIN_POSITIVE) {
            return Err(Error::SelfCheck(format!(
                "A^{p}_{alpha} quadrature {value} disagrees with coefficient value {exact}"
            )));
        }
    }
    Ok(value)
}

/// `U_f(alpha)` and `U'_f(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UValue {
    pub u: f64,
    pub u_prime: f64,
}

fn check_unit(f: &AnalyticPolynomial) -> Result<()> {
    let n = f.l2_norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!("U_f needs ||f||_H2 = 1, got {n}")));
    }
    Ok(())
}

/// `U_f(alpha) = ||f||_{A^{2 alpha}_alpha}^{2 alpha}` and its alpha-derivative
/// for `||f||_{H^2} = 1`, `alpha > 1`.
///
/// With `dA_alpha` the normalized weight, `U' = int |f|^{2a} (1/(a-1) - L) dA_alpha`
/// where `L = log(1 / (|f|^2 (1-|z|^2)))`.
pub fn u_functional(f: &AnalyticPolynomial, alpha: f64, cfg: &QuadratureConfig) -> Result<UValue> {
    Ok(u_functional_grid(f, &[alpha], cfg)?[0])
}

/// [`u_functional`] at several exponents, sharing quadrature nodes.
pub fn u_functional_grid(f: &AnalyticPolynomial, alphas: &[f64], cfg: &QuadratureConfig) -> Result<Vec<UValue>> {
    check_unit(f)?;
    if alphas.iter().any(|a| !(*a > 1.0) || !a.is_finite()) {
        return Err(domain(format!("U_f needs alpha > 1, got {alphas:?}")));
    }
    let inv: Vec<f64> = alphas.iter().map(|a| 1.0 / (a - 1.0)).collect();
    let out = weighted_disc_integral_family(
        alphas,
        2,
        |z, t, o: &mut [f64]| {
            let m2 = f.eval(z).norm_sqr();
            if m2 == 0.0 {
                o.iter_mut().for_each(|v| *v = 0.0);
                return;
            }
            let (lm, lt) = (m2.ln(), t.ln());
            for (j, (&a, &inv)) in alphas.iter().zip(&inv).enumerate() {
                let pw = (a * lm).exp();
                o[2 * j] = pw;
                o[2 * j + 1] = pw * (inv + lm + lt);
            }
        },
        cfg,
    )?;
    Ok(out.chunks_exact(2).map(|c| UValue { u: c[0].value, u_prime: c[1].value }).collect())
}

/// `U_f(alpha)` alone; `alpha = 1` gives `||f||_{H^2}^2 = 1`.
pub fn u_value(f: &AnalyticPolynomial, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_unit(f)?;
    if alpha == 1.0 {
        return Ok(f.l2_norm().powi(2));
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(domain(format!("U_f needs alpha >= 1, got {alpha}")));
    }
    Ok(weighted_disc_integral(alpha, |z, _| f.eval(z).norm_sqr().powf(alpha), cfg)?.value)
}

/// [`u_functional`] plus a central-difference check of `U'` with step
/// [`U_FD_STEP`]; disagreement above `1e-4` is a self-check error.
pub fn u_functional_checked(f: &AnalyticPolynomial, alpha: f64, cfg: &QuadratureConfig) -> Result<UValue> {
    let value = u_functional(f, alpha, cfg)?;
    if alpha - U_FD_STEP <= 1.0 {
        return Ok(value);
    }
    let plus = u_value(f, alpha + U_FD_STEP, cfg)?;
    let minus = u_value(f, alpha - U_FD_STEP, cfg)?;
    let fd = (plus - minus) / (2.0 * U_FD_STEP);
    if (fd - value.u_prime).abs() > 1e-4 {
        return Err(Error::SelfCheck(format!("U' = {} but central difference gives {fd}", value.u_prime)));
    }
    Ok(value)
}

/// `|f(0)|^2 + int |f'|^2 log(1/|z|^2) dxdy/pi`, which equals `||f||_{H^2}^2`.
pub fn littlewood_paley_h2(f: &AnalyticPolynomial, cfg: &QuadratureConfig) -> Result<f64> {
    let df = f.derivative();
    let f0 = f.coeffs().first().map_or(0.0, |c| c.norm_sqr());
    if df.is_zero() {
        return Ok(f0);
    }
    let area = disc_integral(|z, t| df.eval(z).norm_sqr() * -(-t).ln_1p(), cfg)?;
    Ok(f0 + area.value)
}

fn split_alpha(alpha: f64) -> (f64, f64) {
    let k = alpha.floor();
    (k, alpha - k)
}

/// `(alpha - 1) / (([alpha] - 1)^{1 - {alpha}} [alpha]^{{alpha}})` for `alpha >= 2`.
pub fn interpolation_ratio(alpha: f64) -> Result<f64> {
    if !(alpha >= 2.0) || !alpha.is_finite() {
        return Err(domain(format!("interpolation constant needs alpha >= 2, got {alpha}")));
    }
    let (k, frac) = split_alpha(alpha);
    if frac == 0.0 {
        return Ok(1.0);
    }
    Ok((alpha - 1.0) / ((k - 1.0).powf(1.0 - frac) * k.powf(frac)))
}

/// Constant `C` with `||f||_{A^{2 alpha}_alpha} <= C ||f||_{H^2}`:
/// the interpolation ratio to the power `1/(2 alpha)`. Exactly 1 at integers.
pub fn interpolation_constant(alpha: f64) -> Result<f64> {
    Ok(interpolation_ratio(alpha)?.powf(1.0 / (2.0 * alpha)))
}

/// The same bound in coefficient form: the ratio to the power `1/2`,
/// bounded by [`small_p_constant`].
pub fn coefficient_interpolation_constant(alpha: f64) -> Result<f64> {
    Ok(interpolation_ratio(alpha)?.sqrt())
}

/// Maximizer of the interpolation ratio on `[k, k+1]`, `k >= 2`:
/// `1 + 1/log(k/(k-1))`, found here by root solving the derivative of
/// `log((alpha-1) (k/(k-1))^{-alpha})`.
pub fn interpolation_ratio_argmax(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(domain("interval index must be at least 2"));
    }
    let beta = (k as f64 / (k as f64 - 1.0)).ln();
    let deriv = |a: f64| 1.0 / (a - 1.0) - beta;
    let lo = k as f64;
    let hi = (k + 1) as f64;
    if deriv(lo) <= 0.0 {
        return Ok(lo);
    }
    if deriv(hi) >= 0.0 {
        return Ok(hi);
    }
    bracketed_root(deriv, lo, hi, 1e-15)
}

/// Which functional a [`NormRequest`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    Hardy { p: f64 },
    Lebesgue { r: f64 },
    GeometricMean,
    Bergman { p: f64, alpha: f64 },
    UValue { alpha: f64 },
    UDerivative { alpha: f64 },
    LittlewoodPaley,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRequest {
    pub kind: NormKind,
    pub cfg: QuadratureConfig,
}

/// Input accepted by [`NormRequest::evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub enum NormInput {
    Analytic(AnalyticPolynomial),
    Trig(TrigPolynomial),
}

impl NormInput {
    fn analytic(&self) -> Result<AnalyticPolynomial> {
        match self {
            NormInput::Analytic(f) => Ok(f.clone()),
            NormInput::Trig(t) if t.min_degree() == 0 => Ok(AnalyticPolynomial::new(t.coeffs().to_vec())),
            NormInput::Trig(_) => Err(domain("this norm needs an analytic polynomial (min_degree 0)")),
        }
    }
}

impl NormRequest {
    pub fn evaluate(&self, input: &NormInput) -> Result<f64> {
        let cfg = &self.cfg;
        match self.kind {
            NormKind::Hardy { p } => hardy_norm(&input.analytic()?, p, cfg),
            NormKind::Lebesgue { r } => match input {
                NormInput::Analytic(f) => lebesgue_norm(f, r, cfg),
                NormInput::Trig(t) => lebesgue_norm(t, r, cfg),
            },
            NormKind::GeometricMean => match input {
                NormInput::Analytic(f) => geometric_mean_norm(f, cfg),
                NormInput::Trig(t) => geometric_mean_norm(t, cfg),
            },
            NormKind::Bergman { p, alpha } => bergman_norm(&input.analytic()?, p, alpha, cfg),
            NormKind::UValue { alpha } => u_value(&input.analytic()?, alpha, cfg),
            NormKind::UDerivative { alpha } => Ok(u_functional(&input.analytic()?, alpha, cfg)?.u_prime),
            NormKind::LittlewoodPaley => littlewood_paley_h2(&input.analytic()?, cfg),
        }
    }
}
