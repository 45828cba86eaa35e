use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::adaptive::{integrate_interval_vec, Integral};
use super::{QuadratureConfig, GUARD_MIN_WIDTH};
use crate::error::{domain, Error, Result};

// The circle is parametrized by t in [0, 1], theta = 2 pi t, so integrals over
// t are already normalized means.

/// `(1/2pi) int_0^{2pi} integrand(theta) dtheta`.
pub fn circle_integral<F>(mut integrand: F, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    let out = integrate_interval_vec(0.0, 1.0, 1, |t, o: &mut [f64]| o[0] = integrand(TAU * t), None, 0.0, cfg)?;
    Ok(out[0])
}

/// Multi-channel circle mean; all channels share nodes and refinement.
pub fn circle_integral_vec<F>(dim: usize, mut integrand: F, cfg: &QuadratureConfig) -> Result<Vec<Integral>>
where
    F: FnMut(f64, &mut [f64]),
{
    integrate_interval_vec(0.0, 1.0, dim, |t, o: &mut [f64]| integrand(TAU * t, o), None, 0.0, cfg)
}

/// Circle mean of an integrand with possible logarithmic singularities where
/// `magnitude(theta)` vanishes. With `cfg.singularity_guard`, panels where
/// the magnitude is tiny are split down to width 1e-6 radians.
pub fn circle_integral_guarded<F, M>(mut integrand: F, magnitude: M, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let guard = |t: f64| magnitude(TAU * t);
    let guard_ref: Option<&dyn Fn(f64) -> f64> = if cfg.singularity_guard { Some(&guard) } else { None };
    let out = integrate_interval_vec(
        0.0,
        1.0,
        1,
        |t, o: &mut [f64]| o[0] = integrand(TAU * t),
        guard_ref,
        GUARD_MIN_WIDTH / TAU,
        cfg,
    )?;
    Ok(out[0])
}

/// Runs an outer radial integration whose integrand is itself a circle mean,
/// capturing the first inner failure.
fn nested<W>(dim: usize, cfg: &QuadratureConfig, mut radial: W) -> Result<Vec<Integral>>
where
    W: FnMut(f64, &QuadratureConfig, &mut [f64]) -> Result<f64>,
{
    let inner_cfg = cfg.inner();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut max_inner_err = 0.0_f64;
    let outer = integrate_interval_vec(
        0.0,
        1.0,
        dim,
        |s, o: &mut [f64]| {
            if failure.borrow().is_some() {
                o.iter_mut().for_each(|v| *v = 0.0);
                return;
            }
            match radial(s, &inner_cfg, o) {
                Ok(e) => max_inner_err = max_inner_err.max(e),
                Err(err) => {
                    *failure.borrow_mut() = Some(err);
                    o.iter_mut().for_each(|v| *v = 0.0);
                }
            }
        },
        None,
        0.0,
        cfg,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let mut out = outer?;
    for i in &mut out {
        i.error += max_inner_err;
    }
    Ok(out)
}

/// `int_D integrand dxdy/pi` for a `dim`-channel integrand.
///
/// The integrand receives `z` and `t = 1 - |z|^2` (passed separately so that
/// boundary-concentrated weights keep full precision). Radially the
/// substitution `|z|^2 = 1 - u^2` is used, which resolves `t^{-1/2}`-type
/// boundary behaviour; angularly an adaptive circle rule.
pub fn disc_integral_vec<F>(dim: usize, mut integrand: F, cfg: &QuadratureConfig) -> Result<Vec<Integral>>
where
    F: FnMut(Complex64, f64, &mut [f64]),
{
    nested(dim, cfg, |u, inner, o| {
        let t = u * u;
        let r = (1.0 - t).max(0.0).sqrt();
        let ring =
            circle_integral_vec(dim, |theta, v: &mut [f64]| integrand(Complex64::from_polar(r, theta), t, v), inner)?;
        let mut err: f64 = 0.0;
        for (k, i) in ring.iter().enumerate() {
            o[k] = 2.0 * u * i.value;
            err = err.max(2.0 * u * i.error);
        }
        Ok(err)
    })
}

pub fn disc_integral<F>(mut integrand: F, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(Complex64, f64) -> f64,
{
    Ok(disc_integral_vec(1, |z, t, o: &mut [f64]| o[0] = integrand(z, t), cfg)?[0])
}

/// `int_D integrand (alpha - 1)(1 - |z|^2)^{alpha - 2} dxdy/pi` for `alpha > 1`.
///
/// With `t = 1 - |z|^2 = s^k`, `k = max(1, ceil(1/(alpha - 1)))`, the weight
/// becomes `(alpha - 1) k s^{k(alpha-1) - 1} ds`, bounded on `[0, 1]`.
pub fn weighted_disc_integral_vec<F>(
    dim: usize,
    alpha: f64,
    integrand: F,
    cfg: &QuadratureConfig,
) -> Result<Vec<Integral>>
where
    F: FnMut(Complex64, f64, &mut [f64]),
{
    weighted_disc_integral_family(&[alpha], dim, integrand, cfg)
}

/// [`weighted_disc_integral_vec`] for several exponents on shared nodes.
///
/// The integrand fills `alphas.len()` blocks of `dim` channels; block `j` is
/// weighted by `dA_{alphas[j]}`. The substitution exponent `k` is taken from
/// the smallest alpha, which keeps every weight bounded.
pub fn weighted_disc_integral_family<F>(
    alphas: &[f64],
    dim: usize,
    mut integrand: F,
    cfg: &QuadratureConfig,
) -> Result<Vec<Integral>>
where
    F: FnMut(Complex64, f64, &mut [f64]),
{
    if alphas.is_empty() || alphas.iter().any(|a| !(*a > 1.0) || !a.is_finite()) {
        return Err(domain(format!("weighted disc integral needs alpha > 1, got {alphas:?}")));
    }
    let amin = alphas.iter().cloned().fold(f64::INFINITY, f64::min);
    let k = (1.0 / (amin - 1.0) - 1e-12).ceil().max(1.0);
    let weights: Vec<(f64, f64)> = alphas.iter().map(|a| ((a - 1.0) * k, k * (a - 1.0) - 1.0)).collect();
    let total = dim * alphas.len();
    nested(total, cfg, |s, inner, o| {
        let t = s.powf(k);
        let r = (1.0 - t).max(0.0).sqrt();
        let ring =
            circle_integral_vec(total, |theta, v: &mut [f64]| integrand(Complex64::from_polar(r, theta), t, v), inner)?;
        let mut err: f64 = 0.0;
        for (j, &(scale, exponent)) in weights.iter().enumerate() {
            let weight = if exponent == 0.0 { scale } else { scale * s.powf(exponent) };
            for i in j * dim..(j + 1) * dim {
                o[i] = weight * ring[i].value;
                err = err.max(weight * ring[i].error);
            }
        }
        Ok(err)
    })
}

pub fn weighted_disc_integral<F>(alpha: f64, mut integrand: F, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(Complex64, f64) -> f64,
{
    Ok(weighted_disc_integral_vec(1, alpha, |z, t, o: &mut [f64]| o[0] = integrand(z, t), cfg)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn circle_examples() {
        assert!((circle_integral(|_| 1.0, &cfg()).unwrap().value - 1.0).abs() < 1e-15);
        let sq = circle_integral(|t| Complex64::new(1.0 + t.cos(), t.sin()).norm_sqr(), &cfg()).unwrap();
        assert!((sq.value - 2.0).abs() < 1e-14);
        // 2|cos(theta/2)| has mean 4/pi.
        let abs = circle_integral(|t| Complex64::new(1.0 + t.cos(), t.sin()).norm(), &cfg()).unwrap();
        assert!((abs.value - 4.0 / PI).abs() < 1e-10, "{abs:?}");
    }

    #[test]
    fn trig_polynomials_integrate_to_their_constant_term() {
        // Degree up to 15 in theta.
        for deg in 0..=15 {
            let v = circle_integral(|t| 0.7 + (deg as f64 * t).cos() * 3.0 + (deg as f64 * t).sin(), &cfg()).unwrap();
            let expected = if deg == 0 { 3.7 } else { 0.7 };
            assert!((v.value - expected).abs() < 1e-13, "deg {deg}: {}", v.value);
        }
    }

    #[test]
    fn disc_examples() {
        assert!((disc_integral(|_, _| 1.0, &cfg()).unwrap().value - 1.0).abs() < 1e-13);
        assert!((disc_integral(|z, _| z.norm_sqr(), &cfg()).unwrap().value - 0.5).abs() < 1e-13);
        let w2 = disc_integral(|_, t| (2.0 - 1.0) * t.powf(2.0 - 2.0), &cfg()).unwrap();
        assert!((w2.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn bergman_weights_have_unit_mass() {
        for &alpha in &[1.5, 2.0, 2.5, 3.0, 4.0] {
            let full = disc_integral(|_, t| (alpha - 1.0) * t.powf(alpha - 2.0), &cfg()).unwrap();
            assert!((full.value - 1.0).abs() < 1e-8, "alpha {alpha}: {full:?}");
            let weighted = weighted_disc_integral(alpha, |_, _| 1.0, &cfg()).unwrap();
            assert!((weighted.value - 1.0).abs() < 1e-12, "alpha {alpha}: {weighted:?}");
        }
        for &alpha in &[1.1, 1.25, 7.5, 40.0] {
            let weighted = weighted_disc_integral(alpha, |_, _| 1.0, &cfg()).unwrap();
            assert!((weighted.value - 1.0).abs() < 1e-10, "alpha {alpha}: {weighted:?}");
        }
        assert!(weighted_disc_integral(1.0, |_, _| 1.0, &cfg()).is_err());
    }

    #[test]
    fn family_matches_single_exponents() {
        let alphas = [1.25, 1.5, 2.0, 3.0];
        let fam = weighted_disc_integral_family(
            &alphas,
            2,
            |z, t, o: &mut [f64]| {
                for j in 0..alphas.len() {
                    o[2 * j] = 1.0;
                    o[2 * j + 1] = z.norm_sqr() + t.sqrt();
                }
            },
            &cfg(),
        )
        .unwrap();
        for (j, &a) in alphas.iter().enumerate() {
            assert!((fam[2 * j].value - 1.0).abs() < 1e-10);
            let single = weighted_disc_integral(a, |z, t| z.norm_sqr() + t.sqrt(), &cfg()).unwrap();
            assert!((fam[2 * j + 1].value - single.value).abs() < 1e-10);
        }
        assert!(weighted_disc_integral_family(&[], 1, |_, _, _: &mut [f64]| {}, &cfg()).is_err());
    }

    #[test]
    fn weighted_moment_matches_beta_integral() {
        // int |z|^2 dA_alpha = 1/alpha.
        for &alpha in &[1.25, 2.0, 2.5, 3.7] {
            let m = weighted_disc_integral(alpha, |z, _| z.norm_sqr(), &cfg()).unwrap();
            assert!((m.value - 1.0 / alpha).abs() < 1e-10, "alpha {alpha}: {m:?}");
        }
    }

    #[test]
    fn tightening_stays_within_prior_error() {
        let f = |t: f64| (1.0 + 0.9 * t.cos()).powf(0.37) * (2.0 + (3.0 * t).sin());
        let at = |tol: f64| QuadratureConfig { abs_tol: tol, rel_tol: tol, ..cfg() };
        let mut tol = 1e-4;
        let mut prev = circle_integral(f, &at(tol)).unwrap();
        for _ in 0..12 {
            tol *= 0.5;
            let next = circle_integral(f, &at(tol)).unwrap();
            assert!((next.value - prev.value).abs() <= prev.error.max(1e-15), "tol {tol}");
            prev = next;
        }
    }

    #[test]
    fn inner_failures_propagate() {
        let bad = QuadratureConfig { abs_tol: 1e-30, rel_tol: 1e-30, max_subdivisions: 1, ..cfg() };
        assert!(matches!(disc_integral(|z, _| z.re.abs().sqrt(), &bad), Err(Error::Convergence { .. })));
    }
}
