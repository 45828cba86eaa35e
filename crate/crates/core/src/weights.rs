//! Binomial weight sequences `c_alpha(n)`, the coefficients of `(1 - z)^{-alpha}`,
//! and the two weighted coefficient norms built from them.

use crate::error::{domain, Error, Result};
use crate::functions::AnalyticPolynomial;

/// Largest index for which weights are computed.
pub const MAX_WEIGHT_INDEX: usize = 1 << 16;

/// `c_alpha(0..=n_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    alpha: f64,
    values: Vec<f64>,
}

impl WeightSequence {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_alpha(alpha: f64, name: &str) -> Result<()> {
    if !alpha.is_finite() || alpha < 1.0 {
        return Err(domain(format!("{name} must be a finite real >= 1, got {alpha}")));
    }
    Ok(())
}

/// Computes `c_alpha(n)` by the ratio recurrence `c(n) = c(n-1) (n + alpha - 1) / n`.
pub fn binomial_weights(alpha: f64, n_max: usize) -> Result<WeightSequence> {
    check_alpha(alpha, "alpha")?;
    if n_max > MAX_WEIGHT_INDEX {
        return Err(domain(format!("n_max {n_max} exceeds the cap {MAX_WEIGHT_INDEX}")));
    }
    let mut values = Vec::with_capacity(n_max + 1);
    let mut c = 1.0_f64;
    values.push(c);
    for n in 1..=n_max {
        let nf = n as f64;
        c *= (nf + alpha - 1.0) / nf;
        if !c.is_finite() {
            return Err(Error::Overflow(n));
        }
        values.push(c);
    }
    Ok(WeightSequence { alpha, values })
}

/// `(sum |a_n|^2 / c_alpha(n))^{1/2}`, the `A^2_alpha` norm read off the coefficients.
pub fn coefficient_bergman_norm(f: &AnalyticPolynomial, alpha: f64) -> Result<f64> {
    check_alpha(alpha, "alpha")?;
    let coeffs = f.coeffs();
    if coeffs.is_empty() {
        return Ok(0.0);
    }
    let w = binomial_weights(alpha, coeffs.len() - 1)?;
    let sum: f64 = coeffs.iter().zip(w.values()).map(|(a, c)| a.norm_sqr() / c).sum();
    Ok(sum.sqrt())
}

/// `(sum |a_n|^2 c_beta(n))^{1/2}`, the weighted Dirichlet norm `D_beta`.
pub fn weighted_dirichlet_norm(f: &AnalyticPolynomial, beta: f64) -> Result<f64> {
    check_alpha(beta, "beta")?;
    let coeffs = f.coeffs();
    if coeffs.is_empty() {
        return Ok(0.0);
    }
    let w = binomial_weights(beta, coeffs.len() - 1)?;
    let sum: f64 = coeffs.iter().zip(w.values()).map(|(a, c)| a.norm_sqr() * c).sum();
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn product_formula(alpha: f64, n: usize) -> f64 {
        (1..=n).map(|j| (j as f64 + alpha - 1.0) / j as f64).product()
    }

    fn real_poly(c: &[f64]) -> AnalyticPolynomial {
        AnalyticPolynomial::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[test]
    fn small_weight_tables() {
        assert_eq!(binomial_weights(1.0, 3).unwrap().values(), &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(binomial_weights(2.0, 3).unwrap().values(), &[1.0, 2.0, 3.0, 4.0]);
        let w3 = binomial_weights(3.0, 2).unwrap();
        for (n, v) in w3.values().iter().enumerate() {
            assert!((v - product_formula(3.0, n)).abs() < 1e-14);
        }
        assert_eq!(w3.values(), &[1.0, 3.0, 6.0]);
    }

    #[test]
    fn rejects_small_alpha_and_huge_index() {
        assert!(matches!(binomial_weights(0.5, 3), Err(Error::Domain(_))));
        assert!(matches!(binomial_weights(f64::NAN, 3), Err(Error::Domain(_))));
        assert!(binomial_weights(2.0, MAX_WEIGHT_INDEX + 1).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(binomial_weights(400.0, MAX_WEIGHT_INDEX), Err(Error::Overflow(_))));
    }

    #[test]
    fn coefficient_norm_examples() {
        let onepz = real_poly(&[1.0, 1.0]);
        assert!((coefficient_bergman_norm(&onepz, 2.0).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
        let c = AnalyticPolynomial::new(vec![Complex64::new(3.0, -4.0)]);
        assert!((coefficient_bergman_norm(&c, 2.7).unwrap() - 5.0).abs() < 1e-15);
        let z2 = real_poly(&[0.0, 0.0, 1.0]);
        assert!((coefficient_bergman_norm(&z2, 3.0).unwrap() - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        assert!(coefficient_bergman_norm(&onepz, 0.9).is_err());
    }

    #[test]
    fn dirichlet_norm_examples() {
        assert_eq!(weighted_dirichlet_norm(&real_poly(&[1.0]), 4.2).unwrap(), 1.0);
        assert!((weighted_dirichlet_norm(&real_poly(&[1.0, 1.0]), 2.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((weighted_dirichlet_norm(&real_poly(&[0.0, 1.0]), 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(weighted_dirichlet_norm(&AnalyticPolynomial::zero(), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn vandermonde_convolution() {
        let grid = [1.0, 1.5, 2.0, 2.5, 3.0];
        for &a in &grid {
            for &b in &grid {
                let ca = binomial_weights(a, 64).unwrap();
                let cb = binomial_weights(b, 64).unwrap();
                let cab = binomial_weights(a + b, 64).unwrap();
                for n in 0..=64 {
                    let conv: f64 = (0..=n).map(|k| ca.values()[k] * cb.values()[n - k]).sum();
                    let rel = (conv - cab.values()[n]).abs() / cab.values()[n];
                    assert!(rel < 1e-12, "alpha={a} beta={b} n={n} rel={rel}");
                }
            }
        }
    }

    #[test]
    fn weights_are_submultiplicative() {
        for &beta in &[1.0, 1.25, 1.5, 2.0, 3.5, 7.0] {
            let c = binomial_weights(beta, 128).unwrap();
            for n1 in 0..=64 {
                for n2 in 0..=64 {
                    let lhs = c.values()[n1 + n2];
                    let rhs = c.values()[n1] * c.values()[n2];
                    assert!(lhs <= rhs * (1.0 + 1e-14), "beta={beta} n1={n1} n2={n2}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn recurrence_and_monotonicity(alpha in 1.0f64..12.0, n_max in 0usize..300) {
            let w = binomial_weights(alpha, n_max).unwrap();
            prop_assert_eq!(w.values()[0], 1.0);
            for n in 1..=n_max {
                let ratio = w.values()[n] / w.values()[n - 1];
                prop_assert!((ratio - (n as f64 + alpha - 1.0) / n as f64).abs() < 1e-13);
                prop_assert!(w.values()[n] >= w.values()[n - 1]);
            }
        }

        #[test]
        fn both_norms_reduce_to_l2_at_one(c in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..20)) {
            let f = AnalyticPolynomial::new(c.iter().map(|&(re, im)| Complex64::new(re, im)).collect());
            let l2 = f.l2_norm();
            prop_assert!((coefficient_bergman_norm(&f, 1.0).unwrap() - l2).abs() <= 1e-14 * (1.0 + l2));
            prop_assert!((weighted_dirichlet_norm(&f, 1.0).unwrap() - l2).abs() <= 1e-14 * (1.0 + l2));
        }
    }
}
