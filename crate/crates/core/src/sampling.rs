//! Seeded random test functions.
//!
//! Every sample is a pure function of `(spec, trial_index, attempt)`: the
//! ChaCha key is built from the master seed and the attempt counter, and the
//! trial index selects the ChaCha stream. Trials therefore never share state
//! and can be replayed in any order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Result};
use crate::functions::{AnalyticPolynomial, TrigPolynomial};
use crate::weights::binomial_weights;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplerKind {
    /// Analytic polynomial with `E|a_n|^2 = c_{2/p}(n)`.
    Burbea { p: f64, degree: usize },
    /// Trigonometric polynomial with i.i.d. standard coefficients `a_{-m}..a_n`.
    StandardTrig { m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub master_seed: u64,
    /// Draw real Gaussians instead of rotation-invariant complex ones.
    pub real_coefficients: bool,
}

impl SamplerSpec {
    pub fn burbea(p: f64, degree: usize, master_seed: u64) -> Result<Self> {
        let spec = Self { kind: SamplerKind::Burbea { p, degree }, master_seed, real_coefficients: false };
        spec.validate()?;
        Ok(spec)
    }

    pub fn standard_trig(m: usize, n: usize, master_seed: u64) -> Self {
        Self { kind: SamplerKind::StandardTrig { m, n }, master_seed, real_coefficients: false }
    }

    pub fn with_real_coefficients(mut self, real: bool) -> Self {
        self.real_coefficients = real;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let SamplerKind::Burbea { p, .. } = self.kind {
            if !(p > 0.0 && p <= 2.0) {
                return Err(domain(format!("sampler exponent p must lie in (0, 2], got {p}")));
            }
        }
        Ok(())
    }

    /// Generator for one `(trial, attempt)` pair.
    pub fn stream(&self, trial_index: u64, attempt: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&attempt.to_le_bytes());
        key[16..24].copy_from_slice(b"hardysmp");
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(trial_index);
        rng
    }

    fn gaussian(&self, rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
        if self.real_coefficients {
            let x: f64 = StandardNormal.sample(rng);
            Complex64::new(x * variance.sqrt(), 0.0)
        } else {
            let s = (0.5 * variance).sqrt();
            let x: f64 = StandardNormal.sample(rng);
            let y: f64 = StandardNormal.sample(rng);
            Complex64::new(x * s, y * s)
        }
    }
}

/// Analytic sample for a Burbea spec.
pub fn sample_burbea(spec: &SamplerSpec, trial_index: u64) -> Result<AnalyticPolynomial> {
    sample_burbea_attempt(spec, trial_index, 0)
}

/// As [`sample_burbea`], drawing from an independent stream per rejection attempt.
pub fn sample_burbea_attempt(spec: &SamplerSpec, trial_index: u64, attempt: u64) -> Result<AnalyticPolynomial> {
    let SamplerKind::Burbea { p, degree } = spec.kind else {
        return Err(crate::Error::SamplerMismatch("expected a Burbea sampler".into()));
    };
    spec.validate()?;
    let weights = binomial_weights(2.0 / p, degree)?;
    let mut rng = spec.stream(trial_index, attempt);
    let coeffs = weights.values().iter().map(|&v| spec.gaussian(&mut rng, v)).collect();
    Ok(AnalyticPolynomial::new(coeffs))
}

/// Trigonometric sample for a standard spec.
pub fn sample_trig(spec: &SamplerSpec, trial_index: u64) -> Result<TrigPolynomial> {
    let SamplerKind::StandardTrig { m, n } = spec.kind else {
        return Err(crate::Error::SamplerMismatch("expected a trigonometric sampler".into()));
    };
    let mut rng = spec.stream(trial_index, 0);
    let coeffs = (0..=m + n).map(|_| spec.gaussian(&mut rng, 1.0)).collect();
    Ok(TrigPolynomial::new(-(m as i64), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn second_moments(spec: &SamplerSpec, draws: u64, len: usize) -> Vec<f64> {
        let mut acc = vec![0.0; len];
        for t in 0..draws {
            let c = match spec.kind {
                SamplerKind::Burbea { .. } => sample_burbea(spec, t).unwrap().into_coeffs(),
                SamplerKind::StandardTrig { .. } => sample_trig(spec, t).unwrap().coeffs().to_vec(),
            };
            for (a, x) in acc.iter_mut().zip(&c) {
                *a += x.norm_sqr();
            }
        }
        acc.iter().map(|a| a / draws as f64).collect()
    }

    #[test]
    fn trig_variance_is_one() {
        let draws = 100_000u64;
        let spec = SamplerSpec::standard_trig(2, 2, 11);
        for m in second_moments(&spec, draws, 5) {
            assert!((0.98..=1.02).contains(&m), "{m}");
            // |a|^2 is exponential: standard error is mean / sqrt(draws).
            assert!((m - 1.0).abs() <= 3.0 / (draws as f64).sqrt(), "{m}");
        }
    }

    #[test]
    fn burbea_variance_follows_weights() {
        let draws = 100_000u64;
        let spec = SamplerSpec::burbea(1.0, 3, 5).unwrap();
        for (n, m) in second_moments(&spec, draws, 4).into_iter().enumerate() {
            let target = (n + 1) as f64;
            assert!((m / target - 1.0).abs() <= 3.0 / (draws as f64).sqrt(), "n={n} {m}");
        }
        let real = SamplerSpec::burbea(2.0, 2, 5).unwrap().with_real_coefficients(true);
        for m in second_moments(&real, draws, 3) {
            // Real Gaussian: |a|^2 has standard deviation sqrt(2).
            assert!((m - 1.0).abs() <= 3.0 * 2f64.sqrt() / (draws as f64).sqrt(), "{m}");
        }
        let f = sample_burbea(&real, 3).unwrap();
        assert!(f.coeffs().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn deterministic_and_distinct() {
        let spec = SamplerSpec::burbea(1.0, 8, 42).unwrap();
        assert_eq!(sample_burbea(&spec, 7).unwrap(), sample_burbea(&spec, 7).unwrap());
        let a = sample_burbea(&spec, 7).unwrap();
        let b = sample_burbea(&spec, 8).unwrap();
        let c = sample_burbea_attempt(&spec, 7, 1).unwrap();
        assert_ne!(a.coeffs()[0], b.coeffs()[0]);
        assert_ne!(a.coeffs()[0], c.coeffs()[0]);
        let other_seed = SamplerSpec::burbea(1.0, 8, 43).unwrap();
        assert_ne!(a.coeffs()[0], sample_burbea(&other_seed, 7).unwrap().coeffs()[0]);
    }

    #[test]
    fn shapes_and_errors() {
        let t = sample_trig(&SamplerSpec::standard_trig(0, 4, 1), 0).unwrap();
        assert_eq!(t.min_degree(), 0);
        assert_eq!(t.coeffs().len(), 5);
        assert_eq!(TrigPolynomial::from(crate::functions::riesz_project(&t)), t);
        let t = sample_trig(&SamplerSpec::standard_trig(3, 1, 1), 0).unwrap();
        assert_eq!(t.min_degree(), -3);
        assert_eq!(sample_burbea(&SamplerSpec::burbea(0.5, 0, 1).unwrap(), 0).unwrap().coeffs().len(), 1);
        assert!(SamplerSpec::burbea(2.5, 3, 0).is_err());
        assert!(SamplerSpec::burbea(0.0, 3, 0).is_err());
        assert!(sample_trig(&SamplerSpec::burbea(1.0, 3, 0).unwrap(), 0).is_err());
        assert!(sample_burbea(&SamplerSpec::standard_trig(1, 1, 0), 0).is_err());
    }
}
