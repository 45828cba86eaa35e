use std::fmt;

use crate::error::{domain, Result};
use crate::sampling::{SamplerKind, SamplerSpec};

/// Default exponents for the `U'_f` monotonicity test: `1.25, 1.5, ..., 3`.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=8).map(|k| 1.0 + 0.25 * k as f64).collect()
}

/// Default level ratios `0.9^k`, `k = 1..=22`, covering `[0.1, 0.9]` times the peak of `Phi`.
pub fn default_level_ratios() -> Vec<f64> {
    (1..=22).map(|k| 0.9f64.powi(k)).collect()
}

/// Target exponent `4 (1 - 1/r)` of the Riesz projection from `L^r`.
pub fn riesz_target_exponent(r: f64) -> f64 {
    if r.is_infinite() {
        4.0
    } else {
        4.0 * (1.0 - 1.0 / r)
    }
}

/// Conjugate exponent `r / (r - 1)`.
pub fn conjugate_exponent(r: f64) -> f64 {
    if r.is_infinite() {
        1.0
    } else {
        r / (r - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InequalityKind {
    /// `||f||_{A^2_{2/p}} <= ||f||_{H^p}`.
    Burbea { p: f64 },
    /// `||f||_{H^q} <= ||f||_{D_{q/2}}`.
    Dual { q: f64 },
    /// `||f||_{A^{2 alpha}_alpha} <= ||f||_{H^2}`.
    BergmanEmbed { alpha: f64 },
    /// `||P f||_{H^q} <= ||f||_{L^r}` with `q = 4 (1 - 1/r)`.
    Riesz { r: f64 },
    /// `||P f||_{H^0} <= ||f||_{L^1}`.
    RieszGeometric,
    /// `mu(E_f(lambda)) <= 1/lambda - 1` for unit-norm `f`.
    Measure { lambda: f64 },
    /// `U'_f(alpha) <= 0` on a grid, for zero-free unit-norm `f`.
    UfMonotone { alpha_grid: Vec<f64> },
    /// The radial level-set integral is nondecreasing in `1/lambda` and bounded by `||f||^2`.
    RadialMonotone { level_ratios: Vec<f64> },
    /// `||f g||_{A^2_{alpha+beta}} <= ||f||_{A^2_alpha} ||g||_{A^2_beta}`.
    LogConvex { alpha: f64, beta: f64 },
}

impl InequalityKind {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Burbea { .. } => "burbea",
            Self::Dual { .. } => "dual",
            Self::BergmanEmbed { .. } => "bergman",
            Self::Riesz { .. } => "riesz",
            Self::RieszGeometric => "riesz-geom",
            Self::Measure { .. } => "measure",
            Self::UfMonotone { .. } => "uf",
            Self::RadialMonotone { .. } => "radial",
            Self::LogConvex { .. } => "logconvex",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Burbea { p } => *p > 0.0 && *p <= 2.0,
            Self::Dual { q } => *q >= 2.0 && q.is_finite(),
            Self::BergmanEmbed { alpha } => *alpha >= 1.0 && alpha.is_finite(),
            Self::Riesz { r } => *r > 1.0,
            Self::RieszGeometric => true,
            Self::Measure { lambda } => *lambda > 0.0 && *lambda < 1.0,
            Self::UfMonotone { alpha_grid } => {
                !alpha_grid.is_empty() && alpha_grid.iter().all(|a| *a > 1.0 && a.is_finite())
            }
            Self::RadialMonotone { level_ratios } => {
                level_ratios.len() >= 2
                    && level_ratios.iter().all(|l| *l > 0.0 && *l < 1.0)
                    && level_ratios.windows(2).all(|w| w[1] < w[0])
            }
            Self::LogConvex { alpha, beta } => *alpha >= 1.0 && *beta >= 1.0 && alpha.is_finite() && beta.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("parameters out of range for {}: {self:?}", self.tag())))
        }
    }

    /// Whether the kind consumes trigonometric samples.
    pub fn needs_trig(&self) -> bool {
        matches!(self, Self::Riesz { .. } | Self::RieszGeometric)
    }

    pub fn check_sampler(&self, spec: &SamplerSpec) -> Result<()> {
        let trig = matches!(spec.kind, SamplerKind::StandardTrig { .. });
        if trig != self.needs_trig() {
            return Err(crate::Error::SamplerMismatch(format!(
                "{} needs a {} sampler",
                self.tag(),
                if self.needs_trig() { "trigonometric" } else { "Burbea" }
            )));
        }
        spec.validate()
    }

    /// Whether the target space is only quasi-normed (`q < 1`).
    pub fn quasi_norm(&self) -> bool {
        matches!(self, Self::Riesz { r } if riesz_target_exponent(*r) < 1.0)
    }

    /// Scalar parameters in a fixed order, for reports.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            Self::Burbea { p } => vec![("p", *p)],
            Self::Dual { q } => vec![("q", *q)],
            Self::BergmanEmbed { alpha } => vec![("alpha", *alpha)],
            Self::Riesz { r } => vec![("r", *r), ("q", riesz_target_exponent(*r))],
            Self::RieszGeometric => vec![("r", 1.0)],
            Self::Measure { lambda } => vec![("lambda", *lambda)],
            Self::UfMonotone { alpha_grid } => vec![
                ("alpha_min", alpha_grid.iter().cloned().fold(f64::INFINITY, f64::min)),
                ("alpha_max", alpha_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
                ("alpha_points", alpha_grid.len() as f64),
            ],
            Self::RadialMonotone { level_ratios } => vec![
                ("ratio_max", level_ratios[0]),
                ("ratio_min", *level_ratios.last().unwrap()),
                ("levels", level_ratios.len() as f64),
            ],
            Self::LogConvex { alpha, beta } => vec![("alpha", *alpha), ("beta", *beta)],
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert!(InequalityKind::Burbea { p: 2.0 }.validate().is_ok());
        assert!(InequalityKind::Burbea { p: 2.1 }.validate().is_err());
        assert!(InequalityKind::Dual { q: 1.5 }.validate().is_err());
        assert!(InequalityKind::Dual { q: f64::INFINITY }.validate().is_err());
        assert!(InequalityKind::Riesz { r: f64::INFINITY }.validate().is_ok());
        assert!(InequalityKind::Riesz { r: 1.0 }.validate().is_err());
        assert!(InequalityKind::Measure { lambda: 1.0 }.validate().is_err());
        assert!(InequalityKind::RadialMonotone { level_ratios: default_level_ratios() }.validate().is_ok());
        assert!(InequalityKind::RadialMonotone { level_ratios: vec![0.5, 0.9] }.validate().is_err());
        assert!(InequalityKind::UfMonotone { alpha_grid: vec![1.0] }.validate().is_err());
        assert!(InequalityKind::UfMonotone { alpha_grid: default_alpha_grid() }.validate().is_ok());
        assert!(InequalityKind::Riesz { r: 1.2 }.quasi_norm());
        assert!(!InequalityKind::Riesz { r: 4.0 / 3.0 }.quasi_norm());
    }

    #[test]
    fn sampler_compatibility() {
        let trig = SamplerSpec::standard_trig(2, 2, 0);
        let an = SamplerSpec::burbea(1.0, 4, 0).unwrap();
        assert!(InequalityKind::Riesz { r: 2.0 }.check_sampler(&trig).is_ok());
        assert!(InequalityKind::Riesz { r: 2.0 }.check_sampler(&an).is_err());
        assert!(InequalityKind::Burbea { p: 1.0 }.check_sampler(&trig).is_err());
        assert!(InequalityKind::Burbea { p: 1.0 }.check_sampler(&an).is_ok());
    }

    #[test]
    fn endpoint_targets() {
        assert_eq!(riesz_target_exponent(f64::INFINITY), 4.0);
        assert!((riesz_target_exponent(4.0 / 3.0) - 1.0).abs() < 1e-15);
        assert_eq!(riesz_target_exponent(2.0), 2.0);
    }

    proptest! {
        #[test]
        fn duality_product_is_four(r in 1.001f64..1e6) {
            let prod = riesz_target_exponent(r) * conjugate_exponent(r);
            prop_assert!((prod - 4.0).abs() <= 1e-12 * 4.0);
        }
    }
}
