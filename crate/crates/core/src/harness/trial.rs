use std::time::{Duration, Instant};

use num_complex::Complex64;

use super::kind::{riesz_target_exponent, InequalityKind};
use crate::error::{Error, Result};
use crate::functions::{riesz_project, AnalyticPolynomial, TrigPolynomial};
use crate::levelsets::{levelset_measure, normalize_to_origin, radial_levelset_integrals};
use crate::norms::{bergman_norm, geometric_mean_norm, hardy_norm, lebesgue_norm, u_functional_grid};
use crate::quadrature::{MaximizeConfig, QuadratureConfig};
use crate::sampling::{sample_burbea_attempt, sample_trig, SamplerSpec};
use crate::weights::{coefficient_bergman_norm, weighted_dirichlet_norm};

/// Rejection cap for zero-free samples.
pub const MAX_REJECTIONS: u64 = 1000;
/// Roots must lie outside `|z| <= 1 + ZERO_FREE_MARGIN`.
pub const ZERO_FREE_MARGIN: f64 = 1e-2;
/// Quadrature tightening applied before a violation is reported.
pub const RECHECK_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub quadrature: QuadratureConfig,
    pub maximize: MaximizeConfig,
    /// A margin below `-tol` is a violation.
    pub tol: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { quadrature: QuadratureConfig::default(), maximize: MaximizeConfig::default(), tol: 1e-6 }
    }
}

/// The function a margin was evaluated on.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Analytic(AnalyticPolynomial),
    Pair(AnalyticPolynomial, AnalyticPolynomial),
    Trig(TrigPolynomial),
}

impl Sample {
    pub fn min_degree(&self) -> i64 {
        match self {
            Self::Trig(t) => t.min_degree(),
            _ => 0,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        match self {
            Self::Analytic(f) | Self::Pair(f, _) => f.coeffs(),
            Self::Trig(t) => t.coeffs(),
        }
    }

    pub fn second_coeffs(&self) -> Option<&[Complex64]> {
        match self {
            Self::Pair(_, g) => Some(g.coeffs()),
            _ => None,
        }
    }
}

/// Both sides of one inequality; the margin is `rhs - lhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    fn from_margin(margin: f64) -> Self {
        Self { lhs: -margin, rhs: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub kind: &'static str,
    pub trial_index: u64,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub sample: Sample,
    /// Samples drawn, including rejected ones.
    pub attempts: u64,
    /// Whether the values come from the tightened re-evaluation.
    pub rechecked: bool,
    pub elapsed: Duration,
}

impl TrialRecord {
    pub fn is_violation(&self, tol: f64) -> bool {
        self.margin < -tol
    }
}

/// Draws the sample for `kind`, applying rejection and normalization rules.
pub fn draw_sample(kind: &InequalityKind, spec: &SamplerSpec, trial_index: u64) -> Result<(Sample, u64)> {
    kind.check_sampler(spec)?;
    let unit = |f: AnalyticPolynomial| {
        f.normalized().ok_or_else(|| Error::Precondition(format!("trial {trial_index} drew the zero polynomial")))
    };
    match kind {
        InequalityKind::Riesz { .. } | InequalityKind::RieszGeometric => {
            Ok((Sample::Trig(sample_trig(spec, trial_index)?), 1))
        }
        InequalityKind::LogConvex { .. } => {
            let f = sample_burbea_attempt(spec, trial_index, 0)?;
            let g = sample_burbea_attempt(spec, trial_index, 1)?;
            Ok((Sample::Pair(f, g), 2))
        }
        InequalityKind::Measure { .. } | InequalityKind::RadialMonotone { .. } => {
            Ok((Sample::Analytic(unit(sample_burbea_attempt(spec, trial_index, 0)?)?), 1))
        }
        InequalityKind::UfMonotone { .. } => {
            for attempt in 0..=MAX_REJECTIONS {
                let f = sample_burbea_attempt(spec, trial_index, attempt)?;
                if f.is_zero_free_on_closed_disc(ZERO_FREE_MARGIN) {
                    return Ok((Sample::Analytic(unit(f)?), attempt + 1));
                }
            }
            Err(Error::Precondition(format!(
                "trial {trial_index}: no zero-free sample within {MAX_REJECTIONS} rejections"
            )))
        }
        _ => Ok((Sample::Analytic(sample_burbea_attempt(spec, trial_index, 0)?), 1)),
    }
}

fn analytic(sample: &Sample) -> Result<&AnalyticPolynomial> {
    match sample {
        Sample::Analytic(f) => Ok(f),
        _ => Err(Error::SamplerMismatch("expected an analytic sample".into())),
    }
}

/// Both sides of `kind` at `sample`.
pub fn evaluate_sides(
    kind: &InequalityKind,
    sample: &Sample,
    quad: &QuadratureConfig,
    max_cfg: &MaximizeConfig,
) -> Result<Sides> {
    match kind {
        InequalityKind::Burbea { p } => {
            let f = analytic(sample)?;
            Ok(Sides { lhs: coefficient_bergman_norm(f, 2.0 / p)?, rhs: hardy_norm(f, *p, quad)? })
        }
        InequalityKind::Dual { q } => {
            let f = analytic(sample)?;
            Ok(Sides { lhs: hardy_norm(f, *q, quad)?, rhs: weighted_dirichlet_norm(f, q / 2.0)? })
        }
        InequalityKind::BergmanEmbed { alpha } => {
            let f = analytic(sample)?;
            Ok(Sides { lhs: bergman_norm(f, 2.0 * alpha, *alpha, quad)?, rhs: hardy_norm(f, 2.0, quad)? })
        }
        InequalityKind::Riesz { r } => {
            let Sample::Trig(t) = sample else {
                return Err(Error::SamplerMismatch("riesz needs a trigonometric sample".into()));
            };
            let pf = riesz_project(t);
            Ok(Sides { lhs: hardy_norm(&pf, riesz_target_exponent(*r), quad)?, rhs: lebesgue_norm(t, *r, quad)? })
        }
        InequalityKind::RieszGeometric => {
            let Sample::Trig(t) = sample else {
                return Err(Error::SamplerMismatch("riesz-geom needs a trigonometric sample".into()));
            };
            let pf = riesz_project(t);
            let lhs = if pf.is_zero() { 0.0 } else { geometric_mean_norm(&pf, quad)? };
            Ok(Sides { lhs, rhs: lebesgue_norm(t, 1.0, quad)? })
        }
        InequalityKind::Measure { lambda } => {
            let f = analytic(sample)?;
            let norm = normalize_to_origin(f, max_cfg)?;
            let lhs = if *lambda >= norm.peak { 0.0 } else { levelset_measure(&norm.pullback, *lambda, quad)? };
            Ok(Sides { lhs, rhs: 1.0 / lambda - 1.0 })
        }
        InequalityKind::UfMonotone { alpha_grid } => {
            let f = analytic(sample)?;
            let worst =
                u_functional_grid(f, alpha_grid, quad)?.iter().map(|u| u.u_prime).fold(f64::NEG_INFINITY, f64::max);
            Ok(Sides::from_margin(-worst))
        }
        InequalityKind::RadialMonotone { level_ratios } => {
            let f = analytic(sample)?;
            let norm = normalize_to_origin(f, max_cfg)?;
            let lambdas: Vec<f64> = level_ratios.iter().map(|r| r * norm.peak).collect();
            let values = radial_levelset_integrals(&norm.pullback, &lambdas, quad)?;
            let h2 = f.l2_norm().powi(2);
            let growth = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            let bound = values.iter().map(|v| h2 - v).fold(f64::INFINITY, f64::min);
            Ok(Sides::from_margin(growth.min(bound)))
        }
        InequalityKind::LogConvex { alpha, beta } => {
            let Sample::Pair(f, g) = sample else {
                return Err(Error::SamplerMismatch("logconvex needs a pair of samples".into()));
            };
            let denom = coefficient_bergman_norm(f, *alpha)? * coefficient_bergman_norm(g, *beta)?;
            if denom == 0.0 {
                return Ok(Sides { lhs: 0.0, rhs: 0.0 });
            }
            Ok(Sides { lhs: coefficient_bergman_norm(&f.multiply(g), alpha + beta)? / denom, rhs: 1.0 })
        }
    }
}

/// One seeded trial. A margin below `-tol` is re-evaluated at a 100x tighter
/// quadrature tolerance and the tightened values are kept; if that
/// re-evaluation fails, the trial fails.
pub fn run_trial(
    kind: &InequalityKind,
    spec: &SamplerSpec,
    trial_index: u64,
    cfg: &HarnessConfig,
) -> Result<TrialRecord> {
    kind.validate()?;
    let start = Instant::now();
    let (sample, attempts) = draw_sample(kind, spec, trial_index)?;
    let mut sides = evaluate_sides(kind, &sample, &cfg.quadrature, &cfg.maximize)?;
    let mut rechecked = false;
    if !(sides.margin() >= -cfg.tol) {
        sides = evaluate_sides(kind, &sample, &cfg.quadrature.tightened(RECHECK_FACTOR), &cfg.maximize)?;
        rechecked = true;
    }
    if !sides.margin().is_finite() {
        return Err(Error::Precondition(format!("trial {trial_index}: non-finite margin")));
    }
    Ok(TrialRecord {
        kind: kind.tag(),
        trial_index,
        seed: spec.master_seed,
        lhs: sides.lhs,
        rhs: sides.rhs,
        margin: sides.margin(),
        sample,
        attempts,
        rechecked,
        elapsed: start.elapsed(),
    })
}
