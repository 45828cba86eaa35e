use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::kind::{conjugate_exponent, riesz_target_exponent, InequalityKind};
use super::trial::{run_trial, HarnessConfig, TrialRecord};
use crate::error::{Error, Result};
use crate::sampling::SamplerSpec;

/// A trial that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct FailedTrial {
    pub trial_index: u64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub kind: InequalityKind,
    pub spec: SamplerSpec,
    pub config: HarnessConfig,
    pub trials: u64,
    pub violations: u64,
    pub failures: Vec<FailedTrial>,
    /// `NaN` when every trial failed.
    pub min_margin: f64,
    pub worst_case: Option<TrialRecord>,
    /// Accepted samples over samples drawn.
    pub acceptance_rate: f64,
    pub rechecked: u64,
    /// The target exponent is below 1.
    pub quasi_norm: bool,
    pub elapsed: Duration,
}

impl ConjectureReport {
    pub fn failed_trials(&self) -> u64 {
        self.failures.len() as u64
    }
}

/// Checks `q r* = 4` for a Riesz configuration.
pub fn check_duality(kind: &InequalityKind) -> Result<()> {
    if let InequalityKind::Riesz { r } = kind {
        let prod = riesz_target_exponent(*r) * conjugate_exponent(*r);
        if (prod - 4.0).abs() > 1e-12 * 4.0 {
            return Err(Error::SelfCheck(format!("q r* = {prod} for r = {r}")));
        }
    }
    Ok(())
}

/// Runs trials `0..n_trials` on `threads` workers (all available when `None`)
/// and merges them in trial order, so the report does not depend on the
/// thread count.
pub fn run_campaign(
    kind: &InequalityKind,
    spec: &SamplerSpec,
    n_trials: u64,
    cfg: &HarnessConfig,
    threads: Option<usize>,
) -> Result<ConjectureReport> {
    if n_trials == 0 {
        return Err(Error::Precondition("a campaign needs at least one trial".into()));
    }
    kind.validate()?;
    kind.check_sampler(spec)?;
    cfg.quadrature.validate()?;
    check_duality(kind)?;

    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<TrialRecord>> =
        pool.install(|| (0..n_trials).into_par_iter().map(|t| run_trial(kind, spec, t, cfg)).collect());

    let mut report = ConjectureReport {
        kind: kind.clone(),
        spec: *spec,
        config: cfg.clone(),
        trials: n_trials,
        violations: 0,
        failures: Vec::new(),
        min_margin: f64::NAN,
        worst_case: None,
        acceptance_rate: 1.0,
        rechecked: 0,
        quasi_norm: kind.quasi_norm(),
        elapsed: Duration::ZERO,
    };
    let (mut accepted, mut drawn) = (0u64, 0u64);
    for (t, outcome) in (0..n_trials).zip(outcomes) {
        match outcome {
            Ok(rec) => {
                if matches!(kind, InequalityKind::UfMonotone { .. }) {
                    accepted += 1;
                    drawn += rec.attempts;
                }
                report.violations += u64::from(rec.is_violation(cfg.tol));
                report.rechecked += u64::from(rec.rechecked);
                if !(rec.margin >= report.min_margin) {
                    report.min_margin = rec.margin;
                    report.worst_case = Some(rec);
                }
            }
            Err(e) => report.failures.push(FailedTrial { trial_index: t, message: e.to_string() }),
        }
    }
    if drawn > 0 {
        report.acceptance_rate = accepted as f64 / drawn as f64;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_margin_is_minimum_of_trials() {
        let kind = InequalityKind::Dual { q: 4.0 };
        let spec = SamplerSpec::burbea(2.0, 4, 17).unwrap();
        let cfg = HarnessConfig::default();
        let rep = run_campaign(&kind, &spec, 12, &cfg, Some(2)).unwrap();
        let margins: Vec<f64> = (0..12).map(|t| run_trial(&kind, &spec, t, &cfg).unwrap().margin).collect();
        let min = margins.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(rep.min_margin, min);
        assert_eq!(rep.worst_case.as_ref().unwrap().margin, min);
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.failed_trials(), 0);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let kind = InequalityKind::Burbea { p: 1.0 };
        let spec = SamplerSpec::burbea(1.0, 8, 7).unwrap();
        let cfg = HarnessConfig::default();
        let a = run_campaign(&kind, &spec, 16, &cfg, Some(1)).unwrap();
        let b = run_campaign(&kind, &spec, 16, &cfg, Some(3)).unwrap();
        assert_eq!(a.min_margin.to_bits(), b.min_margin.to_bits());
        assert_eq!(a.worst_case.unwrap().sample, b.worst_case.unwrap().sample);
    }

    #[test]
    fn failures_are_tallied_not_propagated() {
        let kind = InequalityKind::BergmanEmbed { alpha: 2.5 };
        let spec = SamplerSpec::burbea(2.0, 6, 1).unwrap();
        let cfg = HarnessConfig {
            quadrature: crate::quadrature::QuadratureConfig {
                abs_tol: 1e-30,
                rel_tol: 1e-30,
                max_subdivisions: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        let rep = run_campaign(&kind, &spec, 3, &cfg, Some(1)).unwrap();
        assert_eq!(rep.failed_trials(), 3);
        assert!(rep.min_margin.is_nan());
        assert!(rep.worst_case.is_none());
    }

    #[test]
    fn rejects_bad_configurations() {
        let spec = SamplerSpec::burbea(1.0, 4, 0).unwrap();
        let cfg = HarnessConfig::default();
        assert!(run_campaign(&InequalityKind::Burbea { p: 1.0 }, &spec, 0, &cfg, None).is_err());
        assert!(run_campaign(&InequalityKind::Riesz { r: 2.0 }, &spec, 1, &cfg, None).is_err());
        assert!(check_duality(&InequalityKind::Riesz { r: 3.0 }).is_ok());
    }
}
