use std::time::Instant;

use num_complex::Complex64;

use super::kind::InequalityKind;
use super::trial::{draw_sample, evaluate_sides, HarnessConfig, Sample, Sides, TrialRecord, RECHECK_FACTOR};
use crate::error::{Error, Result};
use crate::functions::{AnalyticPolynomial, TrigPolynomial};
use crate::quadrature::nelder_mead;
use crate::sampling::SamplerSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Local searches; half start from the worst screened samples.
    pub restarts: usize,
    /// Samples screened for starting points.
    pub pool: u64,
    /// Objective evaluations per local search.
    pub max_evals: usize,
    /// Initial simplex edge.
    pub step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 4, pool: 16, max_evals: 300, step: 0.1 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub worst: TrialRecord,
    /// Spread between the standard and the tightened evaluation, floored at the tolerance budget.
    pub error_estimate: f64,
    /// `margin < -10 error_estimate` and below `-tol`.
    pub violation: bool,
    pub evaluations: usize,
}

fn flatten(sample: &Sample) -> Vec<f64> {
    let c = sample.coeffs();
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    c.iter().flat_map(|z| [z.re / norm, z.im / norm]).collect()
}

fn rebuild(x: &[f64], min_degree: i64, trig: bool) -> Option<Sample> {
    let coeffs: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-12) || !norm.is_finite() {
        return None;
    }
    let coeffs = coeffs.into_iter().map(|z| z / norm).collect();
    Some(if trig {
        Sample::Trig(TrigPolynomial::new(min_degree, coeffs))
    } else {
        Sample::Analytic(AnalyticPolynomial::new(coeffs))
    })
}

/// Simplex search for small margins over unit-norm coefficient vectors.
pub fn extremal_search(
    kind: &InequalityKind,
    spec: &SamplerSpec,
    search: &SearchConfig,
    cfg: &HarnessConfig,
) -> Result<SearchResult> {
    kind.validate()?;
    kind.check_sampler(spec)?;
    if !matches!(
        kind,
        InequalityKind::Burbea { .. }
            | InequalityKind::Dual { .. }
            | InequalityKind::Riesz { .. }
            | InequalityKind::Measure { .. }
    ) {
        return Err(Error::Precondition(format!("extremal search does not support {}", kind.tag())));
    }
    if search.restarts == 0 {
        return Err(Error::Precondition("extremal search needs at least one restart".into()));
    }
    let start = Instant::now();
    let trig = kind.needs_trig();
    let objective_of = |s: &Sample| {
        evaluate_sides(kind, s, &cfg.quadrature, &cfg.maximize).map(|v| v.margin()).unwrap_or(f64::INFINITY)
    };

    let mut screened: Vec<(f64, u64, Sample)> = Vec::new();
    for t in 0..search.pool.max(1) {
        let (s, _) = draw_sample(kind, spec, t)?;
        let s = rebuild(&flatten(&s), s.min_degree(), trig).unwrap_or(s);
        screened.push((objective_of(&s), t, s));
    }
    screened.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let from_pool = search.restarts.div_ceil(2).min(screened.len());
    let mut starts: Vec<(u64, Sample)> = screened.into_iter().take(from_pool).map(|(_, t, s)| (t, s)).collect();
    let mut fresh = search.pool.max(1);
    while starts.len() < search.restarts {
        let (s, _) = draw_sample(kind, spec, fresh)?;
        starts.push((fresh, s));
        fresh += 1;
    }

    let mut evaluations = 0usize;
    let mut best: Option<(f64, u64, Sample)> = None;
    for (t, s) in starts {
        let min_degree = s.min_degree();
        let nm = nelder_mead(
            |x| rebuild(x, min_degree, trig).map_or(f64::INFINITY, |s| objective_of(&s)),
            &flatten(&s),
            search.step,
            search.max_evals,
            1e-14,
        );
        evaluations += nm.evaluations;
        if let Some(found) = rebuild(&nm.x, min_degree, trig) {
            if best.as_ref().is_none_or(|b| nm.value < b.0) {
                best = Some((nm.value, t, found));
            }
        }
    }
    let Some((_, trial_index, sample)) = best else {
        return Err(Error::Maximization("extremal search found no finite margin".into()));
    };

    let sides = evaluate_sides(kind, &sample, &cfg.quadrature, &cfg.maximize)?;
    let tight: Sides = evaluate_sides(kind, &sample, &cfg.quadrature.tightened(RECHECK_FACTOR), &cfg.maximize)?;
    let budget = cfg.quadrature.abs_tol + cfg.quadrature.rel_tol * (sides.lhs.abs() + sides.rhs.abs());
    let error_estimate = (sides.margin() - tight.margin()).abs().max(budget);
    let margin = tight.margin();
    let worst = TrialRecord {
        kind: kind.tag(),
        trial_index,
        seed: spec.master_seed,
        lhs: tight.lhs,
        rhs: tight.rhs,
        margin,
        sample,
        attempts: 1,
        rechecked: true,
        elapsed: start.elapsed(),
    };
    Ok(SearchResult {
        violation: margin < -10.0 * error_estimate && margin < -cfg.tol,
        worst,
        error_estimate,
        evaluations,
    })
}
