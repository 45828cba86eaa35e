//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! status 1 if any criterion fails.
//!
//! Pass criterion numbers as arguments to run a subset:
//! `cargo test --test acceptance -- 4 7`.

use std::time::{Duration, Instant};

use contractive::cli::{report_json, ReportOptions};
use contractive::harness::{
    default_alpha_grid, default_eps_grid, default_level_ratios, necessity_check, run_campaign, ConjectureReport,
    HarnessConfig, InequalityKind,
};
use contractive::levelsets::distributional_u;
use contractive::levelsets::levelset_measure;
use contractive::norms::{
    bergman_norm, coefficient_interpolation_constant, hardy_norm, interpolation_constant, interpolation_ratio_argmax,
    littlewood_paley_h2, small_p_constant, u_value,
};
use contractive::quadrature::{maximize_on_disc, MaximizeConfig};
use contractive::sampling::{sample_burbea, SamplerSpec};
use contractive::weights::coefficient_bergman_norm;
use contractive::{AnalyticPolynomial, Complex64, DiscFunction, QuadratureConfig};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn random_poly(degree: usize, seed: u64, index: u64) -> AnalyticPolynomial {
    let spec = SamplerSpec::burbea(2.0, degree, seed).unwrap();
    sample_burbea(&spec, index).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn campaign(
    kind: InequalityKind,
    spec: SamplerSpec,
    trials: u64,
    cfg: &HarnessConfig,
) -> Result<ConjectureReport, String> {
    run_campaign(&kind, &spec, trials, cfg, None).map_err(|e| format!("{kind}: {e}"))
}

fn clean(rep: &ConjectureReport) -> bool {
    rep.violations == 0 && rep.failed_trials() == 0
}

fn summary(rep: &ConjectureReport) -> String {
    let mut s = format!(
        "{} [{} trials, {} violations, {} failed, min margin {:.3e}",
        rep.kind,
        rep.trials,
        rep.violations,
        rep.failed_trials(),
        rep.min_margin
    );
    if matches!(rep.kind, InequalityKind::UfMonotone { .. }) {
        s += &format!(", acceptance {:.2}%", 100.0 * rep.acceptance_rate);
    }
    if let Some(f) = rep.failures.first() {
        s += &format!(", first failure: trial {} {}", f.trial_index, f.message);
    }
    s + "]"
}

fn campaigns(runs: Vec<(InequalityKind, SamplerSpec, u64, HarnessConfig)>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, spec, trials, cfg) in runs {
        let rep = campaign(kind, spec, trials, &cfg)?;
        ok &= clean(&rep);
        parts.push(summary(&rep));
    }
    check(ok, parts.join("; "))
}

fn parseval() -> Outcome {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let f = random_poly((i % 33) as usize, 101, i);
        let l2 = f.l2_norm();
        let h = hardy_norm(&f, 2.0, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((h - l2).abs() / l2);
    }
    let t = start.elapsed();
    check(
        worst <= 1e-8 && t < Duration::from_secs(60),
        format!("max relative error {worst:.2e}, {:.2} s", t.as_secs_f64()),
    )
}

fn integer_burbea() -> Outcome {
    let cfg = HarnessConfig::default();
    campaigns(
        [1.0, 0.5, 1.0 / 3.0]
            .iter()
            .map(|&p| (InequalityKind::Burbea { p }, SamplerSpec::burbea(p, 16, 2).unwrap(), 5000, cfg.clone()))
            .collect(),
    )
}

fn bergman_embedding() -> Outcome {
    let cfg = HarnessConfig::default();
    campaigns(
        [2.0, 3.0]
            .iter()
            .map(|&a| {
                (
                    InequalityKind::BergmanEmbed { alpha: a },
                    SamplerSpec::burbea(2.0 / a, 8, 3).unwrap(),
                    2000,
                    cfg.clone(),
                )
            })
            .collect(),
    )
}

fn bergman_routes() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = (0.0f64, 0.0, 0.0);
    for i in 0..200u64 {
        let f = random_poly(1 + (i % 8) as usize, 104, i);
        for (p, k) in [(2.0, 1u32), (4.0, 2), (6.0, 3)] {
            for alpha in [2.0, 2.5, 3.0] {
                let quad = bergman_norm(&f, p, alpha, &cfg).map_err(|e| e.to_string())?;
                // ||f||_{A^{2k}_alpha} = ||f^k||_{A^2_alpha}^{1/k}
                let coef = coefficient_bergman_norm(&f.pow(k), alpha).map_err(|e| e.to_string())?.powf(1.0 / k as f64);
                let rel = (quad - coef).abs() / coef;
                if rel > worst.0 {
                    worst = (rel, p, alpha);
                }
            }
        }
    }
    check(worst.0 <= 1e-6, format!("max relative error {:.2e} (p={}, alpha={})", worst.0, worst.1, worst.2))
}

fn log_convexity() -> Outcome {
    let cfg = HarnessConfig { tol: 1e-12, ..HarnessConfig::default() };
    let grid = [1.0, 1.5, 2.0, 2.5];
    let mut runs = Vec::new();
    for &alpha in &grid {
        for &beta in &grid {
            runs.push((
                InequalityKind::LogConvex { alpha, beta },
                SamplerSpec::burbea(2.0, 8, 5).unwrap(),
                2000,
                cfg.clone(),
            ));
        }
    }
    let mut total = 0;
    let mut worst = f64::INFINITY;
    for (kind, spec, trials, cfg) in runs {
        let rep = campaign(kind, spec, trials, &cfg)?;
        if !clean(&rep) {
            return Err(summary(&rep));
        }
        total += rep.trials;
        worst = worst.min(rep.min_margin);
    }
    Ok(format!("16 exponent pairs, {total} pairs in total, 0 violations, min relative margin {worst:.3e}"))
}

fn extremal_levelset() -> Outcome {
    let one = AnalyticPolynomial::from_real(&[1.0]);
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for k in 1..=9 {
        let lambda = k as f64 / 10.0;
        let mu = levelset_measure(&one, lambda, &cfg).map_err(|e| e.to_string())?;
        let exact = 1.0 / lambda - 1.0;
        worst = worst.max((mu - exact).abs() / exact);
    }
    check(worst <= 1e-4, format!("max relative error {worst:.2e} over lambda = 0.1..0.9"))
}

fn distributional_identity() -> Outcome {
    let cfg = QuadratureConfig { abs_tol: 1e-6, rel_tol: 1e-4, ..QuadratureConfig::default() };
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let f = random_poly(1 + (i % 6) as usize, 107, i).normalized().unwrap();
        let peak = maximize_on_disc(|z: Complex64| f.invariant_quantity(z), &MaximizeConfig::default()).value;
        let layer = distributional_u(&f, 2.0, peak, &cfg).map_err(|e| format!("polynomial {i}: {e}"))?;
        let direct = u_value(&f, 2.0, &QuadratureConfig::default()).map_err(|e| e.to_string())?;
        worst = worst.max((layer - direct).abs() / direct);
    }
    check(worst <= 1e-3, format!("max relative error {worst:.2e} over 50 polynomials"))
}

fn littlewood_paley() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for i in 0..200u64 {
        let f = random_poly((i % 9) as usize, 108, i);
        let n2 = f.l2_norm().powi(2);
        let lp = littlewood_paley_h2(&f, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((lp - n2).abs() / n2);
    }
    check(worst <= 1e-6, format!("max relative error {worst:.2e}"))
}

fn riesz_endpoints() -> Outcome {
    let cfg = HarnessConfig::default();
    campaigns(
        [f64::INFINITY, 4.0 / 3.0]
            .iter()
            .map(|&r| (InequalityKind::Riesz { r }, SamplerSpec::standard_trig(8, 8, 9), 2000, cfg.clone()))
            .collect(),
    )
}

fn necessity_slopes() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, q) in [(2.0, 3.0), (4.0, 3.5), (f64::INFINITY, 4.5)] {
        let res = necessity_check(r, q, &default_eps_grid(), &cfg).map_err(|e| e.to_string())?;
        let good = res.slope.signum() == res.predicted.signum() && res.relative_error() <= 0.1;
        ok &= good;
        parts.push(format!(
            "(r={r}, q={q}) slope {:.5} predicted {:.5} error {:.1e}",
            res.slope,
            res.predicted,
            res.relative_error()
        ));
    }
    check(ok, parts.join("; "))
}

fn interpolation_constants() -> Outcome {
    let c = small_p_constant();
    let mut ok = (c - 1.030279).abs() <= 1e-6;
    // The coefficient-form constant peaks at the reported value on every interval [k, k+1].
    let mut peak = 0.0f64;
    for k in 2..=12u32 {
        let a = interpolation_ratio_argmax(k).map_err(|e| e.to_string())?;
        peak = peak.max(coefficient_interpolation_constant(a).map_err(|e| e.to_string())?);
    }
    ok &= peak <= c + 1e-12;
    let mut integers_exact = true;
    for k in 2..=40 {
        integers_exact &= interpolation_constant(k as f64).map_err(|e| e.to_string())? == 1.0;
        integers_exact &= coefficient_interpolation_constant(k as f64).map_err(|e| e.to_string())? == 1.0;
    }
    ok &= integers_exact;
    check(
        ok,
        format!("constant {c:.9}, largest interval peak {peak:.9}, integer constants exactly 1: {integers_exact}"),
    )
}

fn conjecture_campaigns() -> Outcome {
    let std = HarnessConfig::default();
    let measure = HarnessConfig {
        quadrature: QuadratureConfig { abs_tol: 1e-10, rel_tol: 1e-8, ..QuadratureConfig::default() },
        ..std.clone()
    };
    let levels = HarnessConfig {
        quadrature: QuadratureConfig { abs_tol: 1e-9, rel_tol: 1e-7, ..QuadratureConfig::default() },
        ..std.clone()
    };
    let n = 5000;
    let mut runs = vec![
        (InequalityKind::Burbea { p: 0.75 }, SamplerSpec::burbea(0.75, 16, 12).unwrap(), n, std.clone()),
        (InequalityKind::Burbea { p: 1.5 }, SamplerSpec::burbea(1.5, 16, 12).unwrap(), n, std.clone()),
        (InequalityKind::Dual { q: 3.0 }, SamplerSpec::burbea(2.0, 16, 12).unwrap(), n, std.clone()),
        (InequalityKind::Dual { q: 5.0 }, SamplerSpec::burbea(2.0, 16, 12).unwrap(), n, std.clone()),
        (InequalityKind::Riesz { r: 2.0 }, SamplerSpec::standard_trig(8, 8, 12), n, std.clone()),
        (InequalityKind::Riesz { r: 3.0 }, SamplerSpec::standard_trig(8, 8, 12), n, std.clone()),
        (InequalityKind::RieszGeometric, SamplerSpec::standard_trig(8, 8, 12), n, std.clone()),
    ];
    for lambda in [0.25, 0.5, 0.75] {
        runs.push((InequalityKind::Measure { lambda }, SamplerSpec::burbea(2.0, 4, 12).unwrap(), n, measure.clone()));
    }
    runs.push((
        InequalityKind::UfMonotone { alpha_grid: default_alpha_grid() },
        SamplerSpec::burbea(2.0, 4, 12).unwrap(),
        n,
        levels.clone(),
    ));
    runs.push((
        InequalityKind::RadialMonotone { level_ratios: default_level_ratios() },
        SamplerSpec::burbea(2.0, 3, 12).unwrap(),
        n,
        levels,
    ));
    campaigns(runs)
}

fn determinism() -> Outcome {
    let cfg = HarnessConfig::default();
    let kinds = [
        (InequalityKind::Burbea { p: 0.75 }, SamplerSpec::burbea(0.75, 16, 13).unwrap()),
        (InequalityKind::Riesz { r: 3.0 }, SamplerSpec::standard_trig(8, 8, 13)),
        (InequalityKind::Measure { lambda: 0.25 }, SamplerSpec::burbea(2.0, 4, 13).unwrap()),
        (InequalityKind::UfMonotone { alpha_grid: default_alpha_grid() }, SamplerSpec::burbea(2.0, 4, 13).unwrap()),
    ];
    let opts = ReportOptions { command: "test", no_timing: true };
    for (kind, spec) in kinds {
        let trials = if kind.tag() == "uf" { 16 } else { 64 };
        let reports: Vec<String> = [1, 2, 8]
            .iter()
            .map(|&t| run_campaign(&kind, &spec, trials, &cfg, Some(t)).map(|r| report_json(&r, &opts)))
            .collect::<contractive::Result<_>>()
            .map_err(|e| e.to_string())?;
        if reports[0] != reports[1] || reports[0] != reports[2] {
            return Err(format!("{kind}: reports differ across thread counts"));
        }
    }
    Ok("burbea, riesz, measure and uf reports byte-identical for 1, 2 and 8 threads".into())
}

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "Parseval identity", parseval),
        (2, "Integer Burbea campaigns", integer_burbea),
        (3, "Bergman embedding campaigns", bergman_embedding),
        (4, "Bergman quadrature vs coefficients", bergman_routes),
        (5, "Log-convexity", log_convexity),
        (6, "Level sets of the constant", extremal_levelset),
        (7, "Distributional identity", distributional_identity),
        (8, "Littlewood-Paley identity", littlewood_paley),
        (9, "Riesz endpoints", riesz_endpoints),
        (10, "Necessity slopes", necessity_slopes),
        (11, "Interpolation constants", interpolation_constants),
        (12, "Conjecture campaigns", conjecture_campaigns),
        (13, "Determinism across thread counts", determinism),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n:>2} {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n:>2} {name}: {detail} ({secs:.1} s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
