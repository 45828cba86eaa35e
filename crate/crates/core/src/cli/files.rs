//! Polynomial input files and campaign report files.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{AnalyticPolynomial, TrigPolynomial};
use crate::harness::ConjectureReport;
use crate::sampling::SamplerKind;

/// Contents of a polynomial file. `min_degree = 0` gives an analytic polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum PolynomialFile {
    Analytic(AnalyticPolynomial),
    Trig(TrigPolynomial),
}

impl PolynomialFile {
    pub fn min_degree(&self) -> i64 {
        match self {
            Self::Analytic(_) => 0,
            Self::Trig(t) => t.min_degree(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        match self {
            Self::Analytic(f) => f.coeffs(),
            Self::Trig(t) => t.coeffs(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolynomial {
    #[serde(default, skip_serializing_if = "is_zero")]
    min_degree: i64,
    coeffs: Vec<[f64; 2]>,
}

fn is_zero(n: &i64) -> bool {
    *n == 0
}

pub fn parse_polynomial(text: &str) -> Result<PolynomialFile> {
    let raw: RawPolynomial = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if raw.min_degree > 0 {
        return Err(Error::Format(format!("min_degree must be <= 0, got {}", raw.min_degree)));
    }
    let coeffs: Vec<Complex64> = raw.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
    Ok(if raw.min_degree == 0 {
        PolynomialFile::Analytic(AnalyticPolynomial::new(coeffs))
    } else {
        PolynomialFile::Trig(TrigPolynomial::new(raw.min_degree, coeffs))
    })
}

pub fn read_polynomial(path: &Path) -> Result<PolynomialFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_polynomial(&text)
}

/// Shortest round-trip form; [`parse_polynomial`] recovers the coefficients exactly.
pub fn polynomial_json(min_degree: i64, coeffs: &[Complex64]) -> String {
    let raw = RawPolynomial { min_degree, coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect() };
    serde_json::to_string(&raw).expect("finite coefficients serialize")
}

pub fn write_polynomial(path: &Path, min_degree: i64, coeffs: &[Complex64]) -> Result<()> {
    std::fs::write(path, polynomial_json(min_degree, coeffs) + "\n")?;
    Ok(())
}

/// Report settings that are not part of the campaign itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions<'a> {
    pub command: &'a str,
    /// Write `elapsed_ms = 0` so that repeated runs compare equal byte for byte.
    pub no_timing: bool,
}

/// 17 significant digits; `null` for NaN and infinities.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn coeff_array(coeffs: &[Complex64]) -> String {
    let items: Vec<String> = coeffs.iter().map(|c| format!("[{}, {}]", number(c.re), number(c.im))).collect();
    format!("[{}]", items.join(", "))
}

/// Report JSON with a fixed key order.
pub fn report_json(report: &ConjectureReport, opts: &ReportOptions<'_>) -> String {
    let mut params: Vec<(String, String)> =
        report.kind.params().into_iter().map(|(k, v)| (k.to_string(), number(v))).collect();
    match report.spec.kind {
        SamplerKind::Burbea { p, degree } => {
            params.push(("sampler_p".into(), number(p)));
            params.push(("degree".into(), degree.to_string()));
        }
        SamplerKind::StandardTrig { m, n } => {
            params.push(("M".into(), m.to_string()));
            params.push(("N".into(), n.to_string()));
        }
    }
    params.push(("real_coefficients".into(), report.spec.real_coefficients.to_string()));
    params.push(("tol".into(), number(report.config.tol)));
    params.push(("acceptance_rate".into(), number(report.acceptance_rate)));
    params.push(("rechecked".into(), report.rechecked.to_string()));
    params.push(("quasi_norm".into(), report.quasi_norm.to_string()));

    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"command\": {},", string(opts.command));
    let _ = writeln!(s, "  \"kind\": {},", string(report.kind.tag()));
    s.push_str("  \"params\": {");
    for (i, (k, v)) in params.iter().enumerate() {
        let _ = write!(s, "{}\"{k}\": {v}", if i == 0 { "" } else { ", " });
    }
    s.push_str("},\n");
    let _ = writeln!(s, "  \"seed\": {},", report.spec.master_seed);
    let _ = writeln!(s, "  \"trials\": {},", report.trials);
    let _ = writeln!(s, "  \"failed_trials\": {},", report.failed_trials());
    let _ = writeln!(s, "  \"violations\": {},", report.violations);
    let _ = writeln!(s, "  \"min_margin\": {},", number(report.min_margin));
    match &report.worst_case {
        Some(w) => {
            let _ = writeln!(
                s,
                "  \"worst_case\": {{\"trial_index\": {}, \"margin\": {}, \"coeffs\": {}}},",
                w.trial_index,
                number(w.margin),
                coeff_array(w.sample.coeffs())
            );
        }
        None => s.push_str("  \"worst_case\": null,\n"),
    }
    let q = &report.config.quadrature;
    let _ =
        writeln!(s, "  \"quadrature\": {{\"abs_tol\": {}, \"rel_tol\": {}}},", number(q.abs_tol), number(q.rel_tol));
    let elapsed = if opts.no_timing { 0 } else { report.elapsed.as_millis() };
    let _ = writeln!(s, "  \"elapsed_ms\": {elapsed},");
    let _ = writeln!(s, "  \"version\": {}", string(env!("CARGO_PKG_VERSION")));
    s.push_str("}\n");
    s
}

pub fn write_report(report: &ConjectureReport, opts: &ReportOptions<'_>, path: &Path) -> Result<()> {
    std::fs::write(path, report_json(report, opts))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_campaign, HarnessConfig, InequalityKind};
    use crate::sampling::SamplerSpec;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_examples() {
        let f = parse_polynomial(r#"{"coeffs": [[1,0],[1,0]]}"#).unwrap();
        assert_eq!(f, PolynomialFile::Analytic(AnalyticPolynomial::from_real(&[1.0, 1.0])));
        let t = parse_polynomial(r#"{"min_degree": -1, "coeffs": [[1,0],[1,0],[1,0]]}"#).unwrap();
        assert_eq!(t, PolynomialFile::Trig(TrigPolynomial::new(-1, vec![c(1.0, 0.0); 3])));
        let z = parse_polynomial(r#"{"coeffs": []}"#).unwrap();
        assert!(matches!(z, PolynomialFile::Analytic(ref f) if f.is_zero()));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "{",
            r#"{"coeffs": [[1]]}"#,
            r#"{"coeffs": [[1, 0, 0]]}"#,
            r#"{"min_degree": 1, "coeffs": []}"#,
            r#"{"coefs": []}"#,
            r#"{"coeffs": [["a", 0]]}"#,
        ] {
            assert!(matches!(parse_polynomial(bad), Err(Error::Format(_))), "{bad}");
        }
    }

    #[test]
    fn report_keys_in_fixed_order() {
        let kind = InequalityKind::Burbea { p: 1.0 };
        let spec = SamplerSpec::burbea(1.0, 4, 3).unwrap();
        let rep = run_campaign(&kind, &spec, 5, &HarnessConfig::default(), Some(1)).unwrap();
        let text = report_json(&rep, &ReportOptions { command: "test", no_timing: true });
        let keys = [
            "command",
            "kind",
            "params",
            "seed",
            "trials",
            "failed_trials",
            "violations",
            "min_margin",
            "worst_case",
            "quadrature",
            "elapsed_ms",
            "version",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\n  \"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["violations"], 0);
        assert_eq!(v["elapsed_ms"], 0);
        assert_eq!(v["min_margin"].as_f64().unwrap(), rep.min_margin);
        assert_eq!(v["worst_case"]["margin"].as_f64().unwrap(), rep.min_margin);
    }

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(number(0.1), "1.0000000000000001e-1");
        assert_eq!(number(f64::NAN), "null");
        let x = 1.0 / 3.0;
        assert_eq!(number(x).parse::<f64>().unwrap(), x);
    }

    proptest! {
        #[test]
        fn polynomial_round_trip(
            min_degree in -5i64..=0,
            parts in proptest::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 0..12),
        ) {
            let coeffs: Vec<Complex64> = parts.iter().map(|&(a, b)| c(a, b)).collect();
            let back = parse_polynomial(&polynomial_json(min_degree, &coeffs)).unwrap();
            prop_assert_eq!(back.coeffs(), &coeffs[..]);
            prop_assert_eq!(back.min_degree(), min_degree);
        }
    }
}
