//! Report rows and their CSV / JSON encodings.

use serde::{Deserialize, Serialize};

use crate::stats::{BlockingReport, MetricSummary};

pub const CSV_HEADER: &str =
    "scenario_id,scheme,param_name,param_value,metric,mean,stderr,ci95_half,replications";

/// `printf("%.{digits}g")`: shortest of fixed or exponent form, trailing
/// zeros removed, two-digit minimum exponent.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Twelve significant digits, the precision of every emitted number.
pub fn fmt12(x: f64) -> String {
    format_sig(x, 12)
}

/// One `(scheme, metric)` line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario_id: String,
    pub scheme: String,
    pub param_name: String,
    pub param_value: Option<f64>,
    pub metric: String,
    pub mean: f64,
    pub stderr: Option<f64>,
    pub ci95_half: Option<f64>,
    pub replications: u32,
}

fn round12(x: f64) -> f64 {
    fmt12(x).parse().unwrap_or(x)
}

/// Rows for one report, one per metric. Values are rounded to the emitted
/// precision so CSV and JSON carry identical numbers.
pub fn report_rows(
    scenario_id: &str,
    param: Option<(&str, f64)>,
    report: &BlockingReport,
) -> Vec<ReportRow> {
    report
        .metrics
        .iter()
        .map(|(metric, s): &(_, MetricSummary)| ReportRow {
            scenario_id: scenario_id.to_string(),
            scheme: report.scheme.name().to_string(),
            param_name: param.map(|p| p.0.to_string()).unwrap_or_default(),
            param_value: param.map(|p| round12(p.1)),
            metric: metric.name().to_string(),
            mean: round12(s.mean),
            stderr: s.stderr.map(round12),
            ci95_half: s.ci95_half.map(round12),
            replications: s.replications,
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt12(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            csv_field(&r.scenario_id),
            csv_field(&r.scheme),
            csv_field(&r.param_name),
            opt12(r.param_value),
            csv_field(&r.metric),
            fmt12(r.mean),
            opt12(r.stderr),
            opt12(r.ci95_half),
            r.replications.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[ReportRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

/// Parse a report CSV back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    let num = |s: &str| -> Result<f64, String> { s.parse().map_err(|e| format!("{s:?}: {e}")) };
    let opt = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    lines
        .map(|line| {
            let f = split_csv_line(line);
            if f.len() != 9 {
                return Err(format!("expected 9 fields, got {}: {line}", f.len()));
            }
            Ok(ReportRow {
                scenario_id: f[0].clone(),
                scheme: f[1].clone(),
                param_name: f[2].clone(),
                param_value: opt(&f[3])?,
                metric: f[4].clone(),
                mean: num(&f[5])?,
                stderr: opt(&f[6])?,
                ci95_half: opt(&f[7])?,
                replications: f[8].parse().map_err(|e| format!("replications: {e}"))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.75, "0.75"),
            (0.25, "0.25"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456.0, "123456"),
            (1e-5, "1e-05"),
            (1.5e-4, "0.00015"),
            (123456789012345.0, "1.23456789012e+14"),
            (999999999999.5, "1e+12"),
            (-0.5, "-0.5"),
            (0.0, "0"),
            (10.0, "10"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt12(x), want, "{x}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            ReportRow {
                scenario_id: "ref,1".into(),
                scheme: "FCA".into(),
                param_name: "new_call_rate".into(),
                param_value: Some(4.5),
                metric: "handoff_blocking".into(),
                mean: 0.0123456789012,
                stderr: Some(1e-5),
                ci95_half: Some(2.1e-5),
                replications: 20,
            },
            ReportRow {
                scenario_id: "x".into(),
                scheme: "DGCA_CBS".into(),
                param_name: String::new(),
                param_value: None,
                metric: "carried_load".into(),
                mean: 7.25,
                stderr: None,
                ci95_half: None,
                replications: 1,
            },
        ];
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(!csv.contains('\r'));
        assert_eq!(parse_csv(&csv).unwrap(), rows);
    }

    proptest! {
        #[test]
        fn twelve_digit_rendering_is_stable(x in proptest::num::f64::NORMAL) {
            let s = fmt12(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(fmt12(back), s.clone());
            let rel = ((back - x) / x).abs();
            prop_assert!(rel <= 5e-12, "{} -> {} ({})", x, s, rel);
        }
    }
}
