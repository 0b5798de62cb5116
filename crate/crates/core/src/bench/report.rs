//! CSV and markdown reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::detectors::Detector;
use crate::error::{Error, Result};

use super::runner::ReportRow;

pub const CSV_HEADER: &str =
    "plate_id,detector,noise_kind,level,seed,pfom,k_actual,k_detected,wall_time_ms";

/// Level of the noisy column when present.
pub const NOISY_LEVEL: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidParameter(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

/// Noise level with two to four decimals: `0.3` -> `0.30`, `0.125` -> `0.125`.
pub fn format_level(level: f64) -> String {
    let mut s = format!("{level:.4}");
    while s.ends_with('0') && s.len() > s.find('.').map_or(0, |d| d + 3) {
        s.pop();
    }
    s
}

pub fn write_report(rows: &[ReportRow], format: ReportFormat) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    Ok(match format {
        ReportFormat::Csv => write_csv(rows),
        ReportFormat::Markdown => write_markdown(rows),
    }
    .into_bytes())
}

fn write_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.4},{},{},{:.3}",
            r.plate_id,
            r.detector,
            r.noise_kind,
            format_level(r.level),
            r.seed,
            r.pfom_score,
            r.k_actual,
            r.k_detected,
            r.wall_time_ms
        );
    }
    out
}

fn detector_type(name: &str) -> &'static str {
    match name.parse::<Detector>() {
        Ok(Detector::Copda) => "Collection of pixel",
        Ok(Detector::Morph) => "Morphological",
        Ok(_) => "Single value pixel",
        Err(_) => "-",
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Detector x {clean, noisy} mean PFOM. The noisy column uses level 0.30
/// when present, otherwise the highest nonzero level in the rows.
fn write_markdown(rows: &[ReportRow]) -> String {
    let same = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let noisy = if rows.iter().any(|r| same(r.level, NOISY_LEVEL)) {
        Some(NOISY_LEVEL)
    } else {
        rows.iter()
            .map(|r| r.level)
            .filter(|&l| l > 0.0)
            .max_by(f64::total_cmp)
    };

    // keep first-seen detector order
    let mut order: Vec<&str> = Vec::new();
    let mut cells: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in rows {
        let entry = cells.entry(&r.detector).or_insert_with(|| {
            order.push(&r.detector);
            (Vec::new(), Vec::new())
        });
        if r.level == 0.0 {
            entry.0.push(r.pfom_score);
        } else if noisy.is_some_and(|n| same(r.level, n)) {
            entry.1.push(r.pfom_score);
        }
    }

    let pct = noisy.map_or("-".to_string(), |n| format!("{}%", (n * 100.0).round()));
    let fmt = |m: Option<f64>| m.map_or("-".to_string(), |v| format!("{v:.4}"));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "| Edge Detection | Type | Image without noise | Image with noise ({pct}) |"
    );
    out.push_str("|---|---|---|---|\n");
    for name in order {
        let (clean, noisy) = &cells[name];
        let _ = writeln!(
            out,
            "| {name} | {} | {} | {} |",
            detector_type(name),
            fmt(mean(clean)),
            fmt(mean(noisy))
        );
    }

    let mut plates: Vec<&str> = rows.iter().map(|r| r.plate_id.as_str()).collect();
    plates.sort_unstable();
    plates.dedup();
    let mut seeds: Vec<u64> = rows.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let _ = writeln!(
        out,
        "\nMean PFOM over {} plate(s) x {} seed(s), {} noise.",
        plates.len(),
        seeds.len(),
        rows[0].noise_kind
    );
    out
}

/// Parse rows back from a CSV report.
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(Error::Config {
                line: 1,
                message: format!("expected header {CSV_HEADER}"),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let err = |m: &str| Error::Config {
                line: i + 1,
                message: m.to_string(),
            };
            let f: Vec<&str> = line.trim_end().split(',').collect();
            if f.len() != 9 {
                return Err(err("expected 9 fields"));
            }
            let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(what));
            let int = |s: &str, what: &str| s.parse::<u64>().map_err(|_| err(what));
            Ok(ReportRow {
                plate_id: f[0].to_string(),
                detector: f[1].to_string(),
                noise_kind: f[2].parse().map_err(|_| err("bad noise_kind"))?,
                level: num(f[3], "bad level")?,
                seed: int(f[4], "bad seed")?,
                pfom_score: num(f[5], "bad pfom")?,
                k_actual: int(f[6], "bad k_actual")? as usize,
                k_detected: int(f[7], "bad k_detected")? as usize,
                wall_time_ms: num(f[8], "bad wall_time_ms")?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseKind;

    fn row(det: &str, level: f64, score: f64) -> ReportRow {
        ReportRow {
            plate_id: "plate_000".into(),
            detector: det.into(),
            noise_kind: NoiseKind::Impulse,
            level,
            seed: 1,
            pfom_score: score,
            k_actual: 100,
            k_detected: 90,
            wall_time_ms: 0.0,
        }
    }

    #[test]
    fn level_formatting() {
        assert_eq!(format_level(0.0), "0.00");
        assert_eq!(format_level(0.3), "0.30");
        assert_eq!(format_level(0.48), "0.48");
        assert_eq!(format_level(0.125), "0.125");
        assert_eq!(format_level(1.0), "1.00");
    }

    #[test]
    fn csv_line_format() {
        let out =
            String::from_utf8(write_report(&[row("canny", 0.3, 0.5)], ReportFormat::Csv).unwrap())
                .unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "plate_000,canny,impulse,0.30,1,0.5000,100,90,0.000"
        );
        assert!(out.ends_with('\n'));
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![row("sobel", 0.0, 0.25), row("copda", 0.48, 0.8125)];
        let text = String::from_utf8(write_report(&rows, ReportFormat::Csv).unwrap()).unwrap();
        assert_eq!(parse_csv(&text).unwrap(), rows);
        assert!(parse_csv("a,b\n").is_err());
    }

    #[test]
    fn markdown_pivot_shape() {
        let rows = vec![
            row("canny", 0.0, 0.9),
            row("canny", 0.3, 0.4),
            row("copda", 0.0, 0.8),
            row("copda", 0.3, 0.7),
        ];
        let md = String::from_utf8(write_report(&rows, ReportFormat::Markdown).unwrap()).unwrap();
        let table: Vec<&str> = md.lines().take_while(|l| l.starts_with('|')).collect();
        assert_eq!(
            table[0],
            "| Edge Detection | Type | Image without noise | Image with noise (30%) |"
        );
        assert_eq!(table.len(), 4);
        assert_eq!(table[2], "| canny | Single value pixel | 0.9000 | 0.4000 |");
        assert_eq!(
            table[3],
            "| copda | Collection of pixel | 0.8000 | 0.7000 |"
        );
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(matches!(
            write_report(&[], ReportFormat::Csv),
            Err(Error::EmptyReport)
        ));
        assert!(matches!(
            write_report(&[], ReportFormat::Markdown),
            Err(Error::EmptyReport)
        ));
    }
}
