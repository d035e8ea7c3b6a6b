//! Rendering of reports, series and dumps as text, CSV or JSON.

use clap::ValueEnum;
use serde_json::json;

use hecke_core::geometry::MatSet;
use hecke_core::hecke::HeckePair;
use hecke_core::report::{overall_status, ReportStatus, VerificationReport};
use hecke_core::theta::QSeries;
use hecke_core::RingElt;

use crate::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON") + "\n"
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn render_reports(reports: &[VerificationReport], format: Format) -> String {
    let count = |s: ReportStatus| reports.iter().filter(|r| r.status == s).count();
    let overall = overall_status(reports);
    match format {
        Format::Json => json_text(&json!({
            "reports": reports,
            "summary": {
                "status": overall,
                "verified": count(ReportStatus::Verified),
                "failed": count(ReportStatus::Failed),
                "undetermined": count(ReportStatus::Undetermined),
            },
        })),
        Format::Csv => csv_text(
            &["claim", "n", "range", "status", "depth", "witness_path", "detail", "elapsed_ms"],
            reports.iter().map(|r| {
                vec![
                    r.claim.clone(),
                    opt(&r.n),
                    r.range.map(|(a, b)| format!("{a}..{b}")).unwrap_or_default(),
                    r.status.to_string(),
                    opt(&r.depth),
                    opt(&r.witness_path),
                    opt(&r.detail),
                    opt(&r.elapsed_ms),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let mut line = r.claim.clone();
                if let Some(n) = r.n {
                    line += &format!(" n={n}");
                }
                if let Some((a, b)) = r.range {
                    line += &format!(" n={a}..{b}");
                }
                line += &format!(" {}", r.status);
                if let Some(d) = r.depth {
                    line += &format!(" depth={d}");
                }
                if let Some(p) = &r.witness_path {
                    line += &format!(" witness={p}");
                }
                if let Some(ms) = r.elapsed_ms {
                    line += &format!(" {ms}ms");
                }
                if let Some(d) = &r.detail {
                    line += &format!(" ({d})");
                }
                out += &line;
                out.push('\n');
            }
            out += &format!(
                "{overall}: {} verified, {} failed, {} undetermined\n",
                count(ReportStatus::Verified),
                count(ReportStatus::Failed),
                count(ReportStatus::Undetermined)
            );
            out
        }
    }
}

pub fn render_pair(pair: &HeckePair, report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json | Format::Csv => json_text(&json!({
            "n": pair.n,
            "status": report.status,
            "tilde": pair.tilde.to_json(),
            "y": pair.y.to_json(),
        })),
        Format::Text => format!(
            "n = {}: {}\ntilde = {}\ny = {}\n",
            pair.n, report.status, pair.tilde, pair.y
        ),
    }
}

pub fn render_series(lhs: &QSeries, rhs: &QSeries, side: Side, format: Format) -> String {
    let rows: Vec<(usize, String, String, String)> = lhs
        .iter()
        .zip(rhs.iter())
        .map(|((n, l), (_, r))| (n, l.to_string(), r.to_string(), (l - r).to_string()))
        .collect();
    let header: &[&str] = match side {
        Side::Lhs => &["n", "lhs"],
        Side::Rhs => &["n", "rhs"],
        Side::Both => &["n", "lhs", "rhs", "diff"],
    };
    let pick = |(n, l, r, d): &(usize, String, String, String)| -> Vec<String> {
        match side {
            Side::Lhs => vec![n.to_string(), l.clone()],
            Side::Rhs => vec![n.to_string(), r.clone()],
            Side::Both => vec![n.to_string(), l.clone(), r.clone(), d.clone()],
        }
    };
    match format {
        Format::Csv => csv_text(header, rows.iter().map(pick)),
        Format::Json => json_text(&serde_json::Value::Array(
            rows.iter()
                .map(|row| {
                    let obj: serde_json::Map<String, serde_json::Value> = header
                        .iter()
                        .zip(pick(row))
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect(),
        )),
        Format::Text => rows.iter().map(|row| pick(row).join(" ") + "\n").collect(),
    }
}

pub fn render_elt(x: &RingElt, format: Format) -> String {
    match format {
        Format::Json => json_text(&x.to_json()),
        Format::Csv => csv_text(
            &["a", "b", "c", "d", "coeff"],
            x.terms().map(|(m, c)| {
                let mut row: Vec<String> = m.entries().iter().map(|e| e.to_string()).collect();
                row.push(c.to_string());
                row
            }),
        ),
        Format::Text => format!("{x}\n"),
    }
}

pub fn render_set(set: &MatSet, format: Format) -> String {
    match format {
        Format::Json => json_text(&set.to_json()),
        Format::Csv => csv_text(
            &["a", "b", "c", "d"],
            set.elems
                .iter()
                .map(|q| vec![q.a.to_string(), q.b.to_string(), q.c.to_string(), q.d.to_string()]),
        ),
        Format::Text => {
            let mut out = format!("{} at n = {}: {} matrices (a -b; c d)\n", set.label, set.n, set.len());
            for q in &set.elems {
                out += &format!("{q}\n");
            }
            out
        }
    }
}
