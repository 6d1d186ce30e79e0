use std::io::Write;

use anyhow::Result;
use piq_core::registry::{IdentitySpec, LimitStudy, Summary, VerificationReport};
use serde::Serialize;

use crate::Format;

#[derive(Serialize)]
struct CatalogRow<'a> {
    id: &'a str,
    family: &'a str,
    expected_status: String,
    required_params: String,
    citation: &'a str,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    id: &'a str,
    draw: Option<usize>,
    status: String,
    expected_status: String,
    params: String,
    precision: &'a str,
    lhs: Option<&'a str>,
    rhs: Option<&'a str>,
    abs_residual: Option<&'a str>,
    rel_residual: Option<&'a str>,
    lhs_tail: Option<&'a str>,
    rhs_tail: Option<&'a str>,
    lhs_terms: Option<usize>,
    rhs_terms: Option<usize>,
    lhs_method: Option<String>,
    rhs_method: Option<String>,
    diagnostic: Option<&'a str>,
    wall_time_us: u64,
}

fn method_name<T: Serialize>(m: &T) -> String {
    serde_json::to_value(m).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn joined_params(r: &VerificationReport) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// First `digits` characters of a decimal string, for terminal display.
fn short(s: Option<&str>, digits: usize) -> String {
    match s {
        None => "-".into(),
        Some(s) if s.len() <= digits => s.into(),
        Some(s) => match s.find(['e', 'E']) {
            Some(i) if i > digits => format!("{}{}", &s[..digits], &s[i..]),
            Some(_) => s.into(),
            None => format!("{}..", &s[..digits]),
        },
    }
}

pub fn write_catalog(out: &mut impl Write, entries: &[&IdentitySpec], format: Format) -> Result<()> {
    let rows: Vec<CatalogRow> = entries
        .iter()
        .map(|e| CatalogRow {
            id: &e.id,
            family: e.family.as_str(),
            expected_status: e.expected_status.to_string(),
            required_params: e.required_params.join(" "),
            citation: &e.citation,
        })
        .collect();
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &rows)?;
            buf.push(b'\n');
        }
        Format::Csv => write_csv(&mut buf, &rows)?,
        Format::Human => {
            for r in &rows {
                writeln!(buf, "{:<18} {:<18} {:<9} {}", r.id, r.family, r.expected_status, r.citation)?;
            }
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn write_reports(out: &mut impl Write, reports: &[VerificationReport], format: Format) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            if let [one] = reports {
                buf.extend_from_slice(one.to_json().as_bytes());
            } else {
                serde_json::to_writer_pretty(&mut buf, reports)?;
            }
            buf.push(b'\n');
        }
        Format::Csv => {
            let rows: Vec<ReportRow> = reports
                .iter()
                .map(|r| ReportRow {
                    id: &r.id,
                    draw: r.draw,
                    status: r.status.to_string(),
                    expected_status: r.expected_status.to_string(),
                    params: joined_params(r),
                    precision: &r.precision,
                    lhs: r.lhs.as_deref(),
                    rhs: r.rhs.as_deref(),
                    abs_residual: r.abs_residual.as_deref(),
                    rel_residual: r.rel_residual.as_deref(),
                    lhs_tail: r.lhs_tail.as_deref(),
                    rhs_tail: r.rhs_tail.as_deref(),
                    lhs_terms: r.lhs_terms,
                    rhs_terms: r.rhs_terms,
                    lhs_method: r.lhs_method.as_ref().map(method_name),
                    rhs_method: r.rhs_method.as_ref().map(method_name),
                    diagnostic: r.diagnostic.as_deref(),
                    wall_time_us: r.wall_time_us,
                })
                .collect();
            write_csv(&mut buf, &rows)?;
        }
        Format::Human => {
            for r in reports {
                let label = match r.draw {
                    Some(d) => format!("{}#{d}", r.id),
                    None => r.id.clone(),
                };
                write!(
                    buf,
                    "{:<8} {:<22} lhs={:<26} res={:<14} terms={:<6} {}",
                    r.status.to_string(),
                    label,
                    short(r.lhs.as_deref(), 24),
                    short(r.abs_residual.as_deref(), 12),
                    r.terms_used(),
                    joined_params(r),
                )?;
                if let Some(d) = &r.diagnostic {
                    write!(buf, "  ({d})")?;
                }
                writeln!(buf)?;
            }
            let s = Summary::of(reports);
            writeln!(
                buf,
                "{} reports: {} pass, {} fail, {} mismatch, {} skipped",
                s.total(),
                s.pass,
                s.fail,
                s.mismatch,
                s.skipped
            )?;
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn write_limit(out: &mut impl Write, study: &LimitStudy, format: Format) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, study)?;
            buf.push(b'\n');
        }
        Format::Csv => write_csv(&mut buf, &study.rungs)?,
        Format::Human => {
            writeln!(buf, "{}: {} against {} ({})", study.pair, study.q_identity, study.classical_identity, study.precision)?;
            writeln!(buf, "classical lhs = {}", short(Some(&study.lhs_classical), 32))?;
            for r in &study.rungs {
                write!(buf, "j={:<3} q={:<12} error={:<16} terms={}", r.j, r.q, short(r.error.as_deref(), 14), r.terms.unwrap_or(0))?;
                if let Some(d) = &r.diagnostic {
                    write!(buf, "  ({d})")?;
                }
                writeln!(buf)?;
            }
            writeln!(buf, "verdict: {}", study.verdict)?;
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

fn write_csv<T: Serialize>(buf: &mut Vec<u8>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(buf);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
