//! Result files: `results.csv`, one `curve_*.dat` per plotted series and a
//! `manifest.txt` recording the config hash, seed and artifact list.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Curve, Empirical, ResultRow, ResultSet};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "family_true,theta,family_used,theta_prime,S,h,replicates,\
emp_mean,emp_std,emp_ci_lo,emp_ci_hi,theory_error,theory_profile,p_value";

const MISSING: &str = "NA";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| MISSING.to_string(), |x| x.to_string())
}

fn csv_line(r: &ResultRow) -> String {
    let e = r.empirical;
    [
        r.family_true.to_string(),
        r.theta.to_string(),
        r.family_used.to_string(),
        r.theta_prime.to_string(),
        r.size.to_string(),
        r.step.to_string(),
        r.replicates.to_string(),
        opt(e.map(|e| e.mean)),
        opt(e.map(|e| e.std)),
        opt(e.map(|e| e.ci_low)),
        opt(e.map(|e| e.ci_high)),
        opt(r.theory_error),
        r.theory_profile.to_string(),
        opt(r.p_value),
    ]
    .join(",")
}

/// CSV text of the rows, header included.
pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_line(r));
        out.push('\n');
    }
    out
}

/// Parse `results.csv` text back into rows. Floats are written in shortest
/// round-trip form, so this recovers the emitted rows exactly.
pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "missing or unexpected results header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (index, line) in lines {
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 14 {
            return Err(bad(format!("expected 14 fields, got {}", fields.len())));
        }
        let num = |i: usize| {
            fields[i]
                .parse::<f64>()
                .map_err(|_| bad(format!("bad number `{}`", fields[i])))
        };
        let maybe = |i: usize| -> Result<Option<f64>> {
            if fields[i] == MISSING {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let int = |i: usize| {
            fields[i]
                .parse::<usize>()
                .map_err(|_| bad(format!("bad integer `{}`", fields[i])))
        };
        let mean = maybe(7)?;
        let empirical = match mean {
            None => None,
            Some(mean) => Some(Empirical {
                mean,
                std: num(8)?,
                ci_low: num(9)?,
                ci_high: num(10)?,
            }),
        };
        rows.push(ResultRow {
            family_true: fields[0].parse().map_err(|e: Error| bad(e.to_string()))?,
            theta: num(1)?,
            family_used: fields[2].parse().map_err(|e: Error| bad(e.to_string()))?,
            theta_prime: num(3)?,
            size: int(4)?,
            step: num(5)?,
            replicates: int(6)?,
            empirical,
            theory_error: maybe(11)?,
            theory_profile: fields[12].parse().map_err(|e: Error| bad(e.to_string()))?,
            p_value: maybe(13)?,
        });
    }
    Ok(rows)
}

fn curve_text(curve: &Curve) -> String {
    let mut out = format!("# S {}\n", curve.y_label);
    for (x, y) in &curve.points {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Write the result files into `dir` (created if needed) and return the
/// paths written, manifest last. Identical result sets produce
/// byte-identical files.
pub fn emit_results(set: &ResultSet, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<(String, String)> = vec![("results.csv".into(), results_csv(&set.rows))];
    for curve in &set.curves {
        files.push((format!("curve_{}.dat", slug(&curve.name)), curve_text(curve)));
    }
    let mut names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    names.sort_unstable();
    let mut manifest = format!("config_sha256={}\nseed={}\n", set.config_hash, set.seed);
    for name in names {
        let _ = writeln!(manifest, "artifact={name}");
    }
    files.push(("manifest.txt".into(), manifest));

    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
