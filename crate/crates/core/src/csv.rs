//! Curve files: a header row `t,<column>,...`, one row per sample,
//! optional `#` comment lines. Numbers carry 12 significant digits and are
//! written without locale dependence.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Formats `x` with 12 significant digits, trailing zeros removed; plain
/// decimal for `1e-5 <= |x| < 1e15`, otherwise `<mantissa>e<exp>`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub comments: Vec<String>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            ..Self::default()
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// CSV text; comment lines follow the data.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out
    }

    /// Right-aligned text columns for terminals.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| format_number(v)).collect())
            .collect();
        let widths: Vec<usize> = self
            .header
            .iter()
            .enumerate()
            .map(|(k, h)| cells.iter().map(|r| r[k].len()).fold(h.len(), usize::max))
            .collect();
        let mut out = String::new();
        let line = |items: &[String], out: &mut String| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.header, &mut out);
        for r in &cells {
            line(r, &mut out);
        }
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = Table::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                table.comments.push(c.trim().to_string());
                continue;
            }
            if table.header.is_empty() {
                table.header = line.split(',').map(str::to_string).collect();
                continue;
            }
            let row = line
                .split(',')
                .map(|c| {
                    c.parse::<f64>().map_err(|e| Error::Parse {
                        line: i + 1,
                        reason: format!("`{c}`: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != table.header.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("{} fields, header has {}", row.len(), table.header.len()),
                });
            }
            table.rows.push(row);
        }
        if table.header.is_empty() {
            return Err(Error::Parse {
                line: 0,
                reason: "missing header".into(),
            });
        }
        Ok(table)
    }
}
