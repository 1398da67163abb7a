use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{CliError, SweepRow};

pub const CSV_HEADER: &str = "x,p_exact,p_improved,p_traditional,dev_improved,dev_traditional";

/// 17 significant digits in scientific notation; parses back bit-exactly.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the header and one line per row; returns the number of bytes written.
pub fn emit_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<usize, CliError> {
    if rows.is_empty() {
        return Err(CliError::EmptyRows);
    }
    let mut written = 0;
    let mut line = String::with_capacity(160);
    line.push_str(CSV_HEADER);
    line.push('\n');
    out.write_all(line.as_bytes())?;
    written += line.len();
    for row in rows {
        line.clear();
        let fields = [row.x, row.p_exact, row.p_improved, row.p_traditional, row.d_improved, row.d_traditional];
        for (i, v) in fields.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_number(*v));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
        written += line.len();
    }
    out.flush()?;
    Ok(written)
}

/// As [`emit_csv`], creating `path`; nothing is created for an empty row set.
pub fn write_csv_file(rows: &[SweepRow], path: &Path) -> Result<usize, CliError> {
    if rows.is_empty() {
        return Err(CliError::EmptyRows);
    }
    emit_csv(rows, BufWriter::new(File::create(path)?))
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CSV_HEADER) => {}
        _ => return Err(CliError::MalformedCsv { line: 1, reason: "missing header".into() }),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let values = line
                .split(',')
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::MalformedCsv { line: line_no, reason: e.to_string() })?;
            match values[..] {
                [x, p_exact, p_improved, p_traditional, d_improved, d_traditional] => Ok(SweepRow {
                    x,
                    p_exact,
                    p_improved,
                    p_traditional,
                    d_improved,
                    d_traditional,
                }),
                _ => Err(CliError::MalformedCsv { line: line_no, reason: format!("expected 6 fields, got {}", values.len()) }),
            }
        })
        .collect()
}
