//! Text formats for invariants: the BRI CSV and 17-significant-digit numbers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::invariant::{BriMatrix, Column, BRI_WIDTH};

/// Version of the BRI CSV and coordinate CSV layouts.
pub const FORMAT_VERSION: &str = "1";

pub const BRI_CSV_HEADER: &str = "i,xN,yN,zN,xA,yA,zA,xC,yC,zC";

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// trimmed, exponent notation outside `[1e-5, 1e17)`. Both zeros print as `0`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn write_bri_csv(bri: &BriMatrix) -> String {
    let mut out = String::with_capacity(bri.len() * 200);
    out.push_str(BRI_CSV_HEADER);
    out.push('\n');
    for (i, row) in bri.rows().iter().enumerate() {
        write!(out, "{}", i + 1).unwrap();
        for v in row {
            out.push(',');
            out.push_str(&format_g17(*v));
        }
        out.push('\n');
    }
    out
}

pub fn read_bri_csv(text: &str) -> Result<BriMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == BRI_CSV_HEADER => {}
        Some((n, _)) => {
            return Err(Error::Parse { line: n + 1, message: format!("expected header `{BRI_CSV_HEADER}`") })
        }
        None => return Err(Error::Parse { line: 1, message: "empty BRI file".into() }),
    }
    let mut rows = Vec::new();
    for (n, line) in lines {
        let parse_err = |message: String| Error::Parse { line: n + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != BRI_WIDTH + 1 {
            return Err(parse_err(format!("expected {} fields, found {}", BRI_WIDTH + 1, fields.len())));
        }
        let index: usize = fields[0].parse().map_err(|_| parse_err(format!("bad row index `{}`", fields[0])))?;
        if index != rows.len() + 1 {
            return Err(parse_err(format!("row index {index} out of sequence")));
        }
        let mut row = [0.0; BRI_WIDTH];
        for (j, field) in fields[1..].iter().enumerate() {
            row[j] =
                field.parse().map_err(|_| parse_err(format!("bad value `{field}` in column {}", Column::BRI[j])))?;
        }
        rows.push(row);
    }
    BriMatrix::from_rows(rows)
}
