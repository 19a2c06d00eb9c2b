//! Field serialization: full-precision CSV for numbers, 8-bit PGM for pictures.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{RealField, Shape};

/// Formats like C's `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= PRECISION {
        let mantissa = strip_fraction_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_fraction_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

/// Formats like C's `printf("%.4e", x)`, e.g. `1.3884e-04`.
pub fn format_e4(x: f64) -> String {
    let sci = format!("{x:.4e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn strip_fraction_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Row-major CSV, one grid row per line. A 1D field is a single line.
pub fn field_to_csv(field: &RealField) -> String {
    let (ny, nx) = field.shape().dims();
    let mut out = String::with_capacity(field.len() * 24);
    for y in 0..ny {
        let row = &field.values()[y * nx..(y + 1) * nx];
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_g17(*v));
        }
        out.push('\n');
    }
    out
}

/// Parses [`field_to_csv`] output. A single line yields a 1D field.
pub fn field_from_csv(text: &str) -> Result<RealField> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|e| {
                    Error::invalid(format!("line {}: bad number {tok:?}: {e}", lineno + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::invalid(format!(
                    "line {}: expected {} columns, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    match rows.len() {
        0 => Err(Error::invalid("empty CSV")),
        1 => {
            let row = rows.pop().unwrap();
            RealField::new(Shape::D1(row.len()), row)
        }
        ny => {
            let nx = rows[0].len();
            RealField::new(Shape::D2 { ny, nx }, rows.concat())
        }
    }
}

pub fn write_csv(path: impl AsRef<Path>, field: &RealField) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, field_to_csv(field)).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<RealField> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    field_from_csv(&text)
}

/// 8-bit binary PGM with the field min-max scaled to 0..=255.
pub fn pgm_scaled(field: &RealField) -> Vec<u8> {
    let lo = field.min();
    let range = field.max() - lo;
    let bytes = field
        .values()
        .iter()
        .map(|&v| {
            if range > 0.0 {
                (255.0 * (v - lo) / range).round() as u8
            } else {
                0
            }
        })
        .collect::<Vec<_>>();
    encode_p5(field.shape(), &bytes)
}

/// 8-bit binary PGM of a field whose values are already integers in 0..=255.
pub fn pgm_raw(field: &RealField) -> Result<Vec<u8>> {
    let bytes = field
        .values()
        .iter()
        .map(|&v| {
            if v.fract() == 0.0 && (0.0..=255.0).contains(&v) {
                Ok(v as u8)
            } else {
                Err(Error::invalid(format!("{v} is not an 8-bit gray level")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(encode_p5(field.shape(), &bytes))
}

fn encode_p5(shape: Shape, bytes: &[u8]) -> Vec<u8> {
    let (ny, nx) = shape.dims();
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.extend_from_slice(bytes);
    out
}

pub fn write_pgm(path: impl AsRef<Path>, field: &RealField) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, pgm_scaled(field)).map_err(|e| Error::io(path, e))
}

/// Decodes an 8-bit P5 or P2 image into gray levels on `[0, 255]`.
pub fn decode_pgm(bytes: &[u8]) -> Result<RealField> {
    let mut pos = 0;
    let mut header = Vec::with_capacity(4);
    while header.len() < 4 {
        skip_space_and_comments(bytes, &mut pos);
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(Error::invalid("truncated PGM header"));
        }
        header.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    let magic = header[0].as_str();
    if magic != "P5" && magic != "P2" {
        return Err(Error::invalid(format!(
            "not a PGM file: magic {magic:?} (expected P5 or P2)"
        )));
    }
    let parse = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::invalid(format!("bad PGM {what}: {s:?}")))
    };
    let nx = parse(&header[1], "width")?;
    let ny = parse(&header[2], "height")?;
    let maxval = parse(&header[3], "maxval")?;
    if nx == 0 || ny == 0 {
        return Err(Error::invalid("PGM has zero size"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::invalid(format!(
            "PGM maxval {maxval} unsupported (8-bit only)"
        )));
    }
    let scale = 255.0 / maxval as f64;
    let n = nx * ny;
    let levels: Vec<usize> = if magic == "P5" {
        // exactly one whitespace byte separates maxval from the raster
        pos += 1;
        let raster = bytes.get(pos..pos + n).ok_or_else(|| {
            Error::invalid(format!(
                "PGM raster truncated: need {n} bytes, have {}",
                bytes.len().saturating_sub(pos)
            ))
        })?;
        raster.iter().map(|&b| b as usize).collect()
    } else {
        let text = String::from_utf8_lossy(&bytes[pos..]);
        let levels = text
            .split_ascii_whitespace()
            .take(n)
            .map(|t| parse(t, "pixel"))
            .collect::<Result<Vec<_>>>()?;
        if levels.len() != n {
            return Err(Error::invalid(format!(
                "PGM raster truncated: need {n} values, have {}",
                levels.len()
            )));
        }
        levels
    };
    if let Some(v) = levels.iter().find(|&&v| v > maxval) {
        return Err(Error::invalid(format!("PGM value {v} exceeds maxval {maxval}")));
    }
    let values = levels.iter().map(|&v| v as f64 * scale).collect();
    RealField::new(Shape::D2 { ny, nx }, values)
}

fn skip_space_and_comments(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() {
        if bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        } else if bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
}
