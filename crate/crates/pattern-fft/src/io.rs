//! File formats shared by the CLI and the examples: CSV for arrays and
//! enumerations, JSON for filter banks and run summaries, binary PGM (P5)
//! for images. Everything is written atomically (temp file + rename).

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fft::{Domain, LatticeArray};
use crate::intlinalg::IntMatrix;
use crate::lattice::{PatternBasis, Window};
use crate::wavelet::FilterBank;

pub fn load_matrix(path: &Path) -> Result<IntMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    IntMatrix::parse(&text)
}

/// One `re,im` row per value.
pub fn complex_csv(values: &[Complex64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&format!("{},{}\n", fmt_f64(v.re), fmt_f64(v.im)));
    }
    out
}

pub fn parse_complex_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let re = parts
            .next()
            .and_then(|t| f64::from_str(t).ok())
            .ok_or_else(|| Error::Parse(format!("line {}: bad real part", lineno + 1)))?;
        let im = parts
            .next()
            .map(|t| f64::from_str(t))
            .transpose()
            .map_err(|_| Error::Parse(format!("line {}: bad imaginary part", lineno + 1)))?
            .unwrap_or(0.0);
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

fn fmt_f64(v: f64) -> String {
    // Shortest representation that round-trips.
    let s = format!("{v}");
    if s.parse::<f64>() == Ok(v) {
        s
    } else {
        format!("{v:e}")
    }
}

/// Rows `λ_1,…,λ_{d_M},x_1,…,x_d` with exact rationals as `p/q`.
pub fn pattern_csv(basis: &PatternBasis, window: Window) -> String {
    let mut out = String::new();
    for (idx, point) in basis
        .indices()
        .zip(basis.enumerate_pattern(window))
    {
        let coords: Vec<String> = idx.iter().map(u64::to_string).collect();
        let values: Vec<String> = point
            .value
            .iter()
            .map(|v| {
                if v.is_integer() {
                    v.numer().to_string()
                } else {
                    format!("{}/{}", v.numer(), v.denom())
                }
            })
            .collect();
        out.push_str(&coords.join(","));
        if !coords.is_empty() {
            out.push(',');
        }
        out.push_str(&values.join(","));
        out.push('\n');
    }
    out
}

/// Rows `μ_1,…,μ_{d_M},g_1,…,g_d` for the generating group.
pub fn generators_csv(basis: &PatternBasis) -> String {
    let mut out = String::new();
    for (idx, gen) in basis.indices().zip(basis.enumerate_generators()) {
        let coords: Vec<String> = idx.iter().map(u64::to_string).collect();
        let values: Vec<String> = gen.iter().map(|v| v.to_string()).collect();
        out.push_str(&coords.join(","));
        if !coords.is_empty() {
            out.push(',');
        }
        out.push_str(&values.join(","));
        out.push('\n');
    }
    out
}

/// Rows `k_1,…,k_d,value_re,value_im` over the spectrum support.
pub fn spectrum_csv(spectrum: &crate::dirichlet::KernelSpectrum) -> String {
    let mut out = String::new();
    for (k, c) in spectrum.coeffs() {
        let coords: Vec<String> = k.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "{},{},{}\n",
            coords.join(","),
            fmt_f64(c.re),
            fmt_f64(c.im)
        ));
    }
    out
}

fn matrix_json(m: &IntMatrix) -> Value {
    serde_json::from_str(&m.to_json()).expect("matrix JSON is valid")
}

/// Filter-bank interchange format: the three matrices and the per-branch
/// frequency filters in λ-order as `[re, im]` pairs.
pub fn filter_bank_json(fb: &FilterBank) -> String {
    let branches: Vec<Value> = fb
        .filters()
        .iter()
        .map(|f| {
            Value::Array(
                f.values()
                    .iter()
                    .map(|v| json!([v.re, v.im]))
                    .collect(),
            )
        })
        .collect();
    let doc = json!({
        "m": matrix_json(fb.m_basis().matrix()),
        "j": matrix_json(fb.j_basis().matrix()),
        "n": matrix_json(fb.n_basis().matrix()),
        "branches": branches,
    });
    serde_json::to_string_pretty(&doc).expect("filter bank serializes")
}

pub fn filter_bank_from_json(text: &str) -> Result<FilterBank> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("filter bank: {e}")))?;
    let matrix_of = |key: &str| -> Result<IntMatrix> {
        let v = doc
            .get(key)
            .ok_or_else(|| Error::Parse(format!("filter bank: missing \"{key}\"")))?;
        IntMatrix::from_json(&v.to_string())
    };
    let m = Arc::new(PatternBasis::new(&matrix_of("m")?)?);
    let j = Arc::new(PatternBasis::new(&matrix_of("j")?)?);
    let n = Arc::new(PatternBasis::new(&matrix_of("n")?)?);
    let branches = doc
        .get("branches")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("filter bank: missing \"branches\"".into()))?;
    let mut filters = Vec::with_capacity(branches.len());
    for branch in branches {
        let pairs = branch
            .as_array()
            .ok_or_else(|| Error::Parse("filter bank: branch must be an array".into()))?;
        let values: Result<Vec<Complex64>> = pairs
            .iter()
            .map(|p| {
                let pair = p
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("filter bank: entry must be [re, im]".into()))?;
                Ok(Complex64::new(
                    pair[0].as_f64().unwrap_or(f64::NAN),
                    pair[1].as_f64().unwrap_or(f64::NAN),
                ))
            })
            .collect();
        filters.push(LatticeArray::new(m.clone(), Domain::Frequency, values?)?);
    }
    FilterBank::new(m, n, j, filters)
}

/// 8-bit binary PGM; `data` is row-major, `rows × cols`.
pub fn pgm_bytes(rows: usize, cols: usize, data: &[u8]) -> Vec<u8> {
    assert_eq!(data.len(), rows * cols);
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend_from_slice(data);
    out
}

/// Renders `|values|` over the index grid of the basis, white = 0 and black
/// = the maximum, like a contour intensity plot.
pub fn magnitude_pgm(values: &LatticeArray) -> Vec<u8> {
    let shape = values.basis().cycle_lengths();
    let (rows, cols) = match shape.len() {
        0 => (1, 1),
        1 => (1, shape[0] as usize),
        _ => (
            shape[..shape.len() - 1].iter().product::<u64>() as usize,
            *shape.last().unwrap() as usize,
        ),
    };
    let magnitudes: Vec<f64> = values.values().iter().map(|v| v.norm()).collect();
    let max = magnitudes.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let pixels: Vec<u8> = magnitudes
        .iter()
        .map(|&v| 255 - (255.0 * v / max).round() as u8)
        .collect();
    pgm_bytes(rows, cols, &pixels)
}

/// Writes via a temp file in the same directory, then renames into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}
