//! Exact integer and rational linear algebra.
//!
//! Everything here runs on arbitrary-precision integers (`BigInt`) or exact
//! rationals; no floating point. The central object is the Smith normal form
//! `M = Q·E·R` with unimodular `Q`, `R` and the diagonal of elementary
//! divisors `ε_1 | ε_2 | … | ε_d`, which fixes the cycle structure of every
//! pattern downstream.
//!
//! Sampling matrices are small (a handful of rows), so the reduction makes
//! no attempt to control intermediate entry growth beyond using big
//! integers; even 3×3 inputs with two-digit entries can swell past 64 bits
//! mid-reduction, which is why no fixed-width fast path exists.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Square integer matrix with exact entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Parse("matrix must be square and non-empty".into()));
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim));
        Self {
            dim,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
                .collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut t = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.entries[j * self.dim + i] = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self {
            dim: d,
            entries: vec![BigInt::zero(); d * d],
        };
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    /// M·v for an integer vector v.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// M·v for a rational vector v.
    pub fn mul_rational_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| BigRational::from(self.at(i, j).clone()) * &v[j])
                    .sum()
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|e| BigRational::from(e.clone()))
                .collect(),
        }
    }

    // Elementary operations used by the Smith reduction.
    fn row_swap(&mut self, a: usize, b: usize) {
        for j in 0..self.dim {
            self.entries.swap(a * self.dim + j, b * self.dim + j);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        for i in 0..self.dim {
            self.entries.swap(i * self.dim + a, i * self.dim + b);
        }
    }

    /// row_i += t · row_k
    fn row_addmul(&mut self, i: usize, k: usize, t: &BigInt) {
        for j in 0..self.dim {
            let add = t * self.at(k, j);
            self.entries[i * self.dim + j] += add;
        }
    }

    /// col_j += t · col_k
    fn col_addmul(&mut self, j: usize, k: usize, t: &BigInt) {
        for i in 0..self.dim {
            let add = t * self.at(i, k);
            self.entries[i * self.dim + j] += add;
        }
    }

    fn row_negate(&mut self, i: usize) {
        for j in 0..self.dim {
            let v = -self.at(i, j).clone();
            self.entries[i * self.dim + j] = v;
        }
    }

    fn col_negate(&mut self, j: usize) {
        for i in 0..self.dim {
            let v = -self.at(i, j).clone();
            self.entries[i * self.dim + j] = v;
        }
    }

    /// Parses either a JSON array-of-rows or a whitespace/CSV text block
    /// (`d` lines of `d` integers).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("invalid JSON matrix: {e}")))?;
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON array of rows".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let cols = row
                .as_array()
                .ok_or_else(|| Error::Parse("expected each row to be an array".into()))?;
            let mut r = Vec::with_capacity(cols.len());
            for v in cols {
                let n = v
                    .as_number()
                    .ok_or_else(|| Error::Parse("matrix entries must be integers".into()))?;
                r.push(
                    BigInt::from_str(&n.to_string())
                        .map_err(|_| Error::Parse(format!("not an integer: {n}")))?,
                );
            }
            out.push(r);
        }
        Self::from_rows(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Result<Vec<BigInt>> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| BigInt::from_str(t).map_err(|_| Error::Parse(format!("not an integer: {t}"))))
                .collect();
            rows.push(row?);
        }
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                let cols: Vec<String> = (0..self.dim).map(|j| self.at(i, j).to_string()).collect();
                format!("[{}]", cols.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    pub fn to_text(&self) -> String {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.at(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Square matrix of exact rationals. `num_rational` keeps every entry in
/// lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self {
            dim,
            entries: vec![BigRational::zero(); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = BigRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.dim + col]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self {
            dim: d,
            entries: vec![BigRational::zero(); d * d],
        };
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let add = a * other.at(k, j);
                    out.entries[i * d + j] += add;
                }
            }
        }
        out
    }

    pub fn mul_int(&self, other: &IntMatrix) -> Self {
        self.mul(&other.to_rational())
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn to_int(&self) -> Result<IntMatrix> {
        if !self.is_integral() {
            return Err(Error::NotASubpattern);
        }
        Ok(IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.to_integer()).collect(),
        })
    }
}

/// Smith normal form `M = Q·E·R` with `|det Q| = |det R| = 1` and the
/// elementary divisors `ε_j ≥ 1` on the diagonal of `E`, each dividing the
/// next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub q: IntMatrix,
    pub e: Vec<BigInt>,
    pub r: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let d = self.e.len();
        let mut m = IntMatrix::identity(d);
        for (i, eps) in self.e.iter().enumerate() {
            m.set(i, i, eps.clone());
        }
        m
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let d = m.dim();
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..d.saturating_sub(1) {
        if a.at(k, k).is_zero() {
            match (k + 1..d).find(|&i| !a.at(i, k).is_zero()) {
                Some(i) => {
                    a.row_swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                a.set(i, j, num / &prev);
            }
        }
        prev = a.at(k, k).clone();
    }
    let det = a.at(d - 1, d - 1).clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact rational inverse by Gauss-Jordan elimination.
pub fn inverse_rational(m: &IntMatrix) -> Result<RationalMatrix> {
    let d = m.dim();
    let mut a = m.to_rational();
    let mut inv = RationalMatrix::identity(d);
    for col in 0..d {
        let pivot_row = (col..d)
            .find(|&i| !a.at(i, col).is_zero())
            .ok_or(Error::SingularMatrix)?;
        if pivot_row != col {
            for j in 0..d {
                a.entries.swap(col * d + j, pivot_row * d + j);
                inv.entries.swap(col * d + j, pivot_row * d + j);
            }
        }
        let pivot = a.at(col, col).clone();
        for j in 0..d {
            let v = a.at(col, j) / &pivot;
            a.entries[col * d + j] = v;
            let v = inv.at(col, j) / &pivot;
            inv.entries[col * d + j] = v;
        }
        for i in 0..d {
            if i == col || a.at(i, col).is_zero() {
                continue;
            }
            let factor = a.at(i, col).clone();
            for j in 0..d {
                let v = a.at(i, j) - &factor * a.at(col, j);
                a.entries[i * d + j] = v;
                let v = inv.at(i, j) - &factor * inv.at(col, j);
                inv.entries[i * d + j] = v;
            }
        }
    }
    Ok(inv)
}

/// Smith normal form by integer row/column reduction.
///
/// Pivot selection is the minimal nonzero absolute value with the lowest
/// (row, col) index as tie-break, so the emitted `Q` and `R` are
/// deterministic. Diagonal signs are absorbed into `Q`, and a gcd
/// absorption pass enforces the divisibility chain.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition> {
    let det = determinant(m);
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let d = m.dim();
    let mut a = m.clone();
    let mut q = IntMatrix::identity(d);
    let mut r = IntMatrix::identity(d);

    for p in 0..d {
        clear_cross(&mut a, &mut q, &mut r, p, d)?;
    }
    normalize_signs(&mut a, &mut q, 0, d);

    // Divisibility fix-up: absorb gcds between adjacent diagonal entries.
    loop {
        let mut changed = false;
        for i in 0..d - 1 {
            let lo = a.at(i, i).clone();
            let hi = a.at(i + 1, i + 1).clone();
            if (&hi % &lo).is_zero() {
                continue;
            }
            // Couple the block: row_i += row_{i+1} puts `hi` at (i, i+1),
            // then re-clearing the cross leaves gcd/lcm on the diagonal.
            a.row_addmul(i, i + 1, &BigInt::one());
            q.col_addmul(i + 1, i, &(-BigInt::one()));
            clear_cross(&mut a, &mut q, &mut r, i, i + 2)?;
            normalize_signs(&mut a, &mut q, i, i + 2);
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let e: Vec<BigInt> = (0..d).map(|i| a.at(i, i).clone()).collect();
    debug_assert_eq!(
        q.mul(&SmithDecomposition {
            q: q.clone(),
            e: e.clone(),
            r: r.clone()
        }
        .diagonal_matrix())
        .mul(&r),
        *m
    );
    Ok(SmithDecomposition { q, e, r })
}

/// Zero out row `p` and column `p` (within `a[p..limit][p..limit]`) by
/// Euclidean steps, leaving the pivot at `(p, p)`. Maintains M = Q·A·R.
fn clear_cross(
    a: &mut IntMatrix,
    q: &mut IntMatrix,
    r: &mut IntMatrix,
    p: usize,
    limit: usize,
) -> Result<()> {
    loop {
        // Deterministic pivot: minimal nonzero |entry|, lowest (row, col).
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in p..limit {
            for j in p..limit {
                let v = a.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let mag = v.abs();
                if best.as_ref().map_or(true, |(_, _, b)| mag < *b) {
                    best = Some((i, j, mag));
                }
            }
        }
        let (bi, bj, _) = best.ok_or(Error::SingularMatrix)?;
        if bi != p {
            a.row_swap(bi, p);
            q.col_swap(bi, p);
        }
        if bj != p {
            a.col_swap(bj, p);
            r.row_swap(bj, p);
        }

        for i in p + 1..limit {
            if a.at(i, p).is_zero() {
                continue;
            }
            let t = a.at(i, p) / a.at(p, p); // truncated quotient
            if !t.is_zero() {
                a.row_addmul(i, p, &(-&t));
                q.col_addmul(p, i, &t);
            }
        }
        for j in p + 1..limit {
            if a.at(p, j).is_zero() {
                continue;
            }
            let t = a.at(p, j) / a.at(p, p);
            if !t.is_zero() {
                a.col_addmul(j, p, &(-&t));
                r.row_addmul(p, j, &t);
            }
        }

        let col_clear = (p + 1..limit).all(|i| a.at(i, p).is_zero());
        let row_clear = (p + 1..limit).all(|j| a.at(p, j).is_zero());
        if col_clear && row_clear {
            return Ok(());
        }
    }
}

fn normalize_signs(a: &mut IntMatrix, q: &mut IntMatrix, from: usize, to: usize) {
    for p in from..to.min(a.dim()) {
        if a.at(p, p).is_negative() {
            a.row_negate(p);
            q.col_negate(p);
        }
    }
}
