//! Dense row-major matrices and the sample correlation matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::argument(
                "data",
                alloc::format!("{} values cannot fill a {rows}×{cols} matrix", data.len()),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::argument("rows", "rows have different lengths"));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x * x).sum())
    }
}

/// Rescales a row to unit Euclidean norm in place.
///
/// The row is first divided by its largest magnitude so that squaring cannot
/// overflow. Infinite entries (possible for very small `α`) dominate every
/// finite one; the limit of the normalised row puts equal weight on them.
pub(crate) fn normalize_row(row: &mut [f64], index: usize) -> Result<()> {
    if row.iter().any(|x| x.is_nan()) {
        return Err(Error::DegenerateRow { row: index });
    }
    let infinite = row.iter().filter(|x| x.is_infinite()).count();
    if infinite > 0 {
        let w = 1.0 / libm::sqrt(infinite as f64);
        for x in row.iter_mut() {
            *x = if x.is_infinite() {
                libm::copysign(w, *x)
            } else {
                0.0
            };
        }
        return Ok(());
    }
    let scale = row.iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
    if scale == 0.0 {
        return Err(Error::DegenerateRow { row: index });
    }
    let mut ss = 0.0;
    for x in row.iter_mut() {
        *x /= scale;
        ss += *x * *x;
    }
    let inv = 1.0 / libm::sqrt(ss);
    for x in row.iter_mut() {
        *x *= inv;
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// One row against four others, sharing the loads of `a`.
fn dot4(a: &[f64], b: [&[f64]; 4]) -> [f64; 4] {
    let n = a.len();
    let mut acc = [[0.0f64; 4]; 4];
    let full = n - n % 4;
    let mut t = 0;
    while t < full {
        for (q, row) in b.iter().enumerate() {
            acc[q][0] += a[t] * row[t];
            acc[q][1] += a[t + 1] * row[t + 1];
            acc[q][2] += a[t + 2] * row[t + 2];
            acc[q][3] += a[t + 3] * row[t + 3];
        }
        t += 4;
    }
    let mut out = [0.0; 4];
    for (q, row) in b.iter().enumerate() {
        let mut tail = 0.0;
        for s in full..n {
            tail += a[s] * row[s];
        }
        out[q] = (acc[q][0] + acc[q][1]) + (acc[q][2] + acc[q][3]) + tail;
    }
    out
}

/// Rows of the data scaled to unit length: `Y_{ij} = X_{ij} / ‖X_{i·}‖`.
pub fn normalized_rows(data: &Matrix) -> Result<Matrix> {
    let mut y = data.clone();
    let n = y.cols;
    if n == 0 {
        return Err(Error::argument("data", "matrix has no columns"));
    }
    for (i, row) in y.data.chunks_exact_mut(n).enumerate() {
        normalize_row(row, i)?;
    }
    Ok(y)
}

/// Sample correlation matrix `R = Y Yᵀ`, symmetric with unit diagonal.
pub fn correlation_matrix(data: &Matrix) -> Result<Matrix> {
    let y = normalized_rows(data)?;
    let p = y.rows;
    let mut r = Matrix::zeros(p, p);
    for i in 0..p {
        let a = y.row(i);
        let mut j = 0;
        while j + 4 <= i {
            let v = dot4(a, [y.row(j), y.row(j + 1), y.row(j + 2), y.row(j + 3)]);
            for (q, value) in v.into_iter().enumerate() {
                r.data[i * p + j + q] = value;
                r.data[(j + q) * p + i] = value;
            }
            j += 4;
        }
        while j < i {
            let value = dot(a, y.row(j));
            r.data[i * p + j] = value;
            r.data[j * p + i] = value;
            j += 1;
        }
        r.data[i * p + i] = 1.0;
    }
    Ok(r)
}
