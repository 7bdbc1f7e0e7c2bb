use std::fmt;

use crate::error::{BandError, Result};

/// Dense real matrix in row-major storage.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(BandError::Dimension(format!(
                "matrix must be nonempty, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(BandError::Dimension(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(BandError::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Self::new(r, c, data).expect("valid matrix")
    }

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

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let n = rhs.cols;
        let mut out = Matrix::zeros(self.rows, n);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `selfᵀ · rhs` without materializing the transpose.
    pub fn transpose_matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "transpose_matmul: row mismatch");
        let n = rhs.cols;
        let mut out = Matrix::zeros(self.cols, n);
        for k in 0..self.rows {
            let rhs_row = &rhs.data[k * n..(k + 1) * n];
            for (i, &a) in self.row(k).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose_matvec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, y.len());
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(self)
    }

    /// Copies the `rows × cols` sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Real symmetric matrix. Every constructor produces an exactly symmetric
/// matrix and no mutable access to the storage is exposed.
#[derive(Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym")?;
        self.0.fmt(f)
    }
}

impl SymMatrix {
    /// Builds from the upper triangle: `f(i, j)` is only called with `i <= j`.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        SymMatrix(m)
    }

    /// `(A + Aᵀ) / 2`, the nearest symmetric matrix.
    pub fn symmetrize(a: &Matrix) -> Self {
        assert!(a.is_square(), "symmetrize needs a square matrix");
        SymMatrix::from_upper(a.rows(), |i, j| {
            if i == j {
                a.get(i, i)
            } else {
                0.5 * (a.get(i, j) + a.get(j, i))
            }
        })
    }

    /// Accepts `a` only if it is exactly symmetric.
    pub fn try_from_matrix(a: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(BandError::Dimension(
                "symmetric matrix must be square".into(),
            ));
        }
        let n = a.rows();
        for i in 0..n {
            for j in (i + 1)..n {
                if a.get(i, j) != a.get(j, i) {
                    return Err(BandError::Domain(format!(
                        "entry ({i},{j}) differs from ({j},{i})"
                    )));
                }
            }
        }
        Ok(SymMatrix(a))
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix(Matrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix(Matrix::zeros(dim, dim))
    }

    pub fn diag(values: &[f64]) -> Self {
        SymMatrix::from_upper(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `self − shift·I`.
    pub fn shifted(&self, shift: f64) -> SymMatrix {
        let mut m = self.0.clone();
        for i in 0..m.rows() {
            m.set(i, i, m.get(i, i) - shift);
        }
        SymMatrix(m)
    }

    pub fn scaled(&self, factor: f64) -> SymMatrix {
        SymMatrix(self.0.scaled(factor))
    }

    pub fn add(&self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(self.0.sub(&rhs.0))
    }

    /// Congruence `Bᵀ · self · B`, symmetrized exactly.
    pub fn congruence(&self, b: &Matrix) -> SymMatrix {
        let sb = self.0.matmul(b);
        SymMatrix::symmetrize(&b.transpose_matmul(&sb))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.0.frobenius_norm_sq()
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.0)
    }
}

impl AsRef<Matrix> for Matrix {
    fn as_ref(&self) -> &Matrix {
        self
    }
}

impl AsRef<Matrix> for SymMatrix {
    fn as_ref(&self) -> &Matrix {
        &self.0
    }
}

/// Closed interval `[lo, hi]` of the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(BandError::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn frobenius_norm(h: impl AsRef<Matrix>) -> f64 {
    h.as_ref().frobenius_norm()
}

/// `tr(G·H) = Σᵢⱼ G(i,j)·H(j,i)`.
pub fn trace_product(g: impl AsRef<Matrix>, h: impl AsRef<Matrix>) -> f64 {
    let (g, h) = (g.as_ref(), h.as_ref());
    assert_eq!(g.cols(), h.rows(), "trace_product: inner dimension");
    assert_eq!(g.rows(), h.cols(), "trace_product: outer dimension");
    let mut acc = 0.0;
    for i in 0..g.rows() {
        for (j, &gij) in g.row(i).iter().enumerate() {
            acc += gij * h.get(j, i);
        }
    }
    acc
}

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;

/// Largest singular value by power iteration on `HᵀH` from the all-ones
/// vector.
///
/// The Rayleigh quotient `q_k = ‖H x_k‖² / ‖x_k‖²` increases monotonically
/// to `σ₁²`. Iteration stops once the geometric tail estimate
/// `δ_k ρ / (1 − ρ)`, with `ρ` the observed contraction of successive
/// increments, drops below the relative tolerance, or the increments stall
/// at rounding level.
pub fn operator_norm(h: &Matrix) -> f64 {
    let scale = h.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    if h.rows() == 1 || h.cols() == 1 {
        return h.frobenius_norm();
    }
    let mut x = vec![1.0; h.cols()];
    let mut y = h.matvec(&x);
    if norm_sq(&y) <= f64::EPSILON * f64::EPSILON * scale * scale * norm_sq(&x) {
        // All-ones start lies in the null space; restart from the heaviest column.
        let heaviest = (0..h.cols())
            .max_by(|&a, &b| column_norm_sq(h, a).total_cmp(&column_norm_sq(h, b)))
            .unwrap_or(0);
        x = vec![0.0; h.cols()];
        x[heaviest] = 1.0;
        y = h.matvec(&x);
    }
    let mut q = norm_sq(&y) / norm_sq(&x);
    let mut prev_delta = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let z = h.transpose_matvec(&y);
        let zn = norm_sq(&z).sqrt();
        if zn == 0.0 {
            break;
        }
        x = z.into_iter().map(|v| v / zn).collect();
        y = h.matvec(&x);
        let q_next = norm_sq(&y);
        let delta = q_next - q;
        q = q_next.max(q);
        if delta <= 8.0 * f64::EPSILON * q {
            break;
        }
        if prev_delta.is_finite() && prev_delta > 0.0 {
            let rho = delta / prev_delta;
            if rho < 1.0 && delta * rho / (1.0 - rho) <= POWER_TOL * q {
                break;
            }
        }
        prev_delta = delta;
    }
    q.sqrt()
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn column_norm_sq(h: &Matrix, j: usize) -> f64 {
    (0..h.rows()).map(|i| h.get(i, j).powi(2)).sum()
}
