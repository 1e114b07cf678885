use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense row-major real matrix.
///
/// Zero-sized shapes are allowed so that degenerate reductions (rank-0 power
/// constraints, empty eigenvector blocks) have a representation.
#[derive(Clone, PartialEq)]
pub struct GeneralMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GeneralMatrix {
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
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
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

    /// Column-stacked matrix from equally sized column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &GeneralMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · self`, always symmetric.
    pub fn gram(&self) -> SymMatrix {
        let n = self.cols;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..self.rows).map(|k| self[(k, i)] * self[(k, j)]).sum();
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        SymMatrix(out)
    }

    pub fn add(&self, rhs: &GeneralMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &GeneralMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    fn zip_with(&self, rhs: &GeneralMatrix, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Symmetric part `(A + Aᵀ)/2`; requires a square matrix.
    pub fn symmetrize(&self) -> Result<SymMatrix> {
        SymMatrix::from_general(self)
    }
}

impl Index<(usize, usize)> for GeneralMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for GeneralMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for GeneralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GeneralMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Square symmetric real matrix. Entries are mirrored exactly on
/// construction and every mutation path keeps `a[i][j] == a[j][i]`.
#[derive(Clone, PartialEq)]
pub struct SymMatrix(GeneralMatrix);

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix(GeneralMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix(GeneralMatrix::identity(dim))
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        SymMatrix(GeneralMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }))
    }

    /// Symmetrizes `(A + Aᵀ)/2`.
    pub fn from_general(a: &GeneralMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::shape(format!(
                "symmetric matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut m = a.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(SymMatrix(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_general(&GeneralMatrix::from_rows(rows)?)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_general(&GeneralMatrix::from_fn(dim, dim, f)).expect("square by construction")
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_general(&self) -> &GeneralMatrix {
        &self.0
    }

    pub fn into_general(self) -> GeneralMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn add(&self, rhs: &SymMatrix) -> Result<Self> {
        Ok(SymMatrix(self.0.add(&rhs.0)?))
    }

    pub fn sub(&self, rhs: &SymMatrix) -> Result<Self> {
        Ok(SymMatrix(self.0.sub(&rhs.0)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        SymMatrix(self.0.scale(s))
    }

    /// `I + self`.
    pub fn add_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..m.dim() {
            m.0[(i, i)] += 1.0;
        }
        m
    }

    /// `H · self · Hᵀ` for `H` with `dim()` columns.
    pub fn sandwich(&self, h: &GeneralMatrix) -> Result<Self> {
        let hb = h.matmul(&self.0)?;
        Self::from_general(&hb.matmul(&h.transpose())?)
    }

    /// `Gᵀ · self · G` for `G` with `dim()` rows.
    pub fn congruence(&self, g: &GeneralMatrix) -> Result<Self> {
        Self::from_general(&g.transpose().matmul(&self.0)?.matmul(g)?)
    }

    pub fn matmul(&self, rhs: &GeneralMatrix) -> Result<GeneralMatrix> {
        self.0.matmul(rhs)
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix {} [", self.dim())?;
        for i in 0..self.dim() {
            writeln!(f, "  {:?}", self.0.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrized_exactly() {
        let s = SymMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(s[(0, 1)], 2.5);
        assert_eq!(s[(0, 1)], s[(1, 0)]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(matches!(GeneralMatrix::from_rows(&rows), Err(Error::Shape(_))));
    }

    #[test]
    fn matmul_shapes() {
        let a = GeneralMatrix::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        let b = GeneralMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap();
        assert_eq!(a.matmul(&b).unwrap().as_slice(), &[6.0]);
        assert!(a.matmul(&a).is_err());
        let g = a.gram();
        assert_eq!(g.dim(), 3);
        assert_eq!(g[(1, 2)], 6.0);
    }

    #[test]
    fn sandwich_matches_explicit_product() {
        let h = GeneralMatrix::from_rows(&[[1.0, 2.0], [0.5, -1.0], [3.0, 0.0]]).unwrap();
        let b = SymMatrix::from_rows(&[[2.0, 0.3], [0.3, 1.0]]).unwrap();
        let s = b.sandwich(&h).unwrap();
        let e = h.matmul(b.as_general()).unwrap().matmul(&h.transpose()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((s[(i, j)] - e[(i, j)]).abs() < 1e-14);
            }
        }
    }
}
