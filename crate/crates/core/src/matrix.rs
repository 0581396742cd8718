//! Dense matrices over a [`Field`] and exact row reduction.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: &Field, rows: &[Vec<i64>]) -> Result<Matrix> {
        Matrix::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_field(other)?;
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(k, j));
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix shapes differ".into()));
        }
        self.check_field(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("column counts differ".into()));
        }
        self.check_field(other)?;
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        self.field.is_one(v)
                    } else {
                        self.field.is_zero(v)
                    }
                })
            })
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    /// Reduced row-echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        match self.field.finite() {
            Some(ff) => {
                let mut data: Vec<u32> = self.data.iter().map(Scalar::as_fin).collect();
                let pivots = rref_finite(ff, &mut data, self.rows, self.cols);
                let matrix = Matrix {
                    field: self.field.clone(),
                    rows: self.rows,
                    cols: self.cols,
                    data: data.into_iter().map(Scalar::Fin).collect(),
                };
                Rref { matrix, rank: pivots.len(), pivots }
            }
            None => self.rref_generic(),
        }
    }

    fn rref_generic(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{v : self * v = 0}` as a canonical subspace of `field^cols`.
    pub fn kernel(&self) -> Subspace {
        let f = &self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(matrix.get(r, fc));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, basis)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, f.one());
        }
        let red = aug.rref();
        if red.pivots.iter().take(n).copied().ne(0..n) || red.rank < n {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.matrix.get(r, n + c).clone());
            }
        }
        Ok(out)
    }

    /// Fixed space `ker(self - I)` of a square matrix.
    pub fn fixed_space(&self) -> Result<Subspace> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("fixed space of a non-square matrix".into()));
        }
        Ok(self.sub(&Matrix::identity(&self.field, self.rows))?.kernel())
    }

    /// Block diagonal sum of copies of `self`.
    pub fn direct_power(&self, copies: usize) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let mut out = Matrix::zeros(&self.field, r * copies, c * copies);
        for b in 0..copies {
            for i in 0..r {
                for j in 0..c {
                    out.set(b * r + i, b * c + j, self.get(i, j).clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// In-place RREF over a finite field; returns pivot columns.
pub fn rref_finite(ff: &FiniteField, data: &mut [u32], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pr != row {
            for c in 0..cols {
                data.swap(pr * cols + c, row * cols + c);
            }
        }
        let inv = ff.inv(data[row * cols + col]).expect("pivot is nonzero");
        if inv != 1 {
            for c in col..cols {
                data[row * cols + c] = ff.mul(data[row * cols + c], inv);
            }
        }
        let (before, rest) = data.split_at_mut(row * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        let eliminate = |other: &mut [u32]| {
            let factor = other[col];
            if factor == 0 {
                return;
            }
            let nf = ff.neg(factor);
            for c in col..cols {
                if pivot_row[c] != 0 {
                    other[c] = ff.add(other[c], ff.mul(nf, pivot_row[c]));
                }
            }
        };
        before.chunks_mut(cols).for_each(eliminate);
        after.chunks_mut(cols).for_each(eliminate);
        pivots.push(col);
        row += 1;
    }
    pivots
}
