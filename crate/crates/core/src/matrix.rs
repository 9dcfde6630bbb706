//! Dense matrices of field elements.
//!
//! Matrices do not record their field; operations that need arithmetic take
//! the field as an argument.

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Malformed("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(field: &Field, entries: &[Elem]) -> Matrix {
        let mut m = Matrix::zero(field, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self, field: &Field) -> bool {
        self.data.iter().all(|e| field.is_zero(e))
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix of `r × c` entries starting at `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, r: usize, c: usize) -> Matrix {
        Matrix::from_fn(r, c, |i, j| self.get(i0 + i, j0 + j).clone())
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = field.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !field.is_zero(a) {
                    acc = field.add(&acc, &field.mul(a, other.get(k, j)));
                }
            }
            acc
        })
    }

    /// `pᵀ · self · p`.
    pub fn congruence(&self, p: &Matrix, field: &Field) -> Matrix {
        p.transpose().mul(&self.mul(p, field), field)
    }

    pub fn det(&self, field: &Field) -> Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !field.is_zero(a.get(r, col))) else {
                return field.zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = field.neg(&det);
            }
            let pv = a.get(col, col).clone();
            det = field.mul(&det, &pv);
            let inv = field.inv(&pv).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = field.mul(a.get(r, col), &inv);
                if field.is_zero(&factor) {
                    continue;
                }
                for c in col..n {
                    let v = field.sub(a.get(r, c), &field.mul(&factor, a.get(col, c)));
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(field, n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !field.is_zero(a.get(r, col)))
                .ok_or(Error::Degenerate)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let s = field.inv(a.get(col, col))?;
            a.scale_row(col, &s, field);
            inv.scale_row(col, &s, field);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                a.add_row_multiple(r, col, &field.neg(&factor), field);
                inv.add_row_multiple(r, col, &field.neg(&factor), field);
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Elem, field: &Field) {
        for j in 0..self.cols {
            let v = field.mul(self.get(r, j), s);
            self.set(r, j, v);
        }
    }

    /// Row `dst` += `c` · row `src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Elem, field: &Field) {
        for j in 0..self.cols {
            let v = field.add(self.get(dst, j), &field.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// Column `dst` += `c` · column `src`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Elem, field: &Field) {
        for i in 0..self.rows {
            let v = field.add(self.get(i, dst), &field.mul(c, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    /// Entries rendered with the field's element syntax.
    pub fn to_strings(&self, field: &Field) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| field.format(e)).collect())
            .collect()
    }

    /// Builds a matrix over `field` from small integers.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular input")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let q = Field::rationals();
        let m = Matrix::from_ints(&q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(&q), q.from_i64(18));
        let inv = m.inverse(&q).unwrap();
        assert_eq!(m.mul(&inv, &q), Matrix::identity(&q, 3));
        let sing = Matrix::from_ints(&q, &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(&q), q.zero());
        assert_eq!(sing.inverse(&q), Err(Error::Degenerate));
    }

    #[test]
    fn determinant_needs_row_swap() {
        let q = Field::rationals();
        let m = Matrix::from_ints(&q, &[&[0, 1], &[1, 0]]);
        assert_eq!(m.det(&q), q.from_i64(-1));
    }
}
