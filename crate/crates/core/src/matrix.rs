//! Dense matrices over the Laurent ring.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::poly::LaurentPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            data: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = LaurentMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = LaurentPoly::one();
        }
        m
    }

    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        LaurentMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Parses rows of entries in the polynomial grammar; panics on bad input.
    pub fn parse_rows(rows: &[&[&str]]) -> Self {
        LaurentMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse().expect("polynomial")).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[LaurentPoly]> {
        (0..self.rows).map(|i| self.row(i))
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    pub fn transpose(&self) -> LaurentMatrix {
        let mut t = LaurentMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Entrywise `D -> 1/D`.
    pub fn reciprocal(&self) -> LaurentMatrix {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(LaurentPoly::reciprocal).collect(),
        }
    }

    pub fn mul(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = LaurentMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> LaurentMatrix {
        let mut out = LaurentMatrix::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                out[(i, j - start)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// `(self | rhs)`.
    pub fn hconcat(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = LaurentMatrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    /// `col[to] += f · col[from]`.
    pub fn add_col_multiple(&mut self, from: usize, to: usize, f: &LaurentPoly) {
        for i in 0..self.rows {
            let delta = f * &self[(i, from)];
            self[(i, to)] += &delta;
        }
    }

    /// `row[to] += f · row[from]`.
    pub fn add_row_multiple(&mut self, from: usize, to: usize, f: &LaurentPoly) {
        for j in 0..self.cols {
            let delta = f * &self[(from, j)];
            self[(to, j)] += &delta;
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn shift_row(&mut self, i: usize, k: i64) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].shift(k);
        }
    }

    pub fn shift_col(&mut self, j: usize, k: i64) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].shift(k);
        }
    }

    /// Determinant by cofactor expansion; intended for the small matrices used here.
    pub fn determinant(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.cols).collect();
        det_rec(self, 0, &idx)
    }

    /// Largest absolute exponent over all entries.
    pub fn max_abs_exponent(&self) -> u64 {
        self.data
            .iter()
            .map(LaurentPoly::max_abs_exponent)
            .max()
            .unwrap_or(0)
    }

    /// `(min, max)` exponent over all nonzero entries.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        let lo = self.data.iter().filter_map(LaurentPoly::low).min()?;
        let hi = self.data.iter().filter_map(LaurentPoly::high).max()?;
        Some((lo, hi))
    }
}

fn det_rec(m: &LaurentMatrix, row: usize, cols: &[usize]) -> LaurentPoly {
    if cols.is_empty() {
        return LaurentPoly::one();
    }
    let mut acc = LaurentPoly::zero();
    for (k, &c) in cols.iter().enumerate() {
        let a = &m[(row, c)];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(kk, _)| kk != k)
            .map(|(_, &cc)| cc)
            .collect();
        acc += &(a * &det_rec(m, row + 1, &rest));
    }
    acc
}

impl Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;

    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_determinant() {
        let a = LaurentMatrix::parse_rows(&[&["1", "D"], &["0", "1"]]);
        let b = LaurentMatrix::parse_rows(&[&["1", "D"], &["0", "1"]]);
        assert_eq!(a.mul(&b), LaurentMatrix::identity(2));
        let m = LaurentMatrix::parse_rows(&[&["1 + D", "D"], &["1", "1"]]);
        assert_eq!(m.determinant(), LaurentPoly::one());
        let m =
            LaurentMatrix::parse_rows(&[&["D", "0", "0"], &["1", "D^-1", "0"], &["1", "1", "D^2"]]);
        assert_eq!(m.determinant(), LaurentPoly::monomial(2));
    }

    #[test]
    fn elementary_ops() {
        let mut m = LaurentMatrix::parse_rows(&[&["1", "0"]]);
        m.add_col_multiple(0, 1, &"D".parse().unwrap());
        assert_eq!(m, LaurentMatrix::parse_rows(&[&["1", "D"]]));
        m.swap_cols(0, 1);
        assert_eq!(m, LaurentMatrix::parse_rows(&[&["D", "1"]]));
    }
}
