//! Square rational matrices and oriented vectors.
//!
//! Start vectors are rows and multiply matrices from the left; end vectors
//! are columns and are consumed on the right, so the value of a word is
//! always `start · M_1 · M_2 · … · M_m · end`.

use std::fmt;
use std::ops::Mul;

use crate::rational::Rational;

/// A square matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// The "completely random transition": every entry is `1/dim`.
    pub fn uniform(dim: usize) -> Self {
        let entry = Rational::new(1, dim as i64);
        Matrix {
            dim,
            data: vec![entry; dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let dim = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == dim),
            "matrix rows must form a square"
        );
        Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.dim + col] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.dim)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.row(i).iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> Rational {
        (0..self.dim).map(|i| self.get(i, j)).sum()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<Rational> {
        (0..self.dim).map(|j| self.col_sum(j)).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|x| x.is_positive())
    }

    pub fn min_entry(&self) -> &Rational {
        self.data.iter().min().expect("matrix is nonempty")
    }

    pub fn scale(&self, factor: &Rational) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let dim = self.dim;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, x)| (k / dim, k % dim, x))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let dim = self.dim;
        let mut out = Matrix::zero(dim);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix[{}x{}]", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A start vector: multiplied on the left of transition matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowVector {
    entries: Vec<Rational>,
}

/// An end vector: consumed on the right of a matrix product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColVector {
    entries: Vec<Rational>,
}

impl RowVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RowVector { entries }
    }

    pub fn zeros(len: usize) -> Self {
        RowVector {
            entries: vec![Rational::zero(); len],
        }
    }

    /// Standard unit row vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = RowVector::zeros(len);
        v.entries[index] = Rational::one();
        v
    }

    pub fn ones(len: usize) -> Self {
        RowVector {
            entries: vec![Rational::one(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().sum()
    }

    pub fn min_entry(&self) -> &Rational {
        self.entries.iter().min().expect("vector is nonempty")
    }

    pub fn push(&self, value: Rational) -> RowVector {
        let mut entries = self.entries.clone();
        entries.push(value);
        RowVector { entries }
    }

    pub fn mul_matrix(&self, m: &Matrix) -> RowVector {
        assert_eq!(self.len(), m.dim(), "dimension mismatch");
        let mut out = vec![Rational::zero(); m.dim()];
        for (i, x) in self.entries.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, out_j) in out.iter_mut().enumerate() {
                let b = m.get(i, j);
                if !b.is_zero() {
                    *out_j += x * b;
                }
            }
        }
        RowVector { entries: out }
    }

    pub fn dot(&self, col: &ColVector) -> Rational {
        assert_eq!(self.len(), col.len(), "dimension mismatch");
        self.entries
            .iter()
            .zip(col.entries())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn transpose(&self) -> ColVector {
        ColVector {
            entries: self.entries.clone(),
        }
    }
}

impl ColVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        ColVector { entries }
    }

    pub fn zeros(len: usize) -> Self {
        ColVector {
            entries: vec![Rational::zero(); len],
        }
    }

    /// Standard unit column vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = ColVector::zeros(len);
        v.entries[index] = Rational::one();
        v
    }

    pub fn ones(len: usize) -> Self {
        ColVector {
            entries: vec![Rational::one(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().sum()
    }

    pub fn push(&self, value: Rational) -> ColVector {
        let mut entries = self.entries.clone();
        entries.push(value);
        ColVector { entries }
    }

    /// `m · self`, the matrix acting on an end vector.
    pub fn premul_matrix(&self, m: &Matrix) -> ColVector {
        assert_eq!(self.len(), m.dim(), "dimension mismatch");
        let entries = (0..m.dim())
            .map(|i| m.row(i).iter().zip(&self.entries).map(|(a, b)| a * b).sum())
            .collect();
        ColVector { entries }
    }

    pub fn transpose(&self) -> RowVector {
        RowVector {
            entries: self.entries.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn identity_is_neutral() {
        let m = Matrix::from_rows(vec![vec![small(1), small(2)], vec![small(3), small(4)]]);
        let id = Matrix::identity(2);
        assert_eq!(&m * &id, m);
        assert_eq!(&id * &m, m);
    }

    #[test]
    fn row_and_col_products_agree_with_full_product() {
        let m = Matrix::from_rows(vec![
            vec![Rational::new(1, 2), Rational::new(1, 2)],
            vec![Rational::new(1, 3), Rational::new(2, 3)],
        ]);
        let row = RowVector::new(vec![small(1), small(-1)]);
        let col = ColVector::new(vec![small(2), small(5)]);
        let lhs = row.mul_matrix(&m).dot(&col);
        let rhs = row.dot(&col.premul_matrix(&m));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn uniform_matrix_is_doubly_stochastic_and_idempotent() {
        let j = Matrix::uniform(7);
        assert!(j.row_sums().iter().all(|s| *s == Rational::one()));
        assert!(j.col_sums().iter().all(|s| *s == Rational::one()));
        assert_eq!(&j * &j, j);
    }
}
