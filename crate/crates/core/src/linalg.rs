//! Small dense integer matrices with exact determinants and unimodular
//! row reduction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Builds a matrix with the given columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Columns listed in `indices`, in that order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        let cols: Vec<Vec<i64>> = indices.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i128> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        Ok(sign * a[n - 1][n - 1])
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Greedy column basis: the first column set, scanning left to right,
    /// that is linearly independent over the rationals.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut a: Vec<Vec<i128>> = (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| a[i][c] != 0) else { continue };
            a.swap(p, r);
            for i in 0..self.rows {
                if i != r && a[i][c] != 0 {
                    let (f, g) = (a[r][c], a[i][c]);
                    for j in 0..self.cols {
                        a[i][j] = a[i][j] * f - a[r][j] * g;
                    }
                    let content = a[i].iter().fold(0i128, |acc, &x| gcd(acc, x));
                    if content > 1 {
                        a[i].iter_mut().for_each(|x| *x /= content);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// Whether the matrix is square with determinant `±1`.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && matches!(self.det(), Ok(1) | Ok(-1))
    }

    /// Inverse of a unimodular matrix (adjugate over the determinant).
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det()?;
        if d != 1 && d != -1 {
            return Err(Error::Invalid(format!("determinant {d} is not a unit")));
        }
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.select(&rows, &cols).det()?;
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                inv[(i, j)] = i64::try_from(cof * d).map_err(|_| Error::TooLarge("entry".into()))?;
            }
        }
        Ok(inv)
    }

    /// Unimodular `W` with `W * self = [I_r; 0]` for a `g x r` matrix whose
    /// columns span a saturated sublattice (all maximal minors have gcd 1).
    pub fn saturated_completion(&self) -> Result<Self> {
        let (g, r) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut w = Self::identity(g);
        for c in 0..r {
            // Euclid on rows c..g of column c until one nonzero entry remains.
            loop {
                let nonzero: Vec<usize> = (c..g).filter(|&i| a[(i, c)] != 0).collect();
                let Some(&p) = nonzero.iter().min_by_key(|&&i| a[(i, c)].abs()) else {
                    return Err(Error::Invalid("columns are dependent".into()));
                };
                if nonzero.len() == 1 {
                    a.swap_rows(p, c);
                    w.swap_rows(p, c);
                    break;
                }
                for &i in &nonzero {
                    if i != p {
                        let q = a[(i, c)].div_euclid(a[(p, c)]);
                        a.add_row_multiple(i, p, -q);
                        w.add_row_multiple(i, p, -q);
                    }
                }
            }
            if a[(c, c)].abs() != 1 {
                return Err(Error::Invalid("column lattice is not saturated".into()));
            }
            if a[(c, c)] < 0 {
                a.negate_row(c);
                w.negate_row(c);
            }
            for i in 0..g {
                if i != c && a[(i, c)] != 0 {
                    let q = a[(i, c)];
                    a.add_row_multiple(i, c, -q);
                    w.add_row_multiple(i, c, -q);
                }
            }
        }
        Ok(w)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self[(i, c)] = -self[(i, c)];
        }
    }

    pub fn negate_column(&mut self, j: usize) {
        for r in 0..self.rows {
            self[(r, j)] = -self[(r, j)];
        }
    }

    /// `row[i] += factor * row[j]`.
    pub fn add_row_multiple(&mut self, i: usize, j: usize, factor: i64) {
        for c in 0..self.cols {
            let x = self[(j, c)];
            self[(i, c)] += factor * x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
