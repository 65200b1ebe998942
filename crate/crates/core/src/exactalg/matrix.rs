use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            cols,
            rows: vec![vec![Scalar::zero(field); cols]; rows],
        }
    }

    /// Builds a matrix from rows, rejecting ragged rows and entries from another field.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Malformed(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|s| s.field() != field) {
                return Err(Error::FieldMismatch {
                    expected: field.to_string(),
                    found: bad.field().to_string(),
                });
            }
        }
        Ok(FieldMatrix { field, cols, rows })
    }

    /// Integer entries mapped into `field`.
    pub fn from_i64_rows(field: Field, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_i64(field, x)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert_eq!(value.field(), self.field, "entry from another field");
        self.rows[i][j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.rows[i]
    }

    pub fn push_row(&mut self, row: Vec<Scalar>) -> Result<()> {
        let m = Self::from_rows(self.field, self.cols, vec![row])?;
        self.rows.extend(m.rows);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let nrows = self.nrows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c].inverse().expect("pivot is nonzero");
            let support: Vec<usize> = (c..self.cols)
                .filter(|&j| !self.rows[r][j].is_zero())
                .collect();
            for &j in &support {
                self.rows[r][j] = &self.rows[r][j] * &inv;
            }
            let pivot_row = self.rows[r].clone();
            for i in 0..nrows {
                if i == r || self.rows[i][c].is_zero() {
                    continue;
                }
                let factor = self.rows[i][c].clone();
                for &j in &support {
                    let delta = &factor * &pivot_row[j];
                    self.rows[i][j] = &self.rows[i][j] - &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column in increasing order.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        (0..self.cols)
            .filter(|&f| is_pivot[f].is_none())
            .map(|f| {
                let mut v = vec![Scalar::zero(self.field); self.cols];
                v[f] = Scalar::one(self.field);
                for (i, &c) in pivots.iter().enumerate() {
                    v[c] = -&r.rows[i][f];
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.nrows(), "right-hand side length mismatch");
        let mut aug = FieldMatrix {
            field: self.field,
            cols: self.cols + 1,
            rows: self
                .rows
                .iter()
                .zip(b)
                .map(|(row, x)| {
                    let mut row = row.clone();
                    row.push(x.clone());
                    row
                })
                .collect(),
        };
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.rows[i][self.cols].clone();
        }
        Some(x)
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Scalar::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            cols,
            rows: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        Ok(IntMatrix { cols, rows })
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.rows[i][j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Vec<BigInt>> {
        &mut self.rows
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    /// Product skipping zero entries; the matrices arising here are sparse.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.nrows(), "dimension mismatch in product");
        let rhs_support: Vec<Vec<usize>> = rhs
            .rows
            .iter()
            .map(|r| (0..rhs.cols).filter(|&j| !r[j].is_zero()).collect())
            .collect();
        let mut out = IntMatrix::zeros(self.nrows(), rhs.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &j in &rhs_support[k] {
                    out.rows[i][j] += a * &rhs.rows[k][j];
                }
            }
        }
        out
    }

    /// Exact determinant by rational elimination; rows untouched by a pivot column are skipped.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.nrows(), self.cols, "determinant of a non-square matrix");
        let n = self.cols;
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i].iter().filter(|x| !x.is_zero()).count())
            else {
                return BigInt::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            let support: Vec<usize> = (c + 1..n).filter(|&j| !a[c][j].is_zero()).collect();
            let pivot_row = a[c].clone();
            for row in a.iter_mut().skip(c + 1) {
                if row[c].is_zero() {
                    continue;
                }
                let factor = &row[c] / &pivot;
                row[c] = BigRational::zero();
                for &j in &support {
                    let delta = &factor * &pivot_row[j];
                    row[j] -= delta;
                }
            }
        }
        assert!(det.is_integer(), "determinant of an integer matrix is an integer");
        det.to_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
