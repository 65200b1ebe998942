//! Smith normal form over the integers.
//!
//! Pivots are chosen as the entry of smallest nonzero absolute value in the
//! remaining lower-right block, ties broken by lowest `(row, col)`, so the
//! transforms are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `d = u * m * v` with `u`, `v` unimodular and `d` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries of `d`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| *x > BigInt::one())
            .collect()
    }
}

/// Computes the Smith normal form of `m`.
///
/// The identity `d = u * m * v`, the shape of `d` and `|det u| = |det v| = 1`
/// are checked before returning; a failed check panics since it can only be
/// an arithmetic bug.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let form = reduce(m);
    verify(m, &form);
    form
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.rows_mut().swap(i, j);
            self.u.rows_mut().swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.a.rows_mut() {
                row.swap(i, j);
            }
            for row in self.v.rows_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_dst += k * row_src
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let rows = m.rows_mut();
            let src_row = rows[src].clone();
            for (x, s) in rows[dst].iter_mut().zip(&src_row) {
                if !s.is_zero() {
                    *x += k * s;
                }
            }
        }
    }

    /// col_dst += k * col_src
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.rows_mut() {
                if !row[src].is_zero() {
                    let delta = k * &row[src];
                    row[dst] += delta;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m.rows_mut()[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.nrows() {
            for j in t..self.a.ncols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

fn reduce(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = w.smallest_in_block(t) else {
                return finish(w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let q = w.a.get(i, t).div_floor(w.a.get(t, t));
                w.add_row(i, t, &-q);
                clean &= w.a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let q = w.a.get(t, j).div_floor(w.a.get(t, t));
                w.add_col(j, t, &-q);
                clean &= w.a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = w.a.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    finish(w)
}

fn finish(w: Work) -> SmithForm {
    SmithForm {
        u: w.u,
        d: w.a,
        v: w.v,
    }
}

/// An integer solution of `a * x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.nrows(), "right-hand side length mismatch");
    let form = smith_normal_form(a);
    // d z = u b with x = v z
    let ub: Vec<BigInt> = (0..a.nrows())
        .map(|i| form.u.row(i).iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let diag = form.diagonal();
    let mut z = vec![BigInt::zero(); a.ncols()];
    for (i, c) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                if !c.is_multiple_of(d) {
                    return None;
                }
                z[i] = c / d;
            }
            _ => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(
        (0..a.ncols())
            .map(|i| form.v.row(i).iter().zip(&z).map(|(x, y)| x * y).sum())
            .collect(),
    )
}

fn verify(m: &IntMatrix, form: &SmithForm) {
    let product = form.u.mul(m).mul(&form.v);
    assert_eq!(product, form.d, "Smith form identity D = U*M*V failed");
    for i in 0..form.d.nrows() {
        for j in 0..form.d.ncols() {
            if i != j {
                assert!(form.d.get(i, j).is_zero(), "Smith form not diagonal");
            }
        }
    }
    let diag = form.diagonal();
    for (k, x) in diag.iter().enumerate() {
        assert!(!x.is_negative(), "negative invariant factor");
        if let Some(next) = diag.get(k + 1) {
            let divides = if x.is_zero() {
                next.is_zero()
            } else {
                next.is_multiple_of(x)
            };
            assert!(divides, "invariant factors do not form a divisibility chain");
        }
    }
    for t in [&form.u, &form.v] {
        assert!(
            t.determinant().abs().is_one(),
            "Smith transform is not unimodular"
        );
    }
}
