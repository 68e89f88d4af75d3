//! Matrices over F_q[θ] and fraction-free (Bareiss) row reduction.

use super::bipoly::BiPoly;
use super::field::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BiPoly>,
}

/// Result of [`PolyMatrix::row_reduce_ff`].
///
/// `transform * original == echelon`, where `transform` is square of size `rows`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub echelon: PolyMatrix,
    /// Pivot columns in increasing order; row `i` of the echelon form has its pivot in `pivots[i]`.
    pub pivots: Vec<usize>,
    pub transform: PolyMatrix,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl PolyMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![BiPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, BiPoly::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BiPoly>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Unsupported("ragged matrix rows".into()));
        }
        Ok(PolyMatrix { rows: nrows, cols: ncols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BiPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BiPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let field = self.entries.first().or(other.entries.first()).map(|e| e.field().clone());
        let Some(field) = field else {
            return PolyMatrix { rows: self.rows, cols: other.cols, entries: Vec::new() };
        };
        let mut out = PolyMatrix::zeros(&field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let pairs: Vec<(&BiPoly, &BiPoly)> = (0..self.cols).map(|k| (self.get(i, k), other.get(k, j))).collect();
                out.set(i, j, super::sum_of_products(&field, &pairs));
            }
        }
        out
    }

    /// Fraction-free row echelon form over F_q[θ].
    ///
    /// Every update `(p*a - b*c) / prev` divides exactly by the previous pivot. The
    /// transform is tracked by eliminating on `[M | I]`.
    pub fn row_reduce_ff(&self) -> Result<Echelon> {
        if self.entries.iter().any(|e| !e.is_t_free()) {
            return Err(Error::Unsupported("row_reduce_ff expects t-free entries".into()));
        }
        let n = self.rows;
        let m = self.cols;
        let field = match self.entries.first() {
            Some(e) => e.field().clone(),
            None => {
                return Ok(Echelon { echelon: self.clone(), pivots: Vec::new(), transform: PolyMatrix { rows: n, cols: n, entries: Vec::new() } });
            }
        };
        let width = m + n;
        let mut a: Vec<Vec<BiPoly>> = (0..n)
            .map(|i| {
                let mut row: Vec<BiPoly> = self.row(i).to_vec();
                for k in 0..n {
                    row.push(if k == i { BiPoly::one(&field) } else { BiPoly::zero(&field) });
                }
                row
            })
            .collect();
        let mut prev = BiPoly::one(&field);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(pr) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, pr);
            let (top, bottom) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let piv = pivot_row[c].clone();
            for row in bottom.iter_mut() {
                let lead = std::mem::replace(&mut row[c], BiPoly::zero(&field));
                for j in (c + 1)..width {
                    let updated = super::sum_of_products(&field, &[(&piv, &row[j]), (&(-&lead), &pivot_row[j])]);
                    row[j] = if prev.is_one() { updated } else { updated.exact_div(&prev)? };
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        let mut echelon = PolyMatrix::zeros(&field, n, m);
        let mut transform = PolyMatrix::zeros(&field, n, n);
        for (i, row) in a.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if j < m {
                    echelon.set(i, j, v);
                } else {
                    transform.set(i, j - m, v);
                }
            }
        }
        Ok(Echelon { echelon, pivots, transform })
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.row_reduce_ff()?.rank())
    }
}
