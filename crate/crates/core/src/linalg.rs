//! Exact rank computations over the rationals.

use num_rational::BigRational;
use num_traits::Zero;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    /// Builds a matrix from rows; returns `None` when the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n_rows = rows.len();
        Some(RationalMatrix {
            rows: n_rows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Rank of the whole matrix.
    pub fn rank(&self) -> usize {
        let all: Vec<usize> = (0..self.cols).collect();
        self.column_rank(&all)
    }

    /// Rank of the submatrix formed by the given columns.
    pub fn column_rank(&self, columns: &[usize]) -> usize {
        // Work on the transpose so that each selected column is a row.
        let mut m: Vec<Vec<BigRational>> = columns
            .iter()
            .map(|&j| (0..self.rows).map(|i| self.get(i, j).clone()).collect())
            .collect();
        row_reduce(&mut m)
    }
}

/// Gaussian elimination in place; returns the rank.
pub fn row_reduce(m: &mut [Vec<BigRational>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for x in m[rank][col..].iter_mut() {
            *x *= &inv;
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                *x -= &factor * p;
            }
        }
        rank += 1;
    }
    rank
}
