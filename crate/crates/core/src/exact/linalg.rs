use num_traits::{One, Zero};

use super::Rat;

/// Sparse vector as `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseVec = Vec<(usize, Rat)>;

/// Row echelon form built one vector at a time. Column order is the natural
/// order of the indices; a vector's pivot is its smallest nonzero column.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<usize>>,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Reduces `v` against the current rows; returns the remainder.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut start = 0;
        while start < v.len() {
            let (col, ref coef) = v[start];
            match self.pivot_row[col] {
                Some(r) => {
                    let f = coef.clone();
                    v = axpy_from(&v, start, &f, &self.rows[r]);
                }
                None => start += 1,
            }
        }
        v
    }

    /// Inserts `v`; returns `false` if it was already in the row span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce_leading(v);
        let Some((lead, ref c)) = v.first().cloned() else {
            return false;
        };
        let inv = Rat::one() / c;
        let row: SparseVec = v.into_iter().map(|(j, x)| (j, x * &inv)).collect();
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    // only eliminates until the leading column is a non-pivot
    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((col, coef)) = v.first() {
            match self.pivot_row[*col] {
                Some(r) => {
                    let f = coef.clone();
                    v = axpy_from(&v, 0, &f, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }
}

/// `v − f·row`, where `row` has pivot one at `v[at].0`; the entry at `at` cancels.
fn axpy_from(v: &SparseVec, at: usize, f: &Rat, row: &SparseVec) -> SparseVec {
    let mut out: SparseVec = Vec::with_capacity(v.len() + row.len());
    out.extend(v[..at].iter().cloned());
    let (mut i, mut j) = (at, 0);
    while i < v.len() || j < row.len() {
        let ci = v.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = row.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(v[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(f * &row[j].1)));
            j += 1;
        } else {
            let x = &v[i].1 - f * &row[j].1;
            if !x.is_zero() {
                out.push((ci, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
