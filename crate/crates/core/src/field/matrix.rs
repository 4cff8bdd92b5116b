use super::{Elem, FieldSpec};
use crate::error::{Error, Result};

/// One matrix row as `(column, value)` pairs, sorted by column, zeros omitted.
pub type SparseRow = Vec<(usize, Elem)>;

/// A matrix over a binary extension field.
///
/// Rows are kept sparse: placement and delivery maps touch a handful of
/// symbols per row, and space-shared schemes grow to hundreds of thousands of
/// columns. The representation is canonical, so structural equality is
/// matrix equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldMatrix {
    cols: usize,
    rows: Vec<SparseRow>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn empty(cols: usize) -> Self {
        FieldMatrix::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        FieldMatrix {
            cols: n,
            rows: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    /// Builds from dense rows; every row must have `cols` entries.
    pub fn from_dense_rows(cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut out = FieldMatrix::empty(cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::config(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            out.push_dense(row);
        }
        Ok(out)
    }

    /// Row-major dense entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Elem]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::config(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut out = FieldMatrix::empty(cols);
        for r in 0..rows {
            out.push_dense(&entries[r * cols..(r + 1) * cols]);
        }
        Ok(out)
    }

    /// Builds from sparse rows, sorting and merging duplicate columns with XOR.
    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseRow>) -> Self {
        let mut out = FieldMatrix::empty(cols);
        for row in rows {
            out.push_sparse(row);
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Elem)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &SparseRow> + '_ {
        self.rows.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        match self.rows[r].binary_search_by_key(&c, |&(col, _)| col) {
            Ok(i) => self.rows[r][i].1,
            Err(_) => 0,
        }
    }

    pub fn dense_row(&self, r: usize) -> Vec<Elem> {
        let mut out = vec![0; self.cols];
        for &(c, v) in &self.rows[r] {
            out[c] = v;
        }
        out
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.n_rows()).map(|r| self.dense_row(r)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn push_dense(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c, v))
                .collect(),
        );
    }

    pub fn push_sparse(&mut self, mut row: SparseRow) {
        row.sort_unstable_by_key(|&(c, _)| c);
        let mut merged: SparseRow = Vec::with_capacity(row.len());
        for (c, v) in row {
            assert!(c < self.cols, "column {c} out of range {}", self.cols);
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 ^= v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0);
        self.rows.push(merged);
    }

    /// Appends the rows of `other`, which must have the same column count.
    pub fn extend_rows(&mut self, other: &FieldMatrix) {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn vstack(parts: &[&FieldMatrix]) -> FieldMatrix {
        let cols = parts.first().map_or(0, |p| p.cols);
        let mut out = FieldMatrix::empty(cols);
        for p in parts {
            out.extend_rows(p);
        }
        out
    }

    pub fn select_rows(&self, indices: &[usize]) -> FieldMatrix {
        FieldMatrix {
            cols: self.cols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn without_row(&self, index: usize) -> FieldMatrix {
        let mut out = self.clone();
        out.rows.remove(index);
        out
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut rows = vec![Vec::new(); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                rows[c].push((r, v));
            }
        }
        FieldMatrix {
            cols: self.rows.len(),
            rows,
        }
    }

    /// Relabels columns through `map` into a matrix with `new_cols` columns.
    pub fn map_columns(&self, new_cols: usize, map: impl Fn(usize) -> usize) -> FieldMatrix {
        FieldMatrix::from_sparse_rows(
            new_cols,
            self.rows
                .iter()
                .map(|row| row.iter().map(|&(c, v)| (map(c), v)).collect())
                .collect(),
        )
    }

    /// `self * rhs` over `field`.
    pub fn mul(&self, rhs: &FieldMatrix, field: &FieldSpec) -> FieldMatrix {
        assert_eq!(self.cols, rhs.n_rows(), "inner dimension mismatch");
        let mut out = FieldMatrix::empty(rhs.cols);
        for row in &self.rows {
            out.push_sparse(combine_rows(row, rhs, field));
        }
        out
    }

    /// `coeffs * self` for a dense coefficient vector.
    pub fn left_mul_vector(&self, coeffs: &[Elem], field: &FieldSpec) -> Vec<Elem> {
        assert_eq!(coeffs.len(), self.n_rows(), "coefficient length mismatch");
        let mut out = vec![0; self.cols];
        for (row, &a) in self.rows.iter().zip(coeffs) {
            if a == 0 {
                continue;
            }
            for &(c, v) in row {
                out[c] ^= field.mul(a, v);
            }
        }
        out
    }

    /// Fails if any entry is not an element of `field`.
    pub fn check_entries(&self, field: &FieldSpec) -> Result<()> {
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                if !field.contains(v as u64) {
                    return Err(Error::config(format!(
                        "entry ({r},{c}) = {v} is not an element of GF(2^{})",
                        field.m()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Linear combination `sum_j coeff_j * rhs[j]` for a sparse coefficient row.
fn combine_rows(coeffs: &[(usize, Elem)], rhs: &FieldMatrix, field: &FieldSpec) -> SparseRow {
    let mut acc: SparseRow = Vec::new();
    for &(j, a) in coeffs {
        acc.extend(rhs.rows[j].iter().map(|&(c, v)| (c, field.mul(a, v))));
    }
    acc
}
