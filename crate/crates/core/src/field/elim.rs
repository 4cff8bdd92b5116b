//! Gaussian elimination.
//!
//! Rows are first split into connected components (two columns are connected
//! when some row touches both); each component is eliminated densely on its
//! own column set. Space-shared schemes are block diagonal, so this keeps the
//! cost proportional to the block size instead of the full matrix.

use std::collections::HashMap;

use super::{Elem, FieldMatrix, FieldSpec};

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Columns of one block and the rows touching them.
type Block<'a> = (Vec<usize>, Vec<&'a [(usize, Elem)]>);

/// Rows grouped by connected component, each with its local column list.
struct Blocks<'a> {
    cols: Vec<usize>,
    block_of_col: Vec<u32>,
    members: HashMap<u32, Block<'a>>,
}

impl<'a> Blocks<'a> {
    fn build(rows: &[&'a [(usize, Elem)]]) -> Self {
        let mut cols: Vec<usize> = rows.iter().flat_map(|r| r.iter().map(|&(c, _)| c)).collect();
        cols.sort_unstable();
        cols.dedup();
        let local = |c: usize, cols: &[usize]| cols.binary_search(&c).unwrap() as u32;

        let mut uf = UnionFind::new(cols.len());
        for row in rows {
            if let Some(&(first, _)) = row.first() {
                let a = local(first, &cols);
                for &(c, _) in &row[1..] {
                    uf.union(a, local(c, &cols));
                }
            }
        }
        let block_of_col: Vec<u32> = (0..cols.len() as u32).map(|i| uf.find(i)).collect();

        let mut members: HashMap<u32, Block> = HashMap::new();
        for (i, &c) in cols.iter().enumerate() {
            members.entry(block_of_col[i]).or_default().0.push(c);
        }
        for row in rows {
            if let Some(&(first, _)) = row.first() {
                let b = block_of_col[local(first, &cols) as usize];
                members.get_mut(&b).unwrap().1.push(row);
            }
        }
        Blocks {
            cols,
            block_of_col,
            members,
        }
    }

    fn block_of(&self, col: usize) -> Option<u32> {
        self.cols
            .binary_search(&col)
            .ok()
            .map(|i| self.block_of_col[i])
    }
}

/// Reduced row echelon form of a dense matrix. Returns `(pivot column, row)`
/// pairs with every pivot normalized to 1.
fn rref(field: &FieldSpec, mut rows: Vec<Vec<Elem>>, ncols: usize) -> Vec<(usize, Vec<Elem>)> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..ncols {
        let Some(p) = (top..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(top, p);
        let lead = rows[top][c];
        if lead != 1 {
            let inv = field.inv(lead).expect("nonzero pivot");
            for v in rows[top].iter_mut() {
                *v = field.mul(*v, inv);
            }
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                if p != 0 {
                    *x ^= field.mul(f, p);
                }
            }
        }
        pivots.push(c);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots.into_iter().zip(rows).collect()
}

fn densify(block_cols: &[usize], rows: &[&[(usize, Elem)]]) -> Vec<Vec<Elem>> {
    rows.iter()
        .map(|row| {
            let mut d = vec![0; block_cols.len()];
            for &(c, v) in row.iter() {
                d[block_cols.binary_search(&c).unwrap()] = v;
            }
            d
        })
        .collect()
}

/// Rank by Gaussian elimination over `field`.
pub fn mat_rank(m: &FieldMatrix, field: &FieldSpec) -> usize {
    let rows: Vec<&[(usize, Elem)]> = m.rows().map(Vec::as_slice).collect();
    let blocks = Blocks::build(&rows);
    blocks
        .members
        .values()
        .map(|(cols, rows)| rref(field, densify(cols, rows), cols.len()).len())
        .sum()
}

/// For each target column `c`, whether the unit vector `e_c` lies in the row
/// space of `rows`.
pub fn units_in_rowspace<'a, I>(field: &FieldSpec, rows: I, targets: &[usize]) -> Vec<bool>
where
    I: IntoIterator<Item = &'a [(usize, Elem)]>,
{
    let rows: Vec<&[(usize, Elem)]> = rows.into_iter().collect();
    let blocks = Blocks::build(&rows);
    let mut solved: HashMap<u32, Vec<(usize, Vec<Elem>)>> = HashMap::new();
    targets
        .iter()
        .map(|&t| {
            let Some(b) = blocks.block_of(t) else {
                return false;
            };
            let (cols, block_rows) = &blocks.members[&b];
            let reduced = solved
                .entry(b)
                .or_insert_with(|| rref(field, densify(cols, block_rows), cols.len()));
            let local = cols.binary_search(&t).unwrap();
            // In RREF, e_t is in the span iff some pivot row is exactly e_t.
            reduced.iter().any(|(pc, row)| {
                *pc == local && row.iter().enumerate().all(|(i, &v)| i == local || v == 0)
            })
        })
        .collect()
}

/// Coefficients `c` with `c * basis = target`, or `None` when the target is
/// not in the row space. Among several solutions, the one with every free
/// variable set to zero is returned.
pub fn solve_in_rowspace(
    target: &[Elem],
    basis: &FieldMatrix,
    field: &FieldSpec,
) -> Option<Vec<Elem>> {
    assert_eq!(
        target.len(),
        basis.n_cols(),
        "target and basis column counts differ"
    );
    let nb = basis.n_rows();
    // Solve basis^T c = target^T via RREF of the augmented system.
    let t = basis.transpose();
    let system: Vec<Vec<Elem>> = (0..t.n_rows())
        .map(|r| {
            let mut row = t.dense_row(r);
            row.push(target[r]);
            row
        })
        .collect();
    let reduced = rref(field, system, nb + 1);
    let mut coeffs = vec![0; nb];
    for (pc, row) in reduced {
        if pc == nb {
            return None;
        }
        coeffs[pc] = row[nb];
    }
    Some(coeffs)
}
