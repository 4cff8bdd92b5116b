//! Writing schemes down the way they are usually printed: cache rows and
//! transmissions as XORs of named subfiles.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{solve_in_rowspace, FieldMatrix, FieldSpec, SparseRow};
use crate::scheme::{DeliveryRule, DemandVector, LinearScheme, SchemeShape};

/// `W_{file, sub}` with `file` 1-based and `sub` 0-based.
pub(crate) type Sub = (usize, usize);

/// GF(2) row summing the given subfiles. Repeated terms cancel.
pub(crate) fn xor(shape: &SchemeShape, terms: &[Sub]) -> SparseRow {
    let mut cols: Vec<usize> = terms.iter().map(|&(n, l)| shape.symbol(n, l)).collect();
    cols.sort_unstable();
    let mut row: SparseRow = Vec::with_capacity(cols.len());
    for c in cols {
        if row.last().map(|&(last, _)| last) == Some(c) {
            row.pop();
        } else {
            row.push((c, 1));
        }
    }
    row
}

pub(crate) fn matrix(shape: &SchemeShape, rows: Vec<SparseRow>) -> FieldMatrix {
    FieldMatrix::from_sparse_rows(shape.symbols(), rows)
}

/// Expresses each wanted transmission as a combination of the sender's cache
/// rows. Fails if some row cannot be computed from the cache.
pub(crate) fn encode(
    field: &FieldSpec,
    cache: &FieldMatrix,
    wanted: &[SparseRow],
    user: usize,
) -> Result<FieldMatrix> {
    let mut e = FieldMatrix::empty(cache.n_rows());
    let mut dense = vec![0; cache.n_cols()];
    for row in wanted {
        dense.iter_mut().for_each(|x| *x = 0);
        for &(c, v) in row {
            dense[c] = v;
        }
        let coeffs = solve_in_rowspace(&dense, cache, field).ok_or_else(|| {
            Error::Rejected(format!(
                "transmission is not computable from the cache of user {}",
                user + 1
            ))
        })?;
        e.push_dense(&coeffs);
    }
    Ok(e)
}

/// Builds a scheme from its placement and a per-demand description of what
/// each sender puts on the air, in symbol space.
pub(crate) fn assemble<F>(
    shape: SchemeShape,
    field: FieldSpec,
    placement: Vec<FieldMatrix>,
    mut signals: F,
) -> Result<LinearScheme>
where
    F: FnMut(&DemandVector) -> BTreeMap<usize, Vec<SparseRow>>,
{
    let demands = crate::scheme::enumerate_demands(
        shape.model,
        shape.n_files,
        shape.n_users,
        shape.senders,
    )?;
    let mut delivery = DeliveryRule::new();
    for d in demands {
        let mut per_sender = BTreeMap::new();
        for (k, rows) in signals(&d) {
            per_sender.insert(k, encode(&field, &placement[k], &rows, k)?);
        }
        delivery.insert(d, per_sender);
    }
    LinearScheme::new(shape, field, placement, delivery)
}
