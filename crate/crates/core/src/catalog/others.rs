//! The coded `(1, 1)` traditional scheme for two files and the K-user family.

use std::collections::BTreeMap;

use itertools::Itertools;

use super::symbolic::{assemble, matrix, xor, Sub};
use crate::error::{Error, Result};
use crate::field::{mds_generator, min_degree_for_points, FieldMatrix, FieldSpec, SparseRow};
use crate::scheme::{LinearScheme, ModelKind, SchemeShape};

/// Every user requests and sends; two files, `L = 6`, one file of cache.
pub fn trad_coded_one_one() -> Result<LinearScheme> {
    let sh = SchemeShape {
        model: ModelKind::Traditional,
        n_files: 2,
        n_users: 3,
        senders: 0,
        subpacketization: 6,
    };
    let a = |i: usize| (1, i - 1);
    let b = |i: usize| (2, i - 1);
    // User k holds the parities of one subfile pair and both files' next pair raw.
    let cache = |p: usize, q: usize| -> Vec<Vec<Sub>> {
        vec![
            vec![a(p), b(p)],
            vec![a(p + 1), b(p + 1)],
            vec![a(q)],
            vec![a(q + 1)],
            vec![b(q)],
            vec![b(q + 1)],
        ]
    };
    let caches = [cache(1, 3), cache(3, 5), cache(5, 1)];
    let placement = caches
        .iter()
        .map(|rows| matrix(&sh, rows.iter().map(|r| xor(&sh, r)).collect()))
        .collect();
    assemble(sh, FieldSpec::gf2(), placement, |d| {
        let w = |u: usize, i: usize| xor(&sh, &[(d.file_of(u), i - 1)]);
        BTreeMap::from([
            (0, vec![w(2, 3), w(2, 4)]),
            (1, vec![w(0, 5), w(0, 6)]),
            (2, vec![w(1, 1), w(1, 2)]),
        ])
    })
}

fn kuser_shape(n: usize, k: usize, s: usize, l: usize) -> Result<SchemeShape> {
    if n < 2 {
        return Err(Error::config("the K-user schemes need N >= 2"));
    }
    if s < 1 || s + 2 > k {
        return Err(Error::config(format!(
            "the K-user schemes need 1 <= s <= K-2, got K={k}, s={s}"
        )));
    }
    Ok(SchemeShape {
        model: ModelKind::KUserSSenders,
        n_files: n,
        n_users: k,
        senders: s,
        subpacketization: l,
    })
}

/// `(N/(s+1), s min(N, K-s)/(s+1))` over the smallest field that carries a
/// `(K, s+1)` MDS code.
pub fn ku_mds(n: usize, k: usize, s: usize) -> Result<LinearScheme> {
    let field = FieldSpec::new(min_degree_for_points(k))?;
    ku_mds_over(n, k, s, field)
}

/// Each file's `s+1` subfiles are MDS coded into `K` pieces; user `k` stores
/// piece `k` of every file. Each sender transmits its piece of every distinct
/// requested file, in file order.
pub fn ku_mds_over(n: usize, k: usize, s: usize, field: FieldSpec) -> Result<LinearScheme> {
    let sh = kuser_shape(n, k, s, s + 1)?;
    let g = mds_generator(k, s + 1, &field)?;
    let placement: Vec<FieldMatrix> = (0..k)
        .map(|u| {
            let rows: Vec<SparseRow> = (1..=n)
                .map(|f| g.row(u).iter().map(|&(j, v)| (sh.symbol(f, j), v)).collect())
                .collect();
            FieldMatrix::from_sparse_rows(sh.symbols(), rows)
        })
        .collect();
    assemble(sh, field, placement.clone(), |d| {
        let files: Vec<usize> = d.requesters().iter().map(|&u| d.file_of(u)).sorted().dedup().collect();
        d.idle_users()
            .into_iter()
            .map(|u| (u, files.iter().map(|&f| placement[u].row(f - 1).to_vec()).collect()))
            .collect()
    })
}

/// `((K-1)N/K, 1/K)`: user `k` misses only subfile `k` of each file. The
/// lowest-index sender transmits the XOR of every requester's missing
/// subfile; the other senders stay silent.
pub fn ku_man(n: usize, k: usize, s: usize) -> Result<LinearScheme> {
    let sh = kuser_shape(n, k, s, k)?;
    let placement = (0..k)
        .map(|u| {
            let rows = (1..=n)
                .flat_map(|f| (0..k).filter(move |&j| j != u).map(move |j| vec![(f, j)]))
                .map(|r| xor(&sh, &r))
                .collect();
            matrix(&sh, rows)
        })
        .collect();
    assemble(sh, FieldSpec::gf2(), placement, |d| {
        let senders = d.idle_users();
        let terms: Vec<Sub> = d.requesters().iter().map(|&u| (d.file_of(u), u)).collect();
        senders
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, if i == 0 { vec![xor(&sh, &terms)] } else { Vec::new() }))
            .collect()
    })
}

/// `(N, 0)` in the K-user model.
pub fn ku_full(n: usize, k: usize, s: usize) -> Result<LinearScheme> {
    let sh = kuser_shape(n, k, s, 1)?;
    let placement = vec![FieldMatrix::identity(n); k];
    assemble(sh, FieldSpec::gf2(), placement, |d| {
        d.idle_users().into_iter().map(|u| (u, Vec::new())).collect()
    })
}
