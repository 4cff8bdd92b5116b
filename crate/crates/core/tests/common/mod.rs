#![allow(dead_code)]

use d2dcache::catalog::{self, CornerPointId};
use d2dcache::field::{mat_rank, FieldMatrix, FieldSpec};
use d2dcache::scheme::{DemandVector, LinearScheme};

/// Can a user holding `cache` and hearing `signals` rebuild every subfile of
/// `file`? Checked by comparing ranks with and without each unit vector.
pub fn oracle_decodes(cache: &FieldMatrix, signals: &[FieldMatrix], file: usize, l: usize, field: &FieldSpec) -> bool {
    let mut parts: Vec<&FieldMatrix> = vec![cache];
    parts.extend(signals.iter());
    let stack = FieldMatrix::vstack(&parts);
    let base = mat_rank(&stack, field);
    (0..l).all(|sub| {
        let mut unit = vec![0u16; stack.n_cols()];
        unit[(file - 1) * l + sub] = 1;
        let mut aug = stack.clone();
        aug.push_dense(&unit);
        mat_rank(&aug, field) == base
    })
}

/// Transmitted rows for `d` when sender `k` applies `rule[k]`.
pub fn signals(s: &LinearScheme, rule: &std::collections::BTreeMap<usize, FieldMatrix>) -> Vec<FieldMatrix> {
    rule.iter().map(|(&k, e)| e.mul(s.placement(k), s.field())).collect()
}

/// Every requester of `d` decodes under `rule`.
pub fn oracle_demand_ok(s: &LinearScheme, d: &DemandVector, rule: &std::collections::BTreeMap<usize, FieldMatrix>) -> bool {
    let sig = signals(s, rule);
    d.requesters()
        .into_iter()
        .all(|u| oracle_decodes(s.placement(u), &sig, d.file_of(u), s.subpacketization(), s.field()))
}

/// Every two-requester catalog scheme for N in `ns`.
pub fn two_rr_bases(ns: impl IntoIterator<Item = usize>) -> Vec<(usize, CornerPointId, LinearScheme)> {
    ns.into_iter()
        .flat_map(|n| {
            catalog::two_rr_schemes(n)
                .unwrap()
                .into_iter()
                .map(move |(id, s)| (n, id, s))
        })
        .collect()
}
