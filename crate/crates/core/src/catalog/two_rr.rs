//! Corner-point schemes for three users, two requesters and one sender.

use std::collections::BTreeMap;

use super::symbolic::{assemble, matrix, xor, Sub};
use crate::error::Result;
use crate::field::{FieldMatrix, FieldSpec, SparseRow};
use crate::scheme::{DemandVector, LinearScheme, ModelKind, SchemeShape};

fn shape(n: usize, l: usize) -> SchemeShape {
    SchemeShape {
        model: ModelKind::TwoRequestersOneSender,
        n_files: n,
        n_users: 3,
        senders: 1,
        subpacketization: l,
    }
}

/// The sender of `d` and the three entries of `d`.
fn split(d: &DemandVector) -> (usize, [usize; 3]) {
    let e = d.entries();
    (d.idle_users()[0], [e[0], e[1], e[2]])
}

fn build<F>(sh: SchemeShape, caches: [Vec<Vec<Sub>>; 3], mut deliver: F) -> Result<LinearScheme>
where
    F: FnMut(usize, [usize; 3]) -> Vec<Vec<Sub>>,
{
    let placement: Vec<FieldMatrix> = caches
        .iter()
        .map(|rows| matrix(&sh, rows.iter().map(|r| xor(&sh, r)).collect()))
        .collect();
    assemble(sh, FieldSpec::gf2(), placement, |d| {
        let (sender, e) = split(d);
        let rows: Vec<SparseRow> = deliver(sender, e).iter().map(|r| xor(&sh, r)).collect();
        BTreeMap::from([(sender, rows)])
    })
}

/// `(N, 0)`: everyone caches everything.
pub fn full(n: usize) -> Result<LinearScheme> {
    let sh = shape(n, 1);
    let all: Vec<Vec<Sub>> = (1..=n).map(|f| vec![(f, 0)]).collect();
    build(sh, [all.clone(), all.clone(), all], |_, _| Vec::new())
}

/// `(N/2, 1)`: user 1 caches the parity of the two halves of every file,
/// users 2 and 3 cache one half each.
///
/// When both requesters ask for the same file the sender repeats the row, so
/// every demand costs one file.
pub fn mds_half(n: usize) -> Result<LinearScheme> {
    let sh = shape(n, 2);
    let files = 1..=n;
    let z1 = files.clone().map(|f| vec![(f, 0), (f, 1)]).collect();
    let z2 = files.clone().map(|f| vec![(f, 0)]).collect();
    let z3 = files.map(|f| vec![(f, 1)]).collect();
    build(sh, [z1, z2, z3], |sender, [d1, d2, d3]| match sender {
        0 => vec![vec![(d2, 0), (d2, 1)], vec![(d3, 0), (d3, 1)]],
        1 => vec![vec![(d1, 0)], vec![(d3, 0)]],
        _ => vec![vec![(d1, 1)], vec![(d2, 1)]],
    })
}

/// `(2N/3, 1/3)`: uncoded placement over user pairs. Subfile 0 is shared by
/// users {1,2}, subfile 1 by {1,3}, subfile 2 by {2,3}.
pub fn man_two_thirds(n: usize) -> Result<LinearScheme> {
    let sh = shape(n, 3);
    let pair = |a: usize, b: usize| -> Vec<Vec<Sub>> {
        (1..=n).flat_map(|f| [vec![(f, a)], vec![(f, b)]]).collect()
    };
    build(sh, [pair(0, 1), pair(0, 2), pair(1, 2)], |sender, [d1, d2, d3]| {
        match sender {
            0 => vec![vec![(d2, 1), (d3, 0)]],
            1 => vec![vec![(d1, 2), (d3, 0)]],
            _ => vec![vec![(d1, 2), (d2, 1)]],
        }
    })
}

/// `(1, 7/8)` for two files, `L = 8`.
pub fn n2_seven_eighths() -> Result<LinearScheme> {
    let sh = shape(2, 8);
    let a = |i: usize| (1, i - 1);
    let b = |i: usize| (2, i - 1);
    let z1 = vec![
        vec![a(1), b(2)],
        vec![a(2), b(1)],
        vec![b(4)],
        vec![a(4)],
        vec![a(5)],
        vec![b(5)],
        vec![a(7), a(8)],
        vec![b(7), b(8)],
    ];
    let z2 = vec![
        vec![a(1)],
        vec![b(1)],
        vec![a(3), b(4)],
        vec![a(4), b(3)],
        vec![b(6)],
        vec![a(6)],
        vec![a(7)],
        vec![b(7)],
    ];
    let z3 = vec![
        vec![b(2)],
        vec![a(2)],
        vec![a(3)],
        vec![b(3)],
        vec![a(5), b(6)],
        vec![a(6), b(5)],
        vec![a(8)],
        vec![b(8)],
    ];
    let w = |d: usize, i: usize| (d, i - 1);
    build(sh, [z1, z2, z3], move |sender, [d1, d2, d3]| match sender {
        0 if d2 != d3 => vec![
            vec![w(d2, 2), w(d3, 1)],
            vec![a(4)],
            vec![b(4)],
            vec![a(5)],
            vec![b(5)],
            vec![a(7), a(8)],
            vec![b(7), b(8)],
        ],
        0 => vec![
            vec![w(d2, 7), w(d2, 8)],
            vec![a(4)],
            vec![b(4)],
            vec![a(5)],
            vec![b(5)],
            vec![a(1), b(2)],
            vec![a(2), b(1)],
        ],
        1 if d1 != d3 => vec![
            vec![w(d1, 3), w(d3, 4)],
            vec![a(1)],
            vec![b(1)],
            vec![a(6)],
            vec![b(6)],
            vec![a(7)],
            vec![b(7)],
        ],
        1 => vec![
            vec![w(d1, 7)],
            vec![a(1)],
            vec![b(1)],
            vec![a(6)],
            vec![b(6)],
            vec![a(3), b(4)],
            vec![a(4), b(3)],
        ],
        _ if d1 != d2 => vec![
            vec![w(d1, 6), w(d2, 5)],
            vec![a(2)],
            vec![b(2)],
            vec![a(3)],
            vec![b(3)],
            vec![a(8)],
            vec![b(8)],
        ],
        _ => vec![
            vec![w(d1, 8)],
            vec![a(2)],
            vec![b(2)],
            vec![a(3)],
            vec![b(3)],
            vec![a(5), b(6)],
            vec![a(6), b(5)],
        ],
    })
}

/// Chained placement of the half-rate family: per file, one parity of a
/// subfile pair, two raw subfiles, and a link to the next file (the last
/// file has no link). Users rotate the subfile roles by two.
pub(crate) fn half_rate_caches(n: usize) -> [Vec<Vec<Sub>>; 3] {
    // (parity pair, raw, raw, link from subfile .. to next file's subfile ..)
    let roles = [(0, 1, 3, 4), (2, 3, 0, 5), (4, 5, 1, 2)];
    roles.map(|(p0, p1, r0, r1)| {
        let mut rows = Vec::new();
        for f in 1..=n {
            rows.push(vec![(f, p0), (f, p1)]);
            rows.push(vec![(f, r0)]);
            rows.push(vec![(f, r1)]);
            if f < n {
                rows.push(vec![(f, p1), (f + 1, p0)]);
            }
        }
        rows
    })
}

/// `((4N-1)/6, 1/2)` with `L = 6`. Some transmissions are not cached
/// verbatim and are computed by the sender from its parity and link rows.
pub fn half_rate(n: usize) -> Result<LinearScheme> {
    let sh = shape(n, 6);
    let w = |d: usize, i: usize| (d, i - 1);
    build(sh, half_rate_caches(n), move |sender, [d1, d2, d3]| match sender {
        0 => vec![vec![w(d2, 2), w(d3, 1)], vec![w(d3, 4)], vec![w(d2, 5)]],
        1 => vec![vec![w(d1, 3), w(d3, 4)], vec![w(d3, 1)], vec![w(d1, 6)]],
        _ => vec![vec![w(d1, 6), w(d2, 5)], vec![w(d2, 2)], vec![w(d1, 3)]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::verify;

    #[test]
    fn half_rate_two_files_is_table_two() {
        let sh = shape(2, 6);
        let a = |i: usize| (1, i - 1);
        let b = |i: usize| (2, i - 1);
        let printed = [
            vec![vec![a(1), a(2)], vec![b(1), b(2)], vec![a(4)], vec![b(4)], vec![a(5)], vec![b(5)], vec![a(2), b(1)]],
            vec![vec![a(1)], vec![b(1)], vec![a(3), a(4)], vec![b(3), b(4)], vec![a(6)], vec![b(6)], vec![a(4), b(3)]],
            vec![vec![a(2)], vec![b(2)], vec![a(3)], vec![b(3)], vec![a(5), a(6)], vec![b(5), b(6)], vec![a(6), b(5)]],
        ];
        let ours = half_rate_caches(2);
        for k in 0..3 {
            let mut x: Vec<SparseRow> = ours[k].iter().map(|r| xor(&sh, r)).collect();
            let mut y: Vec<SparseRow> = printed[k].iter().map(|r| xor(&sh, r)).collect();
            x.sort();
            y.sort();
            assert_eq!(x, y, "user {}", k + 1);
        }
    }

    #[test]
    fn half_rate_three_files_is_table_three() {
        let sh = shape(3, 6);
        let a = |i: usize| (1, i - 1);
        let b = |i: usize| (2, i - 1);
        let c = |i: usize| (3, i - 1);
        let printed = [
            vec![
                vec![a(1), a(2)], vec![b(1), b(2)], vec![c(1), c(2)], vec![a(4)], vec![b(4)], vec![c(4)],
                vec![a(5)], vec![b(5)], vec![c(5)], vec![a(2), b(1)], vec![b(2), c(1)],
            ],
            vec![
                vec![a(1)], vec![b(1)], vec![c(1)], vec![a(3), a(4)], vec![b(3), b(4)], vec![c(3), c(4)],
                vec![a(6)], vec![b(6)], vec![c(6)], vec![a(4), b(3)], vec![b(4), c(3)],
            ],
            vec![
                vec![a(2)], vec![b(2)], vec![c(2)], vec![a(3)], vec![b(3)], vec![c(3)],
                vec![a(5), a(6)], vec![b(5), b(6)], vec![c(5), c(6)], vec![a(6), b(5)], vec![b(6), c(5)],
            ],
        ];
        let ours = half_rate_caches(3);
        for k in 0..3 {
            let mut x: Vec<SparseRow> = ours[k].iter().map(|r| xor(&sh, r)).collect();
            let mut y: Vec<SparseRow> = printed[k].iter().map(|r| xor(&sh, r)).collect();
            x.sort();
            y.sort();
            assert_eq!(x, y, "user {}", k + 1);
        }
    }

    #[test]
    fn preprocessed_row_matches_the_worked_example() {
        // D = (0,2,1): user 1 sends B2+A1, which it only holds as a combination.
        let s = half_rate(2).unwrap();
        let d = DemandVector::from([0, 2, 1]);
        let e = &s.delivery_for(&d).unwrap()[&0];
        // Cache order: A1+A2, A4, A5, A2+B1, B1+B2, B4, B5.
        assert_eq!(e.dense_row(0), vec![1, 0, 0, 1, 1, 0, 0]);
        let sh = s.shape();
        assert_eq!(s.signal(&d, 0).unwrap().row(0), xor(&sh, &[(1, 0), (2, 1)]).as_slice());
    }

    #[test]
    fn table_one_rates() {
        let r = verify(&n2_seven_eighths().unwrap());
        assert!(r.passed());
        assert!(r.demands.iter().all(|d| d.rate == crate::rational::rat(7, 8)));
    }
}
