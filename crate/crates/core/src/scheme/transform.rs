//! Space sharing, relabeling and symmetrization.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use super::{DeliveryRule, DemandVector, LinearScheme, SchemeShape, VerificationReport};
use crate::error::{Error, Result};
use crate::field::FieldMatrix;
use crate::rational::Rational;

/// Default cap on `N! * K! * L` for [`symmetrize`].
pub const DEFAULT_SUBPACKETIZATION_BUDGET: u64 = 1_000_000;

fn check_permutation(p: &[usize], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::config(format!(
            "{what} permutation has length {}, expected {n}",
            p.len()
        )));
    }
    for &x in p {
        if x >= n || seen[x] {
            return Err(Error::config(format!("{what} permutation {p:?} is not a bijection")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Relabels users by `user_perm` (user `k` becomes user `user_perm[k]`) and
/// files by `file_perm` (0-based: file `n+1` becomes file `file_perm[n]+1`).
/// Delivery is re-keyed by the induced demand map.
pub fn permute_scheme(
    s: &LinearScheme,
    user_perm: &[usize],
    file_perm: &[usize],
) -> Result<LinearScheme> {
    let shape = s.shape();
    check_permutation(user_perm, shape.n_users, "user")?;
    check_permutation(file_perm, shape.n_files, "file")?;

    let l = shape.subpacketization;
    let col_map = |c: usize| file_perm[c / l] * l + c % l;

    let mut placement = vec![FieldMatrix::default(); shape.n_users];
    for (k, p) in s.placements().iter().enumerate() {
        placement[user_perm[k]] = p.map_columns(shape.symbols(), col_map);
    }

    let mut delivery = DeliveryRule::new();
    for (d, per_sender) in s.delivery() {
        let mut image = vec![0; shape.n_users];
        for k in 0..shape.n_users {
            let f = d.file_of(k);
            image[user_perm[k]] = if f == 0 { 0 } else { file_perm[f - 1] + 1 };
        }
        let senders = per_sender
            .iter()
            .map(|(&k, e)| (user_perm[k], e.clone()))
            .collect();
        delivery.insert(DemandVector::new(image), senders);
    }
    LinearScheme::new(shape, s.field().clone(), placement, delivery)
}

/// Block-diagonal space sharing. Each `(scheme, copies)` entry runs `copies`
/// times on its own disjoint range of subfile symbols, in order. All parts
/// must share model, `N`, `K`, `s` and field.
pub fn space_share(parts: &[(&LinearScheme, usize)]) -> Result<LinearScheme> {
    let parts: Vec<(&LinearScheme, usize)> =
        parts.iter().copied().filter(|&(_, c)| c > 0).collect();
    let Some(&(first, _)) = parts.first() else {
        return Err(Error::config("space sharing needs at least one part"));
    };
    let base = first.shape();
    for (p, _) in &parts {
        let sh = p.shape();
        if sh.model != base.model
            || sh.n_files != base.n_files
            || sh.n_users != base.n_users
            || sh.senders != base.senders
            || p.field() != first.field()
        {
            return Err(Error::config(
                "space-shared schemes must agree on model, N, K, s and field",
            ));
        }
    }
    let total_l: usize = parts
        .iter()
        .map(|(p, c)| p.subpacketization() * c)
        .sum();
    let shape = SchemeShape {
        subpacketization: total_l,
        ..base
    };
    let k_users = base.n_users;

    // Lay out every copy: subfile offset and per-user cache row offset.
    struct Copy<'a> {
        scheme: &'a LinearScheme,
        sub_offset: usize,
        row_offset: Vec<usize>,
    }
    let mut copies = Vec::new();
    let mut sub_offset = 0;
    let mut row_offset = vec![0usize; k_users];
    for &(p, count) in &parts {
        for _ in 0..count {
            copies.push(Copy {
                scheme: p,
                sub_offset,
                row_offset: row_offset.clone(),
            });
            sub_offset += p.subpacketization();
            for (k, off) in row_offset.iter_mut().enumerate() {
                *off += p.placement(k).n_rows();
            }
        }
    }
    let cache_rows = row_offset;

    let mut placement: Vec<FieldMatrix> = (0..k_users)
        .map(|_| FieldMatrix::empty(shape.symbols()))
        .collect();
    for c in &copies {
        let l = c.scheme.subpacketization();
        let map = |col: usize| (col / l) * total_l + c.sub_offset + col % l;
        for (k, pk) in placement.iter_mut().enumerate() {
            pk.extend_rows(&c.scheme.placement(k).map_columns(shape.symbols(), map));
        }
    }

    let demand_keys: Vec<&DemandVector> = copies
        .iter()
        .flat_map(|c| c.scheme.delivery().keys())
        .unique()
        .collect();
    let mut delivery = DeliveryRule::new();
    for d in demand_keys {
        let mut per_sender: BTreeMap<usize, FieldMatrix> = BTreeMap::new();
        for c in &copies {
            let Some(rule) = c.scheme.delivery_for(d) else {
                continue;
            };
            for (&k, e) in rule {
                let off = c.row_offset[k];
                let target = per_sender
                    .entry(k)
                    .or_insert_with(|| FieldMatrix::empty(cache_rows[k]));
                target.extend_rows(&e.map_columns(cache_rows[k], |j| j + off));
            }
        }
        delivery.insert(d.clone(), per_sender);
    }
    LinearScheme::new(shape, first.field().clone(), placement, delivery)
}

/// Runs `a` on a fraction `alpha` of every file and `b` on the rest.
///
/// With `alpha = p/q` in lowest terms the result has `L = q * L_a * L_b`:
/// the first `p * L_a * L_b` symbols of each file carry `p * L_b` copies of
/// `a`, the remaining ones `(q - p) * L_a` copies of `b`. Memory and every
/// per-demand rate are the corresponding convex combinations, exactly.
pub fn memory_share(a: &LinearScheme, b: &LinearScheme, alpha: Rational) -> Result<LinearScheme> {
    if alpha < Rational::zero() || alpha > Rational::one() {
        return Err(Error::config(format!("sharing weight {alpha} outside [0, 1]")));
    }
    if a.model() != b.model() || a.n_files() != b.n_files() || a.n_users() != b.n_users() {
        return Err(Error::config(
            "memory sharing needs schemes with the same model, N and K",
        ));
    }
    if a.field() != b.field() {
        return Err(Error::config("memory sharing needs schemes over the same field"));
    }
    let p = *alpha.numer() as usize;
    let q = *alpha.denom() as usize;
    let (la, lb) = (a.subpacketization(), b.subpacketization());
    space_share(&[(a, p * lb), (b, (q - p) * la)])
}

/// Space-shares all `N! K!` jointly relabeled copies of `s`, producing a user-
/// and file-index-symmetric scheme whose per-demand rate is the orbit average
/// of the base rates. Fails when `N! K! L` exceeds the default budget.
pub fn symmetrize(s: &LinearScheme) -> Result<LinearScheme> {
    symmetrize_with_budget(s, DEFAULT_SUBPACKETIZATION_BUDGET)
}

pub fn symmetrize_with_budget(s: &LinearScheme, budget: u64) -> Result<LinearScheme> {
    let shape = s.shape();
    let factorial = |n: usize| (1..=n as u128).product::<u128>();
    let total = factorial(shape.n_files)
        .checked_mul(factorial(shape.n_users))
        .and_then(|x| x.checked_mul(shape.subpacketization as u128));
    match total {
        Some(t) if t <= budget as u128 => {}
        _ => {
            return Err(Error::Resource(format!(
                "symmetrizing needs N! K! L = {}! * {}! * {} symbols per file, budget is {budget}",
                shape.n_files, shape.n_users, shape.subpacketization
            )))
        }
    }
    let mut copies = Vec::new();
    for user_perm in (0..shape.n_users).permutations(shape.n_users) {
        for file_perm in (0..shape.n_files).permutations(shape.n_files) {
            copies.push(permute_scheme(s, &user_perm, &file_perm)?);
        }
    }
    let parts: Vec<(&LinearScheme, usize)> = copies.iter().map(|c| (c, 1)).collect();
    space_share(&parts)
}

/// Orbit representative of `d` under user permutations and file relabeling:
/// the smallest first-occurrence relabeling over all user orders.
pub fn demand_orbit_key(d: &DemandVector) -> Vec<usize> {
    (0..d.len())
        .permutations(d.len())
        .map(|order| {
            let mut seen: Vec<usize> = Vec::new();
            order
                .iter()
                .map(|&u| match d.file_of(u) {
                    0 => 0,
                    f => match seen.iter().position(|&x| x == f) {
                        Some(i) => i + 1,
                        None => {
                            seen.push(f);
                            seen.len()
                        }
                    },
                })
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// Per-demand rates [`symmetrize`] would produce, without building it: the
/// mean of the base rates over each demand's orbit. Averaging over the full
/// group visits every orbit member equally often, so the two agree.
pub fn orbit_average_rates(report: &VerificationReport) -> BTreeMap<DemandVector, Rational> {
    let mut orbits: BTreeMap<Vec<usize>, (Rational, i64)> = BTreeMap::new();
    for d in &report.demands {
        let e = orbits
            .entry(demand_orbit_key(&d.demand))
            .or_insert((Rational::zero(), 0));
        e.0 += d.rate;
        e.1 += 1;
    }
    report
        .demands
        .iter()
        .map(|d| {
            let (sum, count) = orbits[&demand_orbit_key(&d.demand)];
            (d.demand.clone(), sum / Rational::from_integer(count))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, rat};
    use crate::scheme::verify;

    #[test]
    fn identity_permutation_changes_nothing() {
        let s = catalog::n2_seven_eighths().unwrap();
        let p = permute_scheme(&s, &[0, 1, 2], &[0, 1]).unwrap();
        assert_eq!(p.to_json(), s.to_json());
    }

    #[test]
    fn user_cycle_on_table_one() {
        let s = catalog::n2_seven_eighths().unwrap();
        let p = permute_scheme(&s, &[1, 2, 0], &[0, 1]).unwrap();
        let (a, b) = (verify(&s), verify(&p));
        assert!(b.passed());
        let rates = |r: &VerificationReport| r.demands.iter().map(|d| d.rate).sorted().collect_vec();
        assert_eq!(rates(&a), rates(&b));
    }

    #[test]
    fn half_cache_is_file_symmetric() {
        let s = catalog::mds_half(3).unwrap();
        let p = permute_scheme(&s, &[0, 1, 2], &[1, 0, 2]).unwrap();
        for k in 0..3 {
            let mut x = s.placement(k).to_dense_rows();
            let mut y = p.placement(k).to_dense_rows();
            x.sort();
            y.sort();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn sharing_weights() {
        let a = catalog::mds_half(4).unwrap();
        let b = catalog::man_two_thirds(4).unwrap();
        let whole = memory_share(&a, &b, int(1)).unwrap();
        let (ra, rw) = (verify(&a), verify(&whole));
        assert_eq!(ra.memory, rw.memory);
        assert_eq!(ra.demands.iter().map(|d| d.rate).collect_vec(), rw.demands.iter().map(|d| d.rate).collect_vec());

        let half = verify(&memory_share(&a, &b, rat(1, 2)).unwrap());
        assert!(half.passed());
        assert_eq!(half.max_memory(), rat(7, 3));
        assert_eq!(half.worst_case_rate, rat(2, 3));

        let t2 = catalog::half_rate(2).unwrap();
        let man = catalog::man_two_thirds(2).unwrap();
        let r = verify(&memory_share(&t2, &man, rat(1, 2)).unwrap());
        assert!(r.passed());
        assert_eq!(r.max_memory(), rat(5, 4));
        assert_eq!(r.worst_case_rate, rat(5, 12));

        assert!(memory_share(&a, &b, rat(3, 2)).is_err());
        assert!(memory_share(&a, &catalog::mds_half(3).unwrap(), rat(1, 2)).is_err());
    }

    #[test]
    fn symmetrizing_small_schemes() {
        let s = catalog::mds_half(2).unwrap();
        let r = verify(&symmetrize(&s).unwrap());
        assert!(r.passed());
        assert!(r.demands.iter().all(|d| d.rate == int(1)));

        let t1 = catalog::n2_seven_eighths().unwrap();
        let sym = symmetrize(&t1).unwrap();
        assert_eq!(sym.subpacketization(), 2 * 6 * 8);
        let r = verify(&sym);
        assert!(r.passed());
        assert_eq!(r.worst_case_rate, rat(7, 8));
    }

    #[test]
    fn orbit_average_matches_explicit_symmetrization() {
        for s in [catalog::half_rate(3).unwrap(), catalog::n2_seven_eighths().unwrap()] {
            let explicit = verify(&symmetrize(&s).unwrap());
            let avg = orbit_average_rates(&verify(&s));
            for d in &explicit.demands {
                assert_eq!(avg[&d.demand], d.rate, "{}", d.demand);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = catalog::half_rate(8).unwrap();
        assert!(matches!(symmetrize(&s), Err(Error::Resource(_))));
        assert!(symmetrize_with_budget(&catalog::mds_half(2).unwrap(), 10).is_err());
    }

    #[test]
    fn orbit_keys() {
        let k = |v: [usize; 3]| demand_orbit_key(&DemandVector::from(v));
        assert_eq!(k([0, 1, 2]), k([2, 0, 1]));
        assert_eq!(k([0, 1, 1]), k([2, 2, 0]));
        assert_ne!(k([0, 1, 1]), k([0, 1, 2]));
    }
}
