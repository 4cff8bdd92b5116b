//! Turning a two-requester scheme into schemes for other request patterns:
//! every user requesting (rotation), and a random subset requesting.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldMatrix, SparseRow};
use crate::rational::Rational;
use crate::scheme::{
    enumerate_demands, requester_decodes, verify, DeliveryRule, DemandVector, LinearScheme,
    ModelKind, SchemeShape,
};

fn require_clean_two_rr(base: &LinearScheme) -> Result<()> {
    if base.model() != ModelKind::TwoRequestersOneSender {
        return Err(Error::Rejected(format!(
            "expected a two-requester scheme, got model {}",
            base.model()
        )));
    }
    let report = verify(base);
    if !report.passed() {
        let first = report.failures().next().map(|d| d.demand.to_string());
        return Err(Error::Rejected(format!(
            "base scheme does not verify (first failing demand: {})",
            first.unwrap_or_else(|| "none, feasibility flags fail".into())
        )));
    }
    Ok(())
}

/// Halves every subfile: subfile `l` becomes parts `2l` (a) and `2l+1` (b).
/// Each cache holds its base rows on part a followed by the same rows on part b.
fn split_placement(base: &LinearScheme) -> Vec<FieldMatrix> {
    let l = base.subpacketization();
    let cols = base.shape().symbols() * 2;
    let to_part = |part: usize| move |c: usize| (c / l) * 2 * l + 2 * (c % l) + part;
    base.placements()
        .iter()
        .map(|p| {
            let mut out = p.map_columns(cols, to_part(0));
            out.extend_rows(&p.map_columns(cols, to_part(1)));
            out
        })
        .collect()
}

/// Lifts a base encoding matrix to the split cache: `on_a` / `on_b` apply it
/// to the part-a / part-b copy of the cache; both together send the sum.
fn lift(e: &FieldMatrix, cache_rows: usize, on_a: bool, on_b: bool) -> FieldMatrix {
    let rows: Vec<SparseRow> = e
        .rows()
        .map(|r| {
            let mut out: SparseRow = Vec::with_capacity(r.len() * 2);
            if on_a {
                out.extend(r.iter().copied());
            }
            if on_b {
                out.extend(r.iter().map(|&(c, v)| (c + cache_rows, v)));
            }
            out
        })
        .collect();
    FieldMatrix::from_sparse_rows(cache_rows * 2, rows)
}

/// Runs the base rule separately on both halves.
fn lift_both_halves(e: &FieldMatrix, cache_rows: usize) -> FieldMatrix {
    let mut out = lift(e, cache_rows, true, false);
    out.extend_rows(&lift(e, cache_rows, false, true));
    out
}

fn base_rule<'a>(base: &'a LinearScheme, d: &DemandVector, sender: usize) -> &'a FieldMatrix {
    &base.delivery_for(d).expect("base verified")[&sender]
}

fn rotated_rule(base: &LinearScheme, d: &DemandVector) -> BTreeMap<usize, FieldMatrix> {
    let rows = |k: usize| base.placement(k).n_rows();
    let e = d.entries();
    let (d1, d2, d3) = (e[0], e[1], e[2]);
    let e1 = base_rule(base, &DemandVector::from([0, d2, d3]), 0);
    let e2 = base_rule(base, &DemandVector::from([d1, 0, d3]), 1);
    let e3 = base_rule(base, &DemandVector::from([d1, d2, 0]), 2);
    BTreeMap::from([
        (0, lift(e1, rows(0), true, false)),
        (1, lift(e2, rows(1), true, true)),
        (2, lift(e3, rows(2), false, true)),
    ])
}

/// Every user requests and every user sends. Each subfile is halved; user 1
/// runs the base rule for `(0, d2, d3)` on the a-halves, user 3 runs the rule
/// for `(d1, d2, 0)` on the b-halves, and user 2 runs the rule for
/// `(d1, 0, d3)` on the sum of both halves. Requester 1 learns the b-half of
/// its file from user 3 and the sum from user 2; requester 3 symmetrically.
/// The rate for `(d1, d2, d3)` is half the sum of the three base rates.
pub fn rotate_2rr1s(base: &LinearScheme) -> Result<LinearScheme> {
    require_clean_two_rr(base)?;
    let shape = SchemeShape {
        model: ModelKind::Traditional,
        senders: 0,
        subpacketization: base.subpacketization() * 2,
        ..base.shape()
    };
    let mut delivery = DeliveryRule::new();
    for d in enumerate_demands(ModelKind::Traditional, base.n_files(), 3, 0)? {
        let rule = rotated_rule(base, &d);
        delivery.insert(d, rule);
    }
    LinearScheme::new(shape, base.field().clone(), split_placement(base), delivery)
}

/// How a single-requester demand is served by a two-requester rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FakeAssignment {
    /// The actual demand (one nonzero entry).
    pub demand: DemandVector,
    /// Fake user -> file it pretends to request.
    pub fakes: BTreeMap<usize, usize>,
    /// The demand the base rule is run on.
    pub effective: DemandVector,
    pub sender: usize,
}

impl FakeAssignment {
    /// The lowest-index non-requester sends; the other one pretends to ask
    /// for the real requester's file.
    pub fn for_demand(d: &DemandVector) -> Result<Self> {
        let req = d.requesters();
        let idle = d.idle_users();
        if d.len() != 3 || req.len() != 1 {
            return Err(Error::config(format!(
                "fake requesters apply to three users with one requester, got {d}"
            )));
        }
        let (sender, fake) = (idle[0], idle[1]);
        let file = d.file_of(req[0]);
        Ok(FakeAssignment {
            demand: d.clone(),
            fakes: BTreeMap::from([(fake, file)]),
            effective: d.with_entry(fake, file),
            sender,
        })
    }
}

/// Drops transmissions that no real requester needs.
///
/// Rows are visited in construction order (senders ascending, rows in
/// order); each row is removed if every real requester still decodes
/// without it. Returns the kept encoding rows per sender.
pub fn prune_signal(
    scheme: &LinearScheme,
    demand: &DemandVector,
    real_requesters: &[usize],
) -> Result<BTreeMap<usize, FieldMatrix>> {
    let rule = scheme
        .delivery_for(demand)
        .ok_or_else(|| Error::Rejected(format!("no delivery rule for {demand}")))?;
    let mut rows: Vec<(usize, usize, SparseRow)> = Vec::new();
    for &k in rule.keys() {
        let sig = scheme.signal(demand, k).expect("rule present");
        for (i, r) in sig.rows().enumerate() {
            rows.push((k, i, r.clone()));
        }
    }
    let decodes = |keep: &[bool]| {
        let sig: Vec<SparseRow> = rows
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.2.clone())
            .collect();
        real_requesters
            .iter()
            .all(|&u| requester_decodes(scheme, u, demand.file_of(u), &sig))
    };
    let mut keep = vec![true; rows.len()];
    if !decodes(&keep) {
        return Err(Error::Rejected(format!(
            "the unpruned signal for {demand} does not serve every real requester"
        )));
    }
    for i in 0..rows.len() {
        keep[i] = false;
        if !decodes(&keep) {
            keep[i] = true;
        }
    }
    Ok(rule
        .iter()
        .map(|(&k, e)| {
            let idx: Vec<usize> = rows
                .iter()
                .zip(&keep)
                .filter(|(r, &kept)| kept && r.0 == k)
                .map(|(r, _)| r.1)
                .collect();
            (k, e.select_rows(&idx))
        })
        .collect())
}

/// Result of adapting a two-requester scheme to random requests.
#[derive(Clone, Debug)]
pub struct RequestRandomAdaptation {
    /// Same caches, `L' = 2L`, a rule for every request pattern.
    pub scheme: LinearScheme,
    /// The fake assignment used for each single-requester demand.
    pub fakes: Vec<FakeAssignment>,
    /// Worst-case rate for `r = 0, 1, 2, 3` requesters.
    pub worst_rates: [Rational; 4],
}

/// Two requesters: the base rule. Three: the rotated rule. One: the base rule
/// with a fake requester, pruned. None: silence. Rules for fewer than three
/// requesters run on both halves of every subfile, so their rates equal the
/// base rates.
pub fn adapt_request_random(base: &LinearScheme) -> Result<RequestRandomAdaptation> {
    require_clean_two_rr(base)?;
    let n = base.n_files();
    let l2 = base.subpacketization() * 2;
    let shape = SchemeShape {
        model: ModelKind::RequestRandom,
        senders: 0,
        subpacketization: l2,
        ..base.shape()
    };
    let rows = |k: usize| base.placement(k).n_rows();
    let mut delivery = DeliveryRule::new();
    let mut fakes = Vec::new();
    let mut worst = [Rational::zero(); 4];
    for d in enumerate_demands(ModelKind::RequestRandom, n, 3, 0)? {
        let r = d.n_requesters();
        let rule: BTreeMap<usize, FieldMatrix> = match r {
            0 => (0..3).map(|k| (k, FieldMatrix::empty(2 * rows(k)))).collect(),
            1 => {
                let fa = FakeAssignment::for_demand(&d)?;
                let pruned = prune_signal(base, &fa.effective, &d.requesters())?;
                let rule = d
                    .idle_users()
                    .into_iter()
                    .map(|k| {
                        let e = match pruned.get(&k) {
                            Some(e) if k == fa.sender => lift_both_halves(e, rows(k)),
                            _ => FieldMatrix::empty(2 * rows(k)),
                        };
                        (k, e)
                    })
                    .collect();
                fakes.push(fa);
                rule
            }
            2 => {
                let k = d.idle_users()[0];
                BTreeMap::from([(k, lift_both_halves(base_rule(base, &d, k), rows(k)))])
            }
            _ => rotated_rule(base, &d),
        };
        let sent: usize = rule.values().map(FieldMatrix::n_rows).sum();
        worst[r] = worst[r].max(Rational::new(sent as i64, l2 as i64));
        delivery.insert(d, rule);
    }
    let scheme = LinearScheme::new(shape, base.field().clone(), split_placement(base), delivery)?;
    Ok(RequestRandomAdaptation {
        scheme,
        fakes,
        worst_rates: worst,
    })
}

fn binomial3(x: usize) -> i64 {
    [1, 3, 3, 1][x]
}

/// `sum_x C(3,x) p^x (1-p)^(3-x) R'_x`.
pub fn average_rate(p: f64, rates: &[Rational; 4]) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok((0..4)
        .map(|x| {
            let w = binomial3(x) as f64 * p.powi(x as i32) * (1.0 - p).powi(3 - x as i32);
            w * rates[x].to_f64().unwrap_or(f64::NAN)
        })
        .sum())
}

/// Exact version of [`average_rate`] for rational `p`.
pub fn average_rate_exact(p: Rational, rates: &[Rational; 4]) -> Result<Rational> {
    if p < Rational::zero() || p > Rational::one() {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let q = Rational::one() - p;
    Ok((0..4)
        .map(|x| {
            let w = Rational::from_integer(binomial3(x)) * pow(p, x) * pow(q, 3 - x);
            w * rates[x]
        })
        .sum())
}

fn pow(x: Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// Per-`r` worst-case rates and their average under request probability `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomRequestProfile {
    pub p: f64,
    pub rates: [Rational; 4],
    pub average: f64,
}

impl RandomRequestProfile {
    pub fn new(p: f64, rates: [Rational; 4]) -> Result<Self> {
        Ok(RandomRequestProfile {
            p,
            rates,
            average: average_rate(p, &rates)?,
        })
    }
}
