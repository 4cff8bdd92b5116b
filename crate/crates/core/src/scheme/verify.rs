use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{senders_of, DemandVector, LinearScheme, ModelKind, SchemeShape};
use crate::field::{mat_rank, units_in_rowspace, FieldMatrix, SparseRow};
use crate::rational::{format_rational, Rational};

/// Outcome for one demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandReport {
    pub demand: DemandVector,
    pub decodable: bool,
    /// Requesters (0-based) that cannot recover their file.
    pub undecodable_users: Vec<usize>,
    /// Transmitted rows over `L`, counting every row a sender emits.
    pub rate: Rational,
    /// Rows emitted per sender (0-based).
    pub sender_rows: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityFlags {
    pub full_row_rank: bool,
    /// Any two caches jointly recover the library (only checked for 2RR1S).
    pub pairwise_recovery: Option<bool>,
    /// The delivery rule has an entry for every admissible demand, with
    /// encoding matrices for exactly the senders of that demand.
    pub demand_coverage: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub shape: SchemeShape,
    pub memory: Vec<Rational>,
    pub demands: Vec<DemandReport>,
    pub worst_case_rate: Rational,
    pub feasibility: FeasibilityFlags,
}

impl VerificationReport {
    pub fn all_decodable(&self) -> bool {
        self.demands.iter().all(|d| d.decodable)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DemandReport> {
        self.demands.iter().filter(|d| !d.decodable)
    }

    pub fn feasible(&self) -> bool {
        let f = &self.feasibility;
        f.full_row_rank && f.pairwise_recovery != Some(false) && f.demand_coverage
    }

    pub fn passed(&self) -> bool {
        self.all_decodable() && self.feasible()
    }

    /// Largest per-user memory; equals every user's memory for symmetric designs.
    pub fn max_memory(&self) -> Rational {
        self.memory.iter().copied().max().unwrap_or_else(Rational::zero)
    }

    pub fn rate_of(&self, d: &DemandVector) -> Option<Rational> {
        self.demands
            .iter()
            .find(|r| &r.demand == d)
            .map(|r| r.rate)
    }

    /// Worst-case rate over demands with exactly `r` requesters.
    pub fn worst_rate_with_requesters(&self, r: usize) -> Option<Rational> {
        self.demands
            .iter()
            .filter(|d| d.demand.n_requesters() == r)
            .map(|d| d.rate)
            .max()
    }

    pub fn to_json(&self) -> Value {
        let demands: Vec<Value> = self
            .demands
            .iter()
            .map(|d| {
                json!({
                    "demand": d.demand.key(),
                    "decodable": d.decodable,
                    "undecodable_users": d.undecodable_users.iter().map(|u| u + 1).collect_vec(),
                    "rate": format_rational(&d.rate),
                    "sender_rows": d.sender_rows.iter()
                        .map(|(k, n)| ((k + 1).to_string(), json!(n)))
                        .collect::<serde_json::Map<_, _>>(),
                })
            })
            .collect();
        json!({
            "model": self.shape.model.name(),
            "N": self.shape.n_files,
            "K": self.shape.n_users,
            "s": self.shape.senders,
            "L": self.shape.subpacketization,
            "memory": self.memory.iter().map(format_rational).collect_vec(),
            "worst_case_rate": format_rational(&self.worst_case_rate),
            "all_decodable": self.all_decodable(),
            "feasibility": {
                "full_row_rank": self.feasibility.full_row_rank,
                "pairwise_recovery": self.feasibility.pairwise_recovery,
                "demand_coverage": self.feasibility.demand_coverage,
            },
            "failures": self.failures().map(|d| d.demand.key()).collect_vec(),
            "demands": demands,
        })
    }
}

/// Checks every admissible demand: requester `r` decodes iff each symbol of
/// its file lies in the row space of its cache stacked with all transmitted
/// signals. Demands are checked in parallel and reported in lexicographic
/// order.
pub fn verify(scheme: &LinearScheme) -> VerificationReport {
    let shape = scheme.shape();
    let demands = scheme.demands();

    let reports: Vec<DemandReport> = demands
        .par_iter()
        .map(|d| verify_demand(scheme, d))
        .collect();

    let worst_case_rate = reports
        .iter()
        .map(|r| r.rate)
        .max()
        .unwrap_or_else(Rational::zero);

    let field = scheme.field();
    let full_row_rank = scheme
        .placements()
        .iter()
        .all(|p| mat_rank(p, field) == p.n_rows());
    let pairwise_recovery = (shape.model == ModelKind::TwoRequestersOneSender).then(|| {
        (0..shape.n_users).tuple_combinations().all(|(f, g)| {
            let stacked = FieldMatrix::vstack(&[scheme.placement(f), scheme.placement(g)]);
            mat_rank(&stacked, field) == shape.symbols()
        })
    });
    let demand_coverage = scheme.delivery().len() == demands.len()
        && demands.iter().all(|d| match scheme.delivery_for(d) {
            Some(per_sender) => per_sender
                .keys()
                .copied()
                .eq(senders_of(shape.model, d)),
            None => false,
        });

    VerificationReport {
        shape,
        memory: (0..shape.n_users).map(|k| scheme.memory(k)).collect(),
        demands: reports,
        worst_case_rate,
        feasibility: FeasibilityFlags {
            full_row_rank,
            pairwise_recovery,
            demand_coverage,
        },
    }
}

fn verify_demand(scheme: &LinearScheme, d: &DemandVector) -> DemandReport {
    let shape = scheme.shape();
    let senders = senders_of(shape.model, d);
    let mut signal_rows: Vec<SparseRow> = Vec::new();
    let mut sender_rows = BTreeMap::new();
    for &k in &senders {
        if let Some(sig) = scheme.signal(d, k) {
            sender_rows.insert(k, sig.n_rows());
            signal_rows.extend(sig.rows().cloned());
        }
    }
    let transmitted: usize = sender_rows.values().sum();

    let undecodable_users: Vec<usize> = d
        .requesters()
        .into_iter()
        .filter(|&r| !requester_decodes(scheme, r, d.file_of(r), &signal_rows))
        .collect();

    DemandReport {
        demand: d.clone(),
        decodable: undecodable_users.is_empty(),
        undecodable_users,
        rate: Rational::new(transmitted as i64, shape.subpacketization as i64),
        sender_rows,
    }
}

pub(crate) fn requester_decodes(
    scheme: &LinearScheme,
    user: usize,
    file: usize,
    signal_rows: &[SparseRow],
) -> bool {
    let shape = scheme.shape();
    let targets: Vec<usize> = (0..shape.subpacketization)
        .map(|l| shape.symbol(file, l))
        .collect();
    let rows = scheme
        .placement(user)
        .rows()
        .chain(signal_rows.iter())
        .map(Vec::as_slice);
    units_in_rowspace(scheme.field(), rows, &targets)
        .into_iter()
        .all(|b| b)
}
