//! Linear caching schemes and their verifier.
//!
//! A scheme splits every file into `L` symbols, so the library is a vector of
//! `N * L` symbols with file `n` (1-based) at positions `(n-1)*L .. n*L`.
//! User `k` caches `P_k * w` for a placement matrix `P_k`. For each demand, each
//! sender `k` transmits `E_{k,D} * (P_k * w)`, so a signal can only ever be a
//! function of the sender's own cache.

mod demand;
mod json;
mod transform;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{mat_rank, FieldMatrix, FieldSpec};
use crate::rational::Rational;

pub use demand::{
    check_model_params, enumerate_demands, partition_by_requesters, senders_of, DemandVector,
};
pub use transform::{
    demand_orbit_key, memory_share, orbit_average_rates, permute_scheme, space_share, symmetrize,
    symmetrize_with_budget, DEFAULT_SUBPACKETIZATION_BUDGET,
};
pub use verify::{verify, DemandReport, FeasibilityFlags, VerificationReport};
pub(crate) use verify::requester_decodes;

/// Which users request and which users send.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Three users, two request, the idle one sends.
    TwoRequestersOneSender,
    /// Every user requests and every user sends.
    Traditional,
    /// `K` users, `s` idle senders, `K - s` requesters.
    KUserSSenders,
    /// Three users, any subset requests.
    RequestRandom,
}

impl ModelKind {
    /// Name used by the interchange format.
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::TwoRequestersOneSender => "2rr1s",
            ModelKind::Traditional => "traditional",
            ModelKind::KUserSSenders => "kuser",
            ModelKind::RequestRandom => "request_random",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "2rr1s" => Some(ModelKind::TwoRequestersOneSender),
            "traditional" => Some(ModelKind::Traditional),
            "kuser" => Some(ModelKind::KUserSSenders),
            "request_random" => Some(ModelKind::RequestRandom),
            _ => None,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-demand encoding matrices, keyed by sender (0-based user index).
pub type DeliveryRule = BTreeMap<DemandVector, BTreeMap<usize, FieldMatrix>>;

/// The dimensions a scheme is defined for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeShape {
    pub model: ModelKind,
    pub n_files: usize,
    pub n_users: usize,
    /// Number of designated idle senders (1 for 2RR1S, `s` for K-user, 0 otherwise).
    pub senders: usize,
    pub subpacketization: usize,
}

impl SchemeShape {
    pub fn symbols(&self) -> usize {
        self.n_files * self.subpacketization
    }

    /// Global symbol position of subfile `sub` (0-based) of `file` (1-based).
    pub fn symbol(&self, file: usize, sub: usize) -> usize {
        debug_assert!(file >= 1 && file <= self.n_files && sub < self.subpacketization);
        (file - 1) * self.subpacketization + sub
    }
}

/// A complete linear caching-and-delivery design. Immutable once built.
#[derive(Clone, Debug)]
pub struct LinearScheme {
    shape: SchemeShape,
    field: FieldSpec,
    placement: Vec<FieldMatrix>,
    delivery: DeliveryRule,
}

impl LinearScheme {
    /// Validates dimensions, field membership and full row rank of every
    /// placement matrix.
    pub fn new(
        shape: SchemeShape,
        field: FieldSpec,
        placement: Vec<FieldMatrix>,
        delivery: DeliveryRule,
    ) -> Result<Self> {
        check_model_params(shape.model, shape.n_files, shape.n_users, shape.senders)?;
        if shape.subpacketization == 0 {
            return Err(Error::config("subpacketization must be positive"));
        }
        if placement.len() != shape.n_users {
            return Err(Error::config(format!(
                "{} placement matrices for {} users",
                placement.len(),
                shape.n_users
            )));
        }
        for (k, p) in placement.iter().enumerate() {
            if p.n_cols() != shape.symbols() {
                return Err(Error::config(format!(
                    "placement of user {} has {} columns, expected N*L = {}",
                    k + 1,
                    p.n_cols(),
                    shape.symbols()
                )));
            }
            p.check_entries(&field)?;
            if mat_rank(p, &field) != p.n_rows() {
                return Err(Error::Rejected(format!(
                    "placement of user {} is not full row rank",
                    k + 1
                )));
            }
        }
        for (d, per_sender) in &delivery {
            if d.len() != shape.n_users || d.entries().iter().any(|&x| x > shape.n_files) {
                return Err(Error::config(format!(
                    "demand {d} does not fit K={}, N={}",
                    shape.n_users, shape.n_files
                )));
            }
            for (&k, e) in per_sender {
                if k >= shape.n_users {
                    return Err(Error::config(format!("demand {d}: sender {} out of range", k + 1)));
                }
                if e.n_cols() != placement[k].n_rows() {
                    return Err(Error::config(format!(
                        "demand {d}: encoding matrix of user {} has {} columns, cache has {} rows",
                        k + 1,
                        e.n_cols(),
                        placement[k].n_rows()
                    )));
                }
                e.check_entries(&field)?;
            }
        }
        Ok(LinearScheme {
            shape,
            field,
            placement,
            delivery,
        })
    }

    pub fn shape(&self) -> SchemeShape {
        self.shape
    }

    pub fn model(&self) -> ModelKind {
        self.shape.model
    }

    pub fn n_files(&self) -> usize {
        self.shape.n_files
    }

    pub fn n_users(&self) -> usize {
        self.shape.n_users
    }

    pub fn senders(&self) -> usize {
        self.shape.senders
    }

    pub fn subpacketization(&self) -> usize {
        self.shape.subpacketization
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn placement(&self, user: usize) -> &FieldMatrix {
        &self.placement[user]
    }

    pub fn placements(&self) -> &[FieldMatrix] {
        &self.placement
    }

    pub fn delivery(&self) -> &DeliveryRule {
        &self.delivery
    }

    /// Encoding matrices for `d`, if the rule covers it.
    pub fn delivery_for(&self, d: &DemandVector) -> Option<&BTreeMap<usize, FieldMatrix>> {
        self.delivery.get(d)
    }

    /// Cache size of `user` in file units: cached rows over `L`.
    pub fn memory(&self, user: usize) -> Rational {
        Rational::new(
            self.placement[user].n_rows() as i64,
            self.shape.subpacketization as i64,
        )
    }

    /// Transmitted rows of sender `user` for `d`, expressed over the library symbols.
    pub fn signal(&self, d: &DemandVector, user: usize) -> Option<FieldMatrix> {
        let e = self.delivery.get(d)?.get(&user)?;
        Some(e.mul(&self.placement[user], &self.field))
    }

    /// Every admissible demand of this scheme's model, lexicographically.
    pub fn demands(&self) -> Vec<DemandVector> {
        enumerate_demands(
            self.shape.model,
            self.shape.n_files,
            self.shape.n_users,
            self.shape.senders,
        )
        .expect("shape validated at construction")
    }
}
