use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use super::ModelKind;
use crate::error::{Error, Result};

/// Per-user request tuple. Entry `k` is the file (1-based) requested by user
/// `k`, or 0 when user `k` does not request.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(entries: Vec<usize>) -> Self {
        DemandVector(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// File requested by `user`, or 0.
    pub fn file_of(&self, user: usize) -> usize {
        self.0[user]
    }

    /// Users with a nonzero request, in index order.
    pub fn requesters(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| self.0[k] != 0).collect()
    }

    /// Users marked 0, in index order.
    pub fn idle_users(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| self.0[k] == 0).collect()
    }

    pub fn n_requesters(&self) -> usize {
        self.0.iter().filter(|&&d| d != 0).count()
    }

    /// Number of distinct requested files.
    pub fn distinct_files(&self) -> usize {
        self.0.iter().filter(|&&d| d != 0).unique().count()
    }

    /// Comma-joined key used by the interchange format, e.g. `0,1,2`.
    pub fn key(&self) -> String {
        self.0.iter().join(",")
    }

    pub fn parse_key(key: &str) -> Result<Self> {
        key.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(DemandVector)
            .map_err(|_| Error::format("delivery", format!("malformed demand key `{key}`")))
    }

    /// The same demand with user `user` requesting `file`.
    pub fn with_entry(&self, user: usize, file: usize) -> Self {
        let mut d = self.0.clone();
        d[user] = file;
        DemandVector(d)
    }
}

impl fmt::Display for DemandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl From<Vec<usize>> for DemandVector {
    fn from(v: Vec<usize>) -> Self {
        DemandVector(v)
    }
}

impl<const K: usize> From<[usize; K]> for DemandVector {
    fn from(v: [usize; K]) -> Self {
        DemandVector(v.to_vec())
    }
}

/// Checks that `(n_files, n_users, senders)` fit `model`.
pub fn check_model_params(
    model: ModelKind,
    n_files: usize,
    n_users: usize,
    senders: usize,
) -> Result<()> {
    if n_files == 0 {
        return Err(Error::config("the library needs at least one file"));
    }
    let ok = match model {
        ModelKind::TwoRequestersOneSender => n_users == 3 && senders == 1,
        ModelKind::Traditional => n_users >= 1 && senders == 0,
        ModelKind::KUserSSenders => n_users >= 2 && senders >= 1 && senders < n_users,
        ModelKind::RequestRandom => n_users == 3 && senders == 0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(format!(
            "K={n_users}, s={senders} is inconsistent with model {}",
            model.name()
        )))
    }
}

/// Every admissible demand of the model, in lexicographic order.
///
/// Two-requester/one-sender: exactly one zero (`3 N^2` demands). Traditional:
/// no zeros (`N^K`). K users with s senders: exactly `s` zeros
/// (`C(K,s) N^(K-s)`). Request-random: any zero pattern (`(N+1)^3`).
pub fn enumerate_demands(
    model: ModelKind,
    n_files: usize,
    n_users: usize,
    senders: usize,
) -> Result<Vec<DemandVector>> {
    check_model_params(model, n_files, n_users, senders)?;
    let zeros_allowed = |z: usize| match model {
        ModelKind::TwoRequestersOneSender => z == 1,
        ModelKind::Traditional => z == 0,
        ModelKind::KUserSSenders => z == senders,
        ModelKind::RequestRandom => true,
    };
    Ok((0..n_users)
        .map(|_| 0..=n_files)
        .multi_cartesian_product()
        .filter(|d| zeros_allowed(d.iter().filter(|&&x| x == 0).count()))
        .map(DemandVector)
        .collect())
}

/// Groups demands by their number of requesters.
pub fn partition_by_requesters(
    demands: &[DemandVector],
) -> BTreeMap<usize, Vec<DemandVector>> {
    let mut out: BTreeMap<usize, Vec<DemandVector>> = BTreeMap::new();
    for d in demands {
        out.entry(d.n_requesters()).or_default().push(d.clone());
    }
    out
}

/// Users that transmit for demand `d` under `model`.
pub fn senders_of(model: ModelKind, d: &DemandVector) -> Vec<usize> {
    match model {
        ModelKind::Traditional => (0..d.len()).collect(),
        ModelKind::RequestRandom if d.n_requesters() == d.len() => (0..d.len()).collect(),
        _ => d.idle_users(),
    }
}
