//! Explicit schemes for every named corner point, ready to verify.

mod envelope;
mod others;
mod symbolic;
mod two_rr;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::rational::{int, rat, Rational};
use crate::scheme::LinearScheme;

pub use envelope::{crossover, envelope, TradeoffCurve};
pub use two_rr::{full, half_rate, man_two_thirds, mds_half, n2_seven_eighths};
pub use others::{ku_full, ku_man, ku_mds, ku_mds_over, trad_coded_one_one};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CornerPointId {
    /// `(N, 0)`
    Full,
    /// `(N/2, 1)`
    MdsHalf,
    /// `(2N/3, 1/3)`
    ManTwoThirds,
    /// `((4N-1)/6, 1/2)`
    HalfRate,
    /// `(1, 7/8)`, two files only
    N2SevenEighths,
    /// `(1, 1)` for the traditional model with two files
    TradCodedOneOne,
    /// `(N/(s+1), s min(N, K-s)/(s+1))`
    KuMds,
    /// `((K-1)N/K, 1/K)`
    KuMan,
    /// `(N, 0)` in the K-user model
    KuFull,
}

use CornerPointId::*;

impl CornerPointId {
    pub const TWO_RR: [CornerPointId; 5] = [Full, MdsHalf, ManTwoThirds, HalfRate, N2SevenEighths];
    pub const KUSER: [CornerPointId; 3] = [KuMds, KuMan, KuFull];

    /// The `(M, R)` the construction is claimed to reach.
    pub fn claimed(self, n: usize, k: usize, s: usize) -> (Rational, Rational) {
        let n_ = n as i64;
        let (k_, s_) = (k as i64, s as i64);
        match self {
            Full | KuFull => (int(n_), int(0)),
            MdsHalf => (rat(n_, 2), int(1)),
            ManTwoThirds => (rat(2 * n_, 3), rat(1, 3)),
            HalfRate => (rat(4 * n_ - 1, 6), rat(1, 2)),
            N2SevenEighths => (int(1), rat(7, 8)),
            TradCodedOneOne => (int(1), int(1)),
            KuMds => (rat(n_, s_ + 1), rat(s_ * n_.min(k_ - s_), s_ + 1)),
            KuMan => (rat((k_ - 1) * n_, k_), rat(1, k_)),
        }
    }

    /// Whether the construction exists for these parameters.
    pub fn applies(self, n: usize, k: usize, s: usize) -> bool {
        match self {
            Full | MdsHalf | ManTwoThirds | HalfRate => n >= 2,
            N2SevenEighths | TradCodedOneOne => n == 2,
            KuMds | KuMan | KuFull => n >= 2 && s >= 1 && s + 2 <= k,
        }
    }

    /// Name used after `builtin:` on the command line.
    pub fn builtin_name(self) -> &'static str {
        match self {
            Full => "2rr1s/full",
            MdsHalf => "2rr1s/mds-half",
            ManTwoThirds => "2rr1s/man-2-3",
            HalfRate => "2rr1s/half-rate",
            N2SevenEighths => "2rr1s/n2-7-8",
            TradCodedOneOne => "trad/coded-1-1",
            KuMds => "kuser/mds",
            KuMan => "kuser/man",
            KuFull => "kuser/full",
        }
    }

    pub fn from_builtin_name(name: &str) -> Option<Self> {
        [Full, MdsHalf, ManTwoThirds, HalfRate, N2SevenEighths, TradCodedOneOne, KuMds, KuMan, KuFull]
            .into_iter()
            .find(|id| id.builtin_name() == name)
    }
}

impl fmt::Display for CornerPointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.builtin_name())
    }
}

fn unsupported(id: CornerPointId, what: String) -> Error {
    Error::config(format!("{id} is not defined for {what}"))
}

pub fn build_2rr1s_scheme(id: CornerPointId, n: usize) -> Result<LinearScheme> {
    if !CornerPointId::TWO_RR.contains(&id) || !id.applies(n, 3, 1) {
        return Err(unsupported(id, format!("the two-requester model with N={n}")));
    }
    match id {
        Full => full(n),
        MdsHalf => mds_half(n),
        ManTwoThirds => man_two_thirds(n),
        HalfRate => half_rate(n),
        _ => n2_seven_eighths(),
    }
}

pub fn build_traditional_scheme(id: CornerPointId, n: usize) -> Result<LinearScheme> {
    if id != TradCodedOneOne || n != 2 {
        return Err(unsupported(id, format!("the traditional model with N={n}")));
    }
    trad_coded_one_one()
}

/// K-user schemes. The MDS scheme runs over the smallest field that carries
/// the code; use [`ku_mds_over`] to pick the field yourself.
pub fn build_kuser_scheme(id: CornerPointId, n: usize, k: usize, s: usize) -> Result<LinearScheme> {
    if !CornerPointId::KUSER.contains(&id) {
        return Err(unsupported(id, "the K-user model".to_string()));
    }
    match id {
        KuMds => ku_mds(n, k, s),
        KuMan => ku_man(n, k, s),
        _ => ku_full(n, k, s),
    }
}

/// Every two-requester corner scheme that exists for `n` files, with its id.
pub fn two_rr_schemes(n: usize) -> Result<Vec<(CornerPointId, LinearScheme)>> {
    CornerPointId::TWO_RR
        .into_iter()
        .filter(|id| id.applies(n, 3, 1))
        .map(|id| Ok((id, build_2rr1s_scheme(id, n)?)))
        .collect()
}

/// Field used by the K-user MDS scheme when none is given.
pub fn default_kuser_field(k: usize) -> Result<FieldSpec> {
    FieldSpec::new(crate::field::min_degree_for_points(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::verify;

    #[test]
    fn two_rr_corners_are_exact_for_small_n() {
        for n in 2..=4 {
            for (id, s) in two_rr_schemes(n).unwrap() {
                let r = verify(&s);
                assert!(r.passed(), "{id} N={n}: {:?}", r.failures().next());
                assert_eq!(r.demands.len(), 3 * n * n);
                let (m, rate) = id.claimed(n, 3, 1);
                assert!(r.memory.iter().all(|&x| x == m), "{id} N={n}");
                assert_eq!(r.worst_case_rate, rate, "{id} N={n}");
            }
        }
    }

    #[test]
    fn traditional_one_one() {
        let r = verify(&build_traditional_scheme(TradCodedOneOne, 2).unwrap());
        assert!(r.passed());
        assert_eq!(r.memory, vec![int(1); 3]);
        assert!(r.demands.iter().all(|d| d.rate == int(1)));
        assert!(build_traditional_scheme(TradCodedOneOne, 3).is_err());
    }

    #[test]
    fn kuser_small() {
        for id in CornerPointId::KUSER {
            let s = build_kuser_scheme(id, 2, 3, 1).unwrap();
            let r = verify(&s);
            assert!(r.passed(), "{id}");
            let (m, rate) = id.claimed(2, 3, 1);
            assert_eq!((r.max_memory(), r.worst_case_rate), (m, rate), "{id}");
        }
        assert!(build_kuser_scheme(KuMds, 2, 3, 2).is_err());
    }

    #[test]
    fn bad_pairings_are_rejected() {
        assert!(build_2rr1s_scheme(N2SevenEighths, 3).is_err());
        assert!(build_2rr1s_scheme(KuMan, 3).is_err());
        assert!(build_2rr1s_scheme(Full, 1).is_err());
        assert_eq!(CornerPointId::from_builtin_name("2rr1s/half-rate"), Some(HalfRate));
        assert_eq!(CornerPointId::from_builtin_name("nope"), None);
    }
}
