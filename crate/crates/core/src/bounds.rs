//! Converse lines, printed corner-point lists and externally supplied curves.

use std::fmt;
use std::path::Path;

use num_traits::Zero;

use crate::catalog::{envelope, TradeoffCurve};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};

/// An exact `(M, R)` pair with a short note on where it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatePoint {
    pub m: Rational,
    pub r: Rational,
    pub label: String,
}

impl RatePoint {
    pub fn new(m: Rational, r: Rational, label: impl Into<String>) -> Self {
        RatePoint {
            m,
            r,
            label: label.into(),
        }
    }
}

impl fmt::Display for RatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.m), format_rational(&self.r))
    }
}

/// `a M + b R >= c`, with `b > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundLine {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl BoundLine {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        assert!(b > 0, "a bound line must constrain R");
        BoundLine {
            a: int(a),
            b: int(b),
            c: int(c),
        }
    }

    /// Smallest rate the line allows at memory `m` (may be negative).
    pub fn rate_at(&self, m: Rational) -> Rational {
        (self.c - self.a * m) / self.b
    }

    pub fn holds(&self, m: Rational, r: Rational) -> bool {
        self.a * m + self.b * r >= self.c
    }
}

impl fmt::Display for BoundLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}M + {}R >= {}", self.a, self.b, self.c)
    }
}

fn max_of_lines(lines: &[BoundLine], m: Rational) -> Rational {
    lines
        .iter()
        .map(|l| l.rate_at(m))
        .fold(Rational::zero(), Rational::max)
}

/// Converse lines for two requesters and one sender.
pub fn lines_2rr1s(n: usize) -> Result<Vec<BoundLine>> {
    let n_ = n as i64;
    Ok(match n {
        0 | 1 => return Err(Error::config(format!("the bound needs N >= 2, got {n}"))),
        2 => vec![BoundLine::new(18, 8, 25), BoundLine::new(3, 3, 5), BoundLine::new(1, 2, 2)],
        3 => vec![BoundLine::new(6, 4, 13), BoundLine::new(3, 3, 7), BoundLine::new(1, 3, 3)],
        _ => vec![BoundLine::new(4, n_, 3 * n_), BoundLine::new(1, n_, n_)],
    })
}

/// Lower bound on the worst-case rate with two requesters and one sender.
/// Below `N/2` no scheme exists.
pub fn converse_2rr1s(n: usize, m: Rational) -> Result<Rational> {
    let lines = lines_2rr1s(n)?;
    if m * 2 < int(n as i64) {
        return Err(Error::Infeasible(format!(
            "M = {} is below N/2 = {}: two caches cannot hold the library",
            format_rational(&m),
            format_rational(&rat(n as i64, 2))
        )));
    }
    Ok(max_of_lines(&lines, m))
}

pub fn lines_traditional_n2() -> Vec<BoundLine> {
    vec![BoundLine::new(2, 1, 3), BoundLine::new(3, 2, 5), BoundLine::new(3, 4, 6)]
}

/// Lower bound for the traditional model with two files, valid for `M >= 2/3`.
pub fn converse_traditional_n2(m: Rational) -> Result<Rational> {
    if m < rat(2, 3) {
        return Err(Error::Domain(format!(
            "the two-file traditional bound covers M >= 2/3, got {}",
            format_rational(&m)
        )));
    }
    Ok(max_of_lines(&lines_traditional_n2(), m))
}

/// `3M + 2NR >= 3N`, solved for `R`.
pub fn prop2_bound(n: usize, m: Rational) -> Result<Rational> {
    if n < 2 {
        return Err(Error::config(format!("the bound needs N >= 2, got {n}")));
    }
    if m < Rational::zero() {
        return Err(Error::Domain("memory must be nonnegative".into()));
    }
    let n_ = n as i64;
    Ok(BoundLine::new(3, 2 * n_, 3 * n_).rate_at(m).max(Rational::zero()))
}

/// Named lists of printed corner points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    TwoRr1s,
    TradN2,
    KUser,
    RrOursR1,
    RrOursR2,
    RrOursR3,
    RrBaselineR1,
    RrBaselineR2,
}

impl Regime {
    pub const ALL: [Regime; 8] = [
        Regime::TwoRr1s,
        Regime::TradN2,
        Regime::KUser,
        Regime::RrOursR1,
        Regime::RrOursR2,
        Regime::RrOursR3,
        Regime::RrBaselineR1,
        Regime::RrBaselineR2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::TwoRr1s => "2rr1s",
            Regime::TradN2 => "trad_n2",
            Regime::KUser => "kuser",
            Regime::RrOursR1 => "rr_ours_r1",
            Regime::RrOursR2 => "rr_ours_r2",
            Regime::RrOursR3 => "rr_ours_r3",
            Regime::RrBaselineR1 => "rr_baseline_r1",
            Regime::RrBaselineR2 => "rr_baseline_r2",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| {
                let hint = if name == "rr_baseline_r3" {
                    "; that curve is only available as an external file"
                } else {
                    ""
                };
                Error::config(format!("unknown corner-point regime `{name}`{hint}"))
            })
    }
}

fn pts(label: &str, list: &[(Rational, Rational)]) -> Vec<RatePoint> {
    list.iter().map(|&(m, r)| RatePoint::new(m, r, label)).collect()
}

/// The corner-point lists as printed, for the given parameters. `k` and `s`
/// are only read by the K-user regime.
pub fn printed_corner_points(regime: Regime, n: usize, k: usize, s: usize) -> Result<Vec<RatePoint>> {
    if n < 2 {
        return Err(Error::config(format!("corner points need N >= 2, got {n}")));
    }
    let n_ = n as i64;
    let label = regime.name();
    let two_rr = |n: usize| -> Vec<(Rational, Rational)> {
        match n {
            2 => vec![(int(1), rat(7, 8)), (rat(7, 6), rat(1, 2)), (rat(4, 3), rat(1, 3)), (int(2), int(0))],
            3 => vec![(rat(3, 2), int(1)), (rat(11, 6), rat(1, 2)), (int(2), rat(1, 3)), (int(3), int(0))],
            _ => vec![(rat(n_, 2), int(1)), (rat(2 * n_, 3), rat(1, 3)), (int(n_), int(0))],
        }
    };
    let list = match regime {
        Regime::TwoRr1s | Regime::RrOursR2 => two_rr(n),
        Regime::RrOursR3 => two_rr(n).into_iter().map(|(m, r)| (m, r * rat(3, 2))).collect(),
        Regime::RrOursR1 => match n {
            2 => vec![(int(1), rat(5, 8)), (rat(7, 6), rat(1, 2)), (rat(4, 3), rat(1, 3)), (int(2), int(0))],
            3 => vec![(rat(3, 2), rat(1, 2)), (rat(11, 6), rat(1, 2)), (int(2), rat(1, 3)), (int(3), int(0))],
            _ => vec![(rat(n_, 2), rat(1, 2)), (rat(2 * n_, 3), rat(1, 3)), (int(n_), int(0))],
        },
        Regime::TradN2 => {
            if n != 2 {
                return Err(Error::config(format!("trad_n2 is defined for N=2 only, got {n}")));
            }
            vec![(rat(2, 3), rat(5, 3)), (int(1), int(1)), (rat(4, 3), rat(1, 2)), (int(2), int(0))]
        }
        Regime::KUser => {
            if s < 1 || s >= k {
                return Err(Error::config(format!("kuser corner points need 1 <= s < K, got K={k}, s={s}")));
            }
            let (k_, s_) = (k as i64, s as i64);
            vec![
                (rat(n_, s_ + 1), rat(s_ * n_.min(k_ - s_), s_ + 1)),
                (rat((k_ - 1) * n_, k_), rat(1, k_)),
                (int(n_), int(0)),
            ]
        }
        Regime::RrBaselineR1 => vec![(rat(n_, 3), rat(2, 3)), (rat(2 * n_, 3), rat(1, 3)), (int(n_), int(0))],
        Regime::RrBaselineR2 => vec![(rat(n_, 3), rat(4, 3)), (rat(2 * n_, 3), rat(1, 2)), (int(n_), int(0))],
    };
    Ok(pts(label, &list))
}

/// Parses a curve file: one `M, R` pair per line, both exact rationals
/// (`p/q` or integers), `#` starts a comment. When `n_files` is given, any
/// `M > N` is rejected.
pub fn parse_external_curve(text: &str, n_files: Option<usize>, label: &str) -> Result<TradeoffCurve> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Load { line: line_no, msg };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((m_txt, r_txt)) = line.split_once(',') else {
            return Err(err(format!("expected `M, R`, got `{line}`")));
        };
        let m = parse_rational(m_txt).ok_or_else(|| err(format!("`{}` is not an exact rational", m_txt.trim())))?;
        let r = parse_rational(r_txt).ok_or_else(|| err(format!("`{}` is not an exact rational", r_txt.trim())))?;
        if m <= Rational::zero() || r < Rational::zero() {
            return Err(err(format!("need M > 0 and R >= 0, got ({m}, {r})")));
        }
        if let Some(n) = n_files {
            if m > int(n as i64) {
                return Err(err(format!("M = {m} exceeds N = {n}")));
            }
        }
        points.push(RatePoint::new(m, r, label));
    }
    if points.is_empty() {
        return Err(Error::Load {
            line: text.lines().count(),
            msg: "no points in curve file".into(),
        });
    }
    envelope(&points)
}

pub fn load_external_curve(path: &Path, n_files: Option<usize>) -> Result<TradeoffCurve> {
    let text = std::fs::read_to_string(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_external_curve(&text, n_files, &label).map_err(|e| match e {
        Error::Load { line, msg } => Error::Load {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}
