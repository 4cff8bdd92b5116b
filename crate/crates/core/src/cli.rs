//! Command-line front end: `verify`, `export`, `sweep`, `rr-compare`.
//!
//! Exit codes: 0 on success, 1 on usage, load or configuration errors,
//! 2 when a scheme fails verification.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use num_traits::Zero;

use crate::adapters::average_rate;
use crate::bounds::{self, load_external_curve, printed_corner_points, RatePoint, Regime};
use crate::catalog::{self, envelope, CornerPointId, TradeoffCurve};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::scheme::{verify, LinearScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "d2d-cache", version, about = "Verify D2D coded-caching schemes and tabulate rate-memory tradeoffs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every demand of a scheme and print the report as JSON.
    Verify(SourceArgs),
    /// Print a scheme in the JSON interchange format.
    Export(SourceArgs),
    /// Tabulate achievable and converse rates over a memory range (CSV).
    Sweep(SweepArgs),
    /// Average worst-case rates under random requests, ours vs. a baseline (CSV).
    RrCompare(RrArgs),
}

#[derive(Args, Debug)]
pub struct SourceArgs {
    /// `builtin:<family>/<name>` or a path to a scheme JSON file.
    pub source: String,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long = "s")]
    pub s: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepModel {
    #[value(name = "2rr1s")]
    TwoRr1s,
    Trad,
    Kuser,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub model: SweepModel,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "K", default_value_t = 3)]
    pub k: usize,
    #[arg(long = "s", default_value_t = 1)]
    pub s: usize,
    #[arg(long = "M-min", value_parser = rational_arg)]
    pub m_min: Option<Rational>,
    #[arg(long = "M-max", value_parser = rational_arg)]
    pub m_max: Option<Rational>,
    #[arg(long, default_value_t = 2)]
    pub samples: usize,
    /// Extra curve to tabulate, as `name=path`.
    #[arg(long = "baseline", value_parser = baseline_arg)]
    pub baselines: Vec<(String, PathBuf)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RrArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "M-min", value_parser = rational_arg)]
    pub m_min: Option<Rational>,
    #[arg(long = "M-max", value_parser = rational_arg)]
    pub m_max: Option<Rational>,
    #[arg(long, default_value_t = 2)]
    pub samples: usize,
    /// Per-requester-count baseline curves: `r1=path`, `r2=path`, `r3=path`.
    #[arg(long = "baseline", value_parser = baseline_arg)]
    pub baselines: Vec<(String, PathBuf)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not an exact rational (use p/q)"))
}

fn baseline_arg(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected name=path, got `{s}`")),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too.
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Verify(a) => {
            let scheme = load_source(&a)?;
            let report = verify(&scheme);
            let text = serde_json::to_string_pretty(&report.to_json())? + "\n";
            emit(a.out.as_deref(), &text, stdout)?;
            if report.passed() {
                Ok(EXIT_OK)
            } else {
                for d in report.failures() {
                    let users = d.undecodable_users.iter().map(|u| u + 1).join(",");
                    writeln!(stderr, "demand {} not decodable by user(s) {users}", d.demand)?;
                }
                if !report.feasible() {
                    writeln!(stderr, "feasibility check failed: {:?}", report.feasibility)?;
                }
                Ok(EXIT_VERIFY_FAILED)
            }
        }
        Command::Export(a) => {
            let scheme = load_source(&a)?;
            emit(a.out.as_deref(), &(scheme.to_json_string() + "\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sweep(a) => {
            let csv = sweep_csv(&a)?;
            emit(a.out.as_deref(), &csv, stdout)?;
            Ok(EXIT_OK)
        }
        Command::RrCompare(a) => {
            let csv = rr_compare_csv(&a)?;
            emit(a.out.as_deref(), &csv, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Writes to `out` through a temporary file in the same directory, or to stdout.
fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        None => Ok(stdout.write_all(text.as_bytes())?),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
            Ok(())
        }
    }
}

/// Resolves `builtin:...` names and scheme files.
pub fn load_source(a: &SourceArgs) -> Result<LinearScheme> {
    let Some(name) = a.source.strip_prefix("builtin:") else {
        let text = std::fs::read_to_string(&a.source)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", a.source)))?;
        return LinearScheme::from_json_str(&text);
    };
    let id = CornerPointId::from_builtin_name(name).ok_or_else(|| {
        Error::config(format!(
            "unknown builtin `{name}`; known: {}",
            builtin_names().join(", ")
        ))
    })?;
    let n = a.n.unwrap_or(2);
    match name.split('/').next() {
        Some("2rr1s") => catalog::build_2rr1s_scheme(id, n),
        Some("trad") => catalog::build_traditional_scheme(id, n),
        _ => catalog::build_kuser_scheme(id, n, a.k.unwrap_or(3), a.s.unwrap_or(1)),
    }
}

pub fn builtin_names() -> Vec<String> {
    use CornerPointId::*;
    [Full, MdsHalf, ManTwoThirds, HalfRate, N2SevenEighths, TradCodedOneOne, KuMds, KuMan, KuFull]
        .iter()
        .map(|id| format!("builtin:{}", id.builtin_name()))
        .collect()
}

fn claimed_points(ids: &[CornerPointId], n: usize, k: usize, s: usize, scale: Rational) -> Vec<RatePoint> {
    ids.iter()
        .filter(|id| id.applies(n, k, s))
        .map(|id| {
            let (m, r) = id.claimed(n, k, s);
            RatePoint::new(m, r * scale, id.builtin_name())
        })
        .collect()
}

pub type Converse = Box<dyn Fn(Rational) -> Result<Rational>>;

/// The achievable envelope and converse evaluator for a sweep.
pub struct SweepCurves {
    pub achievable: TradeoffCurve,
    pub converse: Option<Converse>,
}

pub fn sweep_curves(
    model: SweepModel,
    n: usize,
    k: usize,
    s: usize,
    baselines: &[(String, TradeoffCurve)],
) -> Result<SweepCurves> {
    match model {
        SweepModel::TwoRr1s => {
            let pts = claimed_points(&CornerPointId::TWO_RR, n, 3, 1, int(1));
            if pts.is_empty() {
                return Err(Error::config(format!("no two-requester schemes for N={n}")));
            }
            Ok(SweepCurves {
                achievable: envelope(&pts)?,
                converse: Some(Box::new(move |m| bounds::converse_2rr1s(n, m))),
            })
        }
        SweepModel::Trad => {
            // Rotated two-requester corners, the coded (1,1) point, and any
            // loaded baseline curves are all achievable.
            let mut pts = claimed_points(&CornerPointId::TWO_RR, n, 3, 1, Rational::new(3, 2));
            pts.extend(claimed_points(&[CornerPointId::TradCodedOneOne], n, 3, 0, int(1)));
            for (_, c) in baselines {
                pts.extend(c.vertices().iter().cloned());
            }
            if pts.is_empty() {
                return Err(Error::config(format!("no traditional schemes for N={n}")));
            }
            let converse: Option<Converse> = if n == 2 {
                Some(Box::new(bounds::converse_traditional_n2))
            } else {
                None
            };
            Ok(SweepCurves {
                achievable: envelope(&pts)?,
                converse,
            })
        }
        SweepModel::Kuser => {
            let pts = claimed_points(&CornerPointId::KUSER, n, k, s, int(1));
            if pts.is_empty() {
                return Err(Error::config(format!(
                    "no K-user schemes for N={n}, K={k}, s={s} (need N >= 2, 1 <= s <= K-2)"
                )));
            }
            let converse: Option<Converse> = if k == 3 && s == 1 {
                Some(Box::new(move |m| bounds::converse_2rr1s(n, m)))
            } else {
                None
            };
            Ok(SweepCurves {
                achievable: envelope(&pts)?,
                converse,
            })
        }
    }
}

/// Evenly spaced samples over `[lo, hi]`, both ends included, merged with
/// `extra` abscissae that fall inside the range.
pub fn sample_grid(
    lo: Rational,
    hi: Rational,
    samples: usize,
    extra: impl IntoIterator<Item = Rational>,
) -> Result<Vec<Rational>> {
    if lo > hi {
        return Err(Error::config(format!("M-min {lo} exceeds M-max {hi}")));
    }
    if samples < 2 && lo != hi {
        return Err(Error::config("need at least 2 samples for a nonempty range"));
    }
    let mut grid: Vec<Rational> = if lo == hi {
        vec![lo]
    } else {
        let step = (hi - lo) / int(samples as i64 - 1);
        (0..samples).map(|i| lo + step * int(i as i64)).collect()
    };
    grid.extend(extra.into_iter().filter(|&m| m >= lo && m <= hi));
    grid.sort();
    grid.dedup();
    Ok(grid)
}

fn load_baselines(list: &[(String, PathBuf)], n: usize) -> Result<Vec<(String, TradeoffCurve)>> {
    let mut seen = std::collections::BTreeSet::new();
    list.iter()
        .map(|(name, path)| {
            if !seen.insert(name.clone()) {
                return Err(Error::config(format!("baseline `{name}` given twice")));
            }
            Ok((name.clone(), load_external_curve(path, Some(n))?))
        })
        .collect()
}

fn check_range(lo: Rational, hi: Rational, min_feasible: Rational, n: usize) -> Result<()> {
    if lo < min_feasible {
        return Err(Error::Infeasible(format!(
            "M-min {} is below the smallest achievable memory {}",
            format_rational(&lo),
            format_rational(&min_feasible)
        )));
    }
    if hi > int(n as i64) {
        return Err(Error::Infeasible(format!("M-max {} exceeds N = {n}", format_rational(&hi))));
    }
    Ok(())
}

pub fn sweep_csv(a: &SweepArgs) -> Result<String> {
    let baselines = load_baselines(&a.baselines, a.n)?;
    let curves = sweep_curves(a.model, a.n, a.k, a.s, &baselines)?;
    let lo = a.m_min.unwrap_or_else(|| curves.achievable.min_memory());
    let hi = a.m_max.unwrap_or_else(|| int(a.n as i64));
    check_range(lo, hi, curves.achievable.min_memory(), a.n)?;
    let corners = curves
        .achievable
        .breakpoints()
        .chain(baselines.iter().flat_map(|(_, c)| c.breakpoints().collect::<Vec<_>>()))
        .collect::<Vec<_>>();
    let grid = sample_grid(lo, hi, a.samples, corners)?;

    let mut out = String::from("M,R_achievable,R_converse");
    for (name, _) in &baselines {
        out.push_str(&format!(",baseline_{name}"));
    }
    out.push('\n');
    for m in grid {
        let ach = curves.achievable.eval(m)?;
        let conv = match &curves.converse {
            Some(f) => format_rational(&f(m)?),
            None => String::new(),
        };
        out.push_str(&format!("{},{},{}", format_rational(&m), format_rational(&ach), conv));
        for (_, c) in &baselines {
            out.push(',');
            if c.contains(m) {
                out.push_str(&format_rational(&c.eval(m)?));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Decimal with at least 15 significant digits.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (14 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Per-`r` curves of the adapted two-requester scheme (`r = 1, 2, 3`).
pub fn rr_ours_curves(n: usize) -> Result<[TradeoffCurve; 3]> {
    Ok([
        envelope(&printed_corner_points(Regime::RrOursR1, n, 3, 0)?)?,
        envelope(&printed_corner_points(Regime::RrOursR2, n, 3, 0)?)?,
        envelope(&printed_corner_points(Regime::RrOursR3, n, 3, 0)?)?,
    ])
}

/// Average worst-case rate at `m` from per-`r` curves; `None` where a
/// curve is undefined.
pub fn average_from_curves(curves: &[TradeoffCurve; 3], p: f64, m: Rational) -> Result<Option<f64>> {
    let mut rates = [Rational::zero(); 4];
    for (i, c) in curves.iter().enumerate() {
        if !c.contains(m) {
            return Ok(None);
        }
        rates[i + 1] = c.eval(m)?;
    }
    average_rate(p, &rates).map(Some)
}

pub fn rr_compare_csv(a: &RrArgs) -> Result<String> {
    if !(0.0..=1.0).contains(&a.p) {
        return Err(Error::Domain(format!("probability {} outside [0, 1]", a.p)));
    }
    let given: BTreeMap<&str, &PathBuf> = a.baselines.iter().map(|(k, v)| (k.as_str(), v)).collect();
    for (name, _) in &a.baselines {
        if !["r1", "r2", "r3"].contains(&name.as_str()) {
            return Err(Error::config(format!("unknown baseline `{name}`; expected r1, r2, r3")));
        }
    }
    let base: Vec<TradeoffCurve> = ["r1", "r2", "r3"]
        .iter()
        .map(|r| {
            let path = given
                .get(r)
                .ok_or_else(|| Error::config(format!("missing --baseline {r}=<path>")))?;
            load_external_curve(path, Some(a.n))
        })
        .collect::<Result<_>>()?;
    let base: [TradeoffCurve; 3] = base.try_into().expect("three curves");
    let ours = rr_ours_curves(a.n)?;

    let lo = a.m_min.unwrap_or_else(|| ours[1].min_memory());
    let hi = a.m_max.unwrap_or_else(|| int(a.n as i64));
    check_range(lo, hi, ours[1].min_memory(), a.n)?;
    let corners: Vec<Rational> = ours
        .iter()
        .chain(base.iter())
        .flat_map(|c| c.breakpoints().collect::<Vec<_>>())
        .collect();
    let grid = sample_grid(lo, hi, a.samples, corners)?;

    let mut out = String::from("M,avg_ours,avg_baseline\n");
    for m in grid {
        let cell = |v: Option<f64>| v.map(format_decimal).unwrap_or_default();
        let ours_avg = average_from_curves(&ours, a.p, m)?;
        let base_avg = average_from_curves(&base, a.p, m)?;
        out.push_str(&format!("{},{},{}\n", format_rational(&m), cell(ours_avg), cell(base_avg)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("d2d-cache").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_includes_ends_and_corners() {
        let g = sample_grid(int(2), int(4), 3, [rat(8, 3), int(9)]).unwrap();
        assert_eq!(g, vec![int(2), rat(8, 3), int(3), int(4)]);
        assert_eq!(sample_grid(int(1), int(1), 1, []).unwrap(), vec![int(1)]);
        assert!(sample_grid(int(1), int(2), 1, []).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "builtin:2rr1s/nope"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "builtin:2rr1s/n2-7-8", "--N", "3"]).0, EXIT_USAGE);
        let (code, _, err) = run_str(&["sweep", "--model", "2rr1s", "--N", "4", "--M-min", "1", "--M-max", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("below"), "{err}");
    }

    #[test]
    fn decimals_keep_fifteen_digits() {
        assert_eq!(format_decimal(0.5), "0.500000000000000");
        assert_eq!(format_decimal(0.0), "0");
        assert_eq!(format_decimal(12.25), "12.2500000000000");
    }
}
