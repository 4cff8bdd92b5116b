//! Every acceptance criterion at its stated tolerance, one line each.
//! Exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use d2dcache::adapters::{adapt_request_random, average_rate, prune_signal, rotate_2rr1s, FakeAssignment};
use d2dcache::bounds::{converse_2rr1s, converse_traditional_n2, load_external_curve, RatePoint};
use d2dcache::catalog::{self, crossover, envelope, CornerPointId, TradeoffCurve};
use d2dcache::field::{mds_generator, Elem, FieldSpec};
use d2dcache::rational::{format_rational, int, rat, to_f64, Rational};
use d2dcache::scheme::{
    orbit_average_rates, permute_scheme, symmetrize, verify, DemandVector, LinearScheme, ModelKind,
    DEFAULT_SUBPACKETIZATION_BUDGET,
};
use itertools::Itertools;
use rand::{rngs::StdRng, Rng, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn grid(lo: Rational, hi: Rational, step: Rational) -> Vec<Rational> {
    let mut v = Vec::new();
    let mut m = lo;
    while m <= hi {
        v.push(m);
        m += step;
    }
    if *v.last().unwrap() != hi {
        v.push(hi);
    }
    v
}

/// (M, worst R) of each verified catalog scheme for N files.
fn verified_points(n: usize) -> Result<Vec<RatePoint>, String> {
    let mut pts = Vec::new();
    for (id, s) in catalog::two_rr_schemes(n).map_err(|e| e.to_string())? {
        let r = verify(&s);
        check!(r.passed(), "{id} N={n} does not verify");
        pts.push(RatePoint::new(r.max_memory(), r.worst_case_rate, id.builtin_name()));
    }
    Ok(pts)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for n in 2..=8 {
        let schemes = catalog::two_rr_schemes(n).map_err(|e| e.to_string())?;
        let mut ids: Vec<CornerPointId> = schemes.iter().map(|(id, _)| *id).collect();
        ids.sort();
        let mut want = vec![CornerPointId::Full, CornerPointId::MdsHalf, CornerPointId::ManTwoThirds, CornerPointId::HalfRate];
        if n == 2 {
            want.push(CornerPointId::N2SevenEighths);
        }
        check!(ids == want, "N={n}: catalog has {ids:?}");
        for (id, s) in schemes {
            let r = verify(&s);
            check!(r.failures().count() == 0, "{id} N={n}: {} failures", r.failures().count());
            check!(r.feasible(), "{id} N={n}: infeasible {:?}", r.feasibility);
            check!(r.demands.len() == 3 * n * n, "{id} N={n}: {} demands", r.demands.len());
            let (m, rate) = id.claimed(n, 3, 1);
            check!(r.memory.iter().all(|&x| x == m), "{id} N={n}: memory {:?}", r.memory);
            check!(r.worst_case_rate == rate, "{id} N={n}: rate {}", r.worst_case_rate);
            count += 1;
        }
    }
    // The printed extra corners.
    check!(CornerPointId::HalfRate.claimed(2, 3, 1) == (rat(7, 6), rat(1, 2)), "half-rate N=2");
    check!(CornerPointId::HalfRate.claimed(3, 3, 1) == (rat(11, 6), rat(1, 2)), "half-rate N=3");
    Ok(format!("{count} schemes, N=2..8, {:.2}s", t.elapsed().as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut points = 0;
    for n in [2usize, 3, 4, 5, 8] {
        let curve = envelope(&verified_points(n)?).map_err(|e| e.to_string())?;
        let n_ = n as i64;
        for m in grid(rat(n_, 2), int(n_), rat(1, 60)) {
            let a = curve.eval(m).map_err(|e| e.to_string())?;
            let c = converse_2rr1s(n, m).map_err(|e| e.to_string())?;
            check!(a == c, "N={n} M={}: envelope {} converse {}", format_rational(&m), format_rational(&a), format_rational(&c));
            points += 1;
        }
    }
    Ok(format!("{points} grid points exact"))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut bad = Vec::new();
    for n in 2..=8usize {
        let curve = envelope(&verified_points(n)?).map_err(|e| e.to_string())?;
        let m = rat(4 * n as i64 - 1, 6);
        let env = curve.eval(m).map_err(|e| e.to_string())?;
        let half = rat(1, 2);
        let ok = if n <= 3 { env == half } else { half > env };
        notes.push(format!("N={n}: env={}", format_rational(&env)));
        if !ok {
            bad.push(format!(
                "N={n}: envelope at {} is {}, need {} 1/2",
                format_rational(&m),
                format_rational(&env),
                if n <= 3 { "=" } else { "<" }
            ));
        }
    }
    if bad.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_4() -> Outcome {
    let r = verify(&rotate_2rr1s(&catalog::mds_half(2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?);
    check!(r.passed(), "rotated MDS N=2 does not verify");
    check!(r.shape.model == ModelKind::Traditional, "rotated model is {:?}", r.shape.model);
    check!(r.demands.len() == 8, "{} demands", r.demands.len());
    check!(r.demands.iter().all(|d| d.rate == rat(3, 2)), "rates {:?}", r.demands.iter().map(|d| d.rate).collect_vec());
    let mut count = 0;
    for (n, id, s) in common::two_rr_bases(2..=4) {
        let base = verify(&s);
        let rot = verify(&rotate_2rr1s(&s).map_err(|e| e.to_string())?);
        check!(rot.passed(), "rotated {id} N={n} fails");
        check!(rot.worst_case_rate == rat(3, 2) * base.worst_case_rate, "{id} N={n}: {} vs base {}", rot.worst_case_rate, base.worst_case_rate);
        count += 1;
    }
    Ok(format!("MDS N=2 at 3/2 on 8 demands; {count} rotated schemes at 3/2 x base"))
}

fn criterion_5() -> Outcome {
    let coded = verify(&catalog::trad_coded_one_one().map_err(|e| e.to_string())?);
    check!(coded.passed(), "coded (1,1) does not verify");
    check!(coded.max_memory() == int(1) && coded.worst_case_rate == int(1), "coded point ({}, {})", coded.max_memory(), coded.worst_case_rate);

    let external = load_external_curve(&data("trad_n2_external.txt"), Some(2)).map_err(|e| e.to_string())?;
    let mut pts: Vec<RatePoint> = external.vertices().to_vec();
    pts.push(RatePoint::new(coded.max_memory(), coded.worst_case_rate, "coded"));
    let opt = envelope(&pts).map_err(|e| e.to_string())?;
    for m in grid(rat(2, 3), int(2), rat(1, 60)) {
        let (a, c) = (opt.eval(m).map_err(|e| e.to_string())?, converse_traditional_n2(m).map_err(|e| e.to_string())?);
        check!(a == c, "M={}: envelope {} converse {}", format_rational(&m), format_rational(&a), format_rational(&c));
    }

    let mut rotated = Vec::new();
    for (id, s) in catalog::two_rr_schemes(2).map_err(|e| e.to_string())? {
        let r = verify(&rotate_2rr1s(&s).map_err(|e| e.to_string())?);
        check!(r.passed(), "rotated {id} fails");
        rotated.push(RatePoint::new(r.max_memory(), r.worst_case_rate, id.builtin_name()));
    }
    check!(
        rotated.iter().any(|p| p.m == rat(7, 6) && p.r == rat(3, 4)),
        "no rotated point at (7/6, 3/4)"
    );
    let rot: TradeoffCurve = envelope(&rotated).map_err(|e| e.to_string())?;
    for m in grid(rat(7, 6), rat(4, 3), rat(1, 60)) {
        let (a, c) = (rot.eval(m).map_err(|e| e.to_string())?, converse_traditional_n2(m).map_err(|e| e.to_string())?);
        check!(a == c, "rotated at M={}: {} vs optimum {}", format_rational(&m), format_rational(&a), format_rational(&c));
    }
    let x = crossover(&rot, &external, rot.min_memory(), int(2))
        .map_err(|e| e.to_string())?
        .ok_or("rotated envelope never drops below the baseline")?;
    let xf = to_f64(&x);
    check!((1.139..=1.143).contains(&xf), "crossover at {} = {xf:.5}", format_rational(&x));
    Ok(format!("optimum matched on [2/3,2]; rotated optimal on [7/6,4/3]; crossover {} = {xf:.5}", format_rational(&x)))
}

fn criterion_6() -> Outcome {
    let t1 = catalog::n2_seven_eighths().map_err(|e| e.to_string())?;
    let d = DemandVector::new(vec![0, 0, 1]);
    let fake = FakeAssignment::for_demand(&d).map_err(|e| e.to_string())?;
    let kept = prune_signal(&t1, &fake.effective, &d.requesters()).map_err(|e| e.to_string())?;
    let rows: usize = kept.values().map(|e| e.n_rows()).sum();
    check!(rows == 5, "pruned to {rows} rows");

    use CornerPointId::*;
    // Printed single-requester corners, with the scheme that reaches each.
    let mut printed: Vec<(usize, CornerPointId, Rational, Rational)> = vec![
        (2, N2SevenEighths, int(1), rat(5, 8)),
        (2, HalfRate, rat(7, 6), rat(1, 2)),
        (2, ManTwoThirds, rat(4, 3), rat(1, 3)),
        (2, Full, int(2), int(0)),
        (3, MdsHalf, rat(3, 2), rat(1, 2)),
        (3, HalfRate, rat(11, 6), rat(1, 2)),
        (3, ManTwoThirds, int(2), rat(1, 3)),
        (3, Full, int(3), int(0)),
    ];
    for n in 4..=8usize {
        let n_ = n as i64;
        printed.push((n, MdsHalf, rat(n_, 2), rat(1, 2)));
        printed.push((n, ManTwoThirds, rat(2 * n_, 3), rat(1, 3)));
        printed.push((n, Full, int(n_), int(0)));
    }
    let mut mismatches = Vec::new();
    for &(n, id, m, r1) in &printed {
        let base = catalog::build_2rr1s_scheme(id, n).map_err(|e| e.to_string())?;
        let b = verify(&base);
        let a = adapt_request_random(&base).map_err(|e| e.to_string())?;
        let rep = verify(&a.scheme);
        check!(rep.passed(), "adapted {id} N={n} does not verify");
        check!(rep.max_memory() == m, "adapted {id} N={n}: memory {}", rep.max_memory());
        check!(a.worst_rates[2] == b.worst_case_rate, "adapted {id} N={n}: r=2 rate {}", a.worst_rates[2]);
        check!(a.worst_rates[3] == rat(3, 2) * b.worst_case_rate, "adapted {id} N={n}: r=3 rate {}", a.worst_rates[3]);
        if a.worst_rates[1] != r1 {
            mismatches.push(format!("{id} N={n}: r=1 {} vs printed {}", a.worst_rates[1], r1));
        }
    }
    check!(mismatches.is_empty(), "{}", mismatches.join("; "));

    let p = 0.59;
    let m = int(20);
    let mut base = [Rational::from_integer(0); 4];
    for (r, slot) in base.iter_mut().enumerate().skip(1) {
        let c = load_external_curve(&data(&format!("rr_baseline_r{r}_n30.txt")), Some(30)).map_err(|e| e.to_string())?;
        *slot = c.eval(m).map_err(|e| e.to_string())?;
    }
    check!(base[1..] == [rat(1, 3), rat(1, 2), rat(1, 2)], "baseline values {base:?}");
    let man = adapt_request_random(&catalog::man_two_thirds(30).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ours = average_rate(p, &man.worst_rates).map_err(|e| e.to_string())?;
    let theirs = average_rate(p, &base).map_err(|e| e.to_string())?;
    let gain = (theirs - ours) / theirs;
    check!((gain - 0.17).abs() <= 0.01, "gain {gain:.4} (ours {ours:.5}, baseline {theirs:.5})");
    Ok(format!("5 rows; {} printed r=1 corners reproduced; gain {gain:.4}", printed.len()))
}

fn criterion_7() -> Outcome {
    for (n, k, s) in [(2usize, 3usize, 1usize), (4, 5, 2), (3, 4, 1), (4, 6, 3)] {
        for id in [CornerPointId::KuMds, CornerPointId::KuMan] {
            let sch = catalog::build_kuser_scheme(id, n, k, s).map_err(|e| e.to_string())?;
            let r = verify(&sch);
            check!(r.failures().count() == 0 && r.feasible(), "{id} ({n},{k},{s}) fails");
            let (m, rate) = id.claimed(n, k, s);
            check!(r.memory.iter().all(|&x| x == m), "{id} ({n},{k},{s}): memory {:?}", r.memory);
            check!(r.worst_case_rate == rate, "{id} ({n},{k},{s}): rate {}", r.worst_case_rate);
            if id == CornerPointId::KuMds {
                for d in &r.demands {
                    let mut files: Vec<usize> = d.demand.entries().iter().copied().filter(|&f| f != 0).collect();
                    files.sort();
                    files.dedup();
                    let want = rat((s * files.len()) as i64, s as i64 + 1);
                    check!(d.rate == want, "{id} ({n},{k},{s}) {}: rate {} vs {}", d.demand, d.rate, want);
                }
            }
        }
    }
    let small = verify(&catalog::ku_mds(2, 3, 1).map_err(|e| e.to_string())?);
    check!((small.max_memory(), small.worst_case_rate) == (int(1), int(1)), "(2,3,1) is not the (1,1) corner");
    Ok("4 parameter sets, MDS and MAN exact".into())
}

/// Shift-and-reduce product.
fn school_mul(a: Elem, b: Elem, m: u32, modulus: u32) -> Elem {
    let (mut a, mut b, mut acc) = (a as u32, b as u32, 0u32);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << m) != 0 {
            a ^= modulus;
        }
    }
    acc as Elem
}

fn det(rows: &[Vec<Elem>], m: u32, modulus: u32) -> Elem {
    if rows.len() == 1 {
        return rows[0][0];
    }
    (0..rows.len())
        .filter(|&j| rows[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<Elem>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            school_mul(rows[0][j], det(&minor, m, modulus), m, modulus)
        })
        .fold(0, |a, b| a ^ b)
}

fn criterion_8() -> Outcome {
    for m in 1..=4 {
        let f = FieldSpec::new(m).map_err(|e| e.to_string())?;
        let q = 1u16 << m;
        for a in 0..q {
            for b in 0..q {
                check!(f.mul(a, b) == school_mul(a, b, m, f.modulus()), "m={m} {a}*{b}");
                for c in 0..q {
                    check!(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), "m={m} assoc");
                    check!(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), "m={m} distrib");
                }
            }
        }
    }
    let f8 = FieldSpec::new(8).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..20_000 {
        let (a, b, c): (Elem, Elem, Elem) = (rng.gen_range(0..256), rng.gen_range(0..256), rng.gen_range(0..256));
        check!(f8.mul(f8.mul(a, b), c) == f8.mul(a, f8.mul(b, c)), "m=8 assoc {a} {b} {c}");
        check!(f8.mul(a, f8.add(b, c)) == f8.add(f8.mul(a, b), f8.mul(a, c)), "m=8 distrib {a} {b} {c}");
        check!(f8.mul(a, b) == school_mul(a, b, 8, 0x11B), "m=8 product {a} {b}");
    }

    let mut minors = 0;
    for n_out in 1..=8usize {
        let fm = d2dcache::field::min_degree_for_points(n_out);
        let f = FieldSpec::new(fm).map_err(|e| e.to_string())?;
        for k_in in 1..=n_out {
            let g = mds_generator(n_out, k_in, &f).map_err(|e| e.to_string())?.to_dense_rows();
            for pick in (0..n_out).combinations(k_in) {
                let sub: Vec<Vec<Elem>> = pick.iter().map(|&i| g[i].clone()).collect();
                check!(det(&sub, fm, f.modulus()) != 0, "MDS {n_out}x{k_in} rows {pick:?} singular");
                minors += 1;
            }
        }
    }

    let mut perms = 0;
    let mut all: Vec<(String, LinearScheme)> = common::two_rr_bases(2..=3)
        .into_iter()
        .map(|(n, id, s)| (format!("{id} N={n}"), s))
        .collect();
    all.push(("trad".into(), catalog::trad_coded_one_one().map_err(|e| e.to_string())?));
    for (name, s) in &all {
        let r = verify(s);
        for users in (0..3).permutations(3) {
            for files in (0..s.n_files()).permutations(s.n_files()) {
                let p = verify(&permute_scheme(s, &users, &files).map_err(|e| e.to_string())?);
                check!(p.passed() && p.worst_case_rate == r.worst_case_rate, "{name} under {users:?}/{files:?}");
                check!(p.demands.len() == r.demands.len(), "{name}: demand count changed");
                perms += 1;
            }
        }
    }

    let mut sym = 0;
    for (n, id, s) in common::two_rr_bases(2..=8) {
        let fact = |x: usize| (1..=x as u64).product::<u64>();
        if fact(n) * 6 * s.subpacketization() as u64 > DEFAULT_SUBPACKETIZATION_BUDGET {
            continue;
        }
        let base = verify(&s);
        let worst = *orbit_average_rates(&base).values().max().unwrap();
        check!(worst <= base.worst_case_rate, "symmetrized {id} N={n}: {worst} > {}", base.worst_case_rate);
        if n == 2 {
            let e = verify(&symmetrize(&s).map_err(|e| e.to_string())?);
            check!(e.passed() && e.worst_case_rate == worst, "explicit symmetrization of {id} N={n}");
        }
        sym += 1;
    }

    let mut pruned = 0;
    for (n, id, s) in common::two_rr_bases(2..=4) {
        for d in s.demands().into_iter().flat_map(|d2| {
            // Every single-requester demand, once.
            d2.requesters().into_iter().map(move |u| {
                let mut v = vec![0; 3];
                v[u] = d2.file_of(u);
                DemandVector::new(v)
            })
        }).unique() {
            let fake = FakeAssignment::for_demand(&d).map_err(|e| e.to_string())?;
            let kept = prune_signal(&s, &fake.effective, &d.requesters()).map_err(|e| e.to_string())?;
            let orig = s.delivery_for(&fake.effective).unwrap();
            check!(common::oracle_demand_ok(&s, &d, &kept), "{id} N={n} {d}: pruned signal does not decode");
            for (k, e) in &kept {
                check!(e.n_rows() <= orig[k].n_rows(), "{id} N={n} {d}: pruning added rows");
                for i in 0..e.n_rows() {
                    let mut less = kept.clone();
                    less.insert(*k, e.without_row(i));
                    check!(!common::oracle_demand_ok(&s, &d, &less), "{id} N={n} {d}: redundant row left");
                }
            }
            pruned += 1;
        }
    }
    Ok(format!("axioms m<=4 exhaustive + m=8 random; {minors} MDS minors; {perms} relabelings; {sym} symmetrized bases; {pruned} pruned demands"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 corner-point exactness", criterion_1),
        ("2 matching bounds", criterion_2),
        ("3 half-rate sub-optimality", criterion_3),
        ("4 rotation", criterion_4),
        ("5 traditional two-file model", criterion_5),
        ("6 request-random", criterion_6),
        ("7 K-user", criterion_7),
        ("8 property suites", criterion_8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  criterion {name} ({secs:.2}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name} ({secs:.2}s): {msg}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
