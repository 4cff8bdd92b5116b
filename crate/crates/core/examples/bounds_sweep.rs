//! Achievable envelope against the converse, and the memory from which the
//! rotated schemes beat an external baseline.

use d2dcache::bounds::{converse_2rr1s, printed_corner_points, parse_external_curve, Regime};
use d2dcache::catalog::{crossover, envelope};
use d2dcache::rational::{format_rational, int, rat, to_f64};
use d2dcache::scheme::{space_share, verify};

fn main() -> d2dcache::Result<()> {
    let n = 5;
    let curve = envelope(&printed_corner_points(Regime::TwoRr1s, n, 3, 1)?)?;
    println!("N={n}: {curve}");
    for i in 0..=10 {
        let m = rat(n as i64, 2) + rat(n as i64, 20) * int(i);
        println!("  M={:<5} R={:<6} converse={}", format_rational(&m), format_rational(&curve.eval(m)?), format_rational(&converse_2rr1s(n, m)?));
    }

    let baseline = parse_external_curve(include_str!("../data/trad_n2_external.txt"), Some(2), "uncoded")?;
    let rotated: Vec<_> = printed_corner_points(Regime::TwoRr1s, 2, 3, 1)?
        .into_iter()
        .map(|mut p| {
            p.r *= rat(3, 2);
            p
        })
        .collect();
    let rotated = envelope(&rotated)?;
    let x = crossover(&rotated, &baseline, int(1), int(2))?.unwrap();
    println!("rotated beats baseline from M = {} ~ {:.4}", format_rational(&x), to_f64(&x));

    // Space sharing keeps every demand decodable.
    let s = space_share(&[(&d2dcache::catalog::mds_half(2)?, 1), (&d2dcache::catalog::full(2)?, 1)])?;
    println!("space-shared L={} passed={}", s.subpacketization(), verify(&s).passed());
    Ok(())
}
