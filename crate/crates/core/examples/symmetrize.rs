//! Average a scheme over all user and file relabelings. Explicit for small
//! inputs; the orbit average gives the same per-demand rates without
//! building the big scheme.

use d2dcache::catalog::{half_rate, n2_seven_eighths};
use d2dcache::rational::format_rational;
use d2dcache::scheme::{orbit_average_rates, symmetrize, verify};

fn main() -> d2dcache::Result<()> {
    let base = n2_seven_eighths()?;
    let sym = symmetrize(&base)?;
    let (rb, rs) = (verify(&base), verify(&sym));
    println!("table scheme: L {} -> {}", base.subpacketization(), sym.subpacketization());
    for (d, s) in rb.demands.iter().zip(&rs.demands) {
        println!("  {}  {:>4} -> {}", d.demand, format_rational(&d.rate), format_rational(&s.rate));
    }

    let n = 6;
    let big = verify(&half_rate(n)?);
    let avg = orbit_average_rates(&big);
    let worst = avg.values().max().unwrap();
    println!(
        "half-rate N={n}: worst {} -> symmetrized worst {}",
        format_rational(&big.worst_case_rate),
        format_rational(worst)
    );
    Ok(())
}
