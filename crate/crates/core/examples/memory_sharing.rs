//! Share memory between two corner schemes and verify the mixture.
//!
//!     cargo run --example memory_sharing -- 4 1/2

use d2dcache::catalog::{man_two_thirds, mds_half};
use d2dcache::rational::{format_rational, parse_rational, rat};
use d2dcache::scheme::{memory_share, verify};

fn main() -> d2dcache::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(4);
    let alpha = args.next().and_then(|a| parse_rational(&a)).unwrap_or(rat(1, 2));

    let a = mds_half(n)?;
    let b = man_two_thirds(n)?;
    let mixed = memory_share(&a, &b, alpha)?;
    let r = verify(&mixed);
    println!(
        "alpha={} L={} M={} R={} passed={}",
        format_rational(&alpha),
        mixed.subpacketization(),
        format_rational(&r.max_memory()),
        format_rational(&r.worst_case_rate),
        r.passed()
    );
    Ok(())
}
