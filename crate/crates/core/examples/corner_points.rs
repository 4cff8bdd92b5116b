//! Build every two-requester corner scheme for N files and verify it.
//!
//!     cargo run --example corner_points -- 3

use d2dcache::catalog::two_rr_schemes;
use d2dcache::rational::format_rational;
use d2dcache::scheme::verify;

fn main() -> d2dcache::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    println!("N = {n}");
    for (id, scheme) in two_rr_schemes(n)? {
        let report = verify(&scheme);
        let (m, r) = id.claimed(n, 3, 1);
        println!(
            "{:<16} L={:<3} M={:<6} R={:<5} claimed ({}, {})  demands={} failures={}",
            id.builtin_name(),
            scheme.subpacketization(),
            format_rational(&report.max_memory()),
            format_rational(&report.worst_case_rate),
            format_rational(&m),
            format_rational(&r),
            report.demands.len(),
            report.failures().count(),
        );
    }
    Ok(())
}
