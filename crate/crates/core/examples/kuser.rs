//! K users, s of which send: the MDS and the MAN corner schemes.
//!
//!     cargo run --example kuser -- 4 5 2

use d2dcache::catalog::{build_kuser_scheme, CornerPointId};
use d2dcache::rational::format_rational;
use d2dcache::scheme::verify;

fn main() -> d2dcache::Result<()> {
    let a: Vec<usize> = std::env::args().skip(1).filter_map(|x| x.parse().ok()).collect();
    let (n, k, s) = match a[..] {
        [n, k, s] => (n, k, s),
        _ => (4, 5, 2),
    };
    for id in CornerPointId::KUSER {
        let scheme = build_kuser_scheme(id, n, k, s)?;
        let r = verify(&scheme);
        println!(
            "{:<11} N={n} K={k} s={s} GF(2^{}) L={} M={} R={} demands={} passed={}",
            id.builtin_name(),
            scheme.field().m(),
            scheme.subpacketization(),
            format_rational(&r.max_memory()),
            format_rational(&r.worst_case_rate),
            r.demands.len(),
            r.passed()
        );
    }
    Ok(())
}
