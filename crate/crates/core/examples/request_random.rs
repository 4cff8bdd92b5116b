//! Adapt corner schemes to a random number of requesters and average the
//! worst-case rates.
//!
//!     cargo run --example request_random -- 0.59

use d2dcache::adapters::{adapt_request_random, prune_signal, RandomRequestProfile};
use d2dcache::catalog::{n2_seven_eighths, two_rr_schemes};
use d2dcache::rational::format_rational;
use d2dcache::scheme::DemandVector;

fn main() -> d2dcache::Result<()> {
    let p: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);

    // One requester at (0,0,1): user 2 pretends to want file 1 and user 1 sends.
    let t1 = n2_seven_eighths()?;
    let kept = prune_signal(&t1, &DemandVector::new(vec![0, 1, 1]), &[2])?;
    let rows: usize = kept.values().map(|m| m.n_rows()).sum();
    println!("pruned signal for (0,0,1): {rows} of 7 rows");

    for n in 2..=4 {
        for (id, base) in two_rr_schemes(n)? {
            let a = adapt_request_random(&base)?;
            let prof = RandomRequestProfile::new(p, a.worst_rates)?;
            let rates: Vec<String> = a.worst_rates.iter().map(format_rational).collect();
            println!("N={n} {:<16} R'_r = [{}]  avg(p={p}) = {:.6}", id.builtin_name(), rates.join(", "), prof.average);
        }
    }
    Ok(())
}
