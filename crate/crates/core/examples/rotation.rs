//! Turn two-requester schemes into schemes for the traditional model, where
//! all three users request and all three send.

use d2dcache::adapters::rotate_2rr1s;
use d2dcache::bounds::converse_traditional_n2;
use d2dcache::catalog::{trad_coded_one_one, two_rr_schemes};
use d2dcache::rational::format_rational;
use d2dcache::scheme::verify;

fn main() -> d2dcache::Result<()> {
    for (id, base) in two_rr_schemes(2)? {
        let rotated = rotate_2rr1s(&base)?;
        let (rb, rr) = (verify(&base), verify(&rotated));
        let m = rr.max_memory();
        println!(
            "{:<16} M={:<4} base R={:<4} rotated R={:<4} optimum {}",
            id.builtin_name(),
            format_rational(&m),
            format_rational(&rb.worst_case_rate),
            format_rational(&rr.worst_case_rate),
            format_rational(&converse_traditional_n2(m)?),
        );
    }
    let coded = verify(&trad_coded_one_one()?);
    println!(
        "coded (1,1): M={} R={} passed={}",
        format_rational(&coded.max_memory()),
        format_rational(&coded.worst_case_rate),
        coded.passed()
    );
    Ok(())
}
