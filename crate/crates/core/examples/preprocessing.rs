//! The half-rate scheme for two files: user 1 never stores A1+B2 directly,
//! so it rebuilds the row from three cached rows before sending.

use d2dcache::catalog::half_rate;
use d2dcache::field::{solve_in_rowspace, FieldMatrix};
use d2dcache::scheme::DemandVector;

fn main() -> d2dcache::Result<()> {
    let scheme = half_rate(2)?;
    let shape = scheme.shape();
    let z1 = scheme.placement(0);
    println!("user 1 caches {} rows of length {}", z1.n_rows(), z1.n_cols());
    for row in z1.to_dense_rows() {
        println!("  {row:?}");
    }

    // A1 + B2 with files A, B and subfiles 1..L.
    let mut target = vec![0u16; shape.symbols()];
    target[shape.symbol(1, 0)] = 1;
    target[shape.symbol(2, 1)] = 1;
    match solve_in_rowspace(&target, z1, scheme.field()) {
        Some(c) => println!("A1+B2 = {c:?} . Z1"),
        None => println!("A1+B2 is not in user 1's cache"),
    }

    let d = DemandVector::new(vec![0, 1, 2]);
    let e: &FieldMatrix = &scheme.delivery_for(&d).unwrap()[&0];
    println!("encoding matrix of user 1 for demand {d}:");
    for row in e.to_dense_rows() {
        println!("  {row:?}");
    }
    Ok(())
}
