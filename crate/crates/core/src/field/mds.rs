use super::{Elem, FieldMatrix, FieldSpec, MAX_DEGREE};
use crate::error::{Error, Result};

/// Smallest extension degree whose field offers `n` evaluation points
/// (the `2^m` field elements plus the point at infinity).
pub fn min_degree_for_points(n: usize) -> u32 {
    (1..=MAX_DEGREE)
        .find(|&m| (1usize << m) + 1 >= n)
        .unwrap_or(MAX_DEGREE + 1)
}

/// `n_out x k_in` Vandermonde generator: row `i` evaluates the monomials
/// `1, x, .., x^(k_in-1)` at the `i`-th point of `0, 1, a, a^2, ..` where `a`
/// is the field's fixed primitive element. When `n_out = 2^m + 1` the last row
/// is the point at infinity `(0, .., 0, 1)`. Every `k_in x k_in` submatrix is
/// invertible.
pub fn mds_generator(n_out: usize, k_in: usize, field: &FieldSpec) -> Result<FieldMatrix> {
    if k_in == 0 || k_in > n_out {
        return Err(Error::config(format!(
            "MDS generator needs 1 <= k_in <= n_out, got k_in={k_in}, n_out={n_out}"
        )));
    }
    let q = field.order() as usize;
    if n_out > q + 1 {
        return Err(Error::config(format!(
            "GF(2^{}) has too few evaluation points for {n_out} coded rows; need m >= {}",
            field.m(),
            min_degree_for_points(n_out)
        )));
    }
    let mut points: Vec<Elem> = vec![0];
    let mut x: Elem = 1;
    while points.len() < q {
        points.push(x);
        x = field.mul(x, field.generator());
    }

    let mut g = FieldMatrix::empty(k_in);
    for &p in points.iter().take(n_out) {
        let row: Vec<Elem> = (0..k_in as u32).map(|e| field.pow(p, e)).collect();
        g.push_dense(&row);
    }
    if n_out == q + 1 {
        let mut row = vec![0; k_in];
        row[k_in - 1] = 1;
        g.push_dense(&row);
    }
    Ok(g)
}
