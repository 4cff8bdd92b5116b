//! Arithmetic over GF(2) and GF(2^m), plus the matrix algebra the schemes are
//! built from.
//!
//! Elements are plain integers in `[0, 2^m)`; addition is XOR and
//! multiplication is polynomial multiplication modulo a fixed irreducible
//! polynomial. The modulus is fixed per extension degree (`0x11B` for `m = 8`,
//! the lexicographically smallest irreducible otherwise) so that serialized
//! schemes mean the same thing everywhere.

mod elim;
mod matrix;
mod mds;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use elim::{mat_rank, solve_in_rowspace, units_in_rowspace};
pub use matrix::{FieldMatrix, SparseRow};
pub use mds::{mds_generator, min_degree_for_points};

/// A field element. Only the low `m` bits are ever set.
pub type Elem = u16;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// GF(2^m) with its fixed modulus and log/antilog tables.
#[derive(Clone)]
pub struct FieldSpec {
    tables: Arc<Tables>,
}

struct Tables {
    m: u32,
    modulus: u32,
    generator: Elem,
    // exp has length 2 * (q - 1) so that log a + log b never needs a reduction.
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl FieldSpec {
    /// Builds GF(2^m) for `1 <= m <= 16`.
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::config(format!(
                "field degree m={m} outside the supported range 1..={MAX_DEGREE}"
            )));
        }
        let modulus = default_modulus(m);
        if !is_irreducible(modulus) {
            return Err(Error::config(format!(
                "modulus {modulus:#x} is not irreducible over GF(2)"
            )));
        }
        let order = 1u32 << m;
        let generator = (1..order)
            .find(|&g| multiplicative_order(g, modulus, m) == order - 1)
            .expect("the multiplicative group of a finite field is cyclic") as Elem;

        let group = (order - 1) as usize;
        let mut exp = vec![0 as Elem; 2 * group];
        let mut log = vec![0u32; order as usize];
        let mut x: u32 = 1;
        for i in 0..group {
            exp[i] = x as Elem;
            exp[i + group] = x as Elem;
            log[x as usize] = i as u32;
            x = clmul_mod(x, generator as u32, modulus, m);
        }
        Ok(FieldSpec {
            tables: Arc::new(Tables {
                m,
                modulus,
                generator,
                exp,
                log,
            }),
        })
    }

    pub fn gf2() -> Self {
        FieldSpec::new(1).expect("GF(2) is always constructible")
    }

    /// Extension degree.
    pub fn m(&self) -> u32 {
        self.tables.m
    }

    /// Number of field elements, `2^m`.
    pub fn order(&self) -> u32 {
        1 << self.tables.m
    }

    pub fn modulus(&self) -> u32 {
        self.tables.modulus
    }

    /// The fixed primitive element used for evaluation points.
    pub fn generator(&self) -> Elem {
        self.tables.generator
    }

    pub fn is_gf2(&self) -> bool {
        self.tables.m == 1
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.order() as u64
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.tables.m == 1 {
            return 1;
        }
        let t = &self.tables;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        if !self.contains(a as u64) {
            return Err(Error::Domain(format!(
                "{a} is not an element of GF(2^{})",
                self.m()
            )));
        }
        let t = &self.tables;
        let group = self.order() - 1;
        Ok(t.exp[((group - t.log[a as usize]) % group) as usize])
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u32) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &self.tables;
        let group = (self.order() - 1) as u64;
        t.exp[((t.log[a as usize] as u64 * e as u64) % group) as usize]
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.tables.m == other.tables.m
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.tables.m, self.tables.modulus)
    }
}

/// The fixed modulus for degree `m`.
pub fn default_modulus(m: u32) -> u32 {
    if m == 8 {
        return 0x11B;
    }
    smallest_irreducible(m)
}

/// Lexicographically smallest irreducible polynomial of degree `m` (bit `m` set).
pub fn smallest_irreducible(m: u32) -> u32 {
    ((1u32 << m)..(1u32 << (m + 1)))
        .find(|&p| is_irreducible(p))
        .expect("irreducible polynomials exist in every degree")
}

/// Exhaustive trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let deg = degree(poly);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for divisor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(poly, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn clmul_mod(a: u32, b: u32, modulus: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
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
    acc
}

fn multiplicative_order(g: u32, modulus: u32, m: u32) -> u32 {
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = clmul_mod(x, g, modulus, m);
        k += 1;
        if k > (1 << m) {
            return 0;
        }
    }
    k
}
