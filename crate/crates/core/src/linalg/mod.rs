//! Exact linear algebra over the integers localized at a prime p.
//!
//! Everything downstream (lattices, decompositions, certificates) reduces to
//! the routines here: integer Smith form with unimodular transforms, kernels,
//! p-saturation, exact local solving, and dense arithmetic mod p / mod p^k.
//! No floating point anywhere.

mod intmat;
mod modp;
mod ratmat;
mod smith;

pub use intmat::IntMat;
pub use modp::{mat_mod, matmul_mod, FpMat};
pub use ratmat::RatMat;
pub use smith::{
    adjugate, kernel_z, local_smith, sat_p, sat_q, smith_z, solve_local, ColumnSolver,
    LocalSmithForm, SmithZ,
};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Working context for p-local computations: the prime and the exponent cap
/// used wherever an inherently p-adic iteration has to be truncated.
/// Linear algebra itself is exact and never consults `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    pub p: u64,
    pub cap: u32,
}

impl PrecisionContext {
    pub fn new(p: u64, cap: u32) -> crate::Result<Self> {
        if !is_prime(p) {
            return Err(crate::Error::InvalidInput(format!("{p} is not prime")));
        }
        if cap == 0 {
            return Err(crate::Error::InvalidInput("cap must be >= 1".into()));
        }
        Ok(PrecisionContext { p, cap })
    }

    /// Default cap of 64, as used by every pipeline unless overridden.
    pub fn with_default_cap(p: u64) -> crate::Result<Self> {
        Self::new(p, 64)
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// p^cap as a big integer.
    pub fn modulus(&self) -> BigInt {
        self.p_big().pow(self.cap)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0u32;
    let mut m = n.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, &p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return Some(v);
        }
    }
}

/// Split n = u * p^v with u prime to p; returns (v, u). n must be nonzero.
pub fn unit_part(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, &p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return (v, m);
        }
    }
}
