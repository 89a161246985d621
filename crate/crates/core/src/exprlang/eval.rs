use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, ToPrimitive};

use super::ast::{Expr, SizeBound};
use super::ExprError;

/// Default ceiling for [`eval_exact`], in bits.
pub const DEFAULT_GUARD_BITS: u128 = 1_000_000;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Square-and-multiply on residues.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Value of `e` modulo `m`, in `[0, m)`, without expanding any power.
///
/// # Panics
///
/// If `m < 2`.
pub fn eval_mod(e: &Expr, m: u64) -> u64 {
    assert!(m >= 2, "modulus must be at least 2, got {m}");
    residue(e, m)
}

fn residue(e: &Expr, m: u64) -> u64 {
    match e {
        Expr::Literal(v) => (v % BigUint::from(m)).to_u64().expect("residue below m"),
        Expr::Add(a, b) => ((residue(a, m) as u128 + residue(b, m) as u128) % m as u128) as u64,
        Expr::Sub(a, b) => {
            let (x, y) = (residue(a, m), residue(b, m));
            if x >= y {
                x - y
            } else {
                m - (y - x)
            }
        }
        Expr::Mul(a, b) => mul_mod(residue(a, m), residue(b, m), m),
        Expr::Pow(a, k) => pow_mod(residue(a, m), *k, m),
    }
}

/// Exact signed value, refused when any node's syntactic size bound exceeds
/// `guard_bits`.
pub fn eval_exact(e: &Expr, guard_bits: u128) -> Result<BigInt, ExprError> {
    let bound = SizeBound::max_over_nodes(e);
    if bound.bits > guard_bits {
        return Err(ExprError::SizeGuard {
            bound_bits: bound.bits,
            guard_bits,
        });
    }
    Ok(exact(e))
}

fn exact(e: &Expr) -> BigInt {
    match e {
        Expr::Literal(v) => BigInt::from(v.clone()),
        Expr::Add(a, b) => exact(a) + exact(b),
        Expr::Sub(a, b) => exact(a) - exact(b),
        Expr::Mul(a, b) => exact(a) * exact(b),
        Expr::Pow(a, k) => exact(a).pow(*k),
    }
}
