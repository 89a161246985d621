//! Arithmetic expressions over huge integers and randomized equality testing.
//!
//! Expressions such as `12^1000001 + 7^442` denote numbers with millions of
//! digits. [`eval_mod`] reduces them modulo a machine-word modulus by
//! square-and-multiply, so comparing residues at random primes decides
//! equality with one-sided, exponentially shrinking error. [`eval_exact`] is
//! the brute-force oracle for small inputs.

mod ast;
mod eval;
mod fingerprint;
pub(crate) mod parse;

use thiserror::Error;

pub use ast::{Expr, SizeBound, MAX_EXPONENT};
pub use eval::{eval_exact, eval_mod, pow_mod, DEFAULT_GUARD_BITS};
pub use fingerprint::{
    amplified_error, equality_test, modulus_range, parity_precheck, per_trial_error,
    single_trial, EqReport, EqVerdict, EqualityTest, Trial,
};
pub use parse::parse;

use crate::numtheory::NumError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("exponent at offset {pos} exceeds 2^32")]
    ExponentOverflow { pos: usize },
    #[error("result may need {bound_bits} bits, above the {guard_bits}-bit guard")]
    SizeGuard { bound_bits: u128, guard_bits: u128 },
    #[error("no 64-bit modulus range gives 1/10 error for a {bound_bits}-bit difference")]
    ModulusRangeTooLarge { bound_bits: u128 },
    #[error(
        "trial budget exhausted after {trials_run} trials: error bound {error_bound:e} is above target {target_error:e}"
    )]
    TrialBudgetExhausted {
        trials_run: u32,
        error_bound: f64,
        target_error: f64,
    },
    #[error("{0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Prime(#[from] NumError),
}
