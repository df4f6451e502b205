//! Exact integer and residue-ring primitives.

pub mod gf2;
mod hensel;
mod matrix;
mod prime;
mod symbol;

pub use hensel::{hensel_alpha_roots, AlphaRoots};
pub use matrix::{
    centered, inverse_odd, rank_mod2, reduce_signed, smith_form, snf_mod2k, ResidueMatrix,
    SmithForm, Valuation, MAX_PRECISION, MIN_PRECISION,
};
pub(crate) use matrix::{check_precision, mask};
pub use prime::{factorize, is_prime, primes_up_to};
pub use symbol::{jacobi, kronecker};
