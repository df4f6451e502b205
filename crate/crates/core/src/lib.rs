//! Exact arithmetic for counting superspecial abelian varieties over prime
//! fields whose Frobenius squares to `-p`.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`]: Kronecker symbols, primality, 2-adic Hensel lifting, and
//!   linear algebra over `Z/2^k`.
//! * [`qform`]: binary quadratic forms, class numbers, Gauss composition
//!   and localized Picard groups.
//! * [`modclass`]: classification of `Z₂`-free modules over
//!   `Z₂[ω]/(ω² + 2ω + 1 + p)`, with explicit splitting bases.
//! * [`count`]: the closed-form count, its genus-by-genus reconstruction,
//!   and the Deuring/Eichler consistency identities.
//! * [`hecke`]: ℓ-adic Hecke orbit counts from localized Picard groups.

pub mod arith;
pub mod count;
mod error;
pub mod hecke;
pub mod modclass;
pub mod qform;

pub use error::{Error, Result};
