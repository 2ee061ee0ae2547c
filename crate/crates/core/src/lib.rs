//! Exact computer algebra for the universal ring of invariants of algebraic
//! structures.
//!
//! An algebraic structure of type `((p_1,q_1),…,(p_r,q_r))` is a vector space
//! `W` with tensors `x_i ∈ W^{⊗p_i} ⊗ (W*)^{⊗q_i}`. Every `GL(W)`-invariant
//! polynomial of such structures is a combination of closed string diagrams,
//! and the diagrams span a graded polynomial algebra `K[X]` that specializes
//! to the invariant ring in every dimension.
//!
//! The crate is organised bottom-up:
//!
//! * [`symgrp`] – permutations and the block embeddings `Π`, `Ω`, `α`.
//! * [`reptheory`] – partitions, characters, Littlewood–Richardson and
//!   Kronecker coefficients.
//! * [`diagram`] – canonical closed diagrams, open diagrams and their products.
//! * [`kx`] – the Hopf algebra `K[X]` with its inner product.
//! * [`eval`] – exact rational tensors, structures and evaluation.
//! * [`hilbert`] – graded dimensions of `K[X]` and `K[X]/I_d`.
//! * [`endo`] – the single-endomorphism case in symmetric-function language.
//! * [`axioms`] – theories, models and the axiom ideal.
//!
//! All arithmetic is exact (`BigRational`).

pub mod axioms;
pub mod cli;
pub mod diagram;
pub mod endo;
mod error;
pub mod eval;
pub mod hilbert;
pub mod kx;
pub mod limits;
pub mod linalg;
pub mod parse;
pub mod reptheory;
pub mod symgrp;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = num_rational::BigRational;

/// Formats a rational as `num/den`, omitting the denominator when it is 1.
pub fn fmt_q(q: &Q) -> String {
    if q.denom() == &num_bigint::BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integer as an exact rational.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(n.into())
}
