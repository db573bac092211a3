//! Exact computations in the Jacobson-Witt Lie algebras `W_n` over finite fields.
//!
//! `W_n` is the derivation algebra of the truncated polynomial algebra
//! `A_n = F[x_1,...,x_n]/(x_1^p,...,x_n^p)` over a field `F` of characteristic
//! `p`; it is a free `A_n`-module with basis `D_1,...,D_n` and is simple unless
//! `n = 1` and `p = 2`. Everything in this crate is exact: field elements are
//! polynomial residues over `F_p`, linear algebra is fraction-free Gaussian
//! elimination, and every verification check either holds on the nose or
//! reports a witness.
//!
//! The crate is `no_std` (it allocates, but performs no IO); the companion
//! `witt-cli` crate carries file formats and the command-line front end.
//!
//! Module map:
//! - [`gf`]: `F_p` and `F_{p^m}` arithmetic, regular vectors
//! - [`trunc`]: the truncated polynomial algebra `A_n`
//! - [`witt`]: `W_n` elements, brackets, gradings, distinguished elements,
//!   operators on `A_n`
//! - [`linalg`]: exact rank / kernel / solve / subspace arithmetic
//! - [`structure`]: centralizers, derivation spaces, root decompositions,
//!   conjugation isomorphisms, certificate checks
//! - [`twolocal`]: pointwise maps, 2-local witness solving, the rank-one
//!   characteristic-2 counterexample

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod gf;
pub mod linalg;
pub mod report;
pub mod rng;
pub mod structure;
pub mod trunc;
pub mod twolocal;
pub mod witt;

pub use error::Error;
pub use gf::{Field, FieldElement, RegularVector};
pub use linalg::{ExactMatrix, SolveOutcome, SubspaceBasis};
pub use report::{CheckParams, CheckReport, CheckStatus};
pub use trunc::{Monomial, TruncPoly};
pub use witt::{GradedDecomposition, WittAlgebra, WittElement};
