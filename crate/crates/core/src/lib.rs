//! Exact construction and verification of Butson-Hadamard matrices.
//!
//! A Butson matrix `BH(m, n)` is an `n x n` matrix of complex `m`-th roots of
//! unity with `B B* = n I`. Entries are stored as exponents modulo `m`, and
//! every orthogonality check is decided exactly by divisibility by the
//! `m`-th cyclotomic polynomial.
//!
//! The [`scarpis`] module builds `BH(m, n(n-1))` and `BH(m, n(n/2-1))` from
//! order-`n` inputs using complete sets of Latin squares eligible for Scarpis
//! construction (LSESC) from [`latin`].
//!
//! With the default `parallel` feature, pairwise verification runs on rayon.

pub mod butson;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod format;
pub mod galois;
pub mod latin;
pub mod scarpis;

pub use butson::{fourier, ButsonMatrix, CoreMatrix, TExtraction, VerifyReport};
pub use cyclotomic::{
    dot_counts, sum_equals, CyclotomicTester, ExponentCountVector, IntPolynomial,
};
pub use error::{Error, Result};
pub use latin::{LatinSquare, LatinTensor};
pub use scarpis::{corollary5, phi, psi, PhiPlan, PsiPlan};
