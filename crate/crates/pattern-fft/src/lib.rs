//! Fourier and periodic wavelet transforms on the sampling pattern of a
//! regular integer matrix.
//!
//! A regular matrix `M ∈ ℤ^{d×d}` induces the lattice `Λ(M) = M⁻¹ℤ^d` and
//! the finite abelian group `𝒫(M)` of its congruence classes modulo `ℤ^d`
//! (the *pattern*, `|det M|` points on the torus). This crate builds, on top
//! of the Smith normal form of `M`:
//!
//! * bases and orderings for `𝒫(M)` and its dual group `𝒢(Mᵀ)` ([`lattice`]),
//! * the unitary Fourier transform on `𝒫(M)`, both as a dense matrix and as
//!   a fast Kronecker-split algorithm with a data-parallel contract ([`fft`]),
//! * one level of the periodic wavelet transform driven by frequency-domain
//!   filter banks, plus multilevel chaining ([`wavelet`]),
//! * the Dirichlet scaling/wavelet construction whose translates are
//!   orthonormal ([`dirichlet`]),
//! * centered box splines as sampled test functions ([`boxspline`]).
//!
//! The `pattern-fft` binary exposes the same functionality as subcommands;
//! see the crate examples for library usage.

pub mod boxspline;
pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod fft;
pub mod intlinalg;
pub mod io;
pub mod lattice;
#[cfg(test)]
pub(crate) mod testutil;
pub mod wavelet;

pub use error::{Error, Result};
pub use intlinalg::{determinant, inverse_rational, smith_normal_form, IntMatrix, RationalMatrix, SmithDecomposition};
pub use lattice::{build_basis, PatternBasis, PatternPoint, Window};
