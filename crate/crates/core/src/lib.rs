//! Exact positivity proofs for P-finite sequences and matrix recurrences of
//! Poincaré type.
//!
//! A sequence given by `U_{n+1} = A(n) U_n` whose limit matrix has a unique
//! simple dominant eigenvalue with a positive eigenvector is proved positive
//! by exhibiting a quadruple `(T, r, N, m)`: an invertible rational change of
//! basis `T`, a cone radius `r`, a start index `N` and a block length `m`.
//! The cone `T^{-1} B_r(T e)` is shown to be invariant under the block
//! products `A(n+m-1)...A(n)` for `n >= N`, and `U_N` is checked to lie in it.
//!
//! The crate is `no_std` and only needs `alloc`. All decisions are made in
//! exact arithmetic over `Q` or a real number field `Q(lambda)`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cone;
pub mod descartes;
pub mod error;
pub mod linalg;
pub mod numbers;
pub mod poly;
pub mod prover;
pub mod recurrence;
pub mod spectral;
pub mod transform;
pub mod verifier;

pub use cone::{Cone, Radius};
pub use error::{Error, Result};
pub use numbers::{AlgebraicReal, Field, FieldElement, Rational, Sign};
pub use linalg::Matrix;
pub use poly::{Bound, Poly, RationalFunction};
pub use spectral::{DominantSpectrum, HypothesisReport};
pub use transform::TransformResult;
pub use verifier::{verify, VerifyOptions, VerifyReport};
pub use prover::{positivity_proof, prove_recurrence, Certificate, Outcome, ProverOptions};
pub use recurrence::{MatrixRecurrence, Normalized, Recurrence, ScaledVector, Unroller};
