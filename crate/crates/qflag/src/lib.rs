//! Exact-arithmetic computer algebra for torus-fusion module categories over
//! type-A quantum groups.
//!
//! The crate is organized around the pipeline of the underlying theory:
//!
//! - [`scalar`]: the coefficient field Q(q) with exact Laurent arithmetic,
//!   q-combinatorics, and projective-line parameters.
//! - [`rootdata`]: finite root systems, Weyl groups, weights, toric points,
//!   the shifted Weyl action, and the Kostant partition function.
//! - [`poisson`]: the Poisson parameter spaces X_fssorb, X°, X^quot and their
//!   classical (q = 1) analogues, with conversion to toric points.
//! - [`web`]: the quantum exterior algebra for sl_n, its generating morphisms,
//!   the defining relation suite, and the unitary structure.
//! - [`shifted`]: chi-shifted category-O computations: dominance tests, the
//!   Shapovalov factorization, invariant coefficients, an exact sl_2 rewriting
//!   engine, the S(x) operator, and q-binomial identities.
//! - [`classify`]: scalar systems gamma(S,T;lambda), their axiom suite, and
//!   the classification map back to a toric parameter.

pub mod classify;
pub mod poisson;
pub mod rootdata;
pub mod scalar;
pub mod shifted;
pub mod web;

pub use scalar::{bracket_ratio, q_binomial, q_factorial, q_integer, LaurentPoly, LaurentScalar, ProjParam};
