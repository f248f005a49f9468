//! Exact and numeric machinery for the eigenvalue systems of Yoshida lifts.
//!
//! The crate is organised around the objects that appear in the arithmetic of
//! degree-2 Siegel cusp forms coming from pairs of elliptic newforms:
//!
//! * [`charkit`] — Dirichlet characters, cyclotomic numbers and Gauss sums,
//!   all in exact arithmetic.
//! * [`nfield`] — small number fields with labelled embeddings, a finite
//!   model of Galois actions, and exact linear algebra (reduced row echelon,
//!   subfield bases, Gram–Schmidt against a hermitian pairing).
//! * [`newforms`] — classical newform data: eigenvalue records, eta-product
//!   and elliptic-curve oracles that generate ground truth, Hecke-recursion
//!   validation and Galois conjugation.
//! * [`satake`] — the Hecke-eigenvalue/Satake-parameter dictionary for
//!   GL(2) and GSp(4), the dual-group embedding, and Euler factors of
//!   degree 2, 4 and 8.
//! * [`yoshida`] — synthesis and verification of Yoshida-lift eigenvalue
//!   systems from pairs of newforms: lifting conditions, eigenvalue
//!   formulas, lift counting, weak membership and Galois equivariance.
//! * [`periods`] — symbolic bookkeeping for special-value constants
//!   (powers of pi and i, Gauss-sum, Petersson and L-value tokens) and the
//!   cancellation identity behind the Petersson-norm ratio.
//! * [`lnumeric`] — a numeric L-value engine: Euler-product coefficients,
//!   completed-L evaluation by approximate functional equation, Petersson
//!   norms via the symmetric square, and algebraicity detection.
//!
//! Everything outside `lnumeric` is exact: values are rationals, cyclotomic
//! integers or number-field elements, and equality means structural equality
//! of canonical forms. `lnumeric` computes with arbitrary-precision floats
//! and every result carries an error estimate.

pub mod charkit;
pub mod lnumeric;
pub mod mp;
pub mod newforms;
pub mod nfield;
pub mod periods;
pub mod rat;
pub mod ring;
pub mod satake;
pub mod selfcheck;
pub mod symbolic;
pub mod yoshida;

pub use charkit::{CyclotomicElement, DirichletCharacter};
