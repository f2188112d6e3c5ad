//! Exact construction of the primitive adjoint-invariant polynomials of a
//! complex simple Lie algebra, working intrinsically from a Chevalley basis.
//!
//! The pipeline runs [`rootdata`] → [`kostant`] → [`termgen`] → [`engine`],
//! and [`verify`] certifies the output independently.

pub mod engine;
pub mod error;
pub mod kostant;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod rootdata;
pub mod termgen;
pub mod verify;

pub use engine::{
    compute_invariant, compute_valuedata, Checkpoint, Engine, InvariantPolynomial, RunOptions,
    SeedSpec, ValueTable,
};
pub use error::{Error, Result};
pub use kostant::KostantFrame;
pub use poly::{CartanPoly, FullPoly, Monomial, Poly, VarNames};
pub use rational::Rational;
pub use rootdata::{CartanPoint, Family, GVector, LieAlgebraTable, RootSystem};
pub use termgen::{generate_terms, Scope, TermKey, TermLists};
pub use verify::{verify_invariant, VerificationReport};
