//! Exact homotopy transfer for finite-dimensional graded algebras.
//!
//! The pipeline: validate an [`algebra::AlgebraPresentation`], split it
//! ([`splitting`]), run the inductive transfer ([`transfer`]) to obtain the
//! transferred A∞ / L∞ structure on cohomology, and deform it with the basic
//! perturbation lemma ([`perturbation`]). Everything is computed over ℚ.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod certificate;
pub mod coalgebra;
pub mod commands;
pub mod corpus;
pub mod document;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod perturbation;
pub mod report;
pub mod splitting;
pub mod transfer;

pub use error::{Error, Result};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on. Output order
/// always matches input order.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
