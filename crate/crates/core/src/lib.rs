//! Desk-scale verification engine for categories of endomorphisms built from
//! G-kernels: exact group cohomology, graded measure-space objects, finite
//! matrix models of the σ-level data, Cuntz algebra normal forms and a typed
//! rewriting checker for the pentagon coherence proof.

#![allow(clippy::needless_range_loop)]

pub mod cuntz;
pub mod error;
pub mod graded;
pub mod group;
pub mod kernel;
pub mod linalg;
pub mod prover;

pub use error::{Error, Result};
