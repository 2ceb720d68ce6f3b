//! Nearly solenoidal velocity fields from arbitrary input data.
//!
//! A velocity given on a flow domain (possibly with immersed obstacles of
//! prescribed velocity) is extended to a regular box, its vorticity is
//! taken, and the velocity is recovered from `lap u = -curl omega`. The
//! flow-domain part of the result is divergence free to machine accuracy
//! with the Fourier backend and to discretisation accuracy with the
//! finite-difference backend.
//!
//! ```no_run
//! use solenoidal::{cases::{Case, CaseConfig}, construct_solenoidal, Backend, SolveConfig};
//!
//! let setup = CaseConfig::new(Case::Square, Backend::Spectral).setup()?;
//! let out = construct_solenoidal(&setup.u_star, &setup.mask, &setup.prescribed, &SolveConfig::new(Backend::Spectral))?;
//! println!("{}", out.velocity.max_norm());
//! # Ok::<(), solenoidal::Error>(())
//! ```

pub mod cases;
pub mod cli;
pub mod diagnostics;
pub mod diffops;
pub mod error;
pub mod grid;
pub mod pipeline;
pub mod sor;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{GridSpec, ScalarField, VectorField};
pub use pipeline::{construct_solenoidal, immersed_bc_error, Backend, Reconstruction, SolveConfig};
