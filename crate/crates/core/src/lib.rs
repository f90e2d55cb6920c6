//! Braid-based quasi-morphism invariants of area-preserving surface
//! diffeomorphisms.
//!
//! The pipeline: simulate an isotopy on a model surface ([`surface`],
//! [`dynamics`]), trace the braid or loop class swept by a point
//! configuration ([`trace`]), evaluate a quasi-morphism on that word
//! ([`quasimorphism`]) and average over configurations ([`gg_estimator`]).

pub mod braid_words;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod gg_estimator;
pub mod numeric;
pub mod quasimorphism;
pub mod surface;
pub mod trace;

pub use error::{GgError, Result};
