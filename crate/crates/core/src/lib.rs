//! Approximation algorithms for cover problems over time.
//!
//! The library covers two pipelines: randomized iterative rounding of
//! fractional path solutions for Steiner tree over time (inventory routing),
//! and Lovász-extension rounding with dyadic time merging for submodular
//! cover over time (joint replenishment). Both consume a left-aligned,
//! one-window-per-item instance produced by the reductions in [`reduce`].

#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod error;
pub mod fractional;
pub mod gen;
pub mod intervals;
pub mod lp;
pub mod model;
pub mod num;
pub mod oracle;
pub mod pipeline;
pub mod reduce;
pub mod round_irp;
pub mod rng;
pub mod round_sjrp;
pub mod verify;

pub use error::{Error, Result};
pub use num::Rational;
