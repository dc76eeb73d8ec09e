//! Exact linear programming.

pub mod simplex;

pub use simplex::{Certificate, RowKind, Simplex, Status};
