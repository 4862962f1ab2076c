//! Symbolic SLOCC classification of GHZ-W-type multiqubit states.
//!
//! States are written in grouped form: every group of qubits carries either
//! the GHZ-type basis `{|0..0>, |1..1>}` or the W-type basis
//! `{|0..0>, |W>}`, and a state is a weighted sum of products of these
//! basis vectors with exact Gaussian-rational coefficients.

mod canon;
pub mod coeff;
pub mod correspondence;
pub mod error;
mod exact;
pub mod ghz;
pub mod mixed;
pub mod oracle;
pub mod partitions;
pub mod simplest;
pub mod state;
pub mod w;

pub use canon::CanonLimits;
pub use coeff::Coefficient;
pub use error::{Error, ErrorClass, Result};
pub use exact::rank;
pub use state::{normalize_terms, BasisKind, GroupSpec, GroupSymbol, SymbolicState, Term};
