//! Witness sets in binary codes.
//!
//! A set of coordinates `W` is a witness for a codeword `c` of a code `C`
//! when `c` is the only codeword with its projection onto `W`. This crate
//! verifies and computes witnesses, evaluates the known bounds on the
//! largest code in which every word has a witness of size `w`, builds the
//! codes attaining them, and solves small instances exactly.

pub mod analysis;
pub mod bounds;
pub mod cache;
pub mod code;
pub mod combin;
pub mod constructions;
pub mod error;
pub mod io;
pub mod reproduce;
pub(crate) mod hitting;
mod serde_big;
pub mod solver;

pub use code::{has_w_witness_property, is_witness, Code, Codeword, CoordSet, Permutation};
pub use error::{Result, WitnessError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
