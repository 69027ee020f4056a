//! Construction, verification and analysis of k-homogeneous Latin bitrades.
//!
//! A Latin bitrade is a pair of partial Latin squares on the same filled
//! cells that disagree in every cell and whose rows and columns carry the
//! same symbol sets. It is k-homogeneous when, after deleting empty rows and
//! columns, every row and column holds exactly k cells and every symbol
//! occurs exactly k times; its volume is the number of filled cells.
//!
//! The crate provides:
//!
//! - a data model and a definitional verifier ([`verify`]),
//! - circulant base rows and their diagonal-shift expansion ([`circulant`]),
//! - explicit constructors covering odd k for all m >= k, k = 4 for m > 4,
//!   even k for m >= 3k/2 and m >= k+u (u an odd divisor of k), m = k+3,
//!   plus products and direct sums ([`constructions`]),
//! - an embedded catalog of published base rows with verifier-computed
//!   status ([`catalog`]),
//! - primariness and minimality analysis and exhaustive enumeration of
//!   small bitrades ([`analysis`]),
//! - a seeded, budgeted, deterministic searcher for circulant rows
//!   ([`search`]),
//! - a planner that dispatches (k, m) to recipes, executes them with full
//!   verification, and reports unreachable cells as cited gaps ([`planner`]),
//! - text formats for bitrades and base rows ([`io`]).

pub mod analysis;
pub mod bitrade;
pub mod catalog;
pub mod circulant;
pub mod constructions;
pub mod error;
pub mod io;
pub mod planner;
pub mod search;
pub mod square;
pub mod verify;

pub use bitrade::Bitrade;
pub use circulant::BaseRow;
pub use error::{Error, Result};
pub use square::{Cell, PartialLatinSquare, Symbol};
pub use verify::{verify_bitrade, verify_pls, VerificationReport};
