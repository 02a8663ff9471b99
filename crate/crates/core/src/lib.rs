//! Classification and analysis of extended 1-perfect, 1-perfect and Steiner
//! trades in small hypercubes.
//!
//! Words are bitmasks over at most 16 coordinates ([`Word`]); trades are
//! pairs of disjoint word sets ([`Trade`]). The [`search`] module runs the
//! exhaustive neighbourhood-completion classification, [`canonical`]
//! provides isomorph rejection and automorphism groups, and [`analysis`]
//! and [`constructions`] cover the structural tools built on top.

pub mod analysis;
pub mod canonical;
pub mod constructions;
pub mod error;
pub mod format;
pub mod gf2;
pub mod golden;
pub mod search;
pub mod trade;
pub mod word;

pub use canonical::{are_equivalent, automorphisms, canonical_form, canonical_form_permonly, AutReport, CanonicalForm};
pub use error::{Result, TradeError};
pub use trade::{ComplementSymmetry, KWayTrade, Trade, TradeKind, VerifyReport};
pub use word::{CoordPermutation, GraphAutomorphism, Word};
