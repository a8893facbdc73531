//! Exact computations in the monoids of total maps on `n`-dimensional
//! `k`-ary Cantor spaces with `r` roots, their realization as endomorphism
//! monoids of free Jónsson–Tarski algebras, and the relation monoid obtained
//! by reversing multiplication.
//!
//! The crate is organised bottom-up:
//!
//! - [`shrubbery`]: words, shrubs and shrubberies with the prefix order.
//! - [`prefix_code`]: complete prefix codes, pseudotrees, expansions.
//! - [`term`]: Jónsson–Tarski terms, normalization and equality.
//! - [`endo`]: endomorphisms as generator images, and the maps `phi`/`psi`.
//! - [`tot`]: total maps given by a complete code and a leaf map.
//! - [`rel`]: labeled generating sets, the relation monoid and matrices.
//! - [`presentation`]: relation families over a finite alphabet.

pub mod endo;
pub mod error;
pub mod params;
pub mod prefix_code;
pub mod presentation;
pub mod rel;
pub mod sample;
pub mod shrubbery;
mod syntax;
pub mod term;
pub mod tot;

pub use endo::{endo_apply, endo_compose, endo_eq, phi, psi, Endo};
pub use error::{Error, Result};
pub use params::Params;
pub use prefix_code::{
    elementary_expansion, enumerate_complete_codes, expand_to_flat, is_complete, pst, PrefixCode,
    Pseudotree, ShrubberyMultiset,
};
pub use rel::{LabeledGenSet, RelElement};
pub use shrubbery::{Digit, Shrub, Shrubbery, Word};
pub use term::{term_eq, Term};
pub use tot::{RootSystem, TotElement};
