//! Perfect limited-magnitude error-correcting codes as lattice tilings by
//! quasi-crosses, built from splittings of finite abelian groups.
//!
//! The pieces, roughly bottom up:
//!
//! - [`group`], [`field`]: finite abelian groups and the additive group of
//!   `GF(p^ℓ)`.
//! - [`splitting`]: multiplier sets, splitter sets, packing and tiling checks.
//! - [`constructions`]: explicit tiling families.
//! - [`lattice`], [`hnf`], [`render`]: the lattice `ker φ`, its invariants,
//!   an independent geometric check, and SVG output.
//! - [`codec`]: syndrome encoder and decoder.
//! - [`bounds`], [`search`], [`survey`]: nonexistence rules and exhaustive
//!   search over cyclic groups.

pub mod arith;
pub mod bounds;
pub mod codec;
pub mod constructions;
pub mod error;
pub mod field;
pub mod group;
pub mod hnf;
pub mod lattice;
pub mod render;
pub mod search;
pub mod survey;
pub mod splitting;

pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use lattice::{IntegerLattice, KernelLattice};
pub use splitting::{MultiplierSet, PackingWitness, QuasiCrossShape, Splitting};
