//! Worst-case approximability of functions on finite groups.
//!
//! For a finite group `G` this crate computes how well every function
//! `G -> G` can be approximated (in the number of agreeing arguments) by
//! endomorphisms of `G` and by affine maps `x -> g * phi(x)`, together with
//! lower-bound certificates, explicit hard functions, Hamming-ball counting
//! bounds, and a verification lab for the Jonah-Konvisser groups of order
//! `p^8`.

pub mod approx;
pub mod bounds;
pub mod cayley;
pub mod catalog;
pub mod constructions;
mod error;
pub mod group;
pub mod jk;
pub mod morphism;
mod util;

pub use approx::{Family, FamilyKind};
pub use error::{Error, Result};
pub use group::{Group, GroupFunction, GroupSpec};
pub use morphism::{AffineMap, Morphism};
