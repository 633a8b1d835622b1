//! Finite median algebras and the objects built on top of them.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable inputs: algebras are constructed once, verified,
//! and then shared freely.
//!
//! Module map:
//!
//! * [`algebra`]: carriers, constructors, axiom verification.
//! * [`calculus`]: intervals, gates, convexity, chain intervals, adjacency.
//! * [`iso`]: automorphisms and isomorphism search.
//! * [`walls`]: walls, crossing, rank, fingerprints, Dilworth embeddings.
//! * [`cover`] and [`uniformity`]: the finite cover calculus and the
//!   intrinsic uniformity generated by chain intervals.
//! * [`topology`]: the intrinsic topology as a finite topology.
//! * [`roller`], [`symbolic`], [`periodic`]: orientations, symbolic
//!   compactifications, periodic bi-sequences.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod calculus;
mod clique;
pub mod cover;
mod dilworth;
mod error;
pub mod iso;
mod mask;
pub mod periodic;
pub mod roller;
pub mod symbolic;
pub mod topology;
pub mod uniformity;
pub mod walls;

pub use algebra::{AxiomVerdict, FiniteMedianAlgebra, Provenance};
pub use calculus::Interval;
pub use clique::max_clique;
pub use cover::{Cover, CoverFamily};
pub use dilworth::min_chain_cover;
pub use error::{MedianError, Violation};
pub use iso::Automorphism;
pub use mask::SubsetMask;
pub use uniformity::UniformSubbase;
pub use walls::{Wall, WallSet};

/// Result of a verification routine: `Err` carries a self-describing
/// counterexample.
pub type Check = core::result::Result<(), Violation>;
