//! Convex-geometry toolkit for cylinder coverings of convex bodies and flat
//! covers of their lattice points.
//!
//! The crate is organized by subject:
//! - [`geometry`]: bodies (V-polytopes, ellipsoids, balls), support, gauge,
//!   polar, projections, affine images, K ∩ −K.
//! - [`volume`]: exact and Monte Carlo volumes, parallel sections and the
//!   projection/section volume inequalities.
//! - [`cylinders`]: cylinders, cross-sectional volumes, cover falsification and
//!   the chord-density measure on the Euclidean ball.
//! - [`lattice`]: lattice points, lattice width, lattice-freeness.
//! - [`flats`]: exact and greedy covers of lattice points by affine flats and
//!   the constructions used to bound their number.
//! - [`analysis`]: asymmetry, Banach–Mazur upper bound, mean widths.
//! - [`experiments`]: seeded verification suites and reports.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cylinders;
pub mod error;
pub mod experiments;
pub mod flats;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod rng;
pub mod volume;

pub use error::{Error, Result};
pub use geometry::{AffineMap, ConvexBody, Subspace, Vector};
