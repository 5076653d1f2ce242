//! Random jigsaw puzzles with `q` edge colours on an `n x n` grid.
//!
//! The crate covers the whole experimental loop:
//!
//! * [`puzzle`]: the coloured grid, its pieces, rotations, half-edge pairings
//!   and the plain-text puzzle format.
//! * [`solver`]: exact enumeration of valid reconstructions and the
//!   uniqueness verdict (up to rotating the whole grid).
//! * [`certificates`]: cheap non-uniqueness certificates from duplicated or
//!   rotationally symmetric pieces, plus the birthday-style collision bound.
//! * [`polyomino`]: border walks, corner accounting, holes and indentations
//!   of connected cell sets, and a fixed-polyomino enumerator.
//! * [`configs`]: configuration constants, patch builders and the
//!   monochromatic-edge probability bounds with Monte Carlo checks.
//! * [`harness`]: seeded `(n, q)` sweeps writing CSV.
//!
//! With the default `parallel` feature, trial loops run on rayon; without it
//! every loop runs serially and produces the same numbers.

pub mod certificates;
pub mod configs;
mod error;
pub mod exec;
pub mod harness;
pub mod polyomino;
pub mod puzzle;
pub mod seed;
pub mod solver;

pub use error::{Error, Result};
