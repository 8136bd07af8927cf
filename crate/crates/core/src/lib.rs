//! Exact-arithmetic toolkit for rotated odometers `F_π = vnk ∘ R_π` on `[0,1)`
//! with `2^N` exchanged intervals.
//!
//! The crate evaluates the interval maps exactly on dyadic rationals, models
//! them as finite-state automorphisms of the grafted binary tree `T_N`, links
//! the two pictures through a boundary encoding, and classifies every
//! odometer into its minimal adding-machine part and finitely many periodic
//! intervals. A brute-force orbit oracle cross-checks the symbolic results.

pub mod analysis;
pub mod correspondence;
pub mod dyadic;
pub mod error;
pub mod interval_maps;
pub mod perm;
pub mod tree;

pub use analysis::{classify, odometer_automorphism, oracle_crosscheck, ClassificationReport};
pub use correspondence::{decode_point, encode_point, EncodedPoint, Side};
pub use dyadic::{Displacement, Dyadic, DyadicInterval};
pub use error::{Error, Result};
pub use interval_maps::{vnk, vnk_inverse, PeriodStatus, RotatedOdometer};
pub use perm::{CycleDecomposition, Permutation};
pub use tree::{tau_n, BoundaryPoint, OrderBound, TreeAutomorphism, Vertex};
