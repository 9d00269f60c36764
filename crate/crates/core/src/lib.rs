//! Numerical laboratory for the 2D Zakharov system.
//!
//! - [`cutoff`], [`projectors`]: smooth Littlewood-Paley, modulation and
//!   angular cutoffs as exact lattice multipliers.
//! - [`norms`]: Sobolev, Besov and Bourgain-type norms and scaling checks.
//! - [`trilinear`]: the trilinear functional, dyadic estimate sweeps,
//!   box counterexamples and Duhamel lower bounds.
//! - [`solver`]: spectral solvers for the reduced Zakharov system and cubic NLS,
//!   ground states and the self-similar blow-up ansatz.

pub mod cutoff;
pub mod dyadic;
pub mod error;
pub mod grid;
pub mod norms;
pub mod projectors;
pub mod solver;
pub mod trilinear;

pub use dyadic::{dy, DyadicScale};
pub use error::{Result, ZlabError};
pub use grid::{FrequencyGrid, SpaceTimeField, SpaceTimeGrid, SpatialField};
pub use num_complex::Complex64;
pub use projectors::{AngularSector, Flavor};
