//! Validated constants for the homology-cobordism obstruction attached to
//! hyperbolic three-manifolds, and a finite-dimensional spectral-flow lab.

pub mod floer;
pub mod geometry;
pub mod interval;
pub mod lab;
pub mod perturbation;
pub mod pipeline;
pub mod spectral_density;

pub use interval::{Bound, Dir, Ext, IntervalError};
