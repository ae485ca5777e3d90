//! Geometric distances between finite-dimensional quantum states.
//!
//! Standard metrics (trace, Hilbert–Schmidt, Bures, Fubini–Study) sit next to the
//! Monge–Kantorovich distance between Husimi densities on the sphere. That one comes as
//! closed forms, one-dimensional reductions, or an exact network simplex on quadrature
//! grids. Also here: the simplified Monge distance between stellar (Majorana) root sets,
//! Wehrl entropy, and the degeneracy classification of density-matrix spectra.

pub mod error;
pub mod husimi;
pub mod monge;
pub mod ot;
pub mod qstate;
pub mod special;
pub mod sphere;
pub mod stellar;
pub mod topology;

pub use error::{Error, Result};
