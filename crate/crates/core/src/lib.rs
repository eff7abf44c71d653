//! Numerical laboratory for weighted Hodge theory on rotationally symmetric
//! surfaces: decomposes closed 1-forms against the measure e^{-U} dV_g,
//! recovers momentum maps of circle actions, detects non-Hamiltonian
//! actions, and checks the asymptotic criteria that justify the weighted
//! decomposition on complete ends.

pub mod cli;
pub mod config;
pub mod criteria;
pub mod dec;
pub mod error;
pub mod frankel;
pub mod geometry;
pub mod hodge;
pub mod linalg;
pub mod quad;
pub mod report;

pub use error::{Error, Result};
