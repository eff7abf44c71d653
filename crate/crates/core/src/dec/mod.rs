//! Discrete exterior calculus on truncated structured (r, θ) complexes with
//! weighted inner products.

pub mod cochain;
pub mod mass;
pub mod mesh;
pub mod serial;

pub use cochain::{
    codifferential, d, d0_transpose, d1_transpose, rotate_pullback, sample_function,
    sample_oneform, Cochain,
};
pub use mass::{assemble, auto_r_max, WeightedMass, TAIL_MASS_LIMIT};
pub use mesh::{EdgeGeometry, EdgeKind, FaceBoundary, MeshComplex, Topology};
