//! Verification of the unoriented skein exact triangle over the strands
//! algebra, with all coefficients in F2.

pub mod algebra;
pub mod axioms;
pub mod campaign;
pub mod diagram;
pub mod dmod;
pub mod error;
pub mod grading;
pub mod half;
pub mod homlab;
pub mod lattice;
pub mod models;
pub mod pairing;

pub use algebra::{AlgebraElement, ClassSet, StrandsAlgebra, StrandsGenerator};
pub use diagram::{ArcDiagram, ChordClass, ReebChord};
pub use half::HalfInt;
