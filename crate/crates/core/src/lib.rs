//! Exact Cayley-Dickson arithmetic over arbitrary rational signatures, the
//! twist-map sign machinery, and an exact hyperholomorphic-function lab.

pub mod cdnum;
pub mod diractest;
pub mod isomap;
pub mod ratexpr;
pub mod rational;
pub mod twistlab;

pub use cdnum::{AlgebraError, AlgebraSignature, BasisProduct, Element};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "cdforge/1";
