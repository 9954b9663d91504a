//! Exact cohomology rings and characteristic numbers of small covers and
//! quasitoric manifolds over products of simplices.

pub mod charclass;
pub mod charmatrix;
pub mod cobordism;
pub mod enumerate;
pub mod error;
pub mod par;
pub mod poly;
pub mod polytope;
pub mod ring;

pub use error::{Error, Result};
