//! Convex position of affine flats.
//!
//! Exact predicates and certificates for k-flats in `R^d`, an extraction
//! pipeline that finds convex subfamilies among flats in general position,
//! Grassmannian nets, and constructions of families that are not convex.

pub mod combin;
pub mod convexpos;
pub mod error;
pub mod eskit;
pub mod geom;
pub mod grassmann;
pub mod limits;
pub mod nonconvex;
pub mod random;

pub use error::{Error, Result};
