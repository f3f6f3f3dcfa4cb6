//! Exact rational geometry: vectors, flats, hyperplanes, LP feasibility and
//! vertex enumeration. Nothing in here uses a tolerance.

mod flat;
pub mod linalg;
mod lp;
pub mod rat;
mod vector;
mod vertex;

pub use flat::{Flat, FlatMeet, Hyperplane};
pub use lp::{lp_feasible, lp_maximize, Constraint, LpOptimum, LpStatus, Relation};
pub use rat::Rat;
pub use vector::RVec;
pub use vertex::{vertex_enumeration, HalfSpace};
