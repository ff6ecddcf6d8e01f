//! Regular-homotopy classification of immersed loops and graphs in surfaces.
//!
//! A surface is described by a polygonal gluing schema; curves are polylines
//! drawn inside the polygon that exit through glued sides and reappear on the
//! partner side. The crate validates such curves exactly, computes their
//! turning-class invariants by developing them into a geometric model of the
//! surface, and decides regular homotopy for loops and for immersed graphs.

pub mod classify;
pub mod concat;
pub mod curve;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod group;
pub mod moves;
pub mod rng;
pub mod schema;
pub mod word;

pub use error::{Error, Result};
