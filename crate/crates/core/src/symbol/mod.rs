//! Pre-symbols on the collar, their restriction to the boundary, and the
//! per-family symbol catalog.

pub mod catalog;
pub mod geometry;
mod presymbol;
mod restricted;

pub use catalog::{Catalog, Family};
pub use geometry::CollarGeometry;
pub use presymbol::{PreSymbol, SymKey, Var};
pub use restricted::{RKey, RestrictedSymbol};
