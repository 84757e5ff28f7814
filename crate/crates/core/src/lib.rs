//! Exact combinatorics for Kneser hypergraphs and their categorical products:
//! chromatic numbers, colorability defects, alternation numbers, and an
//! executable Z_p-Tucker certification of the chromatic lower bounds.

pub mod alternation;
pub mod corpus;
pub mod defect;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod product;
pub mod signed;
pub mod solver;
pub mod tucker;

pub use error::{Error, Result};
pub use hypergraph::{Coloring, Hypergraph, Induced};
pub use product::{MaterializeCaps, ProductSpace};
pub use signed::SignedVector;
