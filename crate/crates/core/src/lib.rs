//! Path coalgebras of quivers with relations: exact path arithmetic, relation
//! ideals, the first terms of injective resolutions of simple comodules and
//! necessary-condition checks for the Calabi-Yau property in low dimensions.
//!
//! Paths compose left to right: `x.y` is `x` followed by `y`.

pub mod algebra;
pub mod cli;
pub mod cy;
pub mod error;
pub mod input;
pub mod linalg;
pub mod quiver;
pub mod relations;
pub mod report;
pub mod resolution;
pub mod superpotential;

pub use algebra::{PathVector, Scalar};
pub use error::{Error, ParseError, Result};
pub use input::{parse, InputDocument};
pub use quiver::{ArrowId, Path, Quiver, VertexId};
pub use relations::{Relation, RelationSet};
pub use cy::{CyReport, Verdict};
pub use report::Format;
