//! Extreme hyperspace selections over finite amalgams of compact ordinals.

pub mod basebuilder;
pub mod brute;
pub mod decomp;
pub mod error;
pub mod ordinal;
pub mod selection;
pub mod selrel;
pub mod hyperspace;
pub mod space;

pub use error::{Error, Result};
pub use ordinal::{ord, Ordinal, OrdinalClass};
pub use space::{Cardinal, Character, ClosedSet, Delta, FamilyParams, OpenSet, Point, PointSet, Run, Space};
