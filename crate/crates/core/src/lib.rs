pub mod corpus;
pub mod error;
pub mod expr;
pub mod operator;
pub mod polarization;
pub mod prequant;
pub mod representation;
pub mod semiclassic;
pub mod symplectic;
pub mod verify;

pub use error::{Category, Error, Result};
