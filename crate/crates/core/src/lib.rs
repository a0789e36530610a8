//! Representations of `GL_2` over finite local rings `o_l`: ring arithmetic,
//! group and subgroup enumeration, characters, induced representations,
//! Mackey computations and Hecke algebras.

pub mod cyclotomic;
pub mod abelian;
pub mod characters;
pub mod chartab;
pub mod classes;
pub mod classfn;
pub mod constructions;
pub mod cosets;
pub mod error;
pub mod formulas;
pub mod group;
pub mod hecke;
pub mod mackey;
pub mod modp;
pub mod ring;

pub use error::{Error, Result};
